import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cocycle.codec import decode_config, encode_config, read_config, write_config
from cocycle.errors import ParseError
from cocycle.lattice import EdgeConfig
from cocycle.samplers import StripParams, sample_strip_quadrant


@st.composite
def configs(draw, max_side=12):
    W = draw(st.integers(1, max_side))
    H = draw(st.integers(1, max_side))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    return EdgeConfig(rng.integers(0, 2, (H + 1, W)), rng.integers(0, 2, (H, W + 1)))


@given(configs())
@settings(max_examples=200, deadline=None)
def test_round_trip_property(cfg):
    data = encode_config(cfg)
    back = decode_config(data)
    assert back == cfg
    assert encode_config(back) == data


def test_round_trip_1000_random_64():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        cfg = EdgeConfig(rng.integers(0, 2, (65, 64)), rng.integers(0, 2, (64, 65)))
        assert decode_config(encode_config(cfg)) == cfg


def test_one_by_one_document():
    data = encode_config(EdgeConfig.zeros(1, 1))
    assert data == b"COCY 1\nW 1 H 1\n0\n0\n00\n"
    assert data.count(b"\n") == 5
    assert decode_config(data) == EdgeConfig.zeros(1, 1)


def test_layout_row_order():
    h = np.array([[1, 0], [0, 0]], np.uint8)
    v = np.array([[0, 0, 1]], np.uint8)
    assert encode_config(EdgeConfig(h, v)).split(b"\n")[2:5] == [b"10", b"00", b"001"]


def _err(data):
    with pytest.raises(ParseError) as info:
        decode_config(data)
    return info.value


def test_truncation_names_section():
    doc = encode_config(sample_strip_quadrant(StripParams(0.5, 4, 3, 1)))
    lines = doc.split(b"\n")
    e = _err(b"\n".join(lines[:4]) + b"\n")
    assert "horizontal section" in str(e) and e.line == 5
    e = _err(b"\n".join(lines[:8]) + b"\n")
    assert "vertical section" in str(e)


def test_missing_trailing_newline_and_trailing_data():
    doc = encode_config(EdgeConfig.zeros(2, 2))
    assert "trailing newline" in str(_err(doc[:-1]))
    assert "trailing data" in str(_err(doc + b"0\n"))


def test_bad_header_and_dims():
    assert _err(b"COCY 2\nW 1 H 1\n0\n0\n00\n").line == 1
    e = _err(b"COCY 1\nW 0 H 1\n0\n0\n00\n")
    assert e.line == 2
    assert _err(b"COCY 1\nW 01 H 1\n0\n0\n00\n").line == 2
    assert _err(b"COCY 1\n").line == 2


def test_bad_byte_position():
    e = _err(b"COCY 1\nW 2 H 1\n00\n0x\n000\n")
    assert (e.line, e.column) == (4, 2)
    assert "line 4, column 2" in str(e)
    e = _err(b"COCY 1\nW 2 H 1\n00\n000\n000\n")
    assert e.line == 4
    e = _err(b"COCY 1\nW 2 H 1\n00\n00\n00\r\n")
    assert e.line == 5


def test_file_io(tmp_path):
    cfg = sample_strip_quadrant(StripParams(0.5, 9, 5, 2))
    path = tmp_path / "x.cocy"
    write_config(path, cfg)
    assert read_config(path) == cfg
