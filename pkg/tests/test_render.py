import hashlib
import json

import numpy as np
import pytest
from scipy import ndimage

from cocycle.analysis import zero_clusters
from cocycle.exclusion import YaguchiParams, sample_yaguchi
from cocycle.lattice import EdgeConfig
from cocycle.render import RenderStyle, image_size, raster, read_ppm, render
from cocycle.samplers import StripParams, fixture_stripes, sample_strip_quadrant


def digest(b):
    return hashlib.sha256(b).hexdigest()


def test_stripes_dimensions_and_colours():
    W, H = 7, 5
    cfg = fixture_stripes(W, H)
    style = RenderStyle(scale=4)
    img, comments = read_ppm(render(cfg, style=style))
    assert img.shape == (4 * H + 1, 4 * W + 1, 3)
    assert image_size(cfg, 4) == (4 * W + 1, 4 * H + 1)
    # interior of a horizontal edge vs a vertical edge
    assert tuple(img[4 * H, 2]) == style.color1
    assert tuple(img[4 * H - 2, 0]) == style.color0
    assert tuple(img[4 * H - 2, 2]) == style.background
    assert style.color0 != style.color1


def test_vertex_layout_north_up():
    cfg = EdgeConfig(np.array([[1], [0]], np.uint8), np.array([[0, 0]], np.uint8))
    img = raster(cfg, style=RenderStyle(scale=3))
    s = RenderStyle()
    assert tuple(img[3, 1]) == s.color1  # bottom edge at image row s * H
    assert tuple(img[0, 1]) == s.color0  # top edge at image row 0


def test_deterministic_digests():
    cfg = sample_strip_quadrant(StripParams(0.5, 32, 32, 7))
    cs = zero_clusters(cfg)
    style = RenderStyle(scale=3, show_clusters=True)
    for fmt in ("ppm", "svg"):
        a = render(cfg, cs, style=style, fmt=fmt, meta={"seed": 7})
        b = render(cfg, zero_clusters(cfg), style=style, fmt=fmt, meta={"seed": 7})
        assert digest(a) == digest(b)


def test_metadata_embedded():
    cfg = fixture_stripes(3, 3)
    meta = {"seed": 11, "params": {"p": 0.5}, "version": "x"}
    _, comments = read_ppm(render(cfg, meta=meta))
    assert json.loads(comments[0]) == meta
    svg = render(cfg, fmt="svg", meta=meta).decode()
    assert "<metadata>" in svg and '"seed": 11' in svg
    assert svg.startswith("<?xml") and 'version="1.1"' in svg


def test_scale_validation():
    with pytest.raises(ValueError):
        RenderStyle(scale=0)
    with pytest.raises(ValueError):
        render(fixture_stripes(2, 2), fmt="gif")


def test_green_runs_monotone_nw_se():
    p = YaguchiParams(64, 64, burn_in=64, seed=3)
    field, cfg = sample_yaguchi(p)
    style = RenderStyle(scale=4, show_green=True)
    img, _ = read_ppm(render(cfg, colors=field, style=style))
    green = np.all(img == np.array(style.green, np.uint8), axis=-1)
    assert green.any()
    labels, n = ndimage.label(green, structure=np.ones((3, 3)))
    for k in range(1, n + 1):
        rows, cols = np.nonzero(labels == k)
        # walking east (increasing column) the run never climbs (image row never decreases)
        order = np.lexsort((rows, cols))
        r, c = rows[order], cols[order]
        top_per_col = {}
        bottom_per_col = {}
        for rr, cc in zip(r, c):
            top_per_col[cc] = min(top_per_col.get(cc, rr), rr)
            bottom_per_col[cc] = max(bottom_per_col.get(cc, rr), rr)
        ks = sorted(top_per_col)
        assert ks == list(range(ks[0], ks[-1] + 1))
        for c0, c1 in zip(ks, ks[1:]):
            assert top_per_col[c1] >= top_per_col[c0]
            assert bottom_per_col[c1] >= bottom_per_col[c0]
            # consecutive columns overlap or touch: the run is connected
            assert top_per_col[c1] <= bottom_per_col[c0] + 1


def test_overlays_render():
    cfg = sample_strip_quadrant(StripParams(0.5, 20, 20, 1))
    style = RenderStyle(scale=2, show_boundaries=True, cone_eps=0.2)
    path = [(0, 10), (3, 10), (3, 5)]
    img = raster(cfg, style=style, boundaries=[path], anchor=(10, 10), marginals=(0.5, 0.5))
    assert tuple(img[2 * 10, 2]) == style.boundary
    assert (img == np.array([255, 244, 190], np.uint8)).all(axis=-1).any()
    svg = render(cfg, style=style, fmt="svg", boundaries=[path], anchor=(10, 10), marginals=(0.5, 0.5))
    assert b"<polyline" in svg and b"<polygon" in svg
