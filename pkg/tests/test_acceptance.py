"""Acceptance criteria, one test each, at their stated sizes and tolerances.

A pass/fail line per criterion is printed in the terminal summary.
"""
from fractions import Fraction
import hashlib
import subprocess
import sys

import numpy as np
import pytest

from cocycle import analysis, chain
from cocycle.codec import decode_config, encode_config
from cocycle.exclusion import YaguchiParams, sample_yaguchi
from cocycle.lattice import EdgeConfig, Vertex, integrate_height, validate_cocycle
from cocycle.samplers import (
    DirectedPathSpec,
    IndependentParams,
    StripParams,
    fixture_checkerboard,
    fixture_stripes,
    sample_independent,
    sample_strip_quadrant,
    sample_via_directed_path,
)

from test_analysis import bfs_partition

pytestmark = [pytest.mark.acceptance]


@pytest.mark.criterion(1, "cocycle exactness of the strip sampler")
def test_criterion_01_cocycle_exactness(request):
    bad = 0
    for p in (0.2, 0.5, 0.8):
        for seed in range(1000):
            cfg = sample_strip_quadrant(StripParams(p, 256, 256, seed))
            bad += len(validate_cocycle(cfg).violations)
    request.node.criterion_detail = f"{bad} violations in 3000 samples"
    assert bad == 0


@pytest.mark.criterion(2, "chain algebra on the p grid")
def test_criterion_02_chain_algebra(request):
    worst = [0.0, 0.0, 0.0]
    for k in range(5, 100, 5):
        p = Fraction(k, 100)
        P = chain.derive_transition_matrix(p)
        A = P.array
        pi = chain.stationary_distribution(P)
        worst[0] = max(worst[0], float(np.max(np.abs(A.sum(axis=1) - 1))))
        worst[1] = max(worst[1], chain.stationary_residual(P, pi.probs))
        worst[2] = max(worst[2], float(np.max(np.abs(chain.reversed_matrix(P, pi) - A))))
        assert chain.reversal_check(P, pi, tol=1e-9)
        # enumeration oracle: the forced completions fix these two entries
        assert P["0000", "0101"] == p
        assert P["0110", "1010"] == 1 - p
    request.node.criterion_detail = "max row error %.1e, residual %.1e, reversal %.1e" % tuple(worst)
    assert worst[0] <= 1e-12 and worst[1] <= 1e-12 and worst[2] <= 1e-9


@pytest.mark.criterion(3, "top edges of a wide strip are i.i.d.")
def test_criterion_03_iid_top_edges(request):
    p, N = 0.5, 10**5
    top = sample_strip_quadrant(StripParams(p, N, 64, 2024)).h[-1].astype(np.float64)
    sigma = np.sqrt(p * (1 - p) / N)
    z_mean = (top.mean() - p) / sigma
    z_lags = [r * np.sqrt(N) for r in analysis.lag_correlations(top, 8)]
    request.node.criterion_detail = f"mean z {z_mean:+.2f}, max lag z {max(map(abs, z_lags)):.2f}"
    assert abs(z_mean) <= 4
    assert all(abs(z) <= 4 for z in z_lags)


@pytest.mark.criterion(4, "strip and directed-path samplers agree on 3x3 patches")
def test_criterion_04_sampler_equivalence(request):
    n, side, x0, y0 = 10**4, 12, 5, 5
    strip = [analysis.patch_code(sample_strip_quadrant(StripParams(0.5, side, side, s)), x0, y0)
             for s in range(n)]
    spec = DirectedPathSpec(1, side, side)
    dpath = [analysis.patch_code(sample_via_directed_path(0.5, spec, 10**6 + s), x0, y0)
             for s in range(n)]
    stat, dof, pval = analysis.two_sample_chi2(strip, dpath)
    request.node.criterion_detail = f"chi2 {stat:.1f} on {dof} dof, p-value {pval:.3f}"
    assert pval >= 1e-3


@pytest.mark.criterion(5, "directional limits of f/|z|")
def test_criterion_05_directional_limits(request):
    R = 10**4
    half = (0.5, 0.5)
    # one long thin window per ray keeps memory modest
    east = analysis.directional_ratio(
        integrate_height(sample_strip_quadrant(StripParams(0.5, R, 2, 1))), 0.0, [R], half)
    north = analysis.directional_ratio(
        integrate_height(sample_strip_quadrant(StripParams(0.5, 2, R, 1))), np.inf, [R], half)
    cfg = sample_strip_quadrant(StripParams(0.5, R // 2, R // 2, 1))
    anti = analysis.directional_ratio(integrate_height(cfg, Vertex(0, R // 2)), -1.0, [R], half)
    e, nr, a = east.ratios[0], north.ratios[0], anti.ratios[0]
    request.node.criterion_detail = f"east {e:.4f}, north {nr:.4f}, balance {a:.4f}"
    assert abs(e - 0.5) <= 0.05
    assert abs(nr - 0.5) <= 0.05
    assert abs(a) <= 0.05


@pytest.mark.criterion(6, "zero set confined to the balance cone")
def test_criterion_06_cone_confinement(request):
    radii = [64, 128, 256]
    total = np.zeros(3)
    for seed in range(50):
        cfg = sample_strip_quadrant(StripParams(0.5, 512, 512, seed))
        hf = integrate_height(cfg, Vertex(256, 256))
        rows = analysis.cone_outside_fraction(hf, (0.5, 0.5), 0.2, radii)
        total += [r["fraction"] for r in rows]
    fr = total / 50
    request.node.criterion_detail = "outside fractions " + ", ".join(f"{x:.3f}" for x in fr)
    assert fr[0] > fr[1] > fr[2]


@pytest.mark.criterion(7, "no N-S percolation in the strip model")
def test_criterion_07_non_percolation(request):
    sides = [32, 64, 128, 256]
    freq = []
    for n in sides:
        hits = 0
        for seed in range(200):
            cs = analysis.zero_clusters(sample_strip_quadrant(StripParams(0.5, n, n, seed)))
            hits += analysis.spanning_stats(cs).ns > 0
        freq.append(hits / 200)
    request.node.criterion_detail = "N-S spanning " + ", ".join(f"{n}:{f:.3f}" for n, f in zip(sides, freq))
    assert all(a > b for a, b in zip(freq, freq[1:]))
    assert freq[-1] < freq[0] / 2


@pytest.mark.criterion(8, "exclusion-process labelling percolates")
def test_criterion_08_percolation(request):
    n = 200
    spanning = distinct = boundaries_ok = valid = 0
    for seed in range(n):
        _, cfg = sample_yaguchi(YaguchiParams(256, 256, 0.3, 0.3, 0.5, 256, seed))
        valid += validate_cocycle(cfg).valid
        cs = analysis.zero_clusters(cfg, integrate_height(cfg))
        sp = analysis.spanning_stats(cs)
        spanning += sp.ew > 0
        distinct += sp.ew_distinct_f >= 2
        ok = True
        for cid in sp.ew_ids:
            try:
                ok &= analysis.left_boundary(cs, cid, cfg).verdict
            except analysis.NoVerticalEdges:
                ok = False
        boundaries_ok += ok
    request.node.criterion_detail = (f"E-W spanning {spanning}/{n}, distinct f {distinct}/{n}, "
                                     f"boundaries {boundaries_ok}/{n}, valid {valid}/{n}")
    assert spanning >= 0.95 * n
    assert distinct >= 0.90 * n
    assert boundaries_ok == n
    assert valid == n


def _dead_end_frequencies(make, lengths, seeds):
    counts = np.zeros(len(lengths))
    eligible = np.zeros(len(lengths))
    for seed in seeds:
        cfg = make(seed)
        depth = analysis.directed_depth(cfg, max(lengths))
        for i, L in enumerate(lengths):
            r = analysis.dead_end_scan(cfg, L, depth)
            counts[i] += r.count
            eligible[i] += r.eligible
    return counts / eligible


@pytest.mark.criterion(9, "dead ends vanish in the cocycle model only")
def test_criterion_09_dead_ends(request):
    lengths = [8, 16, 32, 64]
    strip = _dead_end_frequencies(lambda s: sample_strip_quadrant(StripParams(0.5, 512, 512, s)), lengths, range(20))
    indep = _dead_end_frequencies(
        lambda s: sample_independent(IndependentParams(0.5, 0.5, 512, 512, s)), lengths[2:], range(20))
    request.node.criterion_detail = ("strip " + ", ".join(f"{x:.1e}" for x in strip)
                                     + "; independent " + ", ".join(f"{x:.1e}" for x in indep))
    assert all(a > b for a, b in zip(strip, strip[1:]))
    assert all(x >= 10 * strip[-1] for x in indep)


@pytest.mark.criterion(10, "f constant on 0-clusters; union-find equals BFS")
def test_criterion_10_f_constancy_and_oracle(request):
    configs = [fixture_stripes(20, 20)] + [fixture_checkerboard(20, 20, s) for s in ((0, 0), (1, 0), (0, 1), (1, 1))]
    configs += [sample_strip_quadrant(StripParams(p, 64, 64, s)) for p in (0.2, 0.5, 0.8) for s in range(20)]
    configs += [sample_via_directed_path(0.5, DirectedPathSpec(2, 64, 64), s) for s in range(20)]
    configs += [sample_yaguchi(YaguchiParams(64, 64, burn_in=64, seed=s))[1] for s in range(10)]
    for cfg in configs:
        hf = integrate_height(cfg)
        cs = analysis.zero_clusters(cfg, hf)
        assert np.array_equal(hf.F, cs.f[cs.labels])
    rng = np.random.default_rng(10)
    for _ in range(1000):
        h = rng.integers(0, 2, (17, 16), dtype=np.uint8)
        v = rng.integers(0, 2, (16, 17), dtype=np.uint8)
        assert np.array_equal(analysis.zero_clusters(EdgeConfig(h, v)).labels, bfs_partition(h, v))
    request.node.criterion_detail = f"{len(configs)} valid configs, 1000 BFS comparisons"


def _cli(*args):
    subprocess.run([sys.executable, "-m", "cocycle.cli", *map(str, args)], check=True, capture_output=True)


@pytest.mark.criterion(11, "codec round trip and reproducible artifacts")
def test_criterion_11_plumbing(request, tmp_path):
    rng = np.random.default_rng(11)
    for _ in range(1000):
        W, H = rng.integers(1, 40, 2)
        cfg = EdgeConfig(rng.integers(0, 2, (H + 1, W)), rng.integers(0, 2, (H, W + 1)))
        data = encode_config(cfg)
        assert decode_config(data) == cfg and encode_config(decode_config(data)) == data
    digests = []
    for run in range(2):
        d = tmp_path / f"run{run}"
        d.mkdir()
        _cli("sample", "--model", "strip", "-p", "0.5", "-W", 128, "-H", 128, "--seed", 7, "-o", d / "s.cocy")
        _cli("sample", "--model", "yaguchi", "-W", 64, "-H", 64, "--seed", 7, "--colors-out", d / "g.txt",
             "-o", d / "y.cocy")
        _cli("render", d / "s.cocy", "-o", d / "s.ppm", "--clusters")
        _cli("render", d / "y.cocy", "-o", d / "y.svg", "--colors", d / "g.txt", "--boundaries")
        digests.append([hashlib.sha256((d / f).read_bytes()).hexdigest()
                        for f in ("s.cocy", "y.cocy", "s.ppm", "y.svg")])
    request.node.criterion_detail = "1000 round trips, 4 artifacts compared"
    assert digests[0] == digests[1]
