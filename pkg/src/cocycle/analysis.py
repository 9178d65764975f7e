"""Measurements on a configuration: 0-clusters and their geometry.

Everything here reads an :class:`EdgeConfig` (and optionally its
:class:`HeightField`) and returns plain values; nothing mutates its input.
"""
from dataclasses import dataclass, field
import math
from typing import NamedTuple, Optional

import numpy as np
from scipy import stats

from . import kernels
from .errors import DegenerateMarginals, FConstancyViolation, NoVerticalEdges, PathOutOfWindow
from .lattice import ConeSpec, EdgeConfig, HeightField, LatticePath, balance_slope, cone_mask


class ClusterRecord(NamedTuple):
    id: int
    size: int
    bbox: tuple  # (xmin, ymin, xmax, ymax)
    touches: dict
    f: Optional[int]


@dataclass(frozen=True, eq=False)
class ClusterSet:
    """Partition of window vertices by connectivity over 0-labelled edges.

    ``labels[y, x]`` is the cluster id of vertex ``(x, y)``; ids run from 0 in
    order of first appearance in a row-major scan. Per-cluster arrays are
    indexed by id.
    """

    labels: np.ndarray
    sizes: np.ndarray
    xmin: np.ndarray
    xmax: np.ndarray
    ymin: np.ndarray
    ymax: np.ndarray
    f: Optional[np.ndarray] = None

    @property
    def n_clusters(self) -> int:
        return int(self.sizes.size)

    @property
    def width(self) -> int:
        return self.labels.shape[1] - 1

    @property
    def height(self) -> int:
        return self.labels.shape[0] - 1

    @property
    def touch_n(self):
        return self.ymax == self.height

    @property
    def touch_s(self):
        return self.ymin == 0

    @property
    def touch_e(self):
        return self.xmax == self.width

    @property
    def touch_w(self):
        return self.xmin == 0

    def record(self, cid: int) -> ClusterRecord:
        touches = {
            "N": bool(self.touch_n[cid]),
            "S": bool(self.touch_s[cid]),
            "E": bool(self.touch_e[cid]),
            "W": bool(self.touch_w[cid]),
        }
        return ClusterRecord(
            id=int(cid),
            size=int(self.sizes[cid]),
            bbox=(int(self.xmin[cid]), int(self.ymin[cid]), int(self.xmax[cid]), int(self.ymax[cid])),
            touches=touches,
            f=None if self.f is None else int(self.f[cid]),
        )

    def members(self, cid: int) -> np.ndarray:
        """``(x, y)`` coordinates of the cluster's vertices, row-major."""
        ys, xs = np.nonzero(self.labels == cid)
        return np.column_stack([xs, ys])

    def largest(self) -> int:
        return int(np.argmax(self.sizes))


def zero_clusters(cfg: EdgeConfig, hf: HeightField = None) -> ClusterSet:
    """Union-find labelling of 0-clusters with per-cluster geometry.

    When ``hf`` is given each cluster is annotated with its (necessarily
    constant) height; a non-constant height raises
    :class:`FConstancyViolation`.
    """
    labels = kernels.zero_labels(cfg.h, cfg.v)
    flat = labels.ravel()
    order = np.argsort(flat, kind="stable")
    sorted_ids = flat[order]
    starts = np.flatnonzero(np.r_[True, sorted_ids[1:] != sorted_ids[:-1]])
    sizes = np.diff(np.r_[starts, flat.size])
    Hp1, Wp1 = labels.shape
    ys, xs = np.divmod(order, Wp1)
    xmin = np.minimum.reduceat(xs, starts)
    xmax = np.maximum.reduceat(xs, starts)
    # row-major order means the first and last member give the y extent
    ymin = ys[starts]
    ymax = ys[np.r_[starts[1:], flat.size] - 1]
    fvals = None
    if hf is not None:
        if hf.F.shape != labels.shape:
            raise ValueError("height field does not match the configuration")
        F = hf.F.ravel()[order]
        fmin = np.minimum.reduceat(F, starts)
        fmax = np.maximum.reduceat(F, starts)
        bad = np.flatnonzero(fmin != fmax)
        if bad.size:
            raise FConstancyViolation(f"cluster {int(bad[0])} carries heights {int(fmin[bad[0]])}..{int(fmax[bad[0]])}")
        fvals = fmin.astype(np.int64)
    labels.flags.writeable = False
    return ClusterSet(labels, sizes, xmin, xmax, ymin, ymax, fvals)


# ---------------------------------------------------------------------------
# density


@dataclass(frozen=True)
class DensityEstimate:
    rects: list  # (x0, y0, x1, y1), inclusive vertex boxes
    counts: list
    ratios: list

    @property
    def sides(self):
        return [r[2] - r[0] for r in self.rects]


def centered_squares(width, height, sides=None, center=None):
    """Vertex boxes of the given sides centred in the window."""
    if center is None:
        center = (width // 2, height // 2)
    cx, cy = center
    if sides is None:
        sides = [2 ** k for k in range(1, int(math.log2(max(1, min(width, height)))) + 1)]
    rects = []
    for n in sides:
        x0, y0 = cx - n // 2, cy - n // 2
        x1, y1 = x0 + n, y0 + n
        if x0 < 0 or y0 < 0 or x1 > width or y1 > height:
            raise PathOutOfWindow(f"square of side {n} around {center} leaves the window")
        rects.append((x0, y0, x1, y1))
    return rects


def cluster_density(cs: ClusterSet, cid: int, sides=None, center=None) -> DensityEstimate:
    """``#(C n R) / #R`` over growing centred squares ``R``."""
    rects = centered_squares(cs.width, cs.height, sides, center)
    mask = cs.labels == cid
    counts, ratios = [], []
    for x0, y0, x1, y1 in rects:
        c = int(mask[y0:y1 + 1, x0:x1 + 1].sum())
        counts.append(c)
        ratios.append(c / ((x1 - x0 + 1) * (y1 - y0 + 1)))
    return DensityEstimate(rects, counts, ratios)


# ---------------------------------------------------------------------------
# cones and directions


def _checked_marginals(marginals):
    h, v = (float(m) for m in marginals)
    if not (0 < h < 1 and 0 < v < 1):
        raise DegenerateMarginals(f"need 0 < h, v < 1, got h={h}, v={v}")
    return h, v


def cone_outside_fraction(hf: HeightField, marginals, eps: float, radii):
    """Share of zero-height vertices in each L1 ball that lie outside the balance cone.

    The cone is centred on slope ``-h/v`` with half-width ``eps`` about the
    anchor. For each radius ``R`` returns a dict with the number of vertices
    ``z`` (window clipped) with ``f(z) = 0``, ``||z||_1 <= R``, how many of
    those are outside the cone, and their ratio (0 when none have height 0).
    """
    h, v = _checked_marginals(marginals)
    cone = ConeSpec(balance_slope(h, v), eps)
    Hp1, Wp1 = hf.F.shape
    dy, dx = np.mgrid[0:Hp1, 0:Wp1]
    dx = dx - hf.anchor.x
    dy = dy - hf.anchor.y
    norm = np.abs(dx) + np.abs(dy)
    zero = hf.F == 0
    outside = zero & ~cone_mask(cone, dx, dy)
    out = []
    for R in radii:
        ball = norm <= R
        nz = int((zero & ball).sum())
        no = int((outside & ball).sum())
        out.append({"R": int(R), "zero": nz, "outside": no, "fraction": no / nz if nz else 0.0})
    return out


def directional_limit(alpha, c1, h, v):
    """Asymptotic ``f(z)/||z||`` along direction ``alpha`` (x-sign ``c1``)."""
    if math.isinf(alpha):
        return math.copysign(1.0, alpha) * v
    if alpha == 0:
        return c1 * h
    c2 = c1 * math.copysign(1.0, alpha)
    a = abs(alpha)
    return c1 / (1 + a) * h + c2 * a / (1 + a) * v


def ray_point(alpha, R, c1=1):
    """Lattice point at L1 norm close to ``R`` along slope ``alpha``."""
    if math.isinf(alpha):
        return (0, int(math.copysign(R, alpha)))
    k = int(round(R / (1 + abs(alpha))))
    return (c1 * k, int(round(alpha * k * c1)))


@dataclass(frozen=True)
class DirectionalResult:
    alpha: float
    points: list
    ratios: list
    limit: Optional[float]


def directional_ratio(hf: HeightField, alpha: float, radii, marginals=None, east: bool = True):
    """``f(z_R)/||z_R||_1`` at lattice points nearest direction ``alpha``.

    ``east`` picks the half-plane ``x > 0`` for finite slopes; ``alpha =
    +inf`` is the north ray and ``-inf`` the south ray. The theoretical limit
    is filled in when ``marginals = (h, v)`` is supplied.
    """
    c1 = 1 if east else -1
    points, ratios = [], []
    for R in radii:
        dx, dy = ray_point(alpha, R, c1)
        z = (hf.anchor.x + dx, hf.anchor.y + dy)
        if not (0 <= z[0] <= hf.width and 0 <= z[1] <= hf.height):
            raise PathOutOfWindow(f"ray point {z} for R={R} outside window")
        points.append((dx, dy))
        ratios.append(hf.f(z) / (abs(dx) + abs(dy)))
    limit = None
    if marginals is not None:
        h, v = (float(m) for m in marginals)
        limit = directional_limit(alpha, c1, h, v)
    return DirectionalResult(alpha, points, ratios, limit)


# ---------------------------------------------------------------------------
# left boundaries


@dataclass(frozen=True)
class StaircasePath:
    """Left boundary of a cluster, traversed from its top level downwards.

    ``levels`` maps each strip ``y`` to the column of the cluster's leftmost
    vertical 0-edge between rows ``y`` and ``y + 1``.
    """

    levels: dict
    segments: list  # list of LatticePath, split at level gaps
    gaps: list  # strips inside the vertical span without a vertical edge
    monotone: bool
    all_zero: bool

    @property
    def verdict(self) -> bool:
        return self.monotone and self.all_zero

    @property
    def vertices(self):
        out = []
        for seg in self.segments:
            out.extend(seg)
        return out


def left_boundary(cs: ClusterSet, cid: int, cfg: EdgeConfig) -> StaircasePath:
    """Leftmost vertical 0-edge per level, joined by the horizontal runs between.

    Raises
    ------
    NoVerticalEdges
        If the cluster has no vertical edge at all.
    """
    lab = cs.labels
    vert = (cfg.v == 0) & (lab[:-1, :] == cid)
    rows = np.flatnonzero(vert.any(axis=1))
    if rows.size == 0:
        raise NoVerticalEdges(f"cluster {cid} has no vertical 0-edge")
    first = np.argmax(vert[rows], axis=1)
    levels = {int(y): int(x) for y, x in zip(rows, first)}
    lo, hi = int(rows.min()), int(rows.max())
    gaps = [y for y in range(lo, hi + 1) if y not in levels]

    segments = []
    monotone = True
    all_zero = True
    current = None
    for y in range(hi, lo - 1, -1):
        if y not in levels:
            if current:
                segments.append(current)
            current = None
            continue
        x = levels[y]
        if current is None:
            current = [(x, y + 1)]
        else:
            # walk along row y + 1 from the previous edge's lower end to this edge's top
            px = current[-1][0]
            step = 1 if x >= px else -1
            if step < 0:
                monotone = False
            for xx in range(px + step, x + step, step):
                edge_x = min(xx, xx - step)
                if cfg.h[y + 1, edge_x] != 0:
                    all_zero = False
                current.append((xx, y + 1))
        current.append((x, y))
    if current:
        segments.append(current)
    return StaircasePath(
        levels=levels,
        segments=[LatticePath(s) for s in segments],
        gaps=gaps,
        monotone=monotone,
        all_zero=all_zero,
    )


# ---------------------------------------------------------------------------
# dead ends


@dataclass(frozen=True)
class DeadEndResult:
    L: int
    count: int
    eligible: int
    locations: np.ndarray

    @property
    def frequency(self) -> float:
        return self.count / self.eligible if self.eligible else 0.0


def dead_end_scan(cfg: EdgeConfig, L: int, depth=None) -> DeadEndResult:
    """Vertices with 1-labelled west and north edges starting an east/south 0-path of length ``L``.

    Only vertices whose whole ``L``-step down-right neighbourhood fits in the
    window are scanned (``1 <= x <= W - L`` and ``L <= y <= H - 1``), so the
    frequency is not biased by truncation. ``depth`` may pass a precomputed
    :func:`directed_depth` array with cap at least ``L``.
    """
    if L < 1:
        raise ValueError("L must be at least 1")
    W, H = cfg.width, cfg.height
    if depth is None:
        depth = directed_depth(cfg, L)
    ys = np.arange(L, H)
    xs = np.arange(1, W - L + 1)
    if ys.size == 0 or xs.size == 0:
        return DeadEndResult(L, 0, 0, np.zeros((0, 2), dtype=np.int64))
    Y, X = np.meshgrid(ys, xs, indexing="ij")
    hit = (cfg.h[Y, X - 1] == 1) & (cfg.v[Y, X] == 1) & (depth[Y, X] >= L)
    locs = np.column_stack([X[hit], Y[hit]])
    return DeadEndResult(L, int(hit.sum()), int(hit.size), locs)


def directed_depth(cfg: EdgeConfig, cap: int) -> np.ndarray:
    """Longest east/south 0-path length from each vertex, capped at ``cap``."""
    return kernels.directed_zero_depth(cfg.h, cfg.v, cap)


# ---------------------------------------------------------------------------
# spanning


@dataclass(frozen=True)
class SpanningStats:
    ns: int
    ew: int
    ns_distinct_f: Optional[int]
    ew_distinct_f: Optional[int]
    ns_ids: list = field(default_factory=list)
    ew_ids: list = field(default_factory=list)


def spanning_stats(cs: ClusterSet) -> SpanningStats:
    """Clusters touching both N and S, both E and W, and their distinct heights."""
    ns = np.flatnonzero(cs.touch_n & cs.touch_s)
    ew = np.flatnonzero(cs.touch_e & cs.touch_w)
    nsf = ewf = None
    if cs.f is not None:
        nsf = int(np.unique(cs.f[ns]).size)
        ewf = int(np.unique(cs.f[ew]).size)
    return SpanningStats(int(ns.size), int(ew.size), nsf, ewf, ns.tolist(), ew.tolist())


# ---------------------------------------------------------------------------
# patch statistics and correlation diagnostics


def patch_code(cfg: EdgeConfig, x0: int, y0: int, size: int = 3) -> int:
    """Integer encoding of the labels of a ``size x size`` block of squares."""
    h = cfg.h[y0:y0 + size + 1, x0:x0 + size]
    v = cfg.v[y0:y0 + size, x0:x0 + size + 1]
    if h.shape != (size + 1, size) or v.shape != (size, size + 1):
        raise PathOutOfWindow("patch leaves the window")
    bits = np.concatenate([h.ravel(), v.ravel()])
    return int(bits.dot(1 << np.arange(bits.size, dtype=np.int64)))


def two_sample_chi2(codes_a, codes_b, min_count: int = 10):
    """Chi-square homogeneity test of two categorical samples.

    Categories whose pooled count is below ``min_count`` are merged into one
    residual cell. Returns ``(statistic, dof, pvalue)``.
    """
    a = np.asarray(codes_a)
    b = np.asarray(codes_b)
    cats, inv = np.unique(np.concatenate([a, b]), return_inverse=True)
    ca = np.bincount(inv[: a.size], minlength=cats.size)
    cb = np.bincount(inv[a.size:], minlength=cats.size)
    common = (ca + cb) >= min_count
    table = np.vstack([ca[common], cb[common]])
    rest = np.array([[ca[~common].sum()], [cb[~common].sum()]])
    if rest.sum() > 0:
        table = np.hstack([table, rest])
    res = stats.chi2_contingency(table, correction=False)
    return float(res.statistic), int(res.dof), float(res.pvalue)


def lag_correlations(x, max_lag: int = 8):
    """Sample autocorrelations at lags ``1..max_lag``."""
    x = np.asarray(x, dtype=np.float64)
    x = x - x.mean()
    var = x.dot(x) / x.size
    return [float(x[:-k].dot(x[k:]) / (x.size - k) / var) for k in range(1, max_lag + 1)]
