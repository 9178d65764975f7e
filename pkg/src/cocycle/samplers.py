"""Configuration generators: strip chain, directed-path fill, independent model, fixtures.

The exclusion-process construction lives in :mod:`cocycle.exclusion`.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import math

import numpy as np

from . import chain, kernels, rng as rngmod
from .errors import DomainError, PathOutOfWindow
from .lattice import EdgeConfig, LatticePath


def check_probability(p, name="p"):
    if not 0 < float(p) < 1:
        raise DomainError(f"{name} must lie in (0, 1), got {p}")
    return float(p)


def _check_window(width, height):
    if int(width) < 1 or int(height) < 1:
        raise ValueError("window dimensions must be positive")


@dataclass(frozen=True)
class StripParams:
    p: float
    width: int
    height: int
    seed: int = 0

    def __post_init__(self):
        check_probability(self.p)
        _check_window(self.width, self.height)


@dataclass(frozen=True)
class DirectedPathSpec:
    """Staircase that is flat for ``|x - cx| <= M`` and then descends eastwards.

    ``center`` defaults to the window centre. Outside the flat part the path
    follows the line of slope ``-p / (2 (1 - p))`` through the flat segment's
    end points, staying on or above it to the east and on or below it to the
    west.
    """

    M: int
    width: int
    height: int
    center: tuple = None

    def __post_init__(self):
        if self.M < 0:
            raise ValueError("M must be non-negative")
        _check_window(self.width, self.height)

    @property
    def centre(self):
        if self.center is None:
            return (self.width // 2, self.height // 2)
        return tuple(self.center)


@dataclass(frozen=True)
class IndependentParams:
    pH1: float
    pV1: float
    width: int
    height: int
    seed: int = 0

    def __post_init__(self):
        for name in ("pH1", "pV1"):
            if not 0 <= getattr(self, name) <= 1:
                raise DomainError(f"{name} must lie in [0, 1]")
        _check_window(self.width, self.height)


# ---------------------------------------------------------------------------
# path-seeded fill


def _levels_of_columns(a, width, height):
    """Level carrying the path's horizontal edge above column ``x``."""
    arev = a[::-1]
    return height - np.searchsorted(arev, np.arange(width), side="right")


def staircase_vertices(a, width, height):
    """Vertices of the boundary-to-boundary path encoded by ``a``.

    ``a[y]`` is the column of the path's vertical edge in strip ``[y, y+1]``;
    the path runs from ``(0, H)`` to ``(W, 0)``.
    """
    verts = [(0, height)]
    x = 0
    for y in range(height - 1, -1, -1):
        while x < a[y]:
            x += 1
            verts.append((x, y + 1))
        verts.append((x, y))
    while x < width:
        x += 1
        verts.append((x, 0))
    return LatticePath(verts)


def path_edge_labels(cfg: EdgeConfig, a):
    """Labels along the staircase ``a`` in traversal order (NW to SE)."""
    path = staircase_vertices(a, cfg.width, cfg.height)
    out = []
    for (x0, y0), (x1, y1) in zip(path, path[1:]):
        if y1 == y0:
            out.append((0, int(cfg.h[y0, x0])))
        else:
            out.append((1, int(cfg.v[y1, x0])))
    return np.array(out, dtype=np.int64).reshape(-1, 2)


@lru_cache(maxsize=64)
def _tie_completion_is_fair(p):
    P = chain.derive_transition_matrix(p)
    table = chain.backward_completion_distribution(P, chain.stationary_distribution(P))
    return all(table[(t, t)][(1, 1)] == Fraction(1, 2) for t in (0, 1))


def fill_from_path(p, a, width, height, seed):
    """Label a staircase independently, then fill both sides.

    The region north-east of the path is completed forwards (rows bottom-up,
    left to right). The region south-west is completed with the reversed
    chain (rows top-down, right to left), implemented as the forward rule on
    the 180-degree rotated window. The two sides consume independent streams.
    """
    W, H = int(width), int(height)
    a = np.ascontiguousarray(a, dtype=np.int64)
    if a.shape != (H,) or (H and (a.min() < 0 or a.max() > W)) or np.any(np.diff(a) > 0):
        raise PathOutOfWindow("staircase must be non-increasing in y and inside the window")
    h = np.zeros((H + 1, W), dtype=np.uint8)
    v = np.zeros((H, W + 1), dtype=np.uint8)

    path_rng = rngmod.stream(seed, rngmod.PATH)
    horiz = rngmod.bernoulli(path_rng, p, W)
    vert = rngmod.bernoulli(path_rng, 1.0 - p, H)
    h[_levels_of_columns(a, W, H), np.arange(W)] = horiz
    v[np.arange(H), a] = vert

    if np.any(a > 0):
        if not _tie_completion_is_fair(p):  # pragma: no cover - guarded by chain tests
            raise AssertionError("reversed completion law is not fair")
        hr = np.ascontiguousarray(h[::-1, ::-1])
        vr = np.ascontiguousarray(v[::-1, ::-1])
        start_r = np.ascontiguousarray((W - a)[::-1])
        coins = rngmod.fair_bits(rngmod.stream(seed, rngmod.BELOW), (H, W))
        kernels.fill_forward(hr, vr, start_r, coins)
        h = np.ascontiguousarray(hr[::-1, ::-1])
        v = np.ascontiguousarray(vr[::-1, ::-1])

    coins = rngmod.fair_bits(rngmod.stream(seed, rngmod.ABOVE), (H, W))
    kernels.fill_forward(h, v, a, coins)
    return EdgeConfig._trusted(h, v)


def sample_strip_quadrant(params: StripParams) -> EdgeConfig:
    """First-quadrant strip construction on a ``W x H`` window.

    Bottom-row horizontal labels are Bernoulli(p), left-column vertical labels
    Bernoulli(1 - p); every other square is completed from its left and
    bottom edges, strips bottom-up, each strip left to right.
    """
    p = check_probability(params.p)
    a = np.zeros(params.height, dtype=np.int64)
    return fill_from_path(p, a, params.width, params.height, params.seed)


def directed_staircase(p, spec: DirectedPathSpec):
    """Column of the vertical path edge in each strip, as used by the sampler."""
    p = check_probability(p)
    W, H = spec.width, spec.height
    cx, cy = spec.centre
    if not (0 <= cx <= W and 0 <= cy <= H):
        raise PathOutOfWindow(f"path centre {(cx, cy)} outside window")
    pf = Fraction(p)
    slope = pf / (2 * (1 - pf))
    levels = np.empty(W, dtype=np.int64)
    for x in range(W):
        dx = x - cx
        if abs(dx) <= spec.M:
            y = cy
        elif dx > spec.M:
            y = math.ceil(cy - slope * (dx - spec.M))
        else:
            y = math.floor(cy + slope * (-dx - spec.M))
        levels[x] = min(max(y, 0), H)
    # a[y] = first column whose descent reaches level y
    return np.searchsorted(-levels, -np.arange(H), side="left").astype(np.int64)


def sample_via_directed_path(p, spec: DirectedPathSpec, seed: int = 0) -> EdgeConfig:
    """Label a NW-SE staircase independently and fill the plane from it."""
    a = directed_staircase(p, spec)
    return fill_from_path(float(p), a, spec.width, spec.height, seed)


def sample_independent(params: IndependentParams) -> EdgeConfig:
    g = rngmod.stream(params.seed, rngmod.BOUNDARY)
    h = rngmod.bernoulli(g, params.pH1, (params.height + 1, params.width))
    v = rngmod.bernoulli(g, params.pV1, (params.height, params.width + 1))
    return EdgeConfig._trusted(h, v)


def fixture_stripes(width: int, height: int) -> EdgeConfig:
    """All horizontal labels 1, all vertical labels 0."""
    _check_window(width, height)
    return EdgeConfig(np.ones((height + 1, width), np.uint8), np.zeros((height, width + 1), np.uint8))


def fixture_checkerboard(width: int, height: int, shift=(0, 0)) -> EdgeConfig:
    """Window onto the plane pattern where squares with ``x - sx`` and ``y - sy`` both even have four 1-labels.

    An edge is 1 iff one of the two squares it borders is such a square, so
    squares just outside the window still mark the edges they share with it.
    """
    _check_window(width, height)
    sx, sy = shift
    if sx not in (0, 1) or sy not in (0, 1):
        raise ValueError("shift components must be 0 or 1")
    col = (np.arange(-1, width + 1) - sx) % 2 == 0  # square columns -1 .. W
    row = (np.arange(-1, height + 1) - sy) % 2 == 0  # square rows -1 .. H
    blue = row[:, None] & col[None, :]
    h = blue[:-1, 1:-1] | blue[1:, 1:-1]
    v = blue[1:-1, :-1] | blue[1:-1, 1:]
    return EdgeConfig(h.astype(np.uint8), v.astype(np.uint8))
