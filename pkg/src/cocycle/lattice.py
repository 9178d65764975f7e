"""Edge labellings of a finite square-lattice window and their height functions.

A window of width ``W`` and height ``H`` has vertices ``[0, W] x [0, H]``.
Horizontal labels live in an array of shape ``(H+1, W)`` and vertical labels
in one of shape ``(H, W+1)``; both are indexed ``[y, x]``. Plaquette ``(x, y)``
has corners ``(x, y), (x+1, y), (x+1, y+1), (x, y+1)``, so its bottom edge is
``h[y, x]``, top ``h[y+1, x]``, left ``v[y, x]`` and right ``v[y, x+1]``.
"""
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
import math
from typing import NamedTuple, Sequence

import numpy as np

from .errors import CocycleViolation, PathOutOfWindow


class Orientation(str, Enum):
    HORIZONTAL = "H"
    VERTICAL = "V"


class Vertex(NamedTuple):
    x: int
    y: int


class EdgeRef(NamedTuple):
    """Horizontal edges span base -> base+(1,0), vertical ones base -> base+(0,1)."""

    orientation: Orientation
    base: Vertex


class SquareLabels(NamedTuple):
    """Labels of one plaquette, read clockwise from the lower-left corner."""

    left: int
    top: int
    right: int
    bottom: int

    @property
    def code(self) -> str:
        return f"{self.left}{self.top}{self.right}{self.bottom}"

    @classmethod
    def from_code(cls, code: str) -> "SquareLabels":
        if len(code) != 4 or set(code) - {"0", "1"}:
            raise ValueError(f"bad plaquette code {code!r}")
        return cls(*(int(c) for c in code))


def plaquette_residual(sq: SquareLabels) -> int:
    """``bottom + right - left - top``; zero iff the square is consistent."""
    for lab in sq:
        if lab not in (0, 1):
            raise ValueError(f"labels must be 0 or 1, got {sq}")
    return sq.bottom + sq.right - sq.left - sq.top


class EdgeConfig:
    """Immutable 0/1 labelling of every edge in a ``W x H`` window."""

    __slots__ = ("_h", "_v")

    def __init__(self, h, v):
        h = np.array(h, dtype=np.uint8, copy=True, order="C")
        v = np.array(v, dtype=np.uint8, copy=True, order="C")
        if h.ndim != 2 or v.ndim != 2:
            raise ValueError("label arrays must be two-dimensional")
        Hp1, W = h.shape
        H, Wp1 = v.shape
        if W < 1 or H < 1 or Hp1 != H + 1 or Wp1 != W + 1:
            raise ValueError(
                f"inconsistent shapes h{h.shape} v{v.shape}; expected (H+1, W) and (H, W+1)"
            )
        if h.max(initial=0) > 1 or v.max(initial=0) > 1:
            raise ValueError("labels must be 0 or 1")
        h.flags.writeable = False
        v.flags.writeable = False
        self._h = h
        self._v = v

    @classmethod
    def zeros(cls, width: int, height: int) -> "EdgeConfig":
        return cls(np.zeros((height + 1, width), np.uint8), np.zeros((height, width + 1), np.uint8))

    @classmethod
    def _trusted(cls, h, v) -> "EdgeConfig":
        # sampler output: already uint8, contiguous, 0/1 and correctly shaped
        obj = cls.__new__(cls)
        h.flags.writeable = False
        v.flags.writeable = False
        obj._h = h
        obj._v = v
        return obj

    @property
    def h(self) -> np.ndarray:
        return self._h

    @property
    def v(self) -> np.ndarray:
        return self._v

    @property
    def width(self) -> int:
        return self._h.shape[1]

    @property
    def height(self) -> int:
        return self._v.shape[0]

    @property
    def n_edges(self) -> int:
        return self._h.size + self._v.size

    def label(self, edge: EdgeRef) -> int:
        x, y = edge.base
        if edge.orientation is Orientation.HORIZONTAL:
            if not (0 <= x < self.width and 0 <= y <= self.height):
                raise PathOutOfWindow(f"edge {edge} outside window")
            return int(self._h[y, x])
        if not (0 <= x <= self.width and 0 <= y < self.height):
            raise PathOutOfWindow(f"edge {edge} outside window")
        return int(self._v[y, x])

    def plaquette(self, x: int, y: int) -> SquareLabels:
        return SquareLabels(
            left=int(self._v[y, x]),
            top=int(self._h[y + 1, x]),
            right=int(self._v[y, x + 1]),
            bottom=int(self._h[y, x]),
        )

    def crop(self, x0: int, y0: int, width: int, height: int) -> "EdgeConfig":
        """Sub-window with lower-left vertex ``(x0, y0)``."""
        if x0 < 0 or y0 < 0 or x0 + width > self.width or y0 + height > self.height:
            raise PathOutOfWindow("crop box leaves the window")
        return EdgeConfig(
            self._h[y0:y0 + height + 1, x0:x0 + width],
            self._v[y0:y0 + height, x0:x0 + width + 1],
        )

    def packbits(self) -> bytes:
        """Bit-packed row-major labels: horizontal rows then vertical rows."""
        return np.packbits(np.concatenate([self._h.ravel(), self._v.ravel()])).tobytes()

    @classmethod
    def from_packbits(cls, data: bytes, width: int, height: int) -> "EdgeConfig":
        nh = (height + 1) * width
        nv = height * (width + 1)
        bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8), count=nh + nv)
        return cls(bits[:nh].reshape(height + 1, width), bits[nh:].reshape(height, width + 1))

    def __eq__(self, other):
        if not isinstance(other, EdgeConfig):
            return NotImplemented
        return np.array_equal(self._h, other._h) and np.array_equal(self._v, other._v)

    def __hash__(self):
        return hash((self.width, self.height, self.packbits()))

    def __repr__(self):
        return f"EdgeConfig(W={self.width}, H={self.height})"


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.valid


def residuals(cfg: EdgeConfig) -> np.ndarray:
    """Plaquette residuals as an ``(H, W)`` int8 array indexed ``[y, x]``."""
    h = cfg.h.astype(np.int8)
    v = cfg.v.astype(np.int8)
    return h[:-1, :] + v[:, 1:] - v[:, :-1] - h[1:, :]


def validate_cocycle(cfg: EdgeConfig) -> ValidationReport:
    """Check every plaquette; violations are ``(x, y)`` pairs in row-major order."""
    ys, xs = np.nonzero(residuals(cfg))
    violations = [(int(x), int(y)) for y, x in zip(ys, xs)]
    return ValidationReport(valid=not violations, violations=violations)


@dataclass(frozen=True, eq=False)
class HeightField:
    """Integer potential whose unit increments equal the edge labels.

    ``F[y, x]`` is the height of vertex ``(x, y)`` relative to ``anchor``.
    """

    F: np.ndarray
    anchor: Vertex = Vertex(0, 0)

    @property
    def width(self) -> int:
        return self.F.shape[1] - 1

    @property
    def height(self) -> int:
        return self.F.shape[0] - 1

    def f(self, z) -> int:
        """Height at ``z`` given in window coordinates."""
        x, y = z
        if not (0 <= x <= self.width and 0 <= y <= self.height):
            raise PathOutOfWindow(f"vertex {tuple(z)} outside window")
        return int(self.F[y, x])

    def relative(self, dz) -> int:
        """Height at ``anchor + dz``; this is the origin-anchored ``f``."""
        return self.f((self.anchor.x + dz[0], self.anchor.y + dz[1]))


def integrate_height(cfg: EdgeConfig, anchor=Vertex(0, 0)) -> HeightField:
    """Integrate labels into a height field with ``F(anchor) = 0``.

    Raises
    ------
    CocycleViolation
        If any plaquette is inconsistent; names the first one row-major.
    """
    res = residuals(cfg)
    bad = np.flatnonzero(res)
    if bad.size:
        y, x = divmod(int(bad[0]), cfg.width)
        raise CocycleViolation((x, y), int(res[y, x]))
    ax, ay = anchor
    if not (0 <= ax <= cfg.width and 0 <= ay <= cfg.height):
        raise PathOutOfWindow(f"anchor {tuple(anchor)} outside window")
    F = np.zeros((cfg.height + 1, cfg.width + 1), dtype=np.int32)
    F[1:, 0] = np.cumsum(cfg.v[:, 0], dtype=np.int32)
    F[:, 1:] = F[:, :1] + np.cumsum(cfg.h, axis=1, dtype=np.int32)
    F -= F[ay, ax]
    F.flags.writeable = False
    return HeightField(F, Vertex(int(ax), int(ay)))


class LatticePath(tuple):
    """Sequence of vertices, consecutive ones nearest neighbours."""

    def __new__(cls, vertices):
        verts = tuple(Vertex(int(x), int(y)) for x, y in vertices)
        for a, b in zip(verts, verts[1:]):
            if abs(a.x - b.x) + abs(a.y - b.y) != 1:
                raise ValueError(f"{a} and {b} are not adjacent")
        return super().__new__(cls, verts)

    @classmethod
    def from_steps(cls, start, steps: str) -> "LatticePath":
        """Build from a step string over ``E, N, W, S``."""
        moves = {"E": (1, 0), "N": (0, 1), "W": (-1, 0), "S": (0, -1)}
        x, y = start
        verts = [(x, y)]
        for s in steps:
            dx, dy = moves[s]
            x, y = x + dx, y + dy
            verts.append((x, y))
        return cls(verts)

    def split(self):
        """Edges travelled east/north (``plus``) and west/south (``minus``)."""
        plus, minus = [], []
        for a, b in zip(self, self[1:]):
            if b.x == a.x + 1:
                plus.append(EdgeRef(Orientation.HORIZONTAL, a))
            elif b.y == a.y + 1:
                plus.append(EdgeRef(Orientation.VERTICAL, a))
            elif b.x == a.x - 1:
                minus.append(EdgeRef(Orientation.HORIZONTAL, b))
            else:
                minus.append(EdgeRef(Orientation.VERTICAL, b))
        return plus, minus


def f_along_path(cfg: EdgeConfig, path: Sequence) -> int:
    """Sum of labels on east/north steps minus the sum on west/south steps."""
    pts = np.asarray(path, dtype=np.int64).reshape(-1, 2)
    if pts.shape[0] < 2:
        return 0
    x, y = pts[:, 0], pts[:, 1]
    if x.min() < 0 or y.min() < 0 or x.max() > cfg.width or y.max() > cfg.height:
        raise PathOutOfWindow("path leaves the window")
    dx = np.diff(x)
    dy = np.diff(y)
    if np.any(np.abs(dx) + np.abs(dy) != 1):
        raise ValueError("consecutive path vertices must be nearest neighbours")
    x0, y0 = x[:-1], y[:-1]
    total = 0
    east = dx == 1
    west = dx == -1
    north = dy == 1
    south = dy == -1
    total += int(cfg.h[y0[east], x0[east]].sum(dtype=np.int64))
    total -= int(cfg.h[y0[west], x0[west] - 1].sum(dtype=np.int64))
    total += int(cfg.v[y0[north], x0[north]].sum(dtype=np.int64))
    total -= int(cfg.v[y0[south] - 1, x0[south]].sum(dtype=np.int64))
    return total


class Marginals(NamedTuple):
    h_hat: Fraction
    v_hat: Fraction

    def as_floats(self):
        return float(self.h_hat), float(self.v_hat)


def marginals(cfg: EdgeConfig) -> Marginals:
    """Exact mean horizontal and vertical labels."""
    return Marginals(
        Fraction(int(cfg.h.sum(dtype=np.int64)), cfg.h.size),
        Fraction(int(cfg.v.sum(dtype=np.int64)), cfg.v.size),
    )


@dataclass(frozen=True)
class ConeSpec:
    """Slope cone around direction ``alpha``.

    For finite ``alpha`` a point belongs when ``alpha - epsilon <= y/x <=
    alpha + epsilon``. For infinite ``alpha``, ``epsilon`` holds the threshold
    ``M`` and membership is ``|y/x| > M``.
    """

    alpha: float
    epsilon: float

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("cone width must be positive")


def balance_slope(h, v) -> float:
    """Direction along which height grows sublinearly: ``-h / v``."""
    return -float(h) / float(v)


def cone_contains(cone: ConeSpec, z) -> bool:
    x, y = z
    if x == 0 and y == 0:
        return True
    if math.isinf(cone.alpha):
        if x == 0:
            return True
        return abs(y / x) > cone.epsilon
    if x == 0:
        return False
    slope = y / x
    return cone.alpha - cone.epsilon <= slope <= cone.alpha + cone.epsilon


def cone_mask(cone: ConeSpec, dx: np.ndarray, dy: np.ndarray) -> np.ndarray:
    """Vectorised :func:`cone_contains` over offset arrays."""
    dx = np.asarray(dx, dtype=np.float64)
    dy = np.asarray(dy, dtype=np.float64)
    origin = (dx == 0) & (dy == 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        slope = dy / dx
    if math.isinf(cone.alpha):
        inside = (dx == 0) | (np.abs(slope) > cone.epsilon)
    else:
        inside = (dx != 0) & (slope >= cone.alpha - cone.epsilon) & (slope <= cone.alpha + cone.epsilon)
    return inside | origin
