"""Exclusion-process construction of a percolating cocycle labelling.

A column of vertices carries blue, red or no particles. Moving one column
east, every particle independently wants to hop one unit down with
probability ``hop_prob`` and does so iff the site below is empty in the
current column. Before the dynamics start, the topmost red particle in each
gap between consecutive blue particles is recoloured green. The trajectories
of green particles are disjoint NW-SE staircases; the edge labelling puts 0
on green edges, 1 on every other edge touching a green vertex and 0
elsewhere.

The i.i.d. initial column is not a stationary law for the dynamics, so
``burn_in`` columns are run and discarded before the analysis window starts.
The column is padded by ``2 * width`` rows above and below the window.
"""
from dataclasses import dataclass

import numpy as np

from . import rng as rngmod
from .errors import DomainError
from .lattice import EdgeConfig

EMPTY, BLUE, RED, GREEN = 0, 1, 2, 3
COLOR_CHARS = {EMPTY: ".", BLUE: "b", RED: "r", GREEN: "g"}


@dataclass(frozen=True)
class YaguchiParams:
    width: int
    height: int
    rho_blue: float = 0.3
    rho_red: float = 0.3
    hop_prob: float = 0.5
    burn_in: int = 256
    seed: int = 0

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("window dimensions must be positive")
        if not (0 <= self.rho_blue <= 1 and 0 <= self.rho_red <= 1):
            raise DomainError("colour densities must lie in [0, 1]")
        if self.rho_blue + self.rho_red > 1:
            raise DomainError("rho_blue + rho_red must not exceed 1")
        if not 0 < self.hop_prob < 1:
            raise DomainError("hop_prob must lie in (0, 1)")
        if self.burn_in < 0:
            raise ValueError("burn_in must be non-negative")

    @property
    def pad(self) -> int:
        return 2 * self.width


@dataclass(frozen=True, eq=False)
class ColorField:
    """Particle colours and traced edges over the retained window.

    ``colors[y, x]`` is the colour of vertex ``(x, y)``; ``trace_h`` and
    ``trace_v`` hold the colour of the particle that traversed each
    horizontal / vertical edge (``EMPTY`` when none did).
    """

    colors: np.ndarray
    trace_h: np.ndarray
    trace_v: np.ndarray

    @property
    def green_h(self) -> np.ndarray:
        return self.trace_h == GREEN

    @property
    def green_v(self) -> np.ndarray:
        return self.trace_v == GREEN

    def to_text(self) -> str:
        """One line per column ``x``, characters for ``y = 0 .. H``."""
        lut = np.array([ord(COLOR_CHARS[i]) for i in range(4)], dtype=np.uint8)
        grid = lut[self.colors.T]
        return "".join(row.tobytes().decode("ascii") + "\n" for row in grid)


def initial_column(rng, n, rho_blue, rho_red):
    u = rng.random(n)
    col = np.where(u < rho_blue, BLUE, np.where(u < rho_blue + rho_red, RED, EMPTY)).astype(np.int8)
    return col


def recolor_green(col):
    """Topmost red strictly between each pair of consecutive blues becomes green.

    Gaps not enclosed by two blues (at the ends of the column) are left alone.
    """
    col = col.copy()
    blues = np.flatnonzero(col == BLUE)
    reds = np.flatnonzero(col == RED)
    if blues.size < 2 or reds.size == 0:
        return col
    # index of the gap each red sits in: reds between blues[k] and blues[k+1] get k
    gap = np.searchsorted(blues, reds) - 1
    inside = (gap >= 0) & (gap < blues.size - 1)
    reds, gap = reds[inside], gap[inside]
    if reds.size:
        # reds are sorted ascending, so the last red of each gap is the topmost
        last = np.r_[gap[1:] != gap[:-1], True]
        col[reds[last]] = GREEN
    return col


def step(col, wants):
    """Advance one column; returns ``(new_col, moved_mask)``."""
    occupied = col != EMPTY
    below_empty = np.zeros(col.size, dtype=bool)
    below_empty[1:] = col[:-1] == EMPTY
    moved = occupied & wants & below_empty
    stay = occupied & ~moved
    new = np.zeros_like(col)
    new[stay] = col[stay]
    idx = np.flatnonzero(moved)
    new[idx - 1] = col[idx]
    return new, moved


def evolve(params: YaguchiParams):
    """Run the dynamics over burn-in plus window columns on the padded column.

    Returns full-domain arrays ``(colors, trace_h, trace_v)`` indexed
    ``[row, column]`` where row ``r`` corresponds to window ``y = r - pad``
    and column ``c`` to window ``x = c - burn_in``.
    """
    pad = params.pad
    nrows = params.height + 1 + 2 * pad
    ncols = params.burn_in + params.width + 1
    init = rngmod.stream(params.seed, rngmod.INITIAL)
    moves = rngmod.stream(params.seed, rngmod.MOVES)

    colors = np.zeros((nrows, ncols), dtype=np.int8)
    trace_h = np.zeros((nrows, ncols - 1), dtype=np.int8)
    trace_v = np.zeros((nrows - 1, ncols), dtype=np.int8)
    col = recolor_green(initial_column(init, nrows, params.rho_blue, params.rho_red))
    colors[:, 0] = col
    for c in range(ncols - 1):
        wants = moves.random(nrows) < params.hop_prob
        new, moved = step(col, wants)
        stay = (col != EMPTY) & ~moved
        trace_h[stay, c] = col[stay]
        idx = np.flatnonzero(moved)
        trace_v[idx - 1, c] = col[idx]
        trace_h[idx - 1, c] = col[idx]
        col = new
        colors[:, c + 1] = col
    return colors, trace_h, trace_v


def green_labelling(green_h, green_v):
    """Edge labels from green edge masks over a domain of vertices.

    Green edges get 0, other edges touching a green vertex get 1, the rest 0.
    """
    Hp1, W = green_h.shape
    gvert = np.zeros((Hp1, W + 1), dtype=bool)
    gvert[:, :-1] |= green_h
    gvert[:, 1:] |= green_h
    gvert[:-1, :] |= green_v
    gvert[1:, :] |= green_v
    h = (~green_h & (gvert[:, :-1] | gvert[:, 1:])).astype(np.uint8)
    v = (~green_v & (gvert[:-1, :] | gvert[1:, :])).astype(np.uint8)
    return h, v


def sample_yaguchi(params: YaguchiParams):
    """Sample ``(ColorField, EdgeConfig)`` on the ``W x H`` retained window."""
    colors, trace_h, trace_v = evolve(params)
    gh, gv = trace_h == GREEN, trace_v == GREEN
    # label on the full domain so green vertices just outside the window count
    h_full, v_full = green_labelling(gh, gv)
    r0, r1 = params.pad, params.pad + params.height
    c0, c1 = params.burn_in, params.burn_in + params.width
    h = np.ascontiguousarray(h_full[r0:r1 + 1, c0:c1])
    v = np.ascontiguousarray(v_full[r0:r1, c0:c1 + 1])
    field = ColorField(
        colors=np.ascontiguousarray(colors[r0:r1 + 1, c0:c1 + 1]),
        trace_h=np.ascontiguousarray(trace_h[r0:r1 + 1, c0:c1]),
        trace_v=np.ascontiguousarray(trace_v[r0:r1, c0:c1 + 1]),
    )
    return field, EdgeConfig._trusted(h, v)


def parse_colors(text: str) -> np.ndarray:
    """Inverse of :meth:`ColorField.to_text` for the colour grid."""
    lookup = {c: k for k, c in COLOR_CHARS.items()}
    lines = text.splitlines()
    if not lines or any(len(line) != len(lines[0]) for line in lines):
        raise ValueError("colour grid lines must be non-empty and of equal length")
    try:
        grid = np.array([[lookup[c] for c in line] for line in lines], dtype=np.int8)
    except KeyError as exc:
        raise ValueError(f"unknown colour character {exc.args[0]!r}") from None
    return np.ascontiguousarray(grid.T)
