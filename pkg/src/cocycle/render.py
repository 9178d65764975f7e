"""Deterministic PPM and SVG pictures of edge configurations.

Layout: at ``scale`` pixels per lattice unit the image is ``scale * W + 1``
pixels wide and ``scale * H + 1`` tall; vertex ``(x, y)`` sits at pixel
column ``scale * x`` and row ``scale * (H - y)`` so north is up.
"""
from dataclasses import dataclass
import json

import numpy as np

from .lattice import EdgeConfig, balance_slope


@dataclass(frozen=True)
class RenderStyle:
    color0: tuple = (40, 90, 200)
    color1: tuple = (215, 60, 40)
    background: tuple = (255, 255, 255)
    green: tuple = (0, 170, 60)
    boundary: tuple = (0, 0, 0)
    scale: int = 4
    show_clusters: bool = False
    show_green: bool = True
    show_boundaries: bool = False
    cone_eps: float = None

    def __post_init__(self):
        if int(self.scale) < 1:
            raise ValueError("scale must be at least 1")


def image_size(cfg: EdgeConfig, scale: int):
    return scale * cfg.width + 1, scale * cfg.height + 1


def _palette(ids):
    # fixed integer hash so colours do not depend on process state
    k = (ids.astype(np.uint64) * np.uint64(2654435761)) & np.uint64(0xFFFFFF)
    rgb = np.stack([(k >> np.uint64(16)) & np.uint64(255), (k >> np.uint64(8)) & np.uint64(255), k & np.uint64(255)], -1)
    return (rgb.astype(np.uint16) // 2 + 64).astype(np.uint8)


def _paint_h(img, mask, color, s, H):
    ys, xs = np.nonzero(mask)
    rows = s * (H - ys)
    cols = s * xs
    color = np.asarray(color, dtype=np.uint8)
    for k in range(s + 1):
        img[rows, cols + k] = color if color.ndim == 1 else color[mask]


def _paint_v(img, mask, color, s, H):
    ys, xs = np.nonzero(mask)
    rows = s * (H - ys)
    cols = s * xs
    color = np.asarray(color, dtype=np.uint8)
    for k in range(s + 1):
        img[rows - k, cols] = color if color.ndim == 1 else color[mask]


def raster(cfg: EdgeConfig, clusters=None, colors=None, style: RenderStyle = RenderStyle(),
           boundaries=None, anchor=None, marginals=None) -> np.ndarray:
    """RGB image array of shape ``(rows, cols, 3)``."""
    s = int(style.scale)
    W, H = cfg.width, cfg.height
    wpx, hpx = image_size(cfg, s)
    img = np.empty((hpx, wpx, 3), dtype=np.uint8)
    img[:] = style.background
    if style.cone_eps is not None and anchor is not None and marginals is not None:
        _paint_cone(img, cfg, style, anchor, marginals)
    _paint_h(img, cfg.h == 1, style.color1, s, H)
    _paint_v(img, cfg.v == 1, style.color1, s, H)
    if style.show_clusters and clusters is not None:
        lab = clusters.labels
        hc = _palette(lab[:, :-1])
        vc = _palette(lab[:-1, :])
        _paint_h(img, cfg.h == 0, hc, s, H)
        _paint_v(img, cfg.v == 0, vc, s, H)
    else:
        _paint_h(img, cfg.h == 0, style.color0, s, H)
        _paint_v(img, cfg.v == 0, style.color0, s, H)
    if style.show_boundaries and boundaries:
        for path in boundaries:
            _paint_path(img, path, style.boundary, s, H)
    if style.show_green and colors is not None:
        gh, gv = green_edges(colors)
        _paint_h(img, gh, style.green, s, H)
        _paint_v(img, gv, style.green, s, H)
    return img


def _paint_path(img, path, color, s, H):
    for (x0, y0), (x1, y1) in zip(path, path[1:]):
        r0, r1 = sorted((s * (H - y0), s * (H - y1)))
        c0, c1 = sorted((s * x0, s * x1))
        img[r0:r1 + 1, c0:c1 + 1] = color


def _paint_cone(img, cfg, style, anchor, marginals):
    h, v = (float(m) for m in marginals)
    alpha = balance_slope(h, v)
    s = int(style.scale)
    rows, cols = np.mgrid[0:img.shape[0], 0:img.shape[1]]
    dx = cols / s - anchor[0]
    dy = (cfg.height - rows / s) - anchor[1]
    with np.errstate(divide="ignore", invalid="ignore"):
        slope = dy / dx
    inside = (dx != 0) & (np.abs(slope - alpha) <= style.cone_eps)
    img[inside] = (255, 244, 190)


def green_edges(colors):
    """Green horizontal / vertical edge masks of a :class:`ColorField` or colour grid.

    Edges come from the field's traces when available; otherwise they are
    rebuilt from particle positions: a green particle at ``(x, y)`` continues
    to whichever of ``(x+1, y)`` and ``(x+1, y-1)`` is green (never both,
    since distinct green particles are at least two sites apart). A green on
    the top row with no green predecessor came from above the window, and
    only its horizontal edge is visible.
    """
    if hasattr(colors, "green_h"):
        return colors.green_h, colors.green_v
    from .exclusion import GREEN

    g = np.asarray(colors) == GREEN
    Hp1, Wp1 = g.shape
    gh = np.zeros((Hp1, Wp1 - 1), dtype=bool)
    gv = np.zeros((Hp1 - 1, Wp1), dtype=bool)
    here = g[:, :-1]
    stay = here & g[:, 1:]
    gh |= stay
    drop = np.zeros_like(here)
    drop[1:] = here[1:] & ~g[1:, 1:] & g[:-1, 1:]
    ys, xs = np.nonzero(drop)
    gv[ys - 1, xs] = True
    gh[ys - 1, xs] = True
    # a green arriving with no visible predecessor dropped in from above the top row
    orphan = g[:, 1:] & ~gh
    orphan[:-1] = False
    gh |= orphan
    return gh, gv


def to_ppm(img: np.ndarray, meta=None) -> bytes:
    """Binary P6; metadata, if any, goes into a single header comment."""
    header = b"P6\n"
    if meta:
        header += b"# " + json.dumps(meta, sort_keys=True, separators=(",", ":")).encode("ascii") + b"\n"
    header += f"{img.shape[1]} {img.shape[0]}\n255\n".encode("ascii")
    return header + np.ascontiguousarray(img).tobytes()


def read_ppm(data: bytes):
    """Parse P6 bytes produced by :func:`to_ppm` into ``(img, comments)``."""
    if not data.startswith(b"P6\n"):
        raise ValueError("not a binary PPM")
    pos = 3
    comments = []
    fields = []
    while len(fields) < 3:
        end = data.index(b"\n", pos)
        line = data[pos:end]
        pos = end + 1
        if line.startswith(b"#"):
            comments.append(line[1:].strip().decode("ascii"))
        else:
            fields.extend(int(t) for t in line.split())
    w, h, _ = fields
    img = np.frombuffer(data[pos:pos + w * h * 3], dtype=np.uint8).reshape(h, w, 3)
    return img, comments


def _hex(c):
    return "#%02x%02x%02x" % tuple(c)


def _svg_path(segments):
    return "".join(segments)


def to_svg(cfg: EdgeConfig, clusters=None, colors=None, style: RenderStyle = RenderStyle(),
           boundaries=None, anchor=None, marginals=None, meta=None) -> bytes:
    """SVG 1.1 drawing with the same layout as the raster output."""
    s = int(style.scale)
    W, H = cfg.width, cfg.height
    wpx, hpx = image_size(cfg, s)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{wpx}" height="{hpx}" '
        f'viewBox="0 0 {wpx} {hpx}">',
    ]
    if meta:
        out.append("<metadata>" + json.dumps(meta, sort_keys=True).replace("&", "&amp;").replace("<", "&lt;") + "</metadata>")
    out.append(f'<rect width="{wpx}" height="{hpx}" fill="{_hex(style.background)}"/>')
    if style.cone_eps is not None and anchor is not None and marginals is not None:
        h, v = (float(m) for m in marginals)
        alpha = balance_slope(h, v)
        reach = 2 * (W + H)
        ax, ay = anchor
        for sign in (1, -1):
            pts = [(ax, ay)]
            for sl in (alpha - style.cone_eps, alpha + style.cone_eps):
                pts.append((ax + sign * reach, ay + sign * reach * sl))
            coords = " ".join(f"{s * x:.3f},{s * (H - y):.3f}" for x, y in pts)
            out.append(f'<polygon points="{coords}" fill="#fff4be" stroke="none"/>')

    def edge_segments(hmask, vmask):
        segs = []
        for y, x in zip(*np.nonzero(hmask)):
            segs.append(f"M{s * x} {s * (H - y)}h{s}")
        for y, x in zip(*np.nonzero(vmask)):
            segs.append(f"M{s * x} {s * (H - y)}v{-s}")
        return segs

    for lab, color in ((1, style.color1), (0, style.color0)):
        segs = edge_segments(cfg.h == lab, cfg.v == lab)
        if segs:
            out.append(f'<path d="{_svg_path(segs)}" stroke="{_hex(color)}" stroke-width="1" fill="none"/>')
    if style.show_clusters and clusters is not None:
        lab = clusters.labels
        ids = np.unique(np.concatenate([lab[:, :-1][cfg.h == 0], lab[:-1, :][cfg.v == 0]]))
        pal = _palette(ids)
        for cid, col in zip(ids, pal):
            segs = edge_segments((cfg.h == 0) & (lab[:, :-1] == cid), (cfg.v == 0) & (lab[:-1, :] == cid))
            out.append(f'<path d="{_svg_path(segs)}" stroke="{_hex(col)}" stroke-width="1" fill="none"/>')
    if style.show_boundaries and boundaries:
        for path in boundaries:
            pts = " ".join(f"{s * x},{s * (H - y)}" for x, y in path)
            out.append(f'<polyline points="{pts}" stroke="{_hex(style.boundary)}" stroke-width="2" fill="none"/>')
    if style.show_green and colors is not None:
        gh, gv = green_edges(colors)
        segs = edge_segments(gh, gv)
        if segs:
            out.append(f'<path d="{_svg_path(segs)}" stroke="{_hex(style.green)}" stroke-width="2" fill="none"/>')
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode("utf-8")


def render(cfg: EdgeConfig, clusters=None, colors=None, style: RenderStyle = RenderStyle(),
           fmt: str = "ppm", boundaries=None, anchor=None, marginals=None, meta=None) -> bytes:
    """Image bytes in ``fmt`` (``"ppm"`` or ``"svg"``)."""
    if fmt == "ppm":
        img = raster(cfg, clusters, colors, style, boundaries, anchor, marginals)
        return to_ppm(img, meta)
    if fmt == "svg":
        return to_svg(cfg, clusters, colors, style, boundaries, anchor, marginals, meta)
    raise ValueError(f"unknown image format {fmt!r}")
