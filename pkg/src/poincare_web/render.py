"""Raster images of level sets of a linearizer, with ring overlays, written as binary PPM."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import _logmod
from .linearizer import LinearizerSeries, eval_L_array

# level 0..3 colours, then the overlay colour
PALETTE = np.array([[20, 20, 40], [60, 90, 170], [90, 170, 120], [240, 200, 80]], dtype=np.uint8)
RING_COLOR = np.array([230, 60, 60], dtype=np.uint8)
MAX_COORD = 1e300


@dataclass
class RasterImage:
    width: int
    height: int
    pixels: np.ndarray  # (height, width, 3) uint8, row 0 at the top

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("image dimensions must be positive")
        if self.pixels.shape != (self.height, self.width, 3) or self.pixels.dtype != np.uint8:
            raise ValueError("pixels must be a (height, width, 3) uint8 array")

    def to_ppm(self) -> bytes:
        header = f"P6\n{self.width} {self.height}\n255\n".encode("ascii")
        return header + np.ascontiguousarray(self.pixels).tobytes()

    def save(self, path) -> None:
        with open(path, "wb") as fh:
            fh.write(self.to_ppm())


def read_ppm(data: bytes) -> RasterImage:
    parts = data.split(maxsplit=4)
    if parts[0] != b"P6" or int(parts[3]) != 255:
        raise ValueError("not a P6 image with max value 255")
    w, h = int(parts[1]), int(parts[2])
    px = np.frombuffer(parts[4][: w * h * 3], dtype=np.uint8).reshape(h, w, 3).copy()
    return RasterImage(w, h, px)


def pixel_grid(center: complex, width: float, nx: int, ny: int):
    """Pixel-centre coordinates; square pixels, row 0 at the top."""
    h = width / nx
    xs = center.real + (np.arange(nx) - (nx - 1) / 2) * h
    ys = center.imag - (np.arange(ny) - (ny - 1) / 2) * h
    return xs[None, :] + 1j * ys[:, None]


def level_map(s: LinearizerSeries, p, Z, logM, depth: int) -> np.ndarray:
    """Vectorised level count: largest ``j <= depth`` with ``log|L^i(z)| >= logM[i]`` for ``i = 1..j``.

    Follows the same rules as the pointwise membership test: a lower bound
    above the threshold passes, an upper bound below fails, anything else
    stops the count; iteration continues only from exactly known values.
    """
    Z = np.asarray(Z, dtype=complex)
    flat = Z.ravel()
    level = np.zeros(flat.shape, dtype=np.int64)
    alive = np.ones(flat.shape, dtype=bool)
    cur = flat.copy()
    for i in range(1, depth + 1):
        idx = np.flatnonzero(alive)
        if idx.size == 0:
            break
        vals, lo, hi, exact = eval_L_array(s, p, cur[idx])
        thr = logM[i]
        if _logmod.is_big(thr):
            ok = np.zeros(idx.size, dtype=bool)
        else:
            ok = lo >= thr
        level[idx[ok]] = i
        # only exactly known values below the coordinate limit are iterated further
        cont = ok & exact & np.isfinite(vals) & (np.abs(vals) < MAX_COORD)
        alive[:] = False
        alive[idx[cont]] = True
        cur[idx[cont]] = vals[cont]
    return level.reshape(Z.shape)


def _draw_polyline(img, pts, center, width, color):
    ny, nx, _ = img.shape
    h = width / nx
    x = (pts.real - center.real) / h + (nx - 1) / 2
    y = -(pts.imag - center.imag) / h + (ny - 1) / 2
    x2, y2 = np.roll(x, -1), np.roll(y, -1)
    n = np.maximum(np.ceil(np.hypot(x2 - x, y2 - y)).astype(int), 1)
    for a, b, c, d, k in zip(x, y, x2, y2, n):
        t = np.linspace(0.0, 1.0, k + 1)
        cx = np.rint(a + (c - a) * t).astype(int)
        cy = np.rint(b + (d - b) * t).astype(int)
        keep = (cx >= 0) & (cx < nx) & (cy >= 0) & (cy < ny)
        img[cy[keep], cx[keep]] = color


def render_levels(s: LinearizerSeries, p, params, center=0j, width=20.0, pixels=(160, 160), depth=3,
                  rings=()) -> RasterImage:
    """Colour pixels by level count over a square-pixel window and overlay ring polylines."""
    nx, ny = int(pixels[0]), int(pixels[1])
    if nx <= 0 or ny <= 0:
        raise ValueError("pixel dimensions must be positive")
    center = complex(center)
    half = 0.5 * width * max(1.0, ny / nx)
    if abs(center) + math.hypot(half, 0.5 * width) > MAX_COORD:
        warnings.warn("render window exceeds the evaluable range; clipped", RuntimeWarning, stacklevel=2)
        width = max(MAX_COORD - abs(center), 0.0) / 2
    depth = min(depth, len(params.logM) - 1, len(PALETTE) - 1)
    Z = pixel_grid(center, width, nx, ny)
    levels = level_map(s, p, Z, params.logM, depth)
    img = PALETTE[levels]
    for ring in rings:
        if ring.points.size:
            _draw_polyline(img, ring.points, center, width, RING_COLOR)
    return RasterImage(nx, ny, img)
