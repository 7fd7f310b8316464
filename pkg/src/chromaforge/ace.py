"""Automatic color equalization.

Two stages per channel: a spatially weighted sum of clipped pairwise
differences, then a per-channel min-max remap to the full 8-bit range.
The pairwise stage is the hot loop; it runs on the compiled kernel when the
extension built, otherwise on the numpy fallback (set CHROMAFORGE_PURE=1 to
force the fallback).
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import _ace_numpy
from .image import Colorspace, ImageBuffer

try:
    from . import _ace_kernel
except ImportError:
    _ace_kernel = None

_FORCE_PURE = os.environ.get("CHROMAFORGE_PURE", "") not in ("", "0")

# Pairwise terms touched per chunk; bounds peak memory of the numpy kernels.
_PAIR_BUDGET = 2 ** 21


def active_kernels():
    """The stage-1 kernel module used by default."""
    if _ace_kernel is not None and not _FORCE_PURE:
        return _ace_kernel
    return _ace_numpy


def backend_name() -> str:
    return "compiled" if active_kernels() is _ace_kernel else "numpy"


@dataclass(frozen=True)
class AceParams:
    """Tuning knobs: saturation slope, comparison pixels per target pixel
    (0 = exhaustive), subsampling seed, and the output level for channels
    with no dynamic range."""

    slope: float = 10.0
    samples: int = 500
    seed: int = 0
    degenerate_value: int = 128

    def __post_init__(self):
        if not self.slope > 0:
            raise ValueError(f"slope must be positive, got {self.slope}")
        if self.samples != 0 and self.samples < 8:
            raise ValueError(f"samples must be 0 (exhaustive) or >= 8, got {self.samples}")
        if not 0 <= self.degenerate_value <= 255:
            raise ValueError(f"degenerate_value must be in [0, 255], got {self.degenerate_value}")


def ace_exhaustive(image: ImageBuffer, params: AceParams = AceParams(), *,
                   kernels=None) -> ImageBuffer:
    """Equalize using every pixel pair (quadratic; intended for small images)."""
    flat = _require_rgb(image)
    k = kernels if kernels is not None else active_kernels()
    n = flat.shape[0]
    chunk = max(1, _PAIR_BUDGET // n)
    acc = np.empty((n, 3), dtype=np.float64)
    for s in range(0, n, chunk):
        c = min(chunk, n - s)
        acc[s:s + c] = k.stage1_exhaustive(flat, image.width, params.slope, s, c)
    return _tone_map(acc, image, params)


def ace_sampled(image: ImageBuffer, params: AceParams = AceParams(), *,
                kernels=None) -> ImageBuffer:
    """Equalize against ``samples`` comparison pixels per target pixel.

    Comparison pixels are drawn uniformly without replacement (never the
    target itself) from a generator seeded by ``params.seed``; the partial sum
    is rescaled by the exhaustive-to-sampled term ratio. When samples covers
    every other pixel this is exactly the exhaustive result.
    """
    if params.samples < 8:
        raise ValueError(f"samples must be >= 8 for sampled mode, got {params.samples}")
    flat = _require_rgb(image)
    n = flat.shape[0]
    m = n - 1  # candidate comparison pixels per target
    if params.samples >= m:
        return ace_exhaustive(image, params, kernels=kernels)
    k = kernels if kernels is not None else active_kernels()
    rng = np.random.Generator(np.random.PCG64(params.seed))
    scale = m / params.samples
    chunk = max(1, _PAIR_BUDGET // params.samples)
    acc = np.empty((n, 3), dtype=np.float64)
    for s in range(0, n, chunk):
        pix = np.arange(s, min(s + chunk, n), dtype=np.int64)
        samp = _draw_comparisons(rng, n, pix, params.samples)
        acc[s:s + len(pix)] = k.stage1_sampled(flat, image.width, params.slope, pix, samp)
    return _tone_map(acc * scale, image, params)


def _draw_comparisons(rng: np.random.Generator, n_pixels: int,
                      pix: np.ndarray, k: int) -> np.ndarray:
    """Per-row uniform draws of k distinct indices != pix[row], sorted ascending.

    Draws land in [0, n_pixels-2] and are shifted past the row's own pixel, so
    self-comparison is impossible by construction.
    """
    m = n_pixels - 1
    count = len(pix)
    if m <= 2 * k:
        # dense case: partial shuffles would thrash, take a full permutation
        base = np.tile(np.arange(m, dtype=np.int64), (count, 1))
        idx = rng.permuted(base, axis=1)[:, :k].copy()
    else:
        idx = rng.integers(0, m, size=(count, k), dtype=np.int64)
        while True:
            order = np.argsort(idx, axis=1, kind="stable")
            sval = np.take_along_axis(idx, order, axis=1)
            dup_sorted = np.zeros((count, k), dtype=bool)
            dup_sorted[:, 1:] = sval[:, 1:] == sval[:, :-1]
            if not dup_sorted.any():
                break
            dup = np.zeros((count, k), dtype=bool)
            np.put_along_axis(dup, order, dup_sorted, axis=1)
            idx[dup] = rng.integers(0, m, size=int(dup.sum()), dtype=np.int64)
    idx += idx >= pix[:, None]
    idx.sort(axis=1)
    return idx


def apply_ace(image: ImageBuffer, params: AceParams = AceParams(), *,
              kernels=None) -> ImageBuffer:
    """Dispatch on ``params.samples``: 0 runs exhaustive, otherwise sampled."""
    if params.samples == 0:
        return ace_exhaustive(image, params, kernels=kernels)
    return ace_sampled(image, params, kernels=kernels)


def _require_rgb(image: ImageBuffer) -> np.ndarray:
    if image.colorspace != Colorspace.RGB:
        raise ValueError(f"expected RGB input, got {image.colorspace.name}")
    return np.ascontiguousarray(image.data.reshape(-1, 3), dtype=np.float64)


def _tone_map(acc: np.ndarray, image: ImageBuffer, params: AceParams) -> ImageBuffer:
    """Per-channel linear min-max map to [0, 255], rounded half-up."""
    out = np.empty_like(acc)
    for c in range(3):
        lo = acc[:, c].min()
        hi = acc[:, c].max()
        if hi == lo:
            out[:, c] = params.degenerate_value
        else:
            out[:, c] = np.floor((acc[:, c] - lo) * (255.0 / (hi - lo)) + 0.5)
    shaped = out.reshape(image.height, image.width, 3).astype(np.uint8)
    return ImageBuffer(shaped, Colorspace.RGB)
