"""Pure-numpy stage-1 accumulation kernels for color equalization.

Drop-in fallback for the compiled ``_ace_kernel`` extension; same signatures,
same semantics. Arrays are (n_pixels, 3) float64 in row-major pixel order.
"""

from __future__ import annotations

import numpy as np


def stage1_exhaustive(flat: np.ndarray, width: int, slope: float,
                      start: int, count: int) -> np.ndarray:
    """Sum r((I_p - I_j)/255) / d(p, j) over all j != p for pixels [start, start+count)."""
    n = flat.shape[0]
    j = np.arange(n)
    jx = (j % width).astype(np.float64)
    jy = (j // width).astype(np.float64)
    p = np.arange(start, start + count)
    d = np.hypot(jx[p][:, None] - jx[None, :], jy[p][:, None] - jy[None, :])
    d[np.arange(count), p] = np.inf  # excludes the j == p term
    inv_d = 1.0 / d
    scale = slope / 255.0
    out = np.empty((count, 3), dtype=np.float64)
    for c in range(3):
        r = np.clip((flat[p, c][:, None] - flat[None, :, c]) * scale, -1.0, 1.0)
        out[:, c] = (r * inv_d).sum(axis=1)
    return out


def stage1_sampled(flat: np.ndarray, width: int, slope: float,
                   pix: np.ndarray, samp: np.ndarray) -> np.ndarray:
    """Sum r(.) / d over the given comparison indices (one row of samp per pixel)."""
    px = (pix % width).astype(np.float64)
    py = (pix // width).astype(np.float64)
    inv_d = 1.0 / np.hypot(px[:, None] - samp % width, py[:, None] - samp // width)
    scale = slope / 255.0
    out = np.empty((len(pix), 3), dtype=np.float64)
    for c in range(3):
        r = np.clip((flat[pix, c][:, None] - flat[samp, c]) * scale, -1.0, 1.0)
        out[:, c] = (r * inv_d).sum(axis=1)
    return out
