"""Binary masks: morphology with a square element and connected components."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .image import PixelBox

_STRUCT_4 = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)
_STRUCT_8 = np.ones((3, 3), dtype=bool)


@dataclass
class BinaryMask:
    """Row-major {0,1} raster stored as a 2-D bool array."""

    bits: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.bits)
        if a.ndim != 2:
            raise ValueError(f"mask must be 2-D, got shape {a.shape}")
        self.bits = np.ascontiguousarray(a.astype(bool))

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    def count(self) -> int:
        return int(self.bits.sum())

    def copy(self) -> "BinaryMask":
        return BinaryMask(self.bits.copy())


def _slide(bits: np.ndarray, radius: int, combine) -> np.ndarray:
    """Separable square-window reduce; out-of-bounds pixels are background."""
    h, w = bits.shape
    acc = np.zeros((h, w + 2 * radius), dtype=bool)
    acc[:, radius:radius + w] = bits
    out = acc[:, 0:w].copy()
    for k in range(1, 2 * radius + 1):
        combine(out, acc[:, k:k + w], out=out)
    acc2 = np.zeros((h + 2 * radius, w), dtype=bool)
    acc2[radius:radius + h, :] = out
    out = acc2[0:h, :].copy()
    for k in range(1, 2 * radius + 1):
        combine(out, acc2[k:k + h, :], out=out)
    return out


def erode(mask: BinaryMask, radius: int) -> BinaryMask:
    _check_radius(radius)
    return BinaryMask(_slide(mask.bits, radius, np.logical_and))


def dilate(mask: BinaryMask, radius: int) -> BinaryMask:
    _check_radius(radius)
    return BinaryMask(_slide(mask.bits, radius, np.logical_or))


def morphology(mask: BinaryMask, op: str, radius: int) -> BinaryMask:
    """Apply erode/dilate/open/close with a (2r+1) x (2r+1) square element.

    Open is erode-then-dilate, close is dilate-then-erode. Pixels outside the
    image are background, so erosion shrinks masks that touch the border.
    """
    _check_radius(radius)
    if op == "erode":
        return erode(mask, radius)
    if op == "dilate":
        return dilate(mask, radius)
    if op == "open":
        return dilate(erode(mask, radius), radius)
    if op == "close":
        return erode(dilate(mask, radius), radius)
    raise ValueError(f"unknown morphology op: {op!r}")


def _check_radius(radius: int) -> None:
    if radius < 1:
        raise ValueError(f"radius must be >= 1, got {radius}")


def connected_components(mask: BinaryMask, connectivity: int = 4) -> list[tuple[int, int, PixelBox]]:
    """Label foreground components; returns (id, pixel count, tight box) per component.

    Ids are 1-based in raster-scan discovery order.
    """
    if connectivity not in (4, 8):
        raise ValueError(f"connectivity must be 4 or 8, got {connectivity}")
    structure = _STRUCT_4 if connectivity == 4 else _STRUCT_8
    labels, n = ndimage.label(mask.bits, structure=structure)
    if n == 0:
        return []
    counts = np.bincount(labels.ravel())
    out = []
    for comp_id, sl in enumerate(ndimage.find_objects(labels), start=1):
        ys, xs = sl
        box = PixelBox(xs.start, ys.start, xs.stop - xs.start, ys.stop - ys.start)
        out.append((comp_id, int(counts[comp_id]), box))
    return out


def keep_largest_component(mask: BinaryMask, connectivity: int = 4) -> BinaryMask:
    """Zero all but the largest component; ties break on lowest component id."""
    comps = connected_components(mask, connectivity)
    if not comps:
        return BinaryMask(np.zeros_like(mask.bits))
    best_id = max(comps, key=lambda c: (c[1], -c[0]))[0]
    structure = _STRUCT_4 if connectivity == 4 else _STRUCT_8
    labels, _ = ndimage.label(mask.bits, structure=structure)
    return BinaryMask(labels == best_id)


def tight_box(mask: BinaryMask) -> PixelBox | None:
    """Bounding box of the foreground, or None for an empty mask."""
    rows = np.flatnonzero(mask.bits.any(axis=1))
    if rows.size == 0:
        return None
    cols = np.flatnonzero(mask.bits.any(axis=0))
    return PixelBox(
        int(cols[0]), int(rows[0]),
        int(cols[-1] - cols[0] + 1), int(rows[-1] - rows[0] + 1),
    )
