"""Raster containers, color conversion, and 8-bit PNG I/O."""

from __future__ import annotations

import io
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import MalformedPngError, MissingFileError, UnsupportedDepthError


class Colorspace(Enum):
    GRAY = "gray"
    RGB = "rgb"
    RGBA = "rgba"
    HSV = "hsv"


_CHANNELS = {
    Colorspace.GRAY: 1,
    Colorspace.RGB: 3,
    Colorspace.RGBA: 4,
    Colorspace.HSV: 3,
}


@dataclass
class ImageBuffer:
    """H x W x C array of 8-bit samples tagged with a colorspace.

    ``data`` is kept C-contiguous uint8 with shape (height, width, channels);
    a 2-D array is accepted and treated as single-channel.
    """

    data: np.ndarray
    colorspace: Colorspace = Colorspace.RGB

    def __post_init__(self):
        a = np.ascontiguousarray(self.data, dtype=np.uint8)
        if a.ndim == 2:
            a = a[:, :, None]
        if a.ndim != 3:
            raise ValueError(f"expected HxWxC pixel data, got shape {np.shape(self.data)}")
        want = _CHANNELS[self.colorspace]
        if a.shape[2] != want:
            raise ValueError(
                f"{self.colorspace.name} requires {want} channel(s), got {a.shape[2]}"
            )
        self.data = a

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def channels(self) -> int:
        return self.data.shape[2]

    def copy(self) -> "ImageBuffer":
        return ImageBuffer(self.data.copy(), self.colorspace)


@dataclass(frozen=True)
class PixelBox:
    """Axis-aligned pixel rectangle: left, top, width, height."""

    x: int
    y: int
    w: int
    h: int

    def __post_init__(self):
        if self.w < 1 or self.h < 1:
            raise ValueError(f"box must be at least 1x1, got {self.w}x{self.h}")

    @property
    def x2(self) -> int:
        return self.x + self.w

    @property
    def y2(self) -> int:
        return self.y + self.h

    @property
    def area(self) -> int:
        return self.w * self.h

    def iou(self, other: "PixelBox") -> float:
        ix = max(0, min(self.x2, other.x2) - max(self.x, other.x))
        iy = max(0, min(self.y2, other.y2) - max(self.y, other.y))
        inter = ix * iy
        union = self.area + other.area - inter
        return inter / union if union else 0.0


def rgb_to_hsv(px) -> tuple[float, float, float]:
    """RGB triple (0-255) to hexcone HSV with hue scaled so 360 deg = 256 levels.

    Returns floats: H in [0, 255) mapping 0-360 degrees, S and V in [0, 255].
    H is 0 when S is 0.
    """
    r, g, b = (float(v) for v in px)
    v = max(r, g, b)
    c = v - min(r, g, b)
    if c == 0.0:
        h_deg = 0.0
    elif v == r:
        h_deg = (60.0 * (g - b) / c) % 360.0
    elif v == g:
        h_deg = 60.0 * (b - r) / c + 120.0
    else:
        h_deg = 60.0 * (r - g) / c + 240.0
    s = 0.0 if v == 0.0 else 255.0 * c / v
    return (h_deg * 255.0 / 360.0, s, v)


def hsv_to_rgb(px) -> tuple[float, float, float]:
    """Inverse of :func:`rgb_to_hsv` on float triples."""
    h, s, v = (float(x) for x in px)
    if s <= 0.0:
        return (v, v, v)
    h_deg = (h * 360.0 / 255.0) % 360.0
    c = v * s / 255.0
    sector = h_deg / 60.0
    x = c * (1.0 - abs(sector % 2.0 - 1.0))
    m = v - c
    k = int(sector) % 6
    r, g, b = (
        (c, x, 0.0), (x, c, 0.0), (0.0, c, x),
        (0.0, x, c), (x, 0.0, c), (c, 0.0, x),
    )[k]
    return (r + m, g + m, b + m)


def rgb_to_hsv_array(rgb: np.ndarray) -> np.ndarray:
    """Vectorized :func:`rgb_to_hsv` for an (H, W, 3) uint8 array; returns float64."""
    a = rgb.astype(np.float64)
    r, g, b = a[..., 0], a[..., 1], a[..., 2]
    v = a.max(axis=-1)
    c = v - a.min(axis=-1)
    safe_c = np.where(c == 0.0, 1.0, c)
    h_deg = np.where(
        v == r,
        (60.0 * (g - b) / safe_c) % 360.0,
        np.where(v == g, 60.0 * (b - r) / safe_c + 120.0, 60.0 * (r - g) / safe_c + 240.0),
    )
    h_deg = np.where(c == 0.0, 0.0, h_deg)
    s = np.where(v == 0.0, 0.0, 255.0 * c / np.where(v == 0.0, 1.0, v))
    return np.stack([h_deg * (255.0 / 360.0), s, v], axis=-1)


def convert(image: ImageBuffer, target: Colorspace) -> ImageBuffer:
    """Colorspace conversion on 8-bit buffers (rounded to nearest level).

    Supported: identity, RGB<->HSV, GRAY->RGB (replicate), RGBA->RGB (drop
    alpha), RGB->GRAY (BT.601 luma).
    """
    src = image.colorspace
    if src == target:
        return image.copy()
    if src == Colorspace.RGB and target == Colorspace.HSV:
        return ImageBuffer(_round_u8(rgb_to_hsv_array(image.data)), Colorspace.HSV)
    if src == Colorspace.HSV and target == Colorspace.RGB:
        flat = image.data.reshape(-1, 3)
        out = np.array([hsv_to_rgb(p) for p in flat], dtype=np.float64)
        return ImageBuffer(_round_u8(out.reshape(image.data.shape)), Colorspace.RGB)
    if src == Colorspace.GRAY and target == Colorspace.RGB:
        return ImageBuffer(np.repeat(image.data, 3, axis=2), Colorspace.RGB)
    if src == Colorspace.RGBA and target == Colorspace.RGB:
        return ImageBuffer(image.data[:, :, :3].copy(), Colorspace.RGB)
    if src == Colorspace.RGB and target == Colorspace.GRAY:
        luma = image.data @ np.array([0.299, 0.587, 0.114])
        return ImageBuffer(_round_u8(luma[..., None]), Colorspace.GRAY)
    raise ValueError(f"no conversion from {src.name} to {target.name}")


def _round_u8(a: np.ndarray) -> np.ndarray:
    return np.clip(np.floor(a + 0.5), 0, 255).astype(np.uint8)


_PNG_SIG = b"\x89PNG\r\n\x1a\n"

_MODE_TO_CS = {"L": Colorspace.GRAY, "RGB": Colorspace.RGB, "RGBA": Colorspace.RGBA}
_CS_TO_MODE = {Colorspace.GRAY: "L", Colorspace.RGB: "RGB", Colorspace.RGBA: "RGBA"}


def read_png(path) -> ImageBuffer:
    """Decode an 8-bit gray/RGB/RGBA PNG.

    Raises MissingFileError, MalformedPngError, or UnsupportedDepthError for
    bit depths above 8.
    """
    p = Path(path)
    try:
        raw = p.read_bytes()
    except (FileNotFoundError, IsADirectoryError, PermissionError) as e:
        raise MissingFileError(f"cannot read {p}") from e
    if len(raw) < 29 or not raw.startswith(_PNG_SIG):
        raise MalformedPngError(f"not a PNG file: {p}")
    bit_depth = raw[24]  # IHDR depth byte follows the fixed-offset header
    if bit_depth > 8:
        raise UnsupportedDepthError(f"{p}: bit depth {bit_depth} unsupported (8-bit only)")
    try:
        im = Image.open(io.BytesIO(raw))
        im.load()
    except Exception as e:
        raise MalformedPngError(f"{p}: {e}") from e
    if im.mode == "1":
        im = im.convert("L")
    elif im.mode == "P":
        im = im.convert("RGBA" if "transparency" in im.info else "RGB")
    elif im.mode == "LA":
        im = im.convert("RGBA")
    cs = _MODE_TO_CS.get(im.mode)
    if cs is None:
        raise MalformedPngError(f"{p}: unsupported PNG layout (mode {im.mode})")
    return ImageBuffer(np.asarray(im), cs)


def write_png(image: ImageBuffer, path) -> None:
    """Encode an ImageBuffer losslessly; HSV buffers are not writable."""
    mode = _CS_TO_MODE.get(image.colorspace)
    if mode is None:
        raise ValueError(f"cannot write {image.colorspace.name} data as PNG")
    data = image.data[:, :, 0] if image.channels == 1 else image.data
    Image.fromarray(data, mode=mode).save(str(path), format="PNG")
