"""Green-screen removal: keying, matting, and capture-set ingestion."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .ace import AceParams, apply_ace
from .errors import ConfigError, ImageReadError, IngestError, NoObjectError
from .image import Colorspace, ImageBuffer, PixelBox, convert, read_png, rgb_to_hsv_array
from .mask import BinaryMask, keep_largest_component, morphology, tight_box

CAMERAS = ("high", "low")


@dataclass(frozen=True)
class KeyParams:
    """Key-color window in HSV (all 0-255) plus mask cleanup settings.

    Defaults bracket green-screen chroma under varied lighting after color
    equalization: hue 64-106 (~90-150 deg), sat >= 77, val >= 38. A radius of
    0 skips that morphology stage.
    """

    hue_min: int = 64
    hue_max: int = 106
    sat_min: int = 77
    val_min: int = 38
    open_radius: int = 1
    close_radius: int = 2
    despill: bool = True

    def __post_init__(self):
        if not self.hue_min < self.hue_max:
            raise ValueError(
                f"hue window must satisfy hue_min < hue_max, got [{self.hue_min}, {self.hue_max}]"
            )
        for name in ("hue_min", "hue_max", "sat_min", "val_min"):
            v = getattr(self, name)
            if not 0 <= v <= 255:
                raise ValueError(f"{name} must be in [0, 255], got {v}")
        if self.open_radius < 0 or self.close_radius < 0:
            raise ValueError("morphology radii must be >= 0")


@dataclass
class ObjectCrop:
    """Matted cutout: RGBA crop, its binary mask, class tag, and provenance."""

    class_id: int
    class_name: str
    rgba: ImageBuffer
    mask: BinaryMask
    source_view: int = 0
    source_camera: str = "high"

    def __post_init__(self):
        if self.class_id < 0:
            raise ValueError(f"class_id must be >= 0, got {self.class_id}")
        if self.rgba.colorspace != Colorspace.RGBA:
            raise ValueError("crop image must be RGBA")
        if (self.rgba.height, self.rgba.width) != (self.mask.height, self.mask.width):
            raise ValueError("crop image and mask dimensions differ")
        alpha = self.rgba.data[:, :, 3]
        want = np.where(self.mask.bits, 255, 0).astype(np.uint8)
        if not np.array_equal(alpha, want):
            raise ValueError("alpha channel must be 255 exactly on mask foreground, 0 elsewhere")
        bits = self.mask.bits
        if not (bits[0].any() and bits[-1].any() and bits[:, 0].any() and bits[:, -1].any()):
            raise ValueError("mask is not tight: empty border row or column")

    @property
    def height(self) -> int:
        return self.rgba.height

    @property
    def width(self) -> int:
        return self.rgba.width


def segment(image: ImageBuffer, params: KeyParams = KeyParams()) -> BinaryMask:
    """Foreground mask: everything outside the key-color window.

    Keyed pixels (hue in window, sat and val above their floors) become
    background; the foreground is cleaned by open/close and reduced to its
    largest 4-connected component.
    """
    if image.colorspace != Colorspace.RGB:
        raise ValueError(f"expected RGB input, got {image.colorspace.name}")
    hsv = rgb_to_hsv_array(image.data)
    keyed = (
        (hsv[..., 0] >= params.hue_min)
        & (hsv[..., 0] <= params.hue_max)
        & (hsv[..., 1] >= params.sat_min)
        & (hsv[..., 2] >= params.val_min)
    )
    fg = BinaryMask(~keyed)
    if params.open_radius > 0:
        fg = morphology(fg, "open", params.open_radius)
    if params.close_radius > 0:
        fg = morphology(fg, "close", params.close_radius)
    return keep_largest_component(fg, connectivity=4)


def matte(image: ImageBuffer, mask: BinaryMask, class_id: int, class_name: str,
          source_view: int = 0, source_camera: str = "high",
          despill: bool = True) -> ObjectCrop:
    """Cut the masked object out of the frame as a tight RGBA crop.

    Raises NoObjectError on an empty mask (a failed capture frame). Despill
    clamps foreground green to max(R, B); it never alters the mask or box.
    """
    if image.colorspace != Colorspace.RGB:
        raise ValueError(f"expected RGB input, got {image.colorspace.name}")
    if (image.height, image.width) != (mask.height, mask.width):
        raise ValueError("image and mask dimensions differ")
    box = tight_box(mask)
    if box is None:
        raise NoObjectError("mask has no foreground pixels")
    rgb = image.data[box.y:box.y2, box.x:box.x2].copy()
    bits = mask.bits[box.y:box.y2, box.x:box.x2].copy()
    if despill:
        g = rgb[:, :, 1]
        cap = np.maximum(rgb[:, :, 0], rgb[:, :, 2])
        g[bits] = np.minimum(g, cap)[bits]
    alpha = np.where(bits, 255, 0).astype(np.uint8)
    rgba = ImageBuffer(np.dstack([rgb, alpha]), Colorspace.RGBA)
    return ObjectCrop(class_id, class_name, rgba, BinaryMask(bits),
                      source_view=source_view, source_camera=source_camera)


def read_class_manifest(path) -> list[tuple[int, str]]:
    """Parse `class_id<TAB>class_name` lines; blank lines are skipped."""
    entries: list[tuple[int, str]] = []
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read class manifest {path}: {e}") from e
    for ln, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0].strip().isdigit() or not parts[1].strip():
            raise ConfigError(f"{path}:{ln}: expected 'class_id<TAB>class_name', got {line!r}")
        entries.append((int(parts[0]), parts[1].strip()))
    if not entries:
        raise ConfigError(f"{path}: class manifest is empty")
    ids = [i for i, _ in entries]
    if len(set(ids)) != len(ids):
        raise ConfigError(f"{path}: duplicate class ids")
    return sorted(entries)


@dataclass
class IngestReport:
    """Per-class, per-camera crop counts plus collected failures and warnings."""

    counts: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"counts": self.counts, "failures": self.failures, "warnings": self.warnings}


def ingest_capture_set(directory, class_manifest,
                       expected_views_per_camera: int = 200,
                       ace_params: AceParams = AceParams(),
                       key_params: KeyParams = KeyParams()) -> tuple[list[ObjectCrop], IngestReport]:
    """Process a `<class_name>/<camera>/<frame>.png` capture tree into crops.

    Every frame runs color equalization, then keying, then matting. Unreadable
    or empty-mask frames land in the report; a class that yields no crop at
    all aborts with IngestError.
    """
    root = Path(directory)
    if not root.is_dir():
        raise ConfigError(f"capture directory not found: {root}")
    classes = read_class_manifest(class_manifest)
    report = IngestReport()
    crops: list[ObjectCrop] = []
    for class_id, class_name in classes:
        class_dir = root / class_name
        per_camera = {}
        for camera in CAMERAS:
            cam_dir = class_dir / camera
            n_ok = 0
            frames = sorted(cam_dir.glob("*.png")) if cam_dir.is_dir() else []
            for frame_idx, frame_path in enumerate(frames):
                view = int(frame_path.stem) if frame_path.stem.isdigit() else frame_idx
                try:
                    img = read_png(frame_path)
                    if img.colorspace != Colorspace.RGB:
                        img = convert(img, Colorspace.RGB)
                    img = apply_ace(img, ace_params)
                    m = segment(img, key_params)
                    crop = matte(img, m, class_id, class_name,
                                 source_view=view, source_camera=camera,
                                 despill=key_params.despill)
                except (ImageReadError, NoObjectError) as e:
                    report.failures.append({
                        "class": class_name, "camera": camera,
                        "frame": frame_path.name, "error": str(e),
                    })
                    continue
                crops.append(crop)
                n_ok += 1
            per_camera[camera] = n_ok
            if n_ok != expected_views_per_camera:
                report.warnings.append(
                    f"{class_name}/{camera}: expected {expected_views_per_camera} views, found {n_ok}"
                )
        report.counts[class_name] = per_camera
        if sum(per_camera.values()) == 0:
            raise IngestError(f"class {class_name!r} produced no usable crops")
    return crops, report
