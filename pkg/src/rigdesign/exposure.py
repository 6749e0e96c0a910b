"""Saturation/glare audit for captured image sequences.

Each image gets a saturation rate (percentage of saturated pixels) and a glare
category:

    C1  rate < 25          typical image
    C2  25 <= rate < 50    partial glare
    C3  rate >= 50         heavy glare

A sequence also gets the share of glare images whose neighbours (one frame
either side) are glare images too, i.e. targets that may be lost in every view.
"""

from __future__ import annotations

import enum
import logging
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from PIL import Image

from .errors import DomainError, ImageFormatError, InputError

log = logging.getLogger(__name__)

IMAGE_SUFFIXES = {".png", ".bmp", ".tif", ".tiff", ".jpg", ".jpeg", ".ppm", ".pgm"}
LOSSY_SUFFIXES = {".jpg", ".jpeg"}


class SaturationMode(str, enum.Enum):
    ALL_CHANNELS = "all_channels"
    BLUE_BIASED = "blue_biased"


class Category(str, enum.Enum):
    C1 = "C1"
    C2 = "C2"
    C3 = "C3"

    @property
    def glare(self) -> bool:
        return self is not Category.C1


@dataclass(frozen=True)
class SaturationPolicy:
    channel_threshold: int = 250
    mode: SaturationMode = SaturationMode.ALL_CHANNELS

    def __post_init__(self):
        if isinstance(self.channel_threshold, bool) or not isinstance(self.channel_threshold, int) \
                or not 1 <= self.channel_threshold <= 255:
            raise DomainError(f"channel_threshold must be an integer in [1, 255], "
                              f"got {self.channel_threshold!r}")
        object.__setattr__(self, "mode", SaturationMode(self.mode))


def saturation_rate(image: np.ndarray, policy: SaturationPolicy = SaturationPolicy()) -> float:
    """Percentage of pixels counted as saturated under ``policy``.

    ``image`` is an ``(H, W, 3)`` (or RGBA) ``uint8`` array in RGB order.
    """
    image = np.asarray(image)
    if image.dtype != np.uint8:
        raise ImageFormatError(f"expected 8-bit image, got dtype {image.dtype}")
    if image.ndim != 3 or image.shape[2] not in (3, 4):
        raise ImageFormatError(f"expected an RGB raster of shape (H, W, 3), got {image.shape}")
    h, w = image.shape[:2]
    if h == 0 or w == 0:
        raise DomainError("image has zero size")
    t = policy.channel_threshold
    if policy.mode is SaturationMode.BLUE_BIASED:
        hit = image[:, :, 2] >= t
    else:
        hit = np.all(image[:, :, :3] >= t, axis=2)
    return 100.0 * int(np.count_nonzero(hit)) / (h * w)


def classify(sr: float) -> Category:
    if not 0 <= sr <= 100:
        raise DomainError(f"saturation rate must be within [0, 100], got {sr!r}")
    if sr < 25:
        return Category.C1
    if sr < 50:
        return Category.C2
    return Category.C3


@dataclass(frozen=True)
class ImageAudit:
    image_id: str
    saturation_rate: float
    category: Category


def sustained_glare_flags(categories: Sequence[Category]) -> list[bool]:
    """True where a glare frame is flanked by glare frames (window truncated at the ends)."""
    glare = [c.glare for c in categories]
    n = len(glare)
    return [glare[i] and all(glare[max(0, i - 1):min(n, i + 2)]) for i in range(n)]


@dataclass(frozen=True)
class DatasetReport:
    audits: tuple[ImageAudit, ...]
    counts: dict[str, int]
    percentages: dict[str, float]
    consecutive_glare_count: int
    consecutive_glare_fraction: float
    policy: SaturationPolicy

    @property
    def total(self) -> int:
        return len(self.audits)

    @property
    def glare_fraction(self) -> float:
        return self.percentages["C2"] + self.percentages["C3"]

    @classmethod
    def from_audits(cls, audits: Sequence[ImageAudit],
                    policy: SaturationPolicy = SaturationPolicy()) -> "DatasetReport":
        if not audits:
            raise DomainError("cannot audit an empty dataset")
        n = len(audits)
        counts = {c.value: 0 for c in Category}
        for a in audits:
            counts[a.category.value] += 1
        sustained = sum(sustained_glare_flags([a.category for a in audits]))
        return cls(audits=tuple(audits), counts=counts,
                   percentages={k: 100.0 * v / n for k, v in counts.items()},
                   consecutive_glare_count=sustained,
                   consecutive_glare_fraction=100.0 * sustained / n, policy=policy)

    def to_dict(self) -> dict:
        return {
            "total_images": self.total,
            "policy": {"channel_threshold": self.policy.channel_threshold,
                       "mode": self.policy.mode.value},
            "counts": dict(self.counts),
            "percentages": dict(self.percentages),
            "consecutive_glare_count": self.consecutive_glare_count,
            "consecutive_glare_fraction": self.consecutive_glare_fraction,
            "images": [{"image_id": a.image_id, "saturation_rate": a.saturation_rate,
                        "category": a.category.value} for a in self.audits],
        }


def audit_dataset(images: Sequence[tuple[str, np.ndarray]],
                  policy: SaturationPolicy = SaturationPolicy()) -> DatasetReport:
    """Audit in-memory images given in capture order as ``(image_id, array)`` pairs."""
    audits = []
    for image_id, arr in images:
        sr = saturation_rate(arr, policy)
        audits.append(ImageAudit(image_id, sr, classify(sr)))
    return DatasetReport.from_audits(audits, policy)


def load_rgb(path: str | Path) -> np.ndarray:
    path = Path(path)
    try:
        with Image.open(path) as im:
            if im.mode not in ("RGB", "RGBA", "L", "P", "LA"):
                raise ImageFormatError(f"{path}: unsupported image mode {im.mode!r} (need 8-bit)")
            arr = np.asarray(im.convert("RGB"))
    except (OSError, SyntaxError) as exc:
        raise ImageFormatError(f"{path}: cannot read image ({exc})") from exc
    if path.suffix.lower() in LOSSY_SUFFIXES:
        warnings.warn(f"{path.name}: lossy format, saturation rates may be biased", stacklevel=2)
    return arr


def capture_order(directory: str | Path | None = None,
                  manifest: str | Path | None = None) -> list[Path]:
    """Image paths in capture order.

    A manifest lists one path per line (relative paths resolve against the
    manifest's folder, ``#`` starts a comment). Without one, files in
    ``directory`` are taken in lexicographic filename order.
    """
    if manifest is not None:
        manifest = Path(manifest)
        if not manifest.is_file():
            raise InputError("manifest not found", path=str(manifest))
        paths = []
        for lineno, raw in enumerate(manifest.read_text().splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            p = Path(line)
            p = p if p.is_absolute() else manifest.parent / p
            if not p.is_file():
                raise InputError(f"listed image not found: {line}", path=str(manifest), line=lineno)
            paths.append(p)
        if not paths:
            raise InputError("manifest lists no images", path=str(manifest))
        return paths
    if directory is None:
        raise InputError("need an image directory or a manifest")
    directory = Path(directory)
    if not directory.is_dir():
        raise InputError("image directory not found", path=str(directory))
    paths = sorted((p for p in directory.iterdir()
                    if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES), key=lambda p: p.name)
    if not paths:
        raise InputError("no image files found", path=str(directory))
    return paths


def audit_paths(paths: Iterable[str | Path], policy: SaturationPolicy = SaturationPolicy(),
                workers: int = 1) -> DatasetReport:
    """Audit image files in the given order; ``workers`` > 1 reads and scores in threads.

    Results do not depend on the worker count: the executor preserves input order.
    """
    paths = [Path(p) for p in paths]

    def one(p: Path) -> ImageAudit:
        sr = saturation_rate(load_rgb(p), policy)
        return ImageAudit(p.name, sr, classify(sr))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            audits = list(pool.map(one, paths))
    else:
        audits = [one(p) for p in paths]
    log.debug("audited %d images", len(audits))
    return DatasetReport.from_audits(audits, policy)
