"""How many frames see a target while the vehicle drives past it."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError
from .optics import _check_positive, _snap

KMH_TO_MM_S = 1_000_000 / 3600


def kmh_to_mm_s(kmh: float) -> float:
    return kmh * KMH_TO_MM_S


@dataclass(frozen=True)
class MotionProfile:
    velocity_mm_s: float
    frame_rate_hz: float = 10.0
    processing_time_ms: float = 100.0
    required_views: int = 3

    def __post_init__(self):
        _check_positive(velocity_mm_s=self.velocity_mm_s, frame_rate_hz=self.frame_rate_hz,
                        processing_time_ms=self.processing_time_ms)
        if isinstance(self.required_views, bool) or not isinstance(self.required_views, int) \
                or self.required_views < 1:
            raise DomainError(f"required_views must be an integer >= 1, got {self.required_views!r}")

    @classmethod
    def from_kmh(cls, kmh: float, **kwargs) -> "MotionProfile":
        return cls(velocity_mm_s=kmh_to_mm_s(kmh), **kwargs)

    @property
    def advance_per_frame_mm(self) -> float:
        return self.velocity_mm_s / self.frame_rate_hz


def frames_per_target(profile: MotionProfile, fov_v_mm: float) -> int:
    """Guaranteed number of frames in which a point inside the view is captured."""
    _check_positive(fov_v_mm=fov_v_mm)
    return math.floor(_snap(fov_v_mm / profile.advance_per_frame_mm))


def max_processing_time(profile: MotionProfile, fov_v_mm: float) -> float:
    """Per-image processing budget in ms so the target is still seen ``required_views`` times."""
    _check_positive(fov_v_mm=fov_v_mm)
    return fov_v_mm / profile.required_views / profile.velocity_mm_s * 1000.0


def required_fov_v(profile: MotionProfile) -> float:
    """Along-track coverage needed to process ``required_views`` frames of one target."""
    return profile.velocity_mm_s * profile.processing_time_ms / 1000.0 * profile.required_views


@dataclass(frozen=True)
class CoverageRow:
    velocity_kmh: float
    velocity_mm_s: float
    advance_per_frame_mm: float
    frames: int
    processing_budget_ms: float


def coverage_sweep(fov_v_mm: float, velocities_kmh: Sequence[float], frame_rate_hz: float = 10.0,
                   required_views: int = 3) -> list[CoverageRow]:
    rows = []
    for kmh in velocities_kmh:
        p = MotionProfile.from_kmh(kmh, frame_rate_hz=frame_rate_hz, required_views=required_views)
        rows.append(CoverageRow(velocity_kmh=kmh, velocity_mm_s=p.velocity_mm_s,
                                advance_per_frame_mm=p.advance_per_frame_mm,
                                frames=frames_per_target(p, fov_v_mm),
                                processing_budget_ms=max_processing_time(p, fov_v_mm)))
    return rows
