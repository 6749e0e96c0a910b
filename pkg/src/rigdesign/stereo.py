"""Stereo-pair baseline design.

The baseline is squeezed between three limits:

* a lower bound so that matching error maps to a small enough depth error at
  the farthest object,
* an upper bound so the two views still overlap enough to jointly cover the
  required width,
* an upper bound so the disparity of the nearest object stays within the
  matcher's search range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DesignValidationError, DomainError, InfeasibleError
from .optics import CameraSpec, LensSpec, _check_positive, fov_at_distance


@dataclass(frozen=True)
class StereoConstraints:
    max_depth_error_mm: float
    max_disparity_px: float
    required_fov_h_mm: float
    z_near_mm: float
    z_work_mm: float
    z_far_mm: float
    matching_error_px: float = 1.0

    def __post_init__(self):
        # the two limits may be math.inf to leave that side unconstrained
        for name in ("max_depth_error_mm", "max_disparity_px"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be > 0, got {getattr(self, name)!r}")
        _check_positive(required_fov_h_mm=self.required_fov_h_mm,
                        z_near_mm=self.z_near_mm, z_work_mm=self.z_work_mm,
                        z_far_mm=self.z_far_mm)
        if not (self.matching_error_px >= 0 and math.isfinite(self.matching_error_px)):
            raise DomainError(f"matching_error_px must be >= 0, got {self.matching_error_px!r}")
        if not self.z_near_mm <= self.z_work_mm <= self.z_far_mm:
            raise DomainError("object distances must satisfy z_near <= z_work <= z_far")


@dataclass(frozen=True)
class StereoLayout:
    focal_px: float
    baseline_lower_mm: float
    baseline_upper_overlap_mm: float
    baseline_upper_disparity_mm: float
    baseline_chosen_mm: float
    overlap_fraction: float
    fov_h_at_work_mm: float
    depth_eval_mm: float
    disparity_eval_mm: float
    predicted_depth_error_work_mm: float
    predicted_depth_error_far_mm: float
    as_built: bool = False

    @property
    def baseline_upper_mm(self) -> float:
        return min(self.baseline_upper_overlap_mm, self.baseline_upper_disparity_mm)

    @property
    def interval(self) -> tuple[float, float]:
        return self.baseline_lower_mm, self.baseline_upper_mm

    @property
    def binding_upper(self) -> str:
        if self.baseline_upper_overlap_mm <= self.baseline_upper_disparity_mm:
            return "overlap"
        return "disparity"


def focal_length_pixels(lens: LensSpec, camera: CameraSpec) -> float:
    return lens.focal_length_mm / camera.pixel_pitch_mm


def depth_error(z_mm: float, baseline_mm: float, focal_px: float,
                matching_error_px: float) -> float:
    """Depth uncertainty caused by a disparity error of ``matching_error_px``."""
    _check_positive(z_mm=z_mm, baseline_mm=baseline_mm, focal_px=focal_px)
    if matching_error_px < 0:
        raise DomainError("matching_error_px must be >= 0")
    return z_mm * z_mm * matching_error_px / (baseline_mm * focal_px)


def baseline_min_for_depth_error(c: StereoConstraints, focal_px: float,
                                 z_eval_mm: float | None = None) -> float:
    """Shortest baseline keeping the depth error within bounds at ``z_eval_mm``.

    Evaluated at the far end of the object range by default, where the error
    is worst.
    """
    z = c.z_far_mm if z_eval_mm is None else z_eval_mm
    _check_positive(z_eval_mm=z, focal_px=focal_px)
    if math.isinf(c.max_depth_error_mm):
        return 0.0
    return z * z * c.matching_error_px / (focal_px * c.max_depth_error_mm)


def baseline_max_overlap(fov_h_at_z_mm: float, overlap_fraction: float) -> float:
    """Longest baseline at which two views of width ``fov_h_at_z_mm`` still share
    ``overlap_fraction`` of it."""
    _check_positive(fov_h_at_z_mm=fov_h_at_z_mm)
    if overlap_fraction >= 1:
        raise InfeasibleError(
            f"required overlap fraction {overlap_fraction:.4f} >= 1: the required "
            "coverage exceeds a single camera's field of view")
    if overlap_fraction <= 0:
        raise DomainError("overlap_fraction must be in (0, 1)")
    return fov_h_at_z_mm * (1.0 - overlap_fraction)


def baseline_max_disparity(z_eval_mm: float, max_disparity_px: float, focal_px: float) -> float:
    _check_positive(z_eval_mm=z_eval_mm, focal_px=focal_px)
    if max_disparity_px < 0:
        raise DomainError("max_disparity_px must be >= 0")
    return z_eval_mm * max_disparity_px / focal_px


def _round_half_up(x: float) -> float:
    return float(math.floor(x + 0.5))


def solve_baseline(c: StereoConstraints, lens: LensSpec, camera: CameraSpec, *,
                   as_built_mm: float | None = None, depth_eval_mm: float | None = None,
                   disparity_eval_mm: float | None = None) -> StereoLayout:
    """Intersect the three baseline bounds and pick the midpoint (nearest mm).

    ``as_built_mm`` replaces the midpoint with a measured value, which must lie
    inside the feasible interval.
    """
    f_px = focal_length_pixels(lens, camera)
    z_depth = c.z_far_mm if depth_eval_mm is None else depth_eval_mm
    z_disp = c.z_near_mm if disparity_eval_mm is None else disparity_eval_mm

    fov_work = fov_at_distance(c.z_work_mm, lens, camera.sensor_width_mm)
    w = c.required_fov_h_mm / fov_work
    upper_overlap = baseline_max_overlap(fov_work, w)
    upper_disp = (math.inf if math.isinf(c.max_disparity_px)
                  else baseline_max_disparity(z_disp, c.max_disparity_px, f_px))
    lower = baseline_min_for_depth_error(c, f_px, z_depth)
    upper = min(upper_overlap, upper_disp)

    if lower > upper:
        binding = "overlap" if upper_overlap <= upper_disp else "disparity"
        raise InfeasibleError(
            f"empty baseline interval: depth-error lower bound {lower:.1f} mm exceeds "
            f"{binding} upper bound {upper:.1f} mm")

    if as_built_mm is not None:
        _check_positive(as_built_mm=as_built_mm)
        if not lower <= as_built_mm <= upper:
            raise DesignValidationError(
                f"as-built baseline {as_built_mm:g} mm lies outside [{lower:.1f}, {upper:.1f}] mm")
        chosen = float(as_built_mm)
    else:
        mid = (lower + upper) / 2.0
        chosen = _round_half_up(mid)
        if not lower <= chosen <= upper:
            chosen = mid

    return StereoLayout(
        focal_px=f_px,
        baseline_lower_mm=lower,
        baseline_upper_overlap_mm=upper_overlap,
        baseline_upper_disparity_mm=upper_disp,
        baseline_chosen_mm=chosen,
        overlap_fraction=w,
        fov_h_at_work_mm=fov_work,
        depth_eval_mm=z_depth,
        disparity_eval_mm=z_disp,
        predicted_depth_error_work_mm=depth_error(c.z_work_mm, chosen, f_px, c.matching_error_px),
        predicted_depth_error_far_mm=depth_error(c.z_far_mm, chosen, f_px, c.matching_error_px),
        as_built=as_built_mm is not None,
    )
