"""Pinhole-model optics: field of view, working distance, depth of field.

All lengths are millimetres, angles are degrees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

# Zeiss rule: acceptable blur spot = sensor diagonal / 1730.
ZEISS_DIVISOR = 1730.0

# Relative slack used when rounding a real to a pixel count, so that values
# such as 61.99999999997 (float noise on an exact 62) are not floored to 61.
_SNAP_REL = 1e-9


def _check_positive(**values: float) -> None:
    for name, value in values.items():
        if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
            raise DomainError(f"{name} must be a positive finite number, got {value!r}")


def _snap(x: float) -> float:
    nearest = round(x)
    if abs(x - nearest) <= _SNAP_REL * max(1.0, abs(x)):
        return float(nearest)
    return x


@dataclass(frozen=True)
class CameraSpec:
    name: str
    sensor_width_mm: float
    sensor_height_mm: float
    res_width_px: int
    res_height_px: int
    dynamic_range_db: float | None = None
    interface: str | None = None

    def __post_init__(self):
        _check_positive(sensor_width_mm=self.sensor_width_mm,
                        sensor_height_mm=self.sensor_height_mm)
        for field in ("res_width_px", "res_height_px"):
            value = getattr(self, field)
            if isinstance(value, bool) or not isinstance(value, int) or value <= 0:
                raise DomainError(f"{field} must be a positive integer, got {value!r}")

    @property
    def sensor_diagonal_mm(self) -> float:
        return math.hypot(self.sensor_width_mm, self.sensor_height_mm)

    @property
    def pixel_pitch_mm(self) -> float:
        return self.sensor_width_mm / self.res_width_px

    @property
    def aspect(self) -> float:
        """Image height over width in pixels."""
        return self.res_height_px / self.res_width_px


@dataclass(frozen=True)
class LensSpec:
    name: str
    focal_length_mm: float
    min_f_stop: float
    distortion_pct: float | None = None
    format: str | None = None

    def __post_init__(self):
        _check_positive(focal_length_mm=self.focal_length_mm, min_f_stop=self.min_f_stop)


@dataclass(frozen=True)
class TargetSpec:
    """Physical size of the object to detect and the pixels a detector needs on it."""

    target_size_mm: float
    min_pixels_px: float

    def __post_init__(self):
        _check_positive(target_size_mm=self.target_size_mm, min_pixels_px=self.min_pixels_px)


@dataclass(frozen=True)
class FocusEnvelope:
    hyperfocal_mm: float
    near_mm: float
    working_mm: float
    far_mm: float  # math.inf when focused at or beyond the hyperfocal distance
    dof_mm: float
    coc_mm: float | None = None
    f_stop: float | None = None

    @property
    def far_unbounded(self) -> bool:
        return math.isinf(self.far_mm)

    def contains(self, z_min: float, z_max: float) -> bool:
        return self.near_mm <= z_min and self.far_mm >= z_max


def fov_from_resolution(res_px: float, target: TargetSpec) -> float:
    """Scene extent covered by ``res_px`` pixels when the target must span
    ``target.min_pixels_px`` pixels."""
    _check_positive(res_px=res_px)
    return res_px * target.target_size_mm / target.min_pixels_px


def required_resolution(fov_mm: float, target: TargetSpec) -> int:
    """Smallest pixel count that still puts enough pixels on the target across ``fov_mm``."""
    _check_positive(fov_mm=fov_mm)
    return math.ceil(_snap(fov_mm * target.min_pixels_px / target.target_size_mm))


def working_distance(fov_h_mm: float, lens: LensSpec, camera: CameraSpec) -> float:
    _check_positive(fov_h_mm=fov_h_mm)
    return fov_h_mm * lens.focal_length_mm / camera.sensor_width_mm


def fov_at_distance(z_mm: float, lens: LensSpec, sensor_dim_mm: float) -> float:
    """Linear extent imaged at distance ``z_mm`` by a sensor side of ``sensor_dim_mm``."""
    _check_positive(z_mm=z_mm, sensor_dim_mm=sensor_dim_mm)
    return z_mm * sensor_dim_mm / lens.focal_length_mm


def pixels_on_target(camera: CameraSpec, target: TargetSpec, fov_mm: float) -> int:
    """Whole pixels across the target when the image width spans ``fov_mm``.

    Rounded down so the count is never overstated.
    """
    _check_positive(fov_mm=fov_mm)
    return math.floor(_snap(camera.res_width_px * target.target_size_mm / fov_mm))


def circle_of_confusion(camera: CameraSpec) -> float:
    return camera.sensor_diagonal_mm / ZEISS_DIVISOR


def hyperfocal(lens: LensSpec, f_stop: float, coc_mm: float) -> float:
    _check_positive(f_stop=f_stop, coc_mm=coc_mm)
    return lens.focal_length_mm ** 2 / (f_stop * coc_mm)


def dof_limits(h_mm: float, d_mm: float, lens: LensSpec, coc_mm: float | None = None,
               f_stop: float | None = None) -> FocusEnvelope:
    """Near/far limits of acceptable sharpness when focused at ``d_mm``.

    If ``d_mm >= h_mm + f`` the far limit is reported as ``math.inf`` rather
    than raising; the optics are valid, everything out to infinity is sharp.
    """
    _check_positive(h_mm=h_mm, d_mm=d_mm)
    f = lens.focal_length_mm
    near_den = h_mm + d_mm - f
    if near_den <= 0:
        raise DomainError(f"near-limit denominator H + d - f = {near_den:g} is not positive")
    near = h_mm * d_mm / near_den
    far_den = h_mm - d_mm + f
    far = h_mm * d_mm / far_den if far_den > 0 else math.inf
    return FocusEnvelope(hyperfocal_mm=h_mm, near_mm=near, working_mm=d_mm, far_mm=far,
                         dof_mm=far - near, coc_mm=coc_mm, f_stop=f_stop)


def focus_envelope(camera: CameraSpec, lens: LensSpec, d_mm: float, f_stop: float) -> FocusEnvelope:
    """Depth of field for ``camera`` + ``lens`` at ``f_stop`` with the Zeiss CoC."""
    coc = circle_of_confusion(camera)
    return dof_limits(hyperfocal(lens, f_stop, coc), d_mm, lens, coc_mm=coc, f_stop=f_stop)


def angular_fov(sensor_dim_mm: float, lens: LensSpec) -> float:
    """Full angle of view in degrees across one sensor side."""
    _check_positive(sensor_dim_mm=sensor_dim_mm)
    return math.degrees(2.0 * math.atan(sensor_dim_mm / (2.0 * lens.focal_length_mm)))


@dataclass(frozen=True)
class PlaneView:
    """What the camera sees on a plane at ``z_mm``."""

    z_mm: float
    fov_h_mm: float
    fov_v_mm: float
    pixels_on_target: int


def view_at(camera: CameraSpec, lens: LensSpec, target: TargetSpec, z_mm: float) -> PlaneView:
    # Vertical coverage follows the image aspect (square pixels) rather than the
    # rounded datasheet sensor height.
    fov_h = fov_at_distance(z_mm, lens, camera.sensor_width_mm)
    return PlaneView(z_mm=z_mm, fov_h_mm=fov_h, fov_v_mm=fov_h * camera.aspect,
                     pixels_on_target=pixels_on_target(camera, target, fov_h))
