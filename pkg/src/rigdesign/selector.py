"""Camera x lens candidate evaluation, feasibility filtering, ranking and
mounting geometry."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DesignValidationError, DomainError, InfeasibleError
from .optics import (CameraSpec, FocusEnvelope, LensSpec, TargetSpec, angular_fov,
                     focus_envelope, fov_at_distance, fov_from_resolution,
                     pixels_on_target, required_resolution, working_distance)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class DesignConstraints:
    """Application envelope for the rig.

    ``object_range_mm`` is the span of object distances (measured from the
    principal point) that must be in focus. ``working_range_mm`` bounds the
    camera's working distance and defaults to the object range.
    """

    target: TargetSpec
    required_fov_h_mm: float
    required_fov_v_mm: float
    object_range_mm: tuple[float, float]
    ideal_working_mm: float
    min_dynamic_range_db: float = 0.0
    max_sensor_offset_mm: float = math.inf
    nozzle_clearance_mm: float = 0.0
    f_stop_policy: tuple[float, ...] = (1.8, 2.8)
    working_range_mm: tuple[float, float] | None = None

    def __post_init__(self):
        lo, hi = self.object_range_mm
        if not 0 <= lo <= hi:
            raise DomainError(f"object range [{lo}, {hi}] is empty or negative")
        if not lo <= self.ideal_working_mm <= hi:
            raise DomainError(f"ideal working distance {self.ideal_working_mm} lies outside [{lo}, {hi}]")
        if not self.f_stop_policy or any(not s > 0 for s in self.f_stop_policy):
            raise DomainError("f_stop_policy must list positive f-stops")
        if self.working_range_mm is not None:
            wlo, whi = self.working_range_mm
            if not 0 <= wlo <= whi:
                raise DomainError(f"working range [{wlo}, {whi}] is empty or negative")
        if self.nozzle_clearance_mm < 0 or not self.max_sensor_offset_mm >= 0:
            raise DomainError("nozzle clearance and sensor offset cap must be >= 0")

    @property
    def working_window(self) -> tuple[float, float]:
        return self.working_range_mm if self.working_range_mm is not None else self.object_range_mm


@dataclass(frozen=True)
class Rejection:
    code: str
    detail: str

    def __str__(self):
        return f"{self.code}: {self.detail}"


@dataclass(frozen=True)
class RigEvaluation:
    camera: CameraSpec
    lens: LensSpec
    f_stop_used: float | None
    fov_h_mm: float
    working_mm: float
    envelope: FocusEnvelope | None
    pixels_on_target_at: dict[str, int]
    rejection_reasons: tuple[Rejection, ...] = ()

    @property
    def feasible(self) -> bool:
        return not self.rejection_reasons

    @property
    def key(self) -> tuple[str, str]:
        return self.camera.name, self.lens.name


@dataclass(frozen=True)
class Selection:
    ranked: list[RigEvaluation]
    rejected: list[RigEvaluation] = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return bool(self.ranked)

    @property
    def best(self) -> RigEvaluation:
        if not self.ranked:
            raise InfeasibleError("no feasible rig: " + "; ".join(
                f"{r.camera.name}+{r.lens.name} ({', '.join(x.code for x in r.rejection_reasons)})"
                for r in self.rejected))
        return self.ranked[0]


@dataclass(frozen=True)
class PlacementGeometry:
    min_horizontal_offset_mm: float
    max_horizontal_offset_mm: float
    chosen_offset_mm: float
    vertical_fov_at_nozzle_mm: float
    vertical_angle_deg: float


def _pixels_at(camera, lens, target, z):
    if math.isinf(z) or z <= 0:
        return 0
    return pixels_on_target(camera, target, fov_at_distance(z, lens, camera.sensor_width_mm))


def evaluate_candidate(camera: CameraSpec, lens: LensSpec,
                       constraints: DesignConstraints) -> RigEvaluation:
    """Evaluate one camera + lens pair; infeasibility is reported, never raised.

    The stigma-resolution rule fixes the horizontal FoV from the camera's
    pixel count, the lens then fixes the working distance. The smallest f-stop
    in the policy (no wider than the lens allows) whose depth of field covers
    the object range is used; if none does, the envelope at the last stop
    tried is kept for reporting.
    """
    c = constraints
    reasons: list[Rejection] = []

    if c.min_dynamic_range_db > 0:
        if camera.dynamic_range_db is None:
            reasons.append(Rejection("dynamic_range", "dynamic range unknown"))
        elif camera.dynamic_range_db < c.min_dynamic_range_db:
            reasons.append(Rejection(
                "dynamic_range",
                f"{camera.dynamic_range_db:g} dB < {c.min_dynamic_range_db:g} dB"))

    need_w = required_resolution(c.required_fov_h_mm, c.target)
    need_h = required_resolution(c.required_fov_v_mm, c.target)
    if camera.res_width_px < need_w or camera.res_height_px < need_h:
        reasons.append(Rejection(
            "resolution",
            f"{camera.res_width_px}x{camera.res_height_px} px < required {need_w}x{need_h} px"))

    fov_h = fov_from_resolution(camera.res_width_px, c.target)
    d = working_distance(fov_h, lens, camera)
    wlo, whi = c.working_window
    if not wlo <= d <= whi:
        reasons.append(Rejection("working_distance", f"d = {d:.1f} mm outside [{wlo:g}, {whi:g}] mm"))

    z_min, z_max = c.object_range_mm
    stops = sorted(s for s in set(c.f_stop_policy) if s >= lens.min_f_stop)
    envelope = None
    used = None
    if not stops:
        reasons.append(Rejection(
            "f_stop", f"no policy f-stop at or above the lens minimum f/{lens.min_f_stop:g}"))
    else:
        for stop in stops:
            envelope = focus_envelope(camera, lens, d, stop)
            used = stop
            if envelope.contains(z_min, z_max):
                break
        if envelope.near_mm > z_min:
            reasons.append(Rejection(
                "near_limit", f"N = {envelope.near_mm:.1f} mm > {z_min:g} mm at f/{used:g}"))
        if envelope.far_mm < z_max:
            reasons.append(Rejection(
                "far_limit", f"F = {envelope.far_mm:.1f} mm < {z_max:g} mm at f/{used:g}"))

    if envelope is not None:
        planes = {"near": envelope.near_mm, "work": d, "far": envelope.far_mm}
    else:
        planes = {"near": z_min, "work": d, "far": z_max}
    pixels = {k: _pixels_at(camera, lens, c.target, z) for k, z in planes.items()}

    return RigEvaluation(camera=camera, lens=lens, f_stop_used=used, fov_h_mm=fov_h,
                         working_mm=d, envelope=envelope, pixels_on_target_at=pixels,
                         rejection_reasons=tuple(reasons))


def _rank_key(ev: RigEvaluation, ideal: float, use_distortion: bool):
    if use_distortion:
        optical = abs(ev.lens.distortion_pct)
    else:
        # longer focal length stands in for lower distortion
        optical = -ev.lens.focal_length_mm
    return (optical, abs(ev.working_mm - ideal),
            ev.camera.res_width_px * ev.camera.res_height_px, ev.camera.name, ev.lens.name)


def rank(evaluations: Iterable[RigEvaluation], constraints: DesignConstraints) -> list[RigEvaluation]:
    feasible = [e for e in evaluations if e.feasible]
    use_distortion = bool(feasible) and all(e.lens.distortion_pct is not None for e in feasible)
    return sorted(feasible, key=lambda e: _rank_key(e, constraints.ideal_working_mm, use_distortion))


def select_rig(cameras: Sequence[CameraSpec], lenses: Sequence[LensSpec],
               constraints: DesignConstraints) -> Selection:
    if not cameras or not lenses:
        raise DomainError("camera and lens catalogs must be non-empty")
    evaluations = [evaluate_candidate(cam, lens, constraints) for cam in cameras for lens in lenses]
    rejected = sorted((e for e in evaluations if not e.feasible), key=lambda e: e.key)
    ranked = rank(evaluations, constraints)
    if not ranked:
        log.info("no feasible rig among %d candidates", len(evaluations))
    return Selection(ranked=ranked, rejected=rejected)


def placement_geometry(rig: RigEvaluation, constraints: DesignConstraints,
                       chosen_offset_mm: float | None = None) -> PlacementGeometry:
    """Horizontal camera-to-nozzle offset range that keeps the nozzle out of view.

    The vertical extent at the nozzle is the half-angle tangent times the
    clearance, i.e. the distance from the optical axis to the edge of the view.
    Its whole-millimetre part is the lower end of the interval, the
    camera-to-nozzle cap the upper end.
    """
    if not rig.feasible:
        raise DesignValidationError(f"rig {rig.camera.name}+{rig.lens.name} is not feasible")
    angle = angular_fov(rig.camera.sensor_height_mm, rig.lens)
    extent = math.tan(math.radians(angle / 2.0)) * constraints.nozzle_clearance_mm
    lo = float(math.floor(extent))
    hi = float(constraints.max_sensor_offset_mm)
    if lo > hi:
        raise InfeasibleError(
            f"nozzle stays in view up to {extent:.1f} mm but the offset cap is {hi:g} mm")
    chosen = lo if chosen_offset_mm is None else float(chosen_offset_mm)
    if not lo <= chosen <= hi:
        raise DesignValidationError(f"offset {chosen:g} mm lies outside [{lo:g}, {hi:g}] mm")
    return PlacementGeometry(min_horizontal_offset_mm=lo, max_horizontal_offset_mm=hi,
                             chosen_offset_mm=chosen, vertical_fov_at_nozzle_mm=extent,
                             vertical_angle_deg=angle)
