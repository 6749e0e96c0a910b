"""End-to-end design runs. Every function here returns plain JSON-ready data
(dicts, lists, numbers, strings) so reports can be rendered either way and
re-rendered from their parsed structured form."""

from __future__ import annotations

import math
from dataclasses import asdict

from . import __version__
from .catalog import CatalogFile, RunConfig
from .coverage import coverage_sweep, frames_per_target, max_processing_time
from .errors import InfeasibleError
from .exposure import DatasetReport
from .optics import CameraSpec, FocusEnvelope, LensSpec, TargetSpec, focus_envelope, view_at
from .selector import RigEvaluation, evaluate_candidate, placement_geometry, select_rig
from .stereo import StereoLayout, solve_baseline

NOT_REPRODUCED = [
    "stereo calibration errors (RMS / epipolar / X / Y): need checkerboard imagery of the built rig",
    "field hit rates per velocity: need the physical robot in an orchard",
]


def _num(x: float | None):
    """JSON has no infinity; unbounded distances are written as the string 'inf'."""
    if x is None:
        return None
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return x


def _envelope_dict(env: FocusEnvelope | None) -> dict | None:
    if env is None:
        return None
    return {k: _num(v) for k, v in asdict(env).items()}


def _candidate_dict(ev: RigEvaluation) -> dict:
    return {
        "camera": ev.camera.name,
        "lens": ev.lens.name,
        "fov_h_mm": ev.fov_h_mm,
        "working_mm": ev.working_mm,
        "f_stop": ev.f_stop_used,
        "envelope": _envelope_dict(ev.envelope),
        "pixels_on_target": dict(ev.pixels_on_target_at),
        "feasible": ev.feasible,
        "reasons": [{"code": r.code, "detail": r.detail} for r in ev.rejection_reasons],
    }


def _views(camera: CameraSpec, lens: LensSpec, target: TargetSpec, env: FocusEnvelope) -> list[dict]:
    rows = []
    for plane, z in (("near", env.near_mm), ("work", env.working_mm), ("far", env.far_mm)):
        if math.isinf(z):
            rows.append({"plane": plane, "z_mm": "inf", "fov_v_mm": "inf", "fov_h_mm": "inf",
                         "pixels_on_target": 0})
            continue
        v = view_at(camera, lens, target, z)
        rows.append({"plane": plane, "z_mm": z, "fov_v_mm": v.fov_v_mm, "fov_h_mm": v.fov_h_mm,
                     "pixels_on_target": v.pixels_on_target})
    return rows


def _stereo_dict(layout: StereoLayout, camera: CameraSpec, lens: LensSpec) -> dict:
    return {
        "camera": camera.name,
        "lens": lens.name,
        "focal_px": layout.focal_px,
        "baseline_lower_mm": layout.baseline_lower_mm,
        "baseline_upper_overlap_mm": layout.baseline_upper_overlap_mm,
        "baseline_upper_disparity_mm": _num(layout.baseline_upper_disparity_mm),
        "baseline_chosen_mm": layout.baseline_chosen_mm,
        "as_built": layout.as_built,
        "binding_upper": layout.binding_upper,
        "overlap_fraction": layout.overlap_fraction,
        "fov_h_at_work_mm": layout.fov_h_at_work_mm,
        "depth_eval_mm": layout.depth_eval_mm,
        "disparity_eval_mm": layout.disparity_eval_mm,
        "predicted_depth_error_work_mm": layout.predicted_depth_error_work_mm,
        "predicted_depth_error_far_mm": layout.predicted_depth_error_far_mm,
    }


def _provenance(config: RunConfig, catalog: CatalogFile | None = None) -> dict:
    out = {"tool": "rigdesign", "tool_version": __version__, "config_sha256": config.digest()}
    if catalog is not None:
        out["catalog_sha256"] = catalog.digest()
    return out


def _coverage_dict(views: list[dict], config: RunConfig) -> dict:
    fov_v = {row["plane"]: row["fov_v_mm"] for row in views}
    plane = config.plane
    if fov_v[plane] == "inf":
        raise InfeasibleError(f"{plane} plane is unbounded; choose another coverage plane")
    motion = config.motion
    rows = coverage_sweep(fov_v[plane], config.sweep_kmh, motion.frame_rate_hz, motion.required_views)
    budgets = {p: max_processing_time(motion, v) for p, v in fov_v.items() if v != "inf"}
    return {
        "plane": plane,
        "fov_v_mm": fov_v[plane],
        "frame_rate_hz": motion.frame_rate_hz,
        "required_views": motion.required_views,
        "velocity_mm_s": motion.velocity_mm_s,
        "frames_at_velocity": frames_per_target(motion, fov_v[plane]),
        "processing_budget_ms": budgets,
        "rows": [asdict(r) for r in rows],
    }


def run_design(catalog: CatalogFile, config: RunConfig) -> dict:
    """Rank every camera x lens pair and lay out the best one.

    ``status`` is ``"feasible"``, ``"no_feasible_rig"`` or ``"infeasible"``
    (a rig was found but its stereo baseline or mounting has no solution).
    """
    c = config.constraints
    selection = select_rig(catalog.cameras, catalog.lenses, c)
    evaluations = sorted([*selection.ranked, *selection.rejected], key=lambda e: e.key)
    report = {
        "kind": "design",
        "status": "feasible",
        "constraints": {
            "object_range_mm": list(c.object_range_mm),
            "working_range_mm": list(c.working_window),
            "ideal_working_mm": c.ideal_working_mm,
            "target_size_mm": c.target.target_size_mm,
            "min_pixels_px": c.target.min_pixels_px,
            "min_dynamic_range_db": c.min_dynamic_range_db,
            "f_stop_policy": list(c.f_stop_policy),
        },
        "candidates": [_candidate_dict(e) for e in evaluations],
        "ranking": [f"{e.camera.name} + {e.lens.name}" for e in selection.ranked],
        "selected": None,
        "views": None,
        "placement": None,
        "stereo": None,
        "coverage": None,
        "errors": [],
        "not_reproduced": list(NOT_REPRODUCED),
        "provenance": _provenance(config, catalog),
    }
    if not selection.feasible:
        report["status"] = "no_feasible_rig"
        return report

    best = selection.best
    report["selected"] = {"camera": best.camera.name, "lens": best.lens.name,
                          "f_stop": best.f_stop_used}
    report["views"] = _views(best.camera, best.lens, c.target, best.envelope)
    try:
        p = placement_geometry(best, c, config.mount_offset_mm)
        report["placement"] = asdict(p)
    except InfeasibleError as exc:
        report["status"] = "infeasible"
        report["errors"].append({"code": exc.code, "stage": "placement", "message": str(exc)})
    try:
        layout = solve_baseline(config.stereo, best.lens, best.camera,
                                as_built_mm=config.as_built_baseline_mm,
                                depth_eval_mm=config.depth_eval_mm,
                                disparity_eval_mm=config.disparity_eval_mm)
        report["stereo"] = _stereo_dict(layout, best.camera, best.lens)
    except InfeasibleError as exc:
        report["status"] = "infeasible"
        report["errors"].append({"code": exc.code, "stage": "stereo", "message": str(exc)})
    try:
        report["coverage"] = _coverage_dict(report["views"], config)
    except InfeasibleError as exc:
        report["status"] = "infeasible"
        report["errors"].append({"code": exc.code, "stage": "coverage", "message": str(exc)})
    return report


def envelope_report(camera: CameraSpec, lens: LensSpec, config: RunConfig,
                    f_stop: float | None = None, working_mm: float | None = None) -> dict:
    """Focus envelope of one pair: at ``f_stop`` if given, else as the selector would pick."""
    ev = evaluate_candidate(camera, lens, config.constraints)
    d = ev.working_mm if working_mm is None else working_mm
    stop = f_stop if f_stop is not None else (ev.f_stop_used or lens.min_f_stop)
    env = focus_envelope(camera, lens, d, stop)
    return {
        "kind": "envelope",
        "camera": camera.name,
        "lens": lens.name,
        "fov_h_mm": ev.fov_h_mm,
        "envelope": _envelope_dict(env),
        "views": _views(camera, lens, config.constraints.target, env),
        "feasible": ev.feasible,
        "reasons": [{"code": r.code, "detail": r.detail} for r in ev.rejection_reasons],
        "provenance": _provenance(config),
    }


def baseline_report(camera: CameraSpec, lens: LensSpec, config: RunConfig,
                    as_built_mm: float | None = None) -> dict:
    layout = solve_baseline(config.stereo, lens, camera,
                            as_built_mm=as_built_mm if as_built_mm is not None else config.as_built_baseline_mm,
                            depth_eval_mm=config.depth_eval_mm,
                            disparity_eval_mm=config.disparity_eval_mm)
    return {"kind": "baseline", "stereo": _stereo_dict(layout, camera, lens),
            "provenance": _provenance(config)}


def coverage_report(fov_v_by_plane: dict[str, float], config: RunConfig) -> dict:
    views = [{"plane": p, "fov_v_mm": v} for p, v in fov_v_by_plane.items()]
    return {"kind": "coverage", "coverage": _coverage_dict(views, config),
            "provenance": _provenance(config)}


def audit_report(report: DatasetReport, config: RunConfig | None = None) -> dict:
    out = {"kind": "audit", **report.to_dict()}
    out["provenance"] = (_provenance(config) if config is not None
                         else {"tool": "rigdesign", "tool_version": __version__})
    return out
