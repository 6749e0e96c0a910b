"""Human-readable and structured rendering of report data."""

from __future__ import annotations

import json
from typing import Any, Sequence


def render_structured(data: dict) -> str:
    return json.dumps(data, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _fmt(value: Any, digits: int = 1) -> str:
    if value is None:
        return "-"
    if value == "inf":
        return "inf"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.{digits}f}"
    return str(value)


def table(headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    cells = [[str(h) for h in headers]] + [[str(c) for c in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.rjust(w) if j else c.ljust(w) for j, (c, w) in enumerate(zip(r, widths)))
             for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(line.rstrip() for line in lines)


def _footer(data: dict) -> list[str]:
    prov = data.get("provenance", {})
    parts = [f"{prov.get('tool', 'rigdesign')} {prov.get('tool_version', '?')}"]
    if "config_sha256" in prov:
        parts.append(f"config sha256 {prov['config_sha256'][:16]}")
    if "catalog_sha256" in prov:
        parts.append(f"catalog sha256 {prov['catalog_sha256'][:16]}")
    return ["", "-- " + ", ".join(parts)]


def _envelope_rows(cands: list[dict]) -> list[list[str]]:
    rows = []
    for c in cands:
        env = c["envelope"] or {}
        rows.append([c["camera"], c["lens"], _fmt(c["fov_h_mm"]), _fmt(c["working_mm"]),
                     _fmt(c["f_stop"]), _fmt(env.get("hyperfocal_mm")), _fmt(env.get("near_mm")),
                     _fmt(env.get("far_mm")), "yes" if c["feasible"] else "no"])
    return rows


def _views_lines(views: list[dict]) -> list[str]:
    return [table(["plane", "z (mm)", "FoV(V) mm", "FoV(H) mm", "px on target"],
                  [[v["plane"], _fmt(v["z_mm"]), _fmt(v["fov_v_mm"], 2), _fmt(v["fov_h_mm"], 2),
                    _fmt(v["pixels_on_target"])] for v in views])]


def _stereo_lines(s: dict) -> list[str]:
    lo, hi = s["baseline_lower_mm"], s[f"baseline_upper_{s['binding_upper']}_mm"]
    return [
        f"camera {s['camera']} + {s['lens']}, focal length {s['focal_px']:.1f} px",
        table(["bound", "baseline (mm)", "evaluated at"], [
            ["lower (depth error)", _fmt(lo), f"z = {_fmt(s['depth_eval_mm'])} mm"],
            ["upper (overlap)", _fmt(s["baseline_upper_overlap_mm"]),
             f"w = {s['overlap_fraction']:.4f}, FoV(H) = {_fmt(s['fov_h_at_work_mm'])} mm"],
            ["upper (disparity)", _fmt(s["baseline_upper_disparity_mm"]),
             f"z = {_fmt(s['disparity_eval_mm'])} mm"],
        ]),
        f"feasible interval [{_fmt(lo)}, {_fmt(hi)}] mm ({s['binding_upper']} bound binding)",
        f"chosen baseline {_fmt(s['baseline_chosen_mm'])} mm"
        + (" (as built)" if s["as_built"] else " (interval midpoint)"),
        f"predicted depth error {s['predicted_depth_error_work_mm']:.2f} mm at working distance, "
        f"{s['predicted_depth_error_far_mm']:.2f} mm at far distance",
    ]


def _coverage_lines(cov: dict) -> list[str]:
    budgets = ", ".join(f"{p} {_fmt(v)} ms" for p, v in sorted(cov["processing_budget_ms"].items()))
    return [
        f"{cov['plane']} plane FoV(V) {_fmt(cov['fov_v_mm'], 2)} mm, {_fmt(cov['frame_rate_hz'])} fps, "
        f"{cov['required_views']} views required",
        table(["km/h", "mm/s", "mm/frame", "frames", "budget (ms)"],
              [[_fmt(r["velocity_kmh"]), _fmt(r["velocity_mm_s"]), _fmt(r["advance_per_frame_mm"]),
                r["frames"], _fmt(r["processing_budget_ms"])] for r in cov["rows"]]),
        f"at {_fmt(cov['velocity_mm_s'])} mm/s: {cov['frames_at_velocity']} frames; "
        f"processing budget per image: {budgets}",
    ]


def _render_design(d: dict) -> list[str]:
    out = ["CANDIDATES", table(["camera", "lens", "FoV(H)", "d", "f/#", "H", "N", "F", "ok"],
                               _envelope_rows(d["candidates"]))]
    rejected = [c for c in d["candidates"] if not c["feasible"]]
    if rejected:
        out += ["", "REJECTIONS"]
        for c in rejected:
            out.append(f"{c['camera']} + {c['lens']}: "
                       + "; ".join(f"{r['code']} ({r['detail']})" for r in c["reasons"]))
    out += ["", "RANKING"]
    out += [f"{i}. {name}" for i, name in enumerate(d["ranking"], 1)] or ["no feasible rig"]
    if d["selected"]:
        sel = d["selected"]
        out += ["", f"SELECTED {sel['camera']} + {sel['lens']} at f/{_fmt(sel['f_stop'])}"]
        out += _views_lines(d["views"])
    if d["placement"]:
        p = d["placement"]
        out += ["", "PLACEMENT",
                f"vertical FoV {p['vertical_angle_deg']:.2f} deg, edge of view "
                f"{p['vertical_fov_at_nozzle_mm']:.1f} mm from axis at the nozzle",
                f"horizontal offset interval [{_fmt(p['min_horizontal_offset_mm'], 0)}, "
                f"{_fmt(p['max_horizontal_offset_mm'], 0)}] mm, chosen {_fmt(p['chosen_offset_mm'], 0)} mm"]
    if d["stereo"]:
        out += ["", "STEREO BASELINE"] + _stereo_lines(d["stereo"])
    if d["coverage"]:
        out += ["", "COVERAGE"] + _coverage_lines(d["coverage"])
    for e in d["errors"]:
        out += ["", f"ERROR [{e['code']}] {e['stage']}: {e['message']}"]
    out += ["", "NOT COMPUTED"] + [f"- {x}" for x in d["not_reproduced"]]
    out += ["", f"STATUS {d['status']}"]
    return out


def _render_envelope(d: dict) -> list[str]:
    env = d["envelope"]
    out = [f"{d['camera']} + {d['lens']}: FoV(H) {_fmt(d['fov_h_mm'])} mm at f/{_fmt(env['f_stop'])}",
           table(["CoC (mm)", "H", "N", "d", "F", "DoF"],
                 [[_fmt(env["coc_mm"], 6), _fmt(env["hyperfocal_mm"]), _fmt(env["near_mm"]),
                   _fmt(env["working_mm"]), _fmt(env["far_mm"]), _fmt(env["dof_mm"])]]),
           ""]
    out += _views_lines(d["views"])
    verdict = "feasible" if d["feasible"] else "infeasible: " + "; ".join(
        f"{r['code']} ({r['detail']})" for r in d["reasons"])
    return out + ["", verdict]


def _render_audit(d: dict) -> list[str]:
    pol = d["policy"]
    out = [table(["image", "SR (%)", "category"],
                 [[im["image_id"], _fmt(im["saturation_rate"], 2), im["category"]] for im in d["images"]]),
           "",
           f"{d['total_images']} images, threshold {pol['channel_threshold']} ({pol['mode']})",
           table(["category", "images", "%"],
                 [[k, d["counts"][k], _fmt(d["percentages"][k])] for k in ("C1", "C2", "C3")]),
           f"glare frames with glare neighbours: {d['consecutive_glare_count']} "
           f"({_fmt(d['consecutive_glare_fraction'])} %)"]
    return out


def render_orchard_summary(rows: Sequence[tuple[str, str, dict]]) -> str:
    """Per-site category table from audit report data: ``(site, weather, report)`` rows
    plus an overall row."""
    body, totals = [], {"C1": 0, "C2": 0, "C3": 0}
    for site, weather, rep in rows:
        body.append([site, weather, rep["total_images"]]
                    + [_fmt(rep["percentages"][k]) for k in ("C1", "C2", "C3")])
        for k in totals:
            totals[k] += rep["counts"][k]
    n = sum(totals.values())
    body.append(["Overall", "-", n] + [_fmt(100.0 * totals[k] / n) for k in ("C1", "C2", "C3")])
    return table(["site", "weather", "images", "C1 (%)", "C2 (%)", "C3 (%)"], body)


def render_text(data: dict) -> str:
    kind = data.get("kind")
    if kind == "design":
        lines = _render_design(data)
    elif kind == "envelope":
        lines = _render_envelope(data)
    elif kind == "baseline":
        lines = _stereo_lines(data["stereo"])
    elif kind == "coverage":
        lines = _coverage_lines(data["coverage"])
    elif kind == "audit":
        lines = _render_audit(data)
    else:
        raise ValueError(f"unknown report kind {kind!r}")
    return "\n".join(lines + _footer(data)) + "\n"


def render(data: dict, fmt: str = "table") -> str:
    return render_structured(data) if fmt == "structured" else render_text(data)
