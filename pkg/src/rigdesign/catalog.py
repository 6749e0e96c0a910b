"""Catalog and run-configuration files.

A catalog is one comma-delimited text file with two sections, each opened by
a ``[cameras]`` / ``[lenses]`` marker line and a mandatory header row::

    [cameras]
    name,sensor_width_mm,sensor_height_mm,res_width_px,res_height_px,dynamic_range_db
    acA1920-40uc,11.3,7.1,1920,1200,73

    [lenses]
    name,focal_length_mm,min_f_stop,distortion_pct
    LM6HC,6,1.8,-0.2

Lines starting with ``#`` are comments. Columns not listed above are kept
(so the file re-serializes unchanged) but otherwise ignored.

The run configuration is YAML with ``design``, ``stereo``, ``motion`` and
``saturation`` sections; every physical key carries its unit suffix.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

import yaml

from .coverage import MotionProfile
from .errors import CatalogError, ConfigError, RigDesignError
from .exposure import SaturationPolicy
from .optics import CameraSpec, LensSpec, TargetSpec
from .selector import DesignConstraints
from .stereo import StereoConstraints

CAMERA_COLUMNS = ("name", "sensor_width_mm", "sensor_height_mm", "res_width_px",
                  "res_height_px", "dynamic_range_db")
LENS_COLUMNS = ("name", "focal_length_mm", "min_f_stop", "distortion_pct")
_OPTIONAL = {"dynamic_range_db", "distortion_pct", "interface", "format"}
_INTEGER = {"res_width_px", "res_height_px"}
_SIGNED = {"distortion_pct"}

SHIPPED = {"paper_catalog": "paper_catalog.csv", "paper_config": "paper_config.yaml"}


def shipped_path(name: str) -> Path:
    return Path(str(resources.files("rigdesign") / "data" / SHIPPED[name]))


def resolve_input(path: str | Path) -> Path:
    """Map the bare names ``paper_catalog`` / ``paper_config`` to the shipped files."""
    p = Path(path)
    if not p.exists() and str(path) in SHIPPED:
        return shipped_path(str(path))
    return p


def format_number(x: float | int) -> str:
    if isinstance(x, int) or float(x).is_integer():
        return str(int(x))
    return repr(float(x))


@dataclass
class CatalogFile:
    cameras: list[CameraSpec]
    lenses: list[LensSpec]
    camera_columns: list[str] = field(default_factory=lambda: list(CAMERA_COLUMNS))
    lens_columns: list[str] = field(default_factory=lambda: list(LENS_COLUMNS))
    extras: dict[tuple[str, str], dict[str, str]] = field(default_factory=dict)

    def camera(self, name: str) -> CameraSpec:
        for c in self.cameras:
            if c.name == name:
                return c
        raise CatalogError(f"no camera named {name!r}; known: {', '.join(c.name for c in self.cameras)}")

    def lens(self, name: str) -> LensSpec:
        for lens in self.lenses:
            if lens.name == name:
                return lens
        raise CatalogError(f"no lens named {name!r}; known: {', '.join(x.name for x in self.lenses)}")

    def digest(self) -> str:
        """Content hash independent of row order."""
        rows = sorted(json.dumps(_spec_record(s), sort_keys=True)
                      for s in [*self.cameras, *self.lenses])
        return hashlib.sha256("\n".join(rows).encode()).hexdigest()


def _spec_record(spec) -> dict:
    kind = "camera" if isinstance(spec, CameraSpec) else "lens"
    return {"kind": kind, **spec.__dict__}


def _parse_cell(value: str, column: str, where: dict) -> Any:
    value = value.strip()
    if column == "name" or column not in (*CAMERA_COLUMNS, *LENS_COLUMNS):
        if value == "" and column in _OPTIONAL:
            return None
        return value
    if value == "":
        if column in _OPTIONAL:
            return None
        raise CatalogError("empty value", column=column, **where)
    try:
        if column in _INTEGER:
            number = int(value)
        else:
            number = float(value)
    except ValueError:
        kind = "an integer" if column in _INTEGER else "a number"
        raise CatalogError(f"{value!r} is not {kind}", column=column, **where) from None
    if not math.isfinite(number) or (column not in _SIGNED and number <= 0):
        raise CatalogError(f"{value!r} must be a positive number", column=column, **where)
    return number


def _parse_section(rows: list[tuple[int, str]], required: tuple[str, ...], kind: str,
                   path: str) -> tuple[list[str], list[dict], list[int]]:
    if not rows:
        raise CatalogError(f"[{kind}] section has no header row", path=path)
    header_line, header_text = rows[0]
    header = [h.strip() for h in next(csv.reader([header_text]))]
    missing = [c for c in required if c not in header]
    if missing:
        raise CatalogError(f"[{kind}] header lacks column(s) {', '.join(missing)}",
                           path=path, line=header_line)
    if len(set(header)) != len(header):
        raise CatalogError(f"[{kind}] header repeats a column", path=path, line=header_line)
    records, lines = [], []
    seen: dict[str, int] = {}
    for lineno, text in rows[1:]:
        cells = next(csv.reader([text]))
        if len(cells) != len(header):
            raise CatalogError(f"expected {len(header)} cells, found {len(cells)}",
                               path=path, line=lineno)
        where = {"path": path, "line": lineno}
        record = {col: _parse_cell(cell, col, where) for col, cell in zip(header, cells)}
        if not record["name"]:
            raise CatalogError("empty name", path=path, line=lineno, column="name")
        if record["name"] in seen:
            raise CatalogError(f"duplicate {kind[:-1]} name {record['name']!r} "
                               f"(first on line {seen[record['name']]})",
                               path=path, line=lineno, column="name")
        seen[record["name"]] = lineno
        records.append(record)
        lines.append(lineno)
    return header, records, lines


def parse_catalog_text(text: str, path: str = "<catalog>") -> CatalogFile:
    sections: dict[str, list[tuple[int, str]]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip().lower()
            if current not in ("cameras", "lenses"):
                raise CatalogError(f"unknown section [{current}]", path=path, line=lineno)
            if current in sections:
                raise CatalogError(f"section [{current}] appears twice", path=path, line=lineno)
            sections[current] = []
            continue
        if current is None:
            raise CatalogError("content before the first [cameras]/[lenses] marker",
                               path=path, line=lineno)
        sections[current].append((lineno, raw))
    if not sections:
        raise CatalogError("catalog is empty", path=path)
    for kind in ("cameras", "lenses"):
        if kind not in sections:
            raise CatalogError(f"missing [{kind}] section", path=path)

    cam_header, cam_rows, cam_lines = _parse_section(sections["cameras"], CAMERA_COLUMNS, "cameras", path)
    lens_header, lens_rows, lens_lines = _parse_section(sections["lenses"], LENS_COLUMNS, "lenses", path)
    if not cam_rows or not lens_rows:
        raise CatalogError("catalog needs at least one camera and one lens", path=path)

    cam_known = set(CAMERA_COLUMNS) | {"interface"}
    lens_known = set(LENS_COLUMNS) | {"format"}
    cameras, lenses, extras = [], [], {}
    for rec, lineno in zip(cam_rows, cam_lines):
        try:
            cameras.append(CameraSpec(**{k: v for k, v in rec.items() if k in cam_known}))
        except RigDesignError as exc:
            raise CatalogError(str(exc), path=path, line=lineno) from None
        extras[("camera", rec["name"])] = {k: v for k, v in rec.items() if k not in cam_known}
    for rec, lineno in zip(lens_rows, lens_lines):
        try:
            lenses.append(LensSpec(**{k: v for k, v in rec.items() if k in lens_known}))
        except RigDesignError as exc:
            raise CatalogError(str(exc), path=path, line=lineno) from None
        extras[("lens", rec["name"])] = {k: v for k, v in rec.items() if k not in lens_known}
    return CatalogFile(cameras, lenses, cam_header, lens_header, extras)


def parse_catalog(path: str | Path) -> CatalogFile:
    path = resolve_input(path)
    if not path.is_file():
        raise CatalogError("catalog file not found", path=str(path))
    return parse_catalog_text(path.read_text(encoding="utf-8"), str(path))


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (int, float)):
        return format_number(value)
    return str(value)


def serialize_catalog(catalog: CatalogFile) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    out.write("[cameras]\n")
    writer.writerow(catalog.camera_columns)
    for cam in catalog.cameras:
        extra = catalog.extras.get(("camera", cam.name), {})
        writer.writerow([_cell(getattr(cam, c) if hasattr(cam, c) else extra.get(c))
                         for c in catalog.camera_columns])
    out.write("\n[lenses]\n")
    writer.writerow(catalog.lens_columns)
    for lens in catalog.lenses:
        extra = catalog.extras.get(("lens", lens.name), {})
        writer.writerow([_cell(getattr(lens, c) if hasattr(lens, c) else extra.get(c))
                         for c in catalog.lens_columns])
    return out.getvalue()


# --- run configuration -------------------------------------------------------

_SECTIONS = {
    "design": {"target_size_mm", "min_pixels_px", "required_fov_h_mm", "required_fov_v_mm",
               "object_range_mm", "working_range_mm", "ideal_working_mm", "min_dynamic_range_db",
               "max_sensor_offset_mm", "nozzle_clearance_mm", "mount_offset_mm", "f_stop_policy"},
    "stereo": {"max_depth_error_mm", "matching_error_px", "max_disparity_px", "required_fov_h_mm",
               "z_near_mm", "z_work_mm", "z_far_mm", "as_built_baseline_mm",
               "depth_eval_mm", "disparity_eval_mm"},
    "motion": {"velocity_mm_s", "frame_rate_hz", "processing_time_ms", "required_views",
               "sweep_kmh", "plane"},
    "saturation": {"channel_threshold", "mode"},
}
_PLANES = ("near", "work", "far")


@dataclass(frozen=True)
class RunConfig:
    constraints: DesignConstraints
    stereo: StereoConstraints
    motion: MotionProfile
    saturation: SaturationPolicy
    mount_offset_mm: float | None = None
    as_built_baseline_mm: float | None = None
    depth_eval_mm: float | None = None
    disparity_eval_mm: float | None = None
    sweep_kmh: tuple[float, ...] = (1.0, 1.5, 2.5, 3.5, 5.0)
    plane: str = "near"
    raw: dict = field(default_factory=dict, compare=False)

    def digest(self) -> str:
        return hashlib.sha256(json.dumps(self.raw, sort_keys=True).encode()).hexdigest()


def _pair(value, key, path):
    if not (isinstance(value, (list, tuple)) and len(value) == 2):
        raise ConfigError("expected a two-element list [min, max]", path=path, column=key)
    return float(value[0]), float(value[1])


def config_from_dict(raw: dict, path: str = "<config>") -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError("top level must be a mapping", path=path)
    for name in raw:
        if name not in _SECTIONS:
            raise ConfigError(f"unknown section {name!r}", path=path)
    for name, allowed in _SECTIONS.items():
        section = raw.get(name)
        if section is None:
            raise ConfigError(f"missing section {name!r}", path=path)
        if not isinstance(section, dict):
            raise ConfigError(f"section {name!r} must be a mapping", path=path)
        unknown = sorted(set(section) - allowed)
        if unknown:
            raise ConfigError(f"unknown key(s) {', '.join(unknown)} in {name!r} "
                              "(physical keys need a unit suffix such as _mm, _px, _db)", path=path)

    d, s, m, sat = raw["design"], raw["stereo"], raw["motion"], raw["saturation"]
    section = "design"
    try:
        constraints = DesignConstraints(
            target=TargetSpec(d["target_size_mm"], d["min_pixels_px"]),
            required_fov_h_mm=d["required_fov_h_mm"],
            required_fov_v_mm=d["required_fov_v_mm"],
            object_range_mm=_pair(d["object_range_mm"], "design.object_range_mm", path),
            working_range_mm=(_pair(d["working_range_mm"], "design.working_range_mm", path)
                              if d.get("working_range_mm") is not None else None),
            ideal_working_mm=d["ideal_working_mm"],
            min_dynamic_range_db=d.get("min_dynamic_range_db", 0.0),
            max_sensor_offset_mm=d.get("max_sensor_offset_mm", math.inf),
            nozzle_clearance_mm=d.get("nozzle_clearance_mm", 0.0),
            f_stop_policy=tuple(float(x) for x in d.get("f_stop_policy", (1.8, 2.8))),
        )
        section = "stereo"
        stereo = StereoConstraints(
            max_depth_error_mm=s["max_depth_error_mm"], max_disparity_px=s["max_disparity_px"],
            required_fov_h_mm=s["required_fov_h_mm"], z_near_mm=s["z_near_mm"],
            z_work_mm=s["z_work_mm"], z_far_mm=s["z_far_mm"],
            matching_error_px=s.get("matching_error_px", 1.0),
        )
        section = "motion"
        motion = MotionProfile(
            velocity_mm_s=m["velocity_mm_s"], frame_rate_hz=m.get("frame_rate_hz", 10.0),
            processing_time_ms=m.get("processing_time_ms", 100.0),
            required_views=m.get("required_views", 3),
        )
        plane = m.get("plane", "near")
        if plane not in _PLANES:
            raise ConfigError(f"plane must be one of {', '.join(_PLANES)}", path=path,
                              column="motion.plane")
        sweep = tuple(float(v) for v in m.get("sweep_kmh", (1, 1.5, 2.5, 3.5, 5)))
        if any(not v > 0 for v in sweep):
            raise ConfigError("sweep velocities must be positive", path=path, column="motion.sweep_kmh")
        section = "saturation"
        saturation = SaturationPolicy(sat.get("channel_threshold", 250), sat.get("mode", "all_channels"))
    except KeyError as exc:
        raise ConfigError("missing required key", path=path, column=f"{section}.{exc.args[0]}") from None
    except ConfigError:
        raise
    except (RigDesignError, TypeError, ValueError) as exc:
        raise ConfigError(str(exc), path=path, column=section) from None

    return RunConfig(constraints=constraints, stereo=stereo, motion=motion, saturation=saturation,
                     mount_offset_mm=d.get("mount_offset_mm"),
                     as_built_baseline_mm=s.get("as_built_baseline_mm"),
                     depth_eval_mm=s.get("depth_eval_mm"),
                     disparity_eval_mm=s.get("disparity_eval_mm"),
                     sweep_kmh=sweep, plane=plane, raw=raw)


def load_config(path: str | Path) -> RunConfig:
    path = resolve_input(path)
    if not path.is_file():
        raise ConfigError("config file not found", path=str(path))
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ConfigError(f"invalid YAML: {getattr(exc, 'problem', exc)}", path=str(path),
                          line=mark.line + 1 if mark else None) from None
    return config_from_dict(raw, str(path))
