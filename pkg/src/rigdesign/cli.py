"""Command-line entry point.

Exit status: 0 success, 1 infeasible design, 2 input error, 3 internal error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import Sequence

from . import __version__
from .catalog import load_config, parse_catalog
from .design import audit_report, baseline_report, coverage_report, envelope_report, run_design
from .errors import InfeasibleError, RigDesignError
from .exposure import SaturationPolicy, audit_paths, capture_order
from .optics import view_at
from .report import render
from .selector import evaluate_candidate, select_rig

EXIT_OK, EXIT_INFEASIBLE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3

log = logging.getLogger("rigdesign")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("table", "structured"), default="table",
                   help="human-readable table or JSON document (default: table)")
    p.add_argument("--config", default="paper_config",
                   help="run configuration YAML (default: the shipped paper_config)")
    p.add_argument("--out", type=Path, help="write the report here instead of stdout")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _with_catalog(p: argparse.ArgumentParser) -> None:
    p.add_argument("--catalog", default="paper_catalog",
                   help="camera/lens catalog (default: the shipped paper_catalog)")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="rigdesign",
        description="Select camera, lens, stereo baseline and mounting for a moving vision rig; "
                    "audit captured images for glare.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    p = sub.add_parser("design", parents=[common], help="full design report from catalog + config")
    _with_catalog(p)

    p = sub.add_parser("envelope", parents=[common], help="focus envelope of one camera + lens")
    _with_catalog(p)
    p.add_argument("--camera", required=True)
    p.add_argument("--lens", required=True)
    p.add_argument("--f-stop", type=float, help="f-stop (default: as the selector would choose)")
    p.add_argument("--working-distance", type=float, metavar="MM",
                   help="focus distance (default: from the stigma-resolution rule)")

    p = sub.add_parser("baseline", parents=[common], help="stereo baseline bounds for one camera + lens")
    _with_catalog(p)
    p.add_argument("--camera", required=True)
    p.add_argument("--lens", required=True)
    p.add_argument("--as-built", type=float, metavar="MM", help="validate this baseline instead of the midpoint")

    p = sub.add_parser("coverage", parents=[common], help="frames per target across a velocity sweep")
    _with_catalog(p)
    p.add_argument("--camera", help="default: the top-ranked rig")
    p.add_argument("--lens", help="default: the top-ranked rig")
    p.add_argument("--plane", choices=("near", "work", "far"), help="evaluation plane (default from config)")
    p.add_argument("--fov-v", type=float, metavar="MM", help="use this vertical FoV directly")
    p.add_argument("--velocities", type=float, nargs="+", metavar="KMH", help="velocity sweep in km/h")

    p = sub.add_parser("audit", parents=[common], help="saturation/glare audit of an image sequence")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--dir", type=Path, help="image folder (lexicographic filename order)")
    src.add_argument("--manifest", type=Path, help="text file listing image paths in capture order")
    p.add_argument("--threshold", type=int, help="channel saturation threshold 1-255")
    p.add_argument("--mode", choices=("all_channels", "blue_biased"))
    p.add_argument("--workers", type=int, default=1)
    return parser


def _rig(args, catalog, config):
    if args.camera and args.lens:
        return catalog.camera(args.camera), catalog.lens(args.lens)
    if args.camera or args.lens:
        raise RigDesignError("give both --camera and --lens, or neither")
    best = select_rig(catalog.cameras, catalog.lenses, config.constraints).best
    return best.camera, best.lens


def _dispatch(args) -> tuple[dict, int]:
    config = load_config(args.config)
    if args.command == "audit":
        policy = SaturationPolicy(
            args.threshold if args.threshold is not None else config.saturation.channel_threshold,
            args.mode or config.saturation.mode)
        paths = capture_order(directory=args.dir, manifest=args.manifest)
        return audit_report(audit_paths(paths, policy, workers=args.workers), config), EXIT_OK

    catalog = parse_catalog(args.catalog)
    if args.command == "design":
        data = run_design(catalog, config)
        return data, EXIT_OK if data["status"] == "feasible" else EXIT_INFEASIBLE
    if args.command == "envelope":
        return envelope_report(catalog.camera(args.camera), catalog.lens(args.lens), config,
                               f_stop=args.f_stop, working_mm=args.working_distance), EXIT_OK
    if args.command == "baseline":
        return baseline_report(catalog.camera(args.camera), catalog.lens(args.lens), config,
                               as_built_mm=args.as_built), EXIT_OK
    if args.command == "coverage":
        if args.velocities:
            if any(v <= 0 for v in args.velocities):
                raise RigDesignError("velocities must be positive")
            config = replace(config, sweep_kmh=tuple(args.velocities))
        if args.plane:
            config = replace(config, plane=args.plane)
        if args.fov_v is not None:
            fov = {config.plane: args.fov_v}
        else:
            camera, lens = _rig(args, catalog, config)
            ev = evaluate_candidate(camera, lens, config.constraints)
            env = ev.envelope
            if env is None:
                raise InfeasibleError(f"{camera.name} + {lens.name} has no usable f-stop")
            fov = {}
            for plane, z in (("near", env.near_mm), ("work", env.working_mm), ("far", env.far_mm)):
                if z != float("inf"):
                    fov[plane] = view_at(camera, lens, config.constraints.target, z).fov_v_mm
            if config.plane not in fov:
                raise InfeasibleError(f"{config.plane} plane is unbounded for {camera.name} + {lens.name}")
        return coverage_report(fov, config), EXIT_OK
    raise AssertionError(args.command)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # usage errors exit with status 2
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        data, status = _dispatch(args)
        text = render(data, args.format)
        if args.out:
            args.out.write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
        return status
    except InfeasibleError as exc:
        print(f"rigdesign: infeasible [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except RigDesignError as exc:
        print(f"rigdesign: error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"rigdesign: error [io]: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # pragma: no cover - last-resort guard
        log.debug("internal error", exc_info=True)
        print(f"rigdesign: internal error [internal]: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
