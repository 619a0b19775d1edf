"""Command-line entry point: estimate, assess, and simulate subcommands.

Exit codes are a function of the result alone: 0 means no action / no
crash, 1 means an action was emitted (assess) or the crash flag is set
(simulate), 2 means bad input.  All JSON output is written with sorted
keys and floats rounded to 6 significant digits so identical runs are
byte-identical.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys
from pathlib import Path

from . import simulator
from .errors import CrashguardError, IngestError
from .estimation import (
    build_vehicle_model,
    ingest_trajectories,
    load_model,
    model_to_dict,
)
from .prediction import (
    CrashAssessment,
    EncounterInput,
    Thresholds,
    assess,
    assessment_to_dict,
    flow1_probable_time,
    flow2_crash_probabilities,
    flow3_select_actions,
)

log = logging.getLogger("crashguard")

EXIT_OK = 0
EXIT_FLAGGED = 1
EXIT_INPUT_ERROR = 2


def _round_floats(obj):
    """Floats throughout a JSON-ready structure rounded to 6 significant digits."""
    if isinstance(obj, float):
        return float(f"{obj:.6g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def dumps_stable(obj) -> str:
    return json.dumps(_round_floats(obj), sort_keys=True, indent=2) + "\n"


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
        log.info("wrote %s", path)
    else:
        sys.stdout.write(text)


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_INPUT_ERROR


# --- estimate ---

def cmd_estimate(args) -> int:
    try:
        grouped = ingest_trajectories(args.csv)
    except (IngestError, OSError) as exc:
        return _fail(str(exc))
    if not grouped:
        return _fail("no records")
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for vehicle_id in sorted(grouped):
        records = grouped[vehicle_id]
        try:
            model = build_vehicle_model(records, frame_interval=args.frame_interval)
        except CrashguardError as exc:
            return _fail(f"vehicle {vehicle_id}: {exc}")
        path = out_dir / f"vehicle_{vehicle_id}.json"
        path.write_text(dumps_stable(model_to_dict(model)), encoding="utf-8")
        print(
            f"vehicle {vehicle_id}: {len(records)} records, "
            f"{len(records) - 1} transitions, "
            f"unobserved lane rows {list(model.lane_unobserved)}, "
            f"unobserved speed rows {list(model.speed_unobserved)} -> {path}"
        )
    return EXIT_OK


# --- assess ---

def cmd_assess(args) -> int:
    try:
        thresholds = Thresholds(speed_stability=args.speed_threshold, crash=args.crash_threshold)
    except ValueError as exc:
        return _fail(str(exc))
    try:
        car1 = load_model(args.model1)
        car2 = load_model(args.model2)
    except (CrashguardError, OSError, KeyError, ValueError) as exc:
        return _fail(f"invalid model: {exc}")
    try:
        encounter = EncounterInput(car1, car2, args.gap, args.front, thresholds)
    except ValueError as exc:
        return _fail(str(exc))

    try:
        if args.t_override is not None:
            # forced horizon: flows 2-3 run at the given t, flow 1 is skipped
            t = args.t_override
            if t < 0:
                return _fail(f"--t-override must be nonnegative, got {t}")
            pc = flow2_crash_probabilities(car1, car2, t)
            actions = flow3_select_actions(encounter, pc, t)
            assessment = CrashAssessment(t=t, speed_stable=None, pc=pc, actions=actions)
        else:
            assessment = assess(encounter)
    except CrashguardError as exc:
        return _fail(str(exc))

    try:
        _emit(dumps_stable(assessment_to_dict(assessment)), args.out)
    except OSError as exc:
        return _fail(str(exc))
    return EXIT_FLAGGED if assessment.actions else EXIT_OK


# --- simulate ---

def cmd_simulate(args) -> int:
    try:
        config = simulator.load_scenario(args.scenario)
    except (CrashguardError, OSError) as exc:
        return _fail(str(exc))
    if args.time_step is not None:
        if args.time_step <= 0:
            return _fail(f"--time-step must be positive, got {args.time_step}")
        config = dataclasses.replace(config, time_step=args.time_step)
    if args.force_same_lane:
        config = simulator.force_same_lane(config)
    try:
        report = simulator.run(config, disable_actions=args.disable_actions)
    except CrashguardError as exc:
        return _fail(str(exc))
    try:
        _emit(dumps_stable(simulator.report_to_dict(report)), args.report_path)
    except OSError as exc:
        return _fail(str(exc))
    return EXIT_FLAGGED if report.crash else EXIT_OK


# --- parser wiring ---

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crashguard",
        description="Estimate two-layer Markov models, assess pairwise crash risk, "
        "and simulate active-safety scenarios.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="estimate per-vehicle models from a trajectory CSV")
    est.add_argument("--csv", required=True, help="trajectory CSV path")
    est.add_argument("--out-dir", required=True, help="directory for per-vehicle model JSON")
    est.add_argument("--frame-interval", type=float, default=0.1,
                     help="seconds between frames (default 0.1)")
    est.set_defaults(func=cmd_estimate)

    ass = sub.add_parser("assess", help="assess one two-vehicle encounter")
    ass.add_argument("--model1", required=True)
    ass.add_argument("--model2", required=True)
    ass.add_argument("--gap", type=float, required=True, help="longitudinal gap in meters")
    ass.add_argument("--front", choices=["car1", "car2"], required=True,
                     help="which car leads longitudinally")
    ass.add_argument("--t-override", type=float, default=None,
                     help="skip flow 1 and evaluate flows 2-3 at this horizon (s)")
    ass.add_argument("--crash-threshold", type=float, default=0.3)
    ass.add_argument("--speed-threshold", type=float, default=0.5)
    ass.add_argument("--out", default=None, help="write the assessment JSON here instead of stdout")
    ass.set_defaults(func=cmd_assess)

    sim = sub.add_parser("simulate", help="replay a scenario file")
    sim.add_argument("--scenario", required=True)
    sim.add_argument("--report-path", default=None)
    sim.add_argument("--disable-actions", action="store_true",
                     help="assess every step but never apply an action")
    sim.add_argument("--force-same-lane", action="store_true",
                     help="move both cars to the trailing car's lane")
    sim.add_argument("--time-step", type=float, default=None)
    sim.set_defaults(func=cmd_simulate)

    return parser


def _configure_logging() -> None:
    level_name = os.environ.get("CRASHGUARD_LOG", "warning").upper()
    level = getattr(logging, level_name, None)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(message)s")


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
