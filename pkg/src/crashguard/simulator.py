"""Deterministic two-vehicle kinematic simulation.

Replays a scenario file step by step: each tick re-runs the crash
assessment on the current state, latches any selected safety action,
applies ACC to the targeted car, and integrates constant-acceleration
kinematics.  Lanes are held constant (the lane chains drive prediction,
never the motion), steering assist is recorded as a signal only, and
there is no randomness anywhere, so identical configs give identical
reports.

The longitudinal gap fed to the assessment goes through the Lidar
round trip (time of flight to diagonal range to Pythagorean leg), so the
full sensing path runs every tick.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

from .errors import LeadBehindEgo, SchemaError
from .estimation import SPEED_MAX, VehicleModel, model_from_dict
from .prediction import (
    CrashAssessment,
    EncounterInput,
    SafetyAction,
    Thresholds,
    assess,
    assessment_to_dict,
)
from .sensing import SPEED_OF_LIGHT, hypotenuse_from_tof, longitudinal_distance

__all__ = [
    "ACC_GAP_GAIN",
    "ACC_SPEED_GAIN",
    "AccParams",
    "CarConfig",
    "ScenarioConfig",
    "CarState",
    "SimState",
    "TriggeredAction",
    "SimReport",
    "load_scenario",
    "force_same_lane",
    "acc_command",
    "step",
    "run",
    "report_to_dict",
]

ACC_GAP_GAIN = 0.23  # 1/s^2, on spacing error
ACC_SPEED_GAIN = 0.74  # 1/s, on speed error

CAR_LABELS = ("car1", "car2")


@dataclass(frozen=True)
class AccParams:
    """Constant-time-gap spacing policy parameters.

    ``set_speed`` None means "the target car's speed when ACC engages".
    """

    set_speed: float | None = None  # m/s
    time_gap: float = 1.4  # s
    min_gap: float = 10.0  # m
    accel_limit: float = 3.0  # m/s^2, symmetric clip


@dataclass(frozen=True)
class CarConfig:
    model: VehicleModel
    lane: int
    speed: float  # m/s
    acceleration: float  # m/s^2, scripted
    position: float  # m


@dataclass(frozen=True)
class ScenarioConfig:
    cars: tuple[CarConfig, CarConfig]
    lateral_offset: float  # m
    duration: float  # s
    time_step: float = 0.1  # s
    thresholds: Thresholds = field(default_factory=Thresholds)
    acc_params: AccParams = field(default_factory=AccParams)


@dataclass(frozen=True)
class CarState:
    lane: int
    speed: float
    position: float
    acceleration: float  # scripted base acceleration


@dataclass(frozen=True)
class TriggeredAction:
    clock: float
    lane: int
    action: SafetyAction
    target: str


@dataclass(frozen=True)
class SimState:
    cars: tuple[CarState, CarState]
    clock: float = 0.0
    acc_engaged: tuple[tuple[str, float], ...] = ()  # (car label, resolved set speed)
    steering_on: bool = False
    events: tuple[TriggeredAction, ...] = ()
    last_assessment: CrashAssessment | None = None
    last_front: str = "car1"
    last_gap: float = 0.0


# --- scenario loading ---

def _require(data: dict, key: str, kind, where: str):
    field_name = f"{where}.{key}" if where else key
    if key not in data:
        raise SchemaError(field_name, "missing required field")
    value = data[key]
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, kind) or isinstance(value, bool):
        raise SchemaError(field_name, f"expected {kind.__name__}")
    if kind is float and not math.isfinite(value):
        raise SchemaError(field_name, f"must be finite, got {value!r}")
    return value


def _car_config(entry: dict, index: int, base_dir) -> CarConfig:
    where = f"cars[{index}]"
    if not isinstance(entry, dict):
        raise SchemaError(where, "expected an object")
    has_inline = "model" in entry
    has_path = "model_path" in entry
    if has_inline == has_path:
        raise SchemaError(where, "exactly one of 'model' or 'model_path' required")
    try:
        if has_inline:
            model = model_from_dict(entry["model"])
        else:
            path = base_dir / entry["model_path"] if base_dir else entry["model_path"]
            with open(path, "r", encoding="utf-8") as handle:
                model = model_from_dict(json.load(handle))
    except FileNotFoundError:
        raise
    except Exception as exc:
        raise SchemaError(f"{where}.model", f"invalid model: {exc}") from exc
    lane = _require(entry, "lane", int, where)
    if not 1 <= lane <= 6:
        raise SchemaError(f"{where}.lane", f"lane {lane} outside 1..6")
    speed = _require(entry, "speed", float, where)
    if not 0.0 <= speed < SPEED_MAX:
        raise SchemaError(f"{where}.speed", f"speed {speed} outside the modeled range [0, {SPEED_MAX})")
    acceleration = _require(entry, "acceleration", float, where)
    position = _require(entry, "position", float, where)
    return CarConfig(model, lane, speed, acceleration, position)


def load_scenario(path) -> ScenarioConfig:
    """Parse and validate a scenario JSON file."""
    from pathlib import Path

    path = Path(path)
    with open(path, "r", encoding="utf-8") as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as exc:
            raise SchemaError("file", f"not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise SchemaError("file", "top level must be an object")

    cars = data.get("cars")
    if not isinstance(cars, list) or len(cars) != 2:
        raise SchemaError("cars", "exactly two cars required")
    car_configs = tuple(_car_config(entry, i, path.parent) for i, entry in enumerate(cars))

    lateral_offset = _require(data, "lateral_offset", float, "")
    if lateral_offset < 0.0:
        raise SchemaError("lateral_offset", "must be nonnegative")
    duration = _require(data, "duration", float, "")
    time_step = data.get("time_step", 0.1)
    if not isinstance(time_step, (int, float)) or isinstance(time_step, bool) or time_step <= 0.0:
        raise SchemaError("time_step", "must be a positive number")
    if duration < time_step:
        raise SchemaError("duration", f"must be at least one time step ({time_step})")

    thresholds_data = data.get("thresholds", {})
    if not isinstance(thresholds_data, dict):
        raise SchemaError("thresholds", "expected an object")
    try:
        thresholds = Thresholds(**thresholds_data)
    except (TypeError, ValueError) as exc:
        raise SchemaError("thresholds", str(exc)) from exc

    acc_data = data.get("acc_params", {})
    if not isinstance(acc_data, dict):
        raise SchemaError("acc_params", "expected an object")
    try:
        acc_params = AccParams(**acc_data)
    except TypeError as exc:
        raise SchemaError("acc_params", str(exc)) from exc
    if acc_params.accel_limit <= 0 or acc_params.time_gap <= 0 or acc_params.min_gap < 0:
        raise SchemaError("acc_params", "limits must be positive")

    return ScenarioConfig(
        cars=car_configs,
        lateral_offset=float(lateral_offset),
        duration=float(duration),
        time_step=float(time_step),
        thresholds=thresholds,
        acc_params=acc_params,
    )


def force_same_lane(config: ScenarioConfig) -> ScenarioConfig:
    """Both cars moved to the trailing car's initial lane."""
    trail = min(config.cars, key=lambda c: c.position)
    cars = tuple(replace(c, lane=trail.lane) for c in config.cars)
    return replace(config, cars=cars)


# --- ACC policy ---

def acc_command(ego: CarState, lead: CarState, params: AccParams, set_speed: float | None = None) -> float:
    """Constant-time-gap spacing acceleration for the ego car.

    Above the desired gap the ego tracks the set speed; below it a
    proportional law on spacing and speed errors takes over, capped by
    the set-speed term so the ego never accelerates past the set speed.
    The command is clipped to the configured limits.
    """
    gap = lead.position - ego.position
    if gap <= 0.0:
        raise LeadBehindEgo(f"lead is {gap!r} m ahead of ego")
    if set_speed is None:
        set_speed = params.set_speed if params.set_speed is not None else ego.speed
    desired_gap = params.min_gap + params.time_gap * ego.speed
    to_set_speed = ACC_SPEED_GAIN * (set_speed - ego.speed)
    if gap > desired_gap:
        a = to_set_speed
    else:
        spacing = ACC_GAP_GAIN * (gap - desired_gap) + ACC_SPEED_GAIN * (lead.speed - ego.speed)
        a = min(spacing, to_set_speed)
    return float(max(-params.accel_limit, min(params.accel_limit, a)))


# --- stepping ---

def _integrate(car: CarState, accel: float, dt: float) -> CarState:
    """Constant-acceleration kinematics with a stop at v = 0.

    If braking would cross zero speed within the step, the position
    advances only until the stop instead of drifting backward.
    """
    v = car.speed
    if v + accel * dt >= 0.0:
        new_pos = car.position + v * dt + 0.5 * accel * dt * dt
        new_speed = v + accel * dt
    else:
        t_stop = 0.0 if accel >= 0.0 else v / -accel
        new_pos = car.position + v * t_stop + 0.5 * accel * t_stop * t_stop
        new_speed = 0.0
    return replace(car, speed=new_speed, position=new_pos)


def _front_label(cars) -> str:
    return "car1" if cars[0].position >= cars[1].position else "car2"


def _lidar_gap(cars, lateral_offset: float) -> float:
    """Longitudinal gap recovered through the Lidar round trip."""
    separation = abs(cars[0].position - cars[1].position)
    hyp = math.hypot(separation, lateral_offset)
    if hyp <= 0.0:
        return 0.0
    ltime = 2.0 * hyp / SPEED_OF_LIGHT
    # the time-of-flight round trip can land an ulp below the offset when
    # the cars are laterally abreast; the true geometry is consistent
    measured = max(hypotenuse_from_tof(ltime), lateral_offset)
    return longitudinal_distance(measured, lateral_offset)


def step(state: SimState, config: ScenarioConfig, disable_actions: bool = False) -> SimState:
    """One simulation tick: assess, latch actions, command ACC, integrate."""
    cars = state.cars
    front = _front_label(cars)
    gap = _lidar_gap(cars, config.lateral_offset)

    models = tuple(
        cfg.model.with_state(car.lane, car.speed, car.position)
        for cfg, car in zip(config.cars, cars)
    )
    assessment = assess(
        EncounterInput(models[0], models[1], gap, front, config.thresholds)
    )

    acc_engaged = state.acc_engaged
    steering_on = state.steering_on
    events = state.events
    if not disable_actions:
        engaged_labels = {label for label, _ in acc_engaged}
        for action in assessment.actions:
            if action.action is SafetyAction.ACC_ON and action.target not in engaged_labels:
                ego = cars[CAR_LABELS.index(action.target)]
                resolved = (
                    config.acc_params.set_speed
                    if config.acc_params.set_speed is not None
                    else ego.speed
                )
                acc_engaged = acc_engaged + ((action.target, resolved),)
                engaged_labels.add(action.target)
                events = events + (
                    TriggeredAction(state.clock, action.lane, action.action, action.target),
                )
            elif action.action is SafetyAction.LANE_DEPARTURE_AND_STEERING and not steering_on:
                steering_on = True  # signal only; lanes are never moved
                events = events + (
                    TriggeredAction(state.clock, action.lane, action.action, action.target),
                )

    engaged_speed = dict(acc_engaged)
    new_cars = []
    for label, car in zip(CAR_LABELS, cars):
        accel = car.acceleration
        if label in engaged_speed:
            other = cars[1 - CAR_LABELS.index(label)]
            if other.position > car.position:
                accel = acc_command(car, other, config.acc_params, engaged_speed[label])
            else:
                # nothing ahead: plain set-speed tracking, same clip
                limit = config.acc_params.accel_limit
                accel = float(
                    max(-limit, min(limit, ACC_SPEED_GAIN * (engaged_speed[label] - car.speed)))
                )
        new_cars.append(_integrate(car, accel, config.time_step))

    return SimState(
        cars=tuple(new_cars),
        clock=state.clock + config.time_step,
        acc_engaged=acc_engaged,
        steering_on=steering_on,
        events=events,
        last_assessment=assessment,
        last_front=front,
        last_gap=gap,
    )


# --- full runs ---

@dataclass(frozen=True)
class SimReport:
    crash: bool
    crash_time: float | None
    min_gap: float
    min_gap_time: float
    predicted_crash_time: float | None  # absolute clock of the first prediction
    closest_approach_time: float
    triggered_actions: tuple[TriggeredAction, ...]
    timeline: tuple[dict, ...]


def run(config: ScenarioConfig, disable_actions: bool = False) -> SimReport:
    """Step the scenario until its duration or a crash, collecting a report.

    A crash is both cars in the same lane with the longitudinal gap
    closed to zero or less.  An unstable flow-1 gate simply leaves this
    step actionless; the next step resamples the state.
    """
    state = SimState(
        cars=tuple(
            CarState(c.lane, c.speed, c.position, c.acceleration) for c in config.cars
        )
    )
    n_steps = int(math.floor(config.duration / config.time_step + 1e-9))

    def signed_gap(cars, front):
        trail = "car2" if front == "car1" else "car1"
        return (
            cars[CAR_LABELS.index(front)].position
            - cars[CAR_LABELS.index(trail)].position
        )

    timeline = []
    min_gap = signed_gap(state.cars, _front_label(state.cars))
    min_gap_time = 0.0
    crash = False
    crash_time = None
    predicted_crash_time = None

    for _ in range(n_steps):
        before_clock = state.clock
        state = step(state, config, disable_actions=disable_actions)
        entry = {"clock": before_clock, "gap": state.last_gap}
        entry.update(assessment_to_dict(state.last_assessment))
        timeline.append(entry)
        if predicted_crash_time is None and state.last_assessment.t is not None:
            predicted_crash_time = before_clock + state.last_assessment.t

        gap_after = signed_gap(state.cars, state.last_front)
        if gap_after < min_gap:
            min_gap = gap_after
            min_gap_time = state.clock
        same_lane = state.cars[0].lane == state.cars[1].lane
        if same_lane and gap_after <= 0.0:
            crash = True
            crash_time = state.clock
            break

    return SimReport(
        crash=crash,
        crash_time=crash_time,
        min_gap=min_gap,
        min_gap_time=min_gap_time,
        predicted_crash_time=predicted_crash_time,
        closest_approach_time=crash_time if crash else min_gap_time,
        triggered_actions=state.events,
        timeline=tuple(timeline),
    )


def report_to_dict(report: SimReport) -> dict:
    prediction_error = None
    if report.predicted_crash_time is not None:
        prediction_error = report.closest_approach_time - report.predicted_crash_time
    return {
        "crash": report.crash,
        "crash_time": report.crash_time,
        "min_gap": report.min_gap,
        "min_gap_time": report.min_gap_time,
        "predicted_crash_time": report.predicted_crash_time,
        "closest_approach_time": report.closest_approach_time,
        "prediction_error": prediction_error,
        "triggered_actions": [
            {"clock": e.clock, "lane": e.lane, "action": e.action.value, "target": e.target}
            for e in report.triggered_actions
        ],
        "timeline": list(report.timeline),
    }
