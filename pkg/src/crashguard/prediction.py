"""The three crash-prediction flows.

Flow 1 turns an encounter into a probable crash time gated on speed
stability; flow 2 propagates both lane chains to that time and multiplies
the marginals into per-lane joint crash probabilities; flow 3 picks the
active-safety action for every lane over the crash threshold by comparing
mean first passage times with the probable crash time.

All functions are pure: none of them loops or resamples, the simulator
owns that.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import NonClosingSpeeds, NotRegular
from .estimation import N_LANES, VehicleModel, speed_bin_index
from .markov import (
    fundamental_matrix,
    limiting_matrix,
    mean_first_passage,
    propagate,
    stationary_distribution,
    unit_vector,
)

__all__ = [
    "SafetyAction",
    "LaneAction",
    "Thresholds",
    "EncounterInput",
    "Flow1Result",
    "CrashAssessment",
    "speed_change_probability",
    "flow1_probable_time",
    "flow2_crash_probabilities",
    "flow3_select_actions",
    "assess",
    "assessment_to_dict",
]

CAR_LABELS = ("car1", "car2")


class SafetyAction(str, enum.Enum):
    NO_ACTION = "none"
    ACC_ON = "acc_on"
    LANE_DEPARTURE_AND_STEERING = "lane_departure_steering"


@dataclass(frozen=True)
class LaneAction:
    """Action selected for one lane; target is the trailing car for ACC,
    "both" for lane-departure/steering.  The m1/m2 entries (seconds) and
    the branch that fired are kept for diagnostics."""

    lane: int
    action: SafetyAction
    target: str
    m1_entry: float
    m2_entry: float
    branch: str  # "m1", "m2", or "else"


@dataclass(frozen=True)
class Thresholds:
    speed_stability: float = 0.5
    crash: float = 0.3

    def __post_init__(self):
        for name, value in (("speed_stability", self.speed_stability), ("crash", self.crash)):
            if not 0.0 < value < 1.0:
                raise ValueError(f"{name} threshold must be in (0, 1), got {value!r}")


@dataclass(frozen=True)
class EncounterInput:
    """Two modeled vehicles, their longitudinal gap, and which one leads."""

    car1: VehicleModel
    car2: VehicleModel
    gap_d: float  # m
    front_car: str  # "car1" or "car2"
    thresholds: Thresholds = field(default_factory=Thresholds)

    def __post_init__(self):
        if self.gap_d < 0.0:
            raise ValueError(f"gap must be nonnegative, got {self.gap_d!r}")
        if self.front_car not in CAR_LABELS:
            raise ValueError(f"front_car must be one of {CAR_LABELS}, got {self.front_car!r}")

    @property
    def trailing_car(self) -> str:
        return "car2" if self.front_car == "car1" else "car1"

    def model(self, label: str) -> VehicleModel:
        return self.car1 if label == "car1" else self.car2


@dataclass(frozen=True)
class Flow1Result:
    t: float  # s
    speed_stable: bool


@dataclass(frozen=True)
class CrashAssessment:
    """Outcome of the composed flows.

    ``pc`` holds raw per-lane products of the two lane marginals (not
    renormalized).  For a non-closing encounter ``t``, ``speed_stable``
    and ``pc`` are None and no actions are emitted.
    """

    t: float | None
    speed_stable: bool | None
    pc: np.ndarray | None
    actions: tuple[LaneAction, ...]

    @property
    def non_closing(self) -> bool:
        return self.t is None


def speed_change_probability(model: VehicleModel) -> float:
    """Probability of leaving the current speed bin in one chain step."""
    k = speed_bin_index(model.current_speed)
    return 1.0 - float(model.speed_chain.entries[k, k])


def flow1_probable_time(encounter: EncounterInput) -> Flow1Result:
    """Probable crash time from the gap and the closing speed.

    The closing speed is trailing minus leading.  Raises NonClosingSpeeds
    when it is not positive (the flow-chart "GOTO START").  Speed
    stability requires both cars' change probability to be under the
    threshold; an unstable result is returned flagged rather than looped,
    the simulator owns the resampling.
    """
    front = encounter.model(encounter.front_car)
    trail = encounter.model(encounter.trailing_car)
    closing = trail.current_speed - front.current_speed
    if closing <= 0.0:
        raise NonClosingSpeeds(f"relative speed {closing!r} is not positive")
    t = encounter.gap_d / closing
    threshold = encounter.thresholds.speed_stability
    stable = (
        speed_change_probability(encounter.car1) < threshold
        and speed_change_probability(encounter.car2) < threshold
    )
    return Flow1Result(t=t, speed_stable=stable)


def flow2_crash_probabilities(car1: VehicleModel, car2: VehicleModel, t: float) -> np.ndarray:
    """Per-lane joint probabilities at time t.

    Propagates each car's current lane through its own lane chain and
    multiplies the marginals element-wise.  The result is NOT a
    distribution; each entry is a standalone joint probability.
    """
    if t < 0.0:
        raise ValueError(f"time must be nonnegative, got {t!r}")
    pi1 = propagate(unit_vector(N_LANES, car1.current_lane - 1), car1.lane_chain, t)
    pi2 = propagate(unit_vector(N_LANES, car2.current_lane - 1), car2.lane_chain, t)
    return pi1.entries * pi2.entries


class _PassageSeconds:
    """Lazy per-car mean first passage times converted to seconds.

    The conversion multiplies chain steps by the model's frame interval.
    Diagonal queries are answered without touching the chain, since the
    defining formula forces them to zero for any chain; the full matrix
    (and therefore regularity) is only required for off-diagonal entries.
    """

    def __init__(self, model: VehicleModel, label: str):
        self._model = model
        self._label = label
        self._seconds = None

    def entry(self, from_lane: int, to_lane: int) -> float:
        if from_lane == to_lane:
            return 0.0
        if self._seconds is None:
            chain = self._model.lane_chain
            try:
                w = stationary_distribution(chain)
            except NotRegular as exc:
                hint = ""
                if self._model.lane_unobserved:
                    hint = f" (unobserved lane rows: {list(self._model.lane_unobserved)})"
                raise NotRegular(f"{self._label}: lane chain is not regular{hint}") from exc
            Z = fundamental_matrix(chain, limiting_matrix(chain))
            M = mean_first_passage(Z, w)
            self._seconds = M.entries * self._model.frame_interval
        return float(self._seconds[from_lane - 1, to_lane - 1])


def flow3_select_actions(
    encounter: EncounterInput, pc: np.ndarray, t: float
) -> tuple[LaneAction, ...]:
    """Select a safety action for every lane whose joint probability is over
    the crash threshold.

    A mean-first-passage entry (in seconds) above t means the car is not
    expected to reach the flagged lane before the crash time: a rear-end
    geometry, so adaptive cruise control goes on for the trailing car.
    Otherwise a sideways collision is possible and lane-departure/steering
    goes on for both cars.
    """
    pc = np.asarray(pc, dtype=float)
    flagged = [k for k in range(N_LANES) if pc[k] >= encounter.thresholds.crash]
    if not flagged:
        return ()
    m1 = _PassageSeconds(encounter.car1, "car1")
    m2 = _PassageSeconds(encounter.car2, "car2")
    i = encounter.car1.current_lane
    j = encounter.car2.current_lane
    actions = []
    for k in flagged:
        lane = k + 1
        m1_entry = m1.entry(i, lane)
        m2_entry = m2.entry(j, lane)
        if m1_entry > t or m2_entry > t:
            actions.append(
                LaneAction(
                    lane=lane,
                    action=SafetyAction.ACC_ON,
                    target=encounter.trailing_car,
                    m1_entry=m1_entry,
                    m2_entry=m2_entry,
                    branch="m1" if m1_entry > t else "m2",
                )
            )
        else:
            actions.append(
                LaneAction(
                    lane=lane,
                    action=SafetyAction.LANE_DEPARTURE_AND_STEERING,
                    target="both",
                    m1_entry=m1_entry,
                    m2_entry=m2_entry,
                    branch="else",
                )
            )
    return tuple(actions)


def assess(encounter: EncounterInput) -> CrashAssessment:
    """Run flows 1 to 3 on one encounter.

    Non-closing speeds yield an empty assessment.  An unstable speed gate
    still reports t and pc but emits no actions; the later flows only
    run once speeds are stable, and the caller is expected to resample.
    """
    try:
        flow1 = flow1_probable_time(encounter)
    except NonClosingSpeeds:
        return CrashAssessment(t=None, speed_stable=None, pc=None, actions=())
    pc = flow2_crash_probabilities(encounter.car1, encounter.car2, flow1.t)
    actions = flow3_select_actions(encounter, pc, flow1.t) if flow1.speed_stable else ()
    return CrashAssessment(t=flow1.t, speed_stable=flow1.speed_stable, pc=pc, actions=actions)


def assessment_to_dict(assessment: CrashAssessment) -> dict:
    """JSON-ready form: t, speed_stable, pc, actions, and diagnostics for
    the highest-probability flagged lane."""
    actions = [
        {"lane": a.lane, "action": a.action.value, "target": a.target}
        for a in assessment.actions
    ]
    diagnostics = None
    if assessment.actions:
        top = max(assessment.actions, key=lambda a: assessment.pc[a.lane - 1])
        diagnostics = {
            "lane": top.lane,
            "m1_entry": top.m1_entry,
            "m2_entry": top.m2_entry,
            "branch": top.branch,
        }
    return {
        "t": assessment.t,
        "speed_stable": assessment.speed_stable,
        "pc": None if assessment.pc is None else [float(x) for x in assessment.pc],
        "actions": actions,
        "diagnostics": diagnostics,
    }
