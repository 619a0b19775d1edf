#!/usr/bin/env python3
"""Replay the three bundled scenarios and summarize their reports.

Run from the repo root:  python3 demos/04_simulate_scenarios.py
"""

import dataclasses
import importlib.resources

from crashguard import force_same_lane, load_scenario, run

DATA = importlib.resources.files("crashguard") / "data"


def summarize(title, report):
    print(f"--- {title} ---")
    print(f"crash: {report.crash}" + (f" at {report.crash_time:.2f} s" if report.crash else ""))
    print(f"min gap {report.min_gap:.2f} m at {report.min_gap_time:.2f} s")
    if report.predicted_crash_time is not None:
        print(
            f"first predicted crash clock {report.predicted_crash_time:.2f} s, "
            f"actual closest approach {report.closest_approach_time:.2f} s"
        )
    if report.triggered_actions:
        for event in report.triggered_actions:
            print(
                f"t={event.clock:5.2f} s: lane {event.lane} -> "
                f"{event.action.value} for {event.target}"
            )
    else:
        print("no actions triggered")
    print()


for name in ("scenario1", "scenario2", "scenario3"):
    config = load_scenario(str(DATA / f"{name}.json"))
    summarize(name, run(config))

# scenario 1 again, with the safety systems off and both cars in lane 5:
# the constant-speed closure crashes a little after d/V = 4 s because the
# front car is still accelerating away at 0.6 m/s^2
config = force_same_lane(load_scenario(str(DATA / "scenario1.json")))
summarize("scenario1, actions disabled, same lane", run(config, disable_actions=True))

# and the textbook variant with the acceleration zeroed: crash at exactly d/V
config = dataclasses.replace(
    config, cars=tuple(dataclasses.replace(c, acceleration=0.0) for c in config.cars)
)
summarize("scenario1, actions disabled, same lane, no acceleration",
          run(config, disable_actions=True))
