#!/usr/bin/env python3
"""Regenerate test fixture data and CLI golden files.

Sample data is computed inline from the model formula (independent of the
library's probe module); golden files are produced by the CLI itself and
checked in, so regenerating after an intentional output change refreshes
them in one step:

    python scripts/make_fixtures.py
"""

from __future__ import annotations

import io
import json
import math
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "tests" / "data"
GOLDEN = ROOT / "tests" / "golden"

HBAR_EV_S = 6.582119569e-16
PLANCK_ENERGY_EV = 1.22e28


def write_scenarios() -> None:
    base_signals = [
        {"from": 0, "to": 1, "kind": "light"},
        {"from": 1, "to": 0, "kind": "light"},
        {"from": 0, "to": 2, "kind": "light"},
        {"from": 0, "to": 2, "kind": "light", "two_way": True},
        {"from": 0, "to": 1, "kind": "instantaneous"},
    ]
    scenarios = {
        "scenario_rest.json": {
            "beta": 0.0,
            "node_positions": [0.0, 1.0, 2.5],
            "protocol": "einstein",
            "signals": base_signals,
        },
        "scenario_drift06.json": {
            "beta": 0.6,
            "node_positions": [0.0, 1.0, 2.5],
            "protocol": "superluminal",
            "signals": base_signals,
        },
        "scenario_bad_positions.json": {
            "beta": 0.3,
            "node_positions": [1.0, 1.0],
            "protocol": "einstein",
            "signals": [],
        },
    }
    for name, payload in scenarios.items():
        (DATA / name).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def write_collapse_samples() -> None:
    def rows(beta0, velocities, delta_E=1.0):
        for u in velocities:
            w = (u - beta0) / (1.0 - u * beta0)
            gamma = 1.0 / math.sqrt(1.0 - w * w)
            t_c = gamma * HBAR_EV_S * PLANCK_ENERGY_EV / delta_E**2
            yield f"{delta_E!r},{u!r},{t_c!r},\n"

    velocities = [-0.8 + 0.1 * i for i in range(17)]
    with open(DATA / "collapse_samples_beta03.csv", "w", encoding="utf-8") as fh:
        fh.write("delta_E,lab_beta,t_c,sigma\n")
        fh.writelines(rows(0.3, velocities))

    with open(DATA / "collapse_samples_single_velocity.csv", "w", encoding="utf-8") as fh:
        fh.write("delta_E,lab_beta,t_c,sigma\n")
        fh.writelines(rows(0.0, [0.2] * 5))


#: The documented example commands; tests/golden mirrors this list.
GOLDEN_COMMANDS = {
    "transform_lorentz_rest.json": [
        "transform", "--preset", "lorentz", "--beta", "0", "--event", "1,0,0,0",
    ],
    "transform_superluminal_06.json": [
        "transform", "--preset", "superluminal", "--beta", "0.6", "--event", "1,0,0,0",
    ],
    "transform_explicit_06.json": [
        "transform", "--beta", "0.6", "--k", "0", "--k-prime", "-0.6",
        "--event", "1,0,0,0",
    ],
    "oneway_k06.json": ["oneway", "--k", "0.6"],
    "sync_rest_einstein.json": [
        "sync", "--scenario", str(DATA / "scenario_rest.json"),
    ],
    "sync_drift06_superluminal.json": [
        "sync", "--scenario", str(DATA / "scenario_drift06.json"),
    ],
    "sync_drift06_external.json": [
        "sync", "--scenario", str(DATA / "scenario_drift06.json"),
        "--protocol", "external-regulation",
    ],
    "sync_drift06_measurements.csv": [
        "sync", "--scenario", str(DATA / "scenario_drift06.json"), "--format", "csv",
    ],
    "scan_small.csv": [
        "scan", "--beta-min", "-0.5", "--beta-max", "0.5", "--step", "0.25",
    ],
    "scan_wide.csv": [
        "scan", "--beta-min", "-0.9", "--beta-max", "0.9", "--step", "0.1",
    ],
    "probe_beta03.json": [
        "probe", "--samples", str(DATA / "collapse_samples_beta03.csv"),
        "--beta-min", "-0.9", "--beta-max", "0.9", "--step", "0.01",
    ],
}


def write_goldens() -> None:
    sys.path.insert(0, str(ROOT / "src"))
    from synchrony_lab import cli

    for name, argv in GOLDEN_COMMANDS.items():
        out = io.StringIO()
        code = cli.main(argv, stdout=out, stderr=sys.stderr)
        if code != 0:
            raise SystemExit(f"golden command failed ({code}): {argv}")
        (GOLDEN / name).write_text(out.getvalue(), encoding="utf-8")
        print(f"wrote {name}")


def main() -> None:
    DATA.mkdir(parents=True, exist_ok=True)
    GOLDEN.mkdir(parents=True, exist_ok=True)
    write_scenarios()
    write_collapse_samples()
    write_goldens()


if __name__ == "__main__":
    main()
