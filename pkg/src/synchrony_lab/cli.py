"""Command-line front end: transforms, sync runs, scans, and probe fits.

All commands are deterministic batch runs: the same invocation produces
byte-identical output.  Numbers are printed with a configurable number of
significant digits (default 15).  Instantaneous speeds serialize as "inf".
Setting the environment variable ``SYNCHRONY_LAB_C`` rescales printed
speed-valued fields (and only those) into SI units.

Exit codes: 0 success, 2 degenerate convention (or usage error), 3 invalid
input file or parameters, 4 ill-conditioned fit.  Every error path writes a
single machine-parsable line ``error_code key=value ...`` to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field

from . import kinematics, probe, syncsim
from .errors import DegenerateConvention, IllConditioned

PRESETS = ("lorentz", "superluminal")

EXIT_OK = 0
EXIT_DEGENERATE = 2
EXIT_INVALID_INPUT = 3
EXIT_ILL_CONDITIONED = 4


@dataclass(frozen=True)
class RunConfig:
    """One reproducible batch run; identical configs yield identical bytes."""

    command: str
    parameters: dict = field(default_factory=dict)
    seed: int | None = None
    output: str = "json"
    precision: int = 15


class Formatter:
    """Renders numbers at a fixed significant-digit budget."""

    def __init__(self, digits: int):
        if not (1 <= digits <= 17):
            raise ValueError("precision must be between 1 and 17 digits")
        self.digits = digits

    def num(self, value: float):
        """JSON-ready value: rounded float, or 'inf'/'-inf' strings."""
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        rounded = float(f"{value:.{self.digits}g}")
        return rounded + 0.0  # normalize -0.0

    def text(self, value: float) -> str:
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value + 0.0:.{self.digits}g}"


def _speed_scale() -> float:
    raw = os.environ.get("SYNCHRONY_LAB_C")
    if raw is None:
        return 1.0
    try:
        value = float(raw)
    except ValueError:
        raise ValueError(f"SYNCHRONY_LAB_C must be a number, got {raw!r}") from None
    if not (math.isfinite(value) and value > 0):
        raise ValueError("SYNCHRONY_LAB_C must be positive and finite")
    return value


def _scaled(speed: float, scale: float) -> float:
    if math.isinf(speed):
        return speed
    return speed * scale


def _emit_json(stream, payload: dict) -> None:
    stream.write(json.dumps(payload, indent=2))
    stream.write("\n")


def _csv_writer(stream):
    return csv.writer(stream, lineterminator="\n")


def _parse_event(text: str) -> kinematics.Event:
    parts = text.split(",")
    if len(parts) not in (2, 3, 4):
        raise ValueError("event must be 't,x', 't,x,y' or 't,x,y,z'")
    values = [float(p) for p in parts] + [0.0] * (4 - len(parts))
    return kinematics.Event(t=values[0], x=values[1], y=values[2], z=values[3])


def _event_dict(e: kinematics.Event, fmt: Formatter) -> dict:
    return {
        "t": fmt.num(e.t),
        "x": fmt.num(e.x),
        "y": fmt.num(e.y),
        "z": fmt.num(e.z),
        "chart": e.chart,
    }


def cmd_transform(config: RunConfig, stream) -> int:
    fmt = Formatter(config.precision)
    p = config.parameters
    beta = p["beta"]
    preset = p.get("preset")
    if preset == "lorentz":
        k, k_prime = 0.0, 0.0
    elif preset == "superluminal":
        k, k_prime = 0.0, kinematics.induced_synchrony(0.0, beta)
    else:
        k = p.get("k") if p.get("k") is not None else 0.0
        k_prime = p.get("k_prime") if p.get("k_prime") is not None else 0.0

    source = _parse_event(p["event"])
    coeffs = kinematics.edwards_coeffs(beta, k, k_prime)
    image = coeffs.apply(source, chart=p.get("chart_to", "S'"))

    payload = {
        "command": "transform",
        "parameters": {"beta": fmt.num(beta), "k": fmt.num(k), "k_prime": fmt.num(k_prime)},
        "source": _event_dict(source, fmt),
        "image": _event_dict(image, fmt),
        "coefficients": {
            "a_tt": fmt.num(coeffs.a_tt),
            "a_tx": fmt.num(coeffs.a_tx),
            "a_xt": fmt.num(coeffs.a_xt),
            "a_xx": fmt.num(coeffs.a_xx),
        },
    }
    if config.output == "csv":
        writer = _csv_writer(stream)
        writer.writerow(
            ["source_t", "source_x", "source_y", "source_z",
             "image_t", "image_x", "image_y", "image_z",
             "a_tt", "a_tx", "a_xt", "a_xx"]
        )
        writer.writerow(
            [fmt.text(v) for v in (source.t, source.x, source.y, source.z,
                                   image.t, image.x, image.y, image.z,
                                   coeffs.a_tt, coeffs.a_tx, coeffs.a_xt, coeffs.a_xx)]
        )
    else:
        _emit_json(stream, payload)
    return EXIT_OK


def cmd_oneway(config: RunConfig, stream) -> int:
    fmt = Formatter(config.precision)
    scale = _speed_scale()
    k = config.parameters["k"]
    c_plus = kinematics.one_way_speed(k, kinematics.PLUS_X)
    c_minus = kinematics.one_way_speed(k, kinematics.MINUS_X)
    two_way = kinematics.C
    if config.output == "csv":
        writer = _csv_writer(stream)
        writer.writerow(["k", "c_plus", "c_minus", "two_way_mean"])
        writer.writerow(
            [fmt.text(k)]
            + [fmt.text(_scaled(v, scale)) for v in (c_plus, c_minus, two_way)]
        )
    else:
        _emit_json(
            stream,
            {
                "command": "oneway",
                "k": fmt.num(k),
                "c_plus": fmt.num(_scaled(c_plus, scale)),
                "c_minus": fmt.num(_scaled(c_minus, scale)),
                "two_way_mean": fmt.num(_scaled(two_way, scale)),
            },
        )
    return EXIT_OK


def _measurement_dict(row: syncsim.MeasurementRow, fmt: Formatter, scale: float) -> dict:
    m = row.result
    return {
        "from": row.spec.source,
        "to": row.spec.target,
        "kind": row.spec.kind,
        "direction": m.direction,
        "distance": fmt.num(m.distance),
        "elapsed": fmt.num(m.elapsed),
        "speed": fmt.num(_scaled(m.speed, scale)),
    }


def cmd_sync(config: RunConfig, stream) -> int:
    fmt = Formatter(config.precision)
    scale = _speed_scale()
    p = config.parameters
    scenario = syncsim.load_scenario(p["scenario"])
    report = syncsim.run_scenario(
        scenario, protocol=p.get("protocol"), master=p.get("master", 0)
    )
    if config.output == "csv":
        writer = _csv_writer(stream)
        writer.writerow(["beta", "protocol", "direction", "distance", "elapsed", "speed"])
        for row in report.measurements:
            m = row.result
            writer.writerow(
                [fmt.text(report.beta), report.protocol, m.direction,
                 fmt.text(m.distance), fmt.text(m.elapsed),
                 fmt.text(_scaled(m.speed, scale))]
            )
    elif config.output == "jsonl":
        for row in report.measurements:
            record = {"beta": fmt.num(report.beta), "protocol": report.protocol}
            record.update(_measurement_dict(row, fmt, scale))
            stream.write(json.dumps(record))
            stream.write("\n")
    else:
        _emit_json(
            stream,
            {
                "command": "sync",
                "beta": fmt.num(report.beta),
                "protocol": report.protocol,
                "realized_k": fmt.num(report.realized_k),
                "clock_rate": fmt.num(report.clock_rate),
                "offsets": [
                    {"node": node_id, "offset": fmt.num(offset)}
                    for node_id, offset in report.offsets
                ],
                "measurements": [
                    _measurement_dict(row, fmt, scale) for row in report.measurements
                ],
            },
        )
    return EXIT_OK


def _grid(lo: float, hi: float, step: float) -> list[float]:
    if step <= 0:
        raise ValueError("step must be positive")
    if hi < lo:
        raise ValueError("grid maximum is below its minimum")
    count = max(int(math.floor((hi - lo) / step + 1e-9)) + 1, 1)
    return [lo + i * step for i in range(count)]


def cmd_scan(config: RunConfig, stream) -> int:
    fmt = Formatter(config.precision)
    scale = _speed_scale()
    p = config.parameters
    betas = _grid(p["beta_min"], p["beta_max"], p["step"])
    if any(abs(b) >= 1.0 for b in betas):
        raise ValueError("scan range must stay within (-1, 1)")
    points = syncsim.isotropy_scan(betas)
    best = min(points, key=lambda pt: abs(pt.anisotropy))
    if config.output == "json":
        _emit_json(
            stream,
            {
                "command": "scan",
                "points": [
                    {
                        "beta": fmt.num(pt.beta),
                        "c_plus": fmt.num(_scaled(pt.c_plus, scale)),
                        "c_minus": fmt.num(_scaled(pt.c_minus, scale)),
                        "anisotropy": fmt.num(_scaled(pt.anisotropy, scale)),
                    }
                    for pt in points
                ],
                "argmin": {
                    "beta": fmt.num(best.beta),
                    "anisotropy": fmt.num(_scaled(best.anisotropy, scale)),
                },
            },
        )
    else:
        writer = _csv_writer(stream)
        writer.writerow(["beta", "c_plus", "c_minus", "anisotropy"])
        for pt in points:
            writer.writerow(
                [fmt.text(pt.beta)]
                + [fmt.text(_scaled(v, scale))
                   for v in (pt.c_plus, pt.c_minus, pt.anisotropy)]
            )
        stream.write(
            f"# argmin beta={fmt.text(best.beta)} "
            f"anisotropy={fmt.text(_scaled(best.anisotropy, scale))}\n"
        )
    return EXIT_OK


def cmd_probe(config: RunConfig, stream) -> int:
    fmt = Formatter(config.precision)
    p = config.parameters
    samples = probe.load_samples(p["samples"])
    grid = _grid(p["beta_min"], p["beta_max"], p["step"])
    if any(abs(b) >= 1.0 for b in grid):
        raise ValueError("probe grid must stay within (-1, 1)")
    beta_hat, report = probe.estimate_absolute_frame(samples, grid)
    payload = {"command": "probe"}
    raw = report.to_dict()
    payload.update(
        {
            "beta_hat": fmt.num(raw["beta_hat"]),
            "grid_beta_hat": fmt.num(raw["grid_beta_hat"]),
            "refined": raw["refined"],
            "scale": fmt.num(raw["scale"]),
            "n_samples": raw["n_samples"],
            "distinct_velocities": raw["distinct_velocities"],
            "velocity_composition": raw["velocity_composition"],
            "constants": {
                "hbar": fmt.num(raw["constants"]["hbar"]),
                "planck_energy": fmt.num(raw["constants"]["planck_energy"]),
                "units": raw["constants"]["units"],
            },
            "residual_curve": [
                {"beta": fmt.num(b), "residual": fmt.num(r)}
                for b, r in zip(raw["beta_grid"], raw["residuals"])
            ],
        }
    )
    _emit_json(stream, payload)
    return EXIT_OK


_HANDLERS = {
    "transform": cmd_transform,
    "oneway": cmd_oneway,
    "sync": cmd_sync,
    "scan": cmd_scan,
    "probe": cmd_probe,
}


def run(config: RunConfig, stream) -> int:
    """Dispatch a RunConfig; deterministic for identical configs."""
    return _HANDLERS[config.command](config, stream)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="synchrony-lab",
        description="Synchrony-convention kinematics, clock-sync simulation, and frame probes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    tr = sub.add_parser("transform", help="apply a convention boost to one event")
    tr.add_argument("--event", required=True, help="comma-separated t,x[,y[,z]]")
    tr.add_argument("--beta", type=float, required=True)
    tr.add_argument("--k", type=float, default=None)
    tr.add_argument("--k-prime", dest="k_prime", type=float, default=None)
    tr.add_argument("--preset", choices=PRESETS, default=None)
    tr.add_argument("--format", choices=("json", "csv"), default="json")
    tr.add_argument("--precision", type=int, default=15)

    ow = sub.add_parser("oneway", help="closed-form one-way speeds for a convention")
    ow.add_argument("--k", type=float, required=True)
    ow.add_argument("--format", choices=("json", "csv"), default="json")
    ow.add_argument("--precision", type=int, default=15)

    sy = sub.add_parser("sync", help="run a synchronization scenario file")
    sy.add_argument("--scenario", required=True)
    sy.add_argument("--protocol", choices=syncsim.PROTOCOLS, default=None)
    sy.add_argument("--master", type=int, default=0)
    sy.add_argument("--format", choices=("json", "csv", "jsonl"), default="json")
    sy.add_argument("--precision", type=int, default=15)

    sc = sub.add_parser("scan", help="anisotropy scan over candidate drift velocities")
    sc.add_argument("--beta-min", dest="beta_min", type=float, required=True)
    sc.add_argument("--beta-max", dest="beta_max", type=float, required=True)
    sc.add_argument("--step", type=float, required=True)
    sc.add_argument("--format", choices=("csv", "json"), default="csv")
    sc.add_argument("--precision", type=int, default=15)

    pr = sub.add_parser("probe", help="fit the preferred-frame velocity from samples")
    pr.add_argument("--samples", required=True)
    pr.add_argument("--beta-min", dest="beta_min", type=float, default=-0.9)
    pr.add_argument("--beta-max", dest="beta_max", type=float, default=0.9)
    pr.add_argument("--step", type=float, default=0.01)
    pr.add_argument("--format", choices=("json",), default="json")
    pr.add_argument("--precision", type=int, default=15)
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    skip = {"command", "format", "precision"}
    parameters = {k: v for k, v in vars(args).items() if k not in skip}
    return RunConfig(
        command=args.command,
        parameters=parameters,
        output=args.format,
        precision=args.precision,
    )


def _fail(stderr, code: int, error_code: str, **fields) -> int:
    pairs = " ".join(f"{k}={v}" for k, v in fields.items())
    stderr.write(f"{error_code} {pairs}".rstrip() + "\n")
    return code


def main(argv=None, *, stdout=None, stderr=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "transform" and args.preset is not None:
        if args.k is not None or args.k_prime is not None:
            parser.error("--preset conflicts with explicit --k/--k-prime")
    config = _config_from_args(args)

    buffer = io.StringIO()
    try:
        code = run(config, buffer)
    except DegenerateConvention as exc:
        return _fail(stderr, EXIT_DEGENERATE, "degenerate_convention",
                     beta=exc.beta, k=exc.k)
    except syncsim.ScenarioError as exc:
        return _fail(stderr, EXIT_INVALID_INPUT, "scenario_invalid",
                     invariant=exc.invariant, field=exc.field_name)
    except IllConditioned as exc:
        return _fail(stderr, EXIT_ILL_CONDITIONED, "ill_conditioned",
                     reason=str(exc).replace(" ", "_"))
    except (OSError, json.JSONDecodeError) as exc:
        return _fail(stderr, EXIT_INVALID_INPUT, "file_invalid",
                     reason=type(exc).__name__)
    except ValueError as exc:
        return _fail(stderr, EXIT_INVALID_INPUT, "invalid_input",
                     reason=str(exc).replace(" ", "_"))
    stdout.write(buffer.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())
