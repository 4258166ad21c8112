"""Collapse-time model and the grid estimator for the preferred frame.

The model: a wave function with energy spread ``delta_E`` collapses after

    t_c = gamma * hbar * E_p / delta_E**2,    gamma = 1/sqrt(1 - beta^2),

where ``beta`` is the laboratory's velocity relative to the preferred frame
and ``E_p`` is the Planck energy.  Collapse is fastest in the preferred
frame itself, so fitting measured collapse times against laboratory
velocity and finding where the fitted curve bottoms out estimates that
frame's velocity.

Only the shape of the curve is identified: the proportionality constant is
absorbed into a per-candidate least-squares scale, and samples taken at
different ``delta_E`` are first normalized by ``delta_E**2``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import IllConditioned

#: Reduced Planck constant in eV*s (CODATA).
HBAR_EV_S = 6.582119569e-16

#: Planck energy in eV (1.22e19 GeV).
PLANCK_ENERGY_EV = 1.22e28


@dataclass(frozen=True)
class CollapseModel:
    """Constants of the collapse-time formula; energies in one unit system."""

    hbar: float = HBAR_EV_S
    planck_energy: float = PLANCK_ENERGY_EV
    units: str = "eV,s"

    def __post_init__(self):
        if not (self.hbar > 0.0 and self.planck_energy > 0.0):
            raise ValueError("collapse model constants must be positive")


@dataclass(frozen=True)
class CollapseSample:
    """One observed collapse time at a known laboratory velocity."""

    delta_E: float
    beta: float
    t_c: float
    sigma: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.delta_E) and self.delta_E > 0.0):
            raise ValueError("delta_E must be positive")
        if not (math.isfinite(self.t_c) and self.t_c > 0.0):
            raise ValueError("t_c must be positive")
        if not (math.isfinite(self.beta) and abs(self.beta) < 1.0):
            raise ValueError("|beta| must be < 1")


def collapse_time(model: CollapseModel, delta_E: float, beta: float) -> float:
    """gamma * hbar * E_p / delta_E^2; the beta = 0 case is the rest formula.

    Strictly increasing in |beta| and exactly quartic-inverse in delta_E:
    doubling delta_E divides the result by four.
    """
    if not (math.isfinite(delta_E) and delta_E > 0.0):
        raise ValueError(f"delta_E must be positive, got {delta_E!r}")
    if not (math.isfinite(beta) and abs(beta) < 1.0):
        raise ValueError(f"|beta| must be < 1, got {beta!r}")
    gamma = 1.0 / math.sqrt(1.0 - beta * beta)
    return gamma * model.hbar * model.planck_energy / (delta_E * delta_E)


@dataclass(frozen=True)
class FitReport:
    """Everything the estimator decided, constants stamped in."""

    beta_hat: float
    grid_beta_hat: float
    refined: bool
    scale: float
    beta_grid: tuple[float, ...]
    residuals: tuple[float, ...]
    n_samples: int
    distinct_velocities: int
    velocity_composition: str
    hbar: float
    planck_energy: float
    units: str

    def predict_scaled(self, beta_lab: float) -> float:
        """Fitted delta_E^2-normalized collapse time at a lab velocity."""
        w = (beta_lab - self.beta_hat) / (1.0 - beta_lab * self.beta_hat)
        return self.scale / math.sqrt(1.0 - w * w)

    def to_dict(self) -> dict:
        return {
            "beta_hat": self.beta_hat,
            "grid_beta_hat": self.grid_beta_hat,
            "refined": self.refined,
            "scale": self.scale,
            "n_samples": self.n_samples,
            "distinct_velocities": self.distinct_velocities,
            "velocity_composition": self.velocity_composition,
            "constants": {
                "hbar": self.hbar,
                "planck_energy": self.planck_energy,
                "units": self.units,
            },
            "beta_grid": list(self.beta_grid),
            "residuals": list(self.residuals),
        }


def _parabolic_vertex(bs: np.ndarray, rs: np.ndarray) -> float | None:
    """Vertex of the quadratic through three points; None if not a minimum."""
    a, b, _ = np.polyfit(bs, rs, 2)
    if a <= 0.0:
        return None
    vertex = -b / (2.0 * a)
    if not (bs[0] <= vertex <= bs[2]):
        return None
    return float(vertex)


def estimate_absolute_frame(
    samples, beta_grid, model: CollapseModel | None = None
) -> tuple[float, FitReport]:
    """Locate the preferred-frame velocity from collapse-time samples.

    For each candidate ``b`` on the grid the samples' lab velocities are
    composed relativistically with ``b`` (u ominus b = (u - b)/(1 - u*b)),
    the gamma curve is scaled to the delta_E^2-normalized times by least
    squares, and the squared residual is recorded.  The grid argmin gets one
    step of parabolic refinement through its neighbors.  Deterministic by
    construction: no optimizer, grid order fixed.

    Raises :class:`IllConditioned` when fewer than three distinct lab
    velocities are present (the curve's location and scale would be
    unconstrained or untestable).
    """
    samples = list(samples)
    grid = np.asarray(list(beta_grid), dtype=float)
    if grid.size == 0:
        raise ValueError("beta_grid must be non-empty")
    if np.any(np.abs(grid) >= 1.0):
        raise ValueError("beta_grid values must satisfy |beta| < 1")
    if model is None:
        model = CollapseModel()

    u = np.array([s.beta for s in samples], dtype=float)
    y = np.array([s.t_c * s.delta_E**2 for s in samples], dtype=float)
    distinct = np.unique(u).size
    if len(samples) < 3 or distinct < 3:
        raise IllConditioned(
            f"need at least 3 samples at 3 distinct velocities, "
            f"got {len(samples)} samples at {distinct}"
        )

    w = (u[None, :] - grid[:, None]) / (1.0 - u[None, :] * grid[:, None])
    g = 1.0 / np.sqrt(1.0 - w * w)
    gy = g @ y
    gg = np.sum(g * g, axis=1)
    scales = gy / gg
    residuals = float(y @ y) - gy * gy / gg
    residuals = np.maximum(residuals, 0.0)  # clip rounding just below zero

    i = int(np.argmin(residuals))
    beta_hat = float(grid[i])
    refined = False
    if 0 < i < grid.size - 1:
        vertex = _parabolic_vertex(grid[i - 1 : i + 2], residuals[i - 1 : i + 2])
        if vertex is not None:
            beta_hat = vertex
            refined = True

    report = FitReport(
        beta_hat=beta_hat,
        grid_beta_hat=float(grid[i]),
        refined=refined,
        scale=float(scales[i]),
        beta_grid=tuple(float(b) for b in grid),
        residuals=tuple(float(r) for r in residuals),
        n_samples=len(samples),
        distinct_velocities=int(distinct),
        velocity_composition="relativistic-subtraction",
        hbar=model.hbar,
        planck_energy=model.planck_energy,
        units=model.units,
    )
    return beta_hat, report


def load_samples(path) -> list[CollapseSample]:
    """Read samples from CSV with columns delta_E, lab_beta, t_c, sigma.

    The sigma column may be empty.  Raises ValueError on malformed rows.
    """
    required = ("delta_E", "lab_beta", "t_c")
    samples = []
    with open(Path(path), newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or any(c not in reader.fieldnames for c in required):
            raise ValueError(f"sample file must have columns {', '.join(required)}")
        for lineno, row in enumerate(reader, start=2):
            try:
                sigma_raw = (row.get("sigma") or "").strip()
                samples.append(
                    CollapseSample(
                        delta_E=float(row["delta_E"]),
                        beta=float(row["lab_beta"]),
                        t_c=float(row["t_c"]),
                        sigma=float(sigma_raw) if sigma_raw else None,
                    )
                )
            except (TypeError, ValueError) as exc:
                raise ValueError(f"bad sample on line {lineno}: {exc}") from None
    if not samples:
        raise ValueError("sample file contains no rows")
    return samples
