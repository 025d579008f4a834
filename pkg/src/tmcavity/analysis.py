"""Scalar diagnostics, conversion-kernel Schmidt analysis, and unit scaling.

The central figure of merit is the unconverted signal energy W_out, the
integral of |S_out|^2 over the window. Selectivity is quantified by driving
the chosen model once per member of an orthonormal input basis, assembling
the linear map from input coefficients to the converted-channel output
(final stored amplitude plus whatever already leaked out), and reading the
singular value spectrum: a rank-1 map converts exactly one temporal mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .cavity import (
    CavityParams,
    CavityTrajectory,
    analytic_conversion,
    simulate_full,
    simulate_reduced,
)
from .errors import InstabilityError, UndefinedResidualError
from .modes import ModeFamily, optimal_input_mode
from .signals import TemporalSignal, normalize, quadrature_weights

SPEED_OF_LIGHT = 299792458.0  # m/s

# A trajectory's W_out is considered settled when the last tenth of the
# window adds less than this fraction of the total.
PLATEAU_TAIL_FRACTION = 1e-3

MODELS = ("full", "reduced", "analytic")

# exp() argument ceiling; beyond this the matched-mode normalization
# overflows double precision and the scan point cannot be evaluated
_EXP_LIMIT = 700.0


@dataclass(frozen=True)
class UnconvertedEnergy:
    """W_out together with a plateau diagnostic.

    ``tail_fraction`` is the share contributed by the last 10 percent of
    the window; ``plateaued`` flags whether it is negligible, i.e. whether
    the window was long enough for W_out to have settled.
    """

    value: float
    tail_fraction: float
    plateaued: bool

    def __float__(self) -> float:
        return self.value


def unconverted_energy(traj: CavityTrajectory) -> UnconvertedEnergy:
    """Integrated |S_out|^2 over the trajectory window."""
    w = quadrature_weights(traj.grid)
    density = w * np.abs(traj.S_out.values) ** 2
    total = float(density.sum())
    tail_start = traj.grid.n_samples - max(traj.grid.n_samples // 10, 1)
    tail = float(density[tail_start:].sum())
    tail_fraction = tail / total if total > 0.0 else 0.0
    return UnconvertedEnergy(
        value=total,
        tail_fraction=tail_fraction,
        plateaued=tail_fraction < PLATEAU_TAIL_FRACTION,
    )


def conservation_residual(traj: CavityTrajectory, params: CavityParams) -> float:
    """Relative photon-number imbalance of a trajectory.

    With no internal loss the input energy must equal the energy still in
    the cavity plus everything that left through the two output channels;
    the nonlinear exchange terms cancel pairwise. Internal loss makes the
    returned value strictly positive.
    """
    w = quadrature_weights(traj.grid)
    e_in = float((w * np.abs(traj.S_in.values) ** 2).sum())
    if e_in <= 0.0:
        raise UndefinedResidualError("zero input energy")
    e_out = float(
        (w * (np.abs(traj.S_out.values) ** 2 + np.abs(traj.C_out.values) ** 2)).sum()
    )
    stored = abs(traj.S.values[-1]) ** 2 + abs(traj.C.values[-1]) ** 2
    return abs(e_in - (stored + e_out)) / e_in


@dataclass(frozen=True, eq=False)
class SchmidtReport:
    """Singular-value decomposition of the input-to-converted-channel map.

    ``response_matrix`` stacks, per basis mode, the final stored amplitude
    on top of the quadrature-weighted leaked converted field, so the squared
    column norm is that mode's converted energy. ``conversion_efficiencies``
    are the squared singular values: converted energy per Schmidt mode under
    unit-energy input. ``input_modes`` are the right singular vectors mapped
    back to time-domain signals, dominant first.
    """

    singular_values: np.ndarray
    conversion_efficiencies: np.ndarray
    input_modes: ModeFamily
    schmidt_number: float
    response_matrix: np.ndarray

    def __post_init__(self):
        sv = np.asarray(self.singular_values, dtype=float)
        if np.any(sv < 0.0) or np.any(np.diff(sv) > 0.0):
            raise ValueError("singular values must be nonnegative and descending")
        if self.schmidt_number < 1.0:
            raise ValueError(f"schmidt_number must be >= 1, got {self.schmidt_number}")


def _converted_response(params, control, mode, model):
    if model == "full":
        traj = simulate_full(params, control, mode)
        return traj.C.values[-1], traj.C_out.values
    if model == "reduced":
        traj = simulate_reduced(params, control, mode)
        return traj.C.values[-1], traj.C_out.values
    if model == "analytic":
        _, c_end = analytic_conversion(params, control, mode)
        return c_end, np.zeros(control.grid.n_samples, dtype=complex)
    raise ValueError(f"model must be one of {MODELS}, got {model!r}")


def green_kernel(
    params: CavityParams,
    control: TemporalSignal,
    basis: ModeFamily,
    model: str = "full",
) -> SchmidtReport:
    """Assemble and decompose the conversion kernel over an input basis.

    Runs the chosen model once per basis mode (the :class:`ModeFamily`
    constructor has already certified orthonormality, so coefficient-space
    column norms are physical energies). The dominant right singular vector
    is the best-converting input reachable within the basis span; for the
    closed-form model the kernel is exactly rank 1.
    """
    if model not in MODELS:
        raise ValueError(f"model must be one of {MODELS}, got {model!r}")
    if len(basis) < 2:
        raise ValueError("basis must contain at least 2 modes")
    sqw = np.sqrt(quadrature_weights(basis.grid))
    cols = []
    for mode in basis:
        c_end, c_leak = _converted_response(params, control, mode, model)
        cols.append(np.concatenate(([c_end], sqw * c_leak)))
    matrix = np.asarray(cols).T

    _, sv, vh = np.linalg.svd(matrix, full_matrices=False)
    efficiencies = sv**2
    quartic = float((sv**4).sum())
    if quartic > 0.0:
        schmidt = float(efficiencies.sum()) ** 2 / quartic
    else:
        schmidt = 1.0  # no conversion channel at all

    signals = []
    for k in range(len(basis)):
        coeffs = np.conj(vh[k])
        vals = np.zeros(basis.grid.n_samples, dtype=complex)
        for j, mode in enumerate(basis):
            vals += coeffs[j] * mode.values
        signals.append(TemporalSignal(basis.grid, vals))

    return SchmidtReport(
        singular_values=sv,
        conversion_efficiencies=efficiencies,
        input_modes=ModeFamily(basis.grid, tuple(signals)),
        schmidt_number=schmidt,
        response_matrix=matrix,
    )


@dataclass(frozen=True)
class AlphaScanResult:
    """Outcome of a coupling-strength sweep with per-point matched inputs."""

    alphas: tuple[float, ...]
    w_out: tuple[float, ...]
    diverged: tuple[bool, ...]
    best_alpha: float
    best_w_out: float


def scan_alpha(
    alpha_grid: Sequence[float],
    *,
    gamma_s: float,
    gamma_c: float,
    control: TemporalSignal,
    kappa_s: float = 0.0,
    kappa_c: float = 0.0,
    model: str = "full",
) -> AlphaScanResult:
    """Sweep the coupling strength, re-deriving the matched input each time.

    The matched input depends on alpha through f_s, so it is rebuilt (and
    unit-normalized on the grid) per point before the run. Points where the
    integration diverges are recorded as NaN and excluded from the argmin;
    ties break toward smaller alpha. For the closed-form model W_out is
    taken as 1 - |C(end)|^2, its lossless energy balance.
    """
    alphas = [float(a) for a in alpha_grid]
    if len(alphas) < 3:
        raise ValueError("alpha grid needs at least 3 points")
    if any(b <= a for a, b in zip(alphas, alphas[1:])):
        raise ValueError("alpha grid must be strictly ascending")
    if model not in MODELS:
        raise ValueError(f"model must be one of {MODELS}, got {model!r}")

    w_list: list[float] = []
    diverged: list[bool] = []
    for a in alphas:
        params = CavityParams(
            gamma_s=gamma_s, gamma_c=gamma_c, alpha=a,
            kappa_s=kappa_s, kappa_c=kappa_c,
        )
        if 2.0 * params.f_s > _EXP_LIMIT:
            w_list.append(math.nan)
            diverged.append(True)
            continue
        mode = normalize(optimal_input_mode(params, control))
        try:
            if model == "analytic":
                _, c_end = analytic_conversion(params, control, mode)
                w = 1.0 - abs(c_end) ** 2
            else:
                run = simulate_full if model == "full" else simulate_reduced
                w = unconverted_energy(run(params, control, mode)).value
            w_list.append(w)
            diverged.append(False)
        except InstabilityError:
            w_list.append(math.nan)
            diverged.append(True)

    best_alpha = math.nan
    best_w = math.inf
    for a, w, bad in zip(alphas, w_list, diverged):
        if not bad and w < best_w:
            best_alpha, best_w = a, w
    if math.isinf(best_w):
        raise InstabilityError("every scan point diverged")
    return AlphaScanResult(
        alphas=tuple(alphas),
        w_out=tuple(w_list),
        diverged=tuple(diverged),
        best_alpha=best_alpha,
        best_w_out=best_w,
    )


@dataclass(frozen=True)
class PhysicalUnitsReport:
    """Dimensionless cavity rates translated into laboratory numbers."""

    unit_time: float
    omega_s: float
    omega_c: float
    rate_s: float
    rate_c: float
    lifetime_s: float
    lifetime_c: float
    Q_s: float
    Q_c: float


def physical_units(
    unit_time: float,
    lambda_s: float,
    lambda_c: float,
    params: CavityParams,
) -> PhysicalUnitsReport:
    """Convert dimensionless out-coupling rates to SI rates and Q factors.

    ``unit_time`` is the physical duration of one simulation time unit in
    seconds; carrier wavelengths are in meters. Q_j = omega_j / (2 rate_j)
    relates the carrier angular frequency to the field decay rate.
    """
    if unit_time <= 0 or lambda_s <= 0 or lambda_c <= 0:
        raise ValueError("unit_time and wavelengths must be positive")
    rate_s = params.gamma_s / unit_time
    rate_c = params.gamma_c / unit_time
    if rate_c <= 0:
        raise ValueError("gamma_c must be positive to report converted-band units")
    omega_s = 2.0 * math.pi * SPEED_OF_LIGHT / lambda_s
    omega_c = 2.0 * math.pi * SPEED_OF_LIGHT / lambda_c
    return PhysicalUnitsReport(
        unit_time=unit_time,
        omega_s=omega_s,
        omega_c=omega_c,
        rate_s=rate_s,
        rate_c=rate_c,
        lifetime_s=1.0 / rate_s,
        lifetime_c=1.0 / rate_c,
        Q_s=omega_s / (2.0 * rate_s),
        Q_c=omega_c / (2.0 * rate_c),
    )
