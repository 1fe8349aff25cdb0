"""Lateral electron trap from a non-uniform neon layer.

The thickness profile L(rho) maps, through the local-thickness
approximation, onto a lateral potential V_par(rho) = W^G(L(rho)) - W^G(L0)
built from a spline of ground-state energies.  The radial Schroedinger
equation for each angular momentum alpha is discretized with a cylindrical
finite-volume scheme, symmetrized by u = sqrt(rho) R, and the lowest
eigenvalue per alpha yields the qubit spectrum U_alpha, Delta U = U1 - U0.
"""

from __future__ import annotations

import concurrent.futures
import math
import warnings
from dataclasses import dataclass, replace

import numpy as np
import scipy.interpolate
import scipy.linalg

from .constants import DEFAULT_CONSTANTS, PhysicalConstants
from .dielectric import DielectricStack, FieldSpec
from .perpendicular import Grid1D, ground_state_energy, mean_height, solve_perpendicular


class CurveValidationError(RuntimeError):
    """Energy-curve spline failed its held-out validation budget."""


class ModelInvalidError(ValueError):
    """Harmonic field model evaluated where the trap is destroyed."""


@dataclass(frozen=True)
class PillarProfile:
    """Smoothed-step thickness over a substrate nanopillar of radius R.

    L(rho) = L0 - (dL/2) * (1 - (rho - R)/sqrt((rho - R)^2 + b^2)):
    thickness L0 - dL over the pillar, L0 far outside, transition width b.
    """

    L0: float
    delta_L: float
    R: float
    b: float

    def __post_init__(self):
        if not 0.0 < self.delta_L < self.L0:
            raise ValueError("need 0 < delta_L < L0")
        if self.R <= 0.0 or self.b <= 0.0:
            raise ValueError("R and b must be positive")


@dataclass(frozen=True)
class QuadraticProfile:
    """Smooth parabolic thickening, L(rho) = L0 (1 + beta0 rho^2)."""

    L0: float
    beta0: float

    def __post_init__(self):
        if self.beta0 <= 0.0:
            raise ValueError("beta0 must be positive")


ThicknessProfile = PillarProfile | QuadraticProfile


def thickness_at(profile: ThicknessProfile, rho):
    """Local layer thickness L(rho) in nm; rho >= 0, scalar or array."""
    r = np.asarray(rho, dtype=float)
    if np.any(r < 0.0):
        raise ValueError("rho must be non-negative")
    if isinstance(profile, PillarProfile):
        x = r - profile.R
        out = profile.L0 - 0.5 * profile.delta_L * (1.0 - x / np.hypot(x, profile.b))
    else:
        out = profile.L0 * (1.0 + profile.beta0 * r * r)
    return float(out) if np.isscalar(rho) else out


class EnergyCurve:
    """Cubic-spline interpolant of W^G(L) at fixed substrate and field.

    Knots are solved directly; construction validates the spline against
    fresh solves at held-out midpoints (budget 0.01 meV).
    """

    VALIDATION_BUDGET_MEV = 0.01

    def __init__(self, stack_template: DielectricStack, field: FieldSpec,
                 l_knots: np.ndarray, w_knots: np.ndarray, validation_error: float):
        self.stack_template = stack_template
        self.field = field
        self.l_knots = l_knots
        self.w_knots = w_knots
        self.validation_error = validation_error
        self._spline = scipy.interpolate.CubicSpline(l_knots, w_knots)

    @property
    def l_range(self) -> tuple[float, float]:
        return float(self.l_knots[0]), float(self.l_knots[-1])

    def __call__(self, L):
        L_arr = np.asarray(L, dtype=float)
        lo, hi = self.l_range
        if np.any(L_arr < lo) or np.any(L_arr > hi):
            raise ValueError(f"thickness outside tabulated range [{lo}, {hi}] nm")
        out = self._spline(L_arr)
        return float(out) if np.isscalar(L) else out


def build_energy_curve(stack_template: DielectricStack, field: FieldSpec,
                       l_range: tuple[float, float], n_knots: int = 60, *,
                       grid: Grid1D | None = None,
                       constants: PhysicalConstants = DEFAULT_CONSTANTS,
                       n_workers: int | None = None,
                       n_validation: int = 5) -> EnergyCurve:
    """Solve W^G at log-spaced knots over l_range and fit a validated spline."""
    lo, hi = l_range
    if not (1.0 <= lo < hi <= 200.0):
        raise ValueError("l_range must lie within [1, 200] nm")
    if n_knots < 20:
        raise ValueError("need at least 20 knots")
    # log spacing concentrates knots at small L where W^G varies fastest
    l_knots = np.exp(np.linspace(math.log(lo), math.log(hi), n_knots))
    l_knots[0], l_knots[-1] = lo, hi

    def solve_at(L: float) -> float:
        stack = replace(stack_template, thickness_L=float(L))
        return ground_state_energy(stack, field, grid=grid, constants=constants)

    w_knots = np.array(_ordered_map(solve_at, l_knots, n_workers))

    mids = 0.5 * (l_knots[:-1] + l_knots[1:])
    take = mids[np.linspace(0, mids.size - 1, n_validation).astype(int)]
    spline = scipy.interpolate.CubicSpline(l_knots, w_knots)
    errs = [abs(float(spline(L)) - solve_at(float(L))) for L in take]
    validation_error = max(errs)
    if validation_error > EnergyCurve.VALIDATION_BUDGET_MEV:
        raise CurveValidationError(
            f"spline mid-knot error {validation_error:.4f} meV exceeds "
            f"{EnergyCurve.VALIDATION_BUDGET_MEV} meV budget")
    return EnergyCurve(stack_template, field, l_knots, w_knots, validation_error)


def _ordered_map(fn, values, n_workers: int | None):
    if n_workers is not None and n_workers <= 1:
        return [fn(v) for v in values]
    with concurrent.futures.ThreadPoolExecutor(max_workers=n_workers) as ex:
        return list(ex.map(fn, values))


def lta_potential(curve: EnergyCurve, profile: ThicknessProfile, rho, *,
                  constants: PhysicalConstants = DEFAULT_CONSTANTS,
                  warn_on_narrow_step: bool = True):
    """Lateral potential V_par(rho) = W^G(L(rho)) - W^G(L0) in meV.

    The local-thickness approximation degrades when the transition width is
    smaller than the electron height above the surface; a warning is issued
    but the computation proceeds.
    """
    if warn_on_narrow_step and isinstance(profile, PillarProfile):
        stack0 = replace(curve.stack_template, thickness_L=profile.L0)
        h_e = mean_height(solve_perpendicular(stack0, curve.field, constants=constants))
        if profile.b < h_e:
            warnings.warn(
                f"transition width b={profile.b} nm below electron height "
                f"{h_e:.2f} nm; local-thickness approximation is marginal",
                stacklevel=2)
    return curve(thickness_at(profile, rho)) - curve(profile.L0)


@dataclass
class LateralSpectrum:
    """Lowest radial eigenvalue per angular momentum and derived observables.

    u_alpha maps alpha -> energy in meV.  rho_e is the mean radius of the
    first excited (alpha=1) state with the cylindrical measure rho drho;
    rho_e_line uses the plain drho measure for comparison.
    """

    u_alpha: dict
    rho_e: float
    rho_e_line: float
    rho_grid: np.ndarray
    potential: np.ndarray
    radial_states: dict  # alpha -> u(rho) = sqrt(rho) R(rho), normalized
    bound: bool

    @property
    def delta_u_mev(self) -> float:
        return self.u_alpha[1] - self.u_alpha[0]

    @property
    def delta_u_uev(self) -> float:
        return 1.0e3 * self.delta_u_mev

    def u_alpha_uev(self, alpha: int) -> float:
        return 1.0e3 * self.u_alpha[alpha]


def radial_spectrum(potential, alpha_max: int = 1, *, rho_max: float,
                    n_points: int = 16384,
                    constants: PhysicalConstants = DEFAULT_CONSTANTS) -> LateralSpectrum:
    """Lowest eigenvalue per alpha in {0..alpha_max} of the radial equation.

    potential is a callable rho[nm] -> V_par[meV].  Cell-centered
    finite-volume discretization of -(hbar^2/2m_e) (1/rho) d/drho(rho d/drho)
    plus the centrifugal term, symmetrized with u = sqrt(rho) R; no-flux
    regularity at the axis, hard wall at rho_max.
    """
    if alpha_max < 1:
        raise ValueError("alpha_max must be >= 1")
    c = constants.hbar2_over_2me
    h = rho_max / n_points
    rho = (np.arange(n_points) + 0.5) * h
    faces_out = (np.arange(n_points) + 1.0) * h
    faces_in = np.arange(n_points) * h
    v = np.asarray(potential(rho), dtype=float)
    if not np.all(np.isfinite(v)):
        raise ValueError("non-finite lateral potential sample")
    kin_diag = c * (faces_out + faces_in) / (h * h * rho)
    offdiag = -c * faces_out[:-1] / (h * h * np.sqrt(rho[:-1] * rho[1:]))

    u_alpha: dict = {}
    states: dict = {}
    for alpha in range(alpha_max + 1):
        diag = kin_diag + v + c * alpha * alpha / rho ** 2
        w, vec = scipy.linalg.eigh_tridiagonal(diag, offdiag, select="i",
                                               select_range=(0, 0))
        u = vec[:, 0] / math.sqrt(np.sum(vec[:, 0] ** 2) * h)
        if u[np.argmax(np.abs(u))] < 0.0:
            u = -u
        u_alpha[alpha] = float(w[0])
        states[alpha] = u

    u1 = states[1]
    rho_e = float(np.sum(rho * u1 ** 2) * h)
    r1 = u1 / np.sqrt(rho)  # R_1(rho)
    rho_e_line = float(np.sum(rho * r1 ** 2) / np.sum(r1 ** 2))

    # bound if the ground state sits below the far-field potential rim and
    # does not lean on the outer wall
    rim = float(v[-1])
    n_tail = max(2, int(0.02 * n_points))
    tail = float(np.max(states[0][-n_tail:] ** 2))
    bound = (u_alpha[0] < rim) and (tail < 1e-6)
    return LateralSpectrum(u_alpha=u_alpha, rho_e=rho_e, rho_e_line=rho_e_line,
                           rho_grid=rho, potential=v, radial_states=states,
                           bound=bound)


def pillar_spectrum(curve: EnergyCurve, profile: PillarProfile, *,
                    alpha_max: int = 1, rho_max: float | None = None,
                    n_points: int = 16384,
                    constants: PhysicalConstants = DEFAULT_CONSTANTS) -> LateralSpectrum:
    """Radial spectrum of the trap formed by a pillar profile."""
    if rho_max is None:
        rho_max = max(3.0 * profile.R, profile.R + 200.0)
    pot = lambda r: lta_potential(curve, profile, r, constants=constants,
                                  warn_on_narrow_step=False)
    return radial_spectrum(pot, alpha_max, rho_max=rho_max, n_points=n_points,
                           constants=constants)


@dataclass
class FieldResponseRow:
    e_ex: float
    delta_u_uev: float
    rho_e: float
    rho_e_line: float
    bound: bool


@dataclass
class FieldResponse:
    """Delta U and rho_e versus external field, with the asymmetry diagnostic."""

    rows: list
    slope_neg: float | None = None
    slope_pos: float | None = None

    @property
    def asymmetry_ratio(self) -> float | None:
        if not self.slope_neg or not self.slope_pos:
            return None
        return abs(self.slope_neg) / abs(self.slope_pos)


def field_response(stack_template: DielectricStack, profile: PillarProfile,
                   fields, *, l_margin: float = 0.5, n_knots: int = 60,
                   alpha_max: int = 1, rho_max: float | None = None,
                   n_points: int = 16384, grid: Grid1D | None = None,
                   constants: PhysicalConstants = DEFAULT_CONSTANTS,
                   n_workers: int | None = None) -> FieldResponse:
    """Sweep the external field: one energy curve per field value, then solve.

    Unbound entries are flagged in their row, never dropped.
    """
    l_lo = profile.L0 - profile.delta_L - l_margin
    l_hi = profile.L0 + l_margin
    rows = []
    for e_ex in fields:
        fs = FieldSpec(float(e_ex))
        try:
            curve = build_energy_curve(stack_template, fs, (l_lo, l_hi), n_knots,
                                       grid=grid, constants=constants,
                                       n_workers=n_workers)
            spec = pillar_spectrum(curve, profile, alpha_max=alpha_max,
                                   rho_max=rho_max, n_points=n_points,
                                   constants=constants)
            rows.append(FieldResponseRow(float(e_ex), spec.delta_u_uev,
                                         spec.rho_e, spec.rho_e_line, spec.bound))
        except Exception:
            rows.append(FieldResponseRow(float(e_ex), math.nan, math.nan,
                                         math.nan, False))
    rows.sort(key=lambda r: r.e_ex)

    sn, sp = _near_zero_slopes(rows)
    return FieldResponse(rows=rows, slope_neg=sn, slope_pos=sp)


def _near_zero_slopes(rows) -> tuple[float | None, float | None]:
    """One-sided dDeltaU/dE slopes at the field points bracketing E = 0."""
    good = [r for r in rows if r.bound and math.isfinite(r.delta_u_uev)]
    neg = [r for r in good if r.e_ex < 0.0]
    pos = [r for r in good if r.e_ex > 0.0]
    zero = [r for r in good if r.e_ex == 0.0]
    if not zero or not neg or not pos:
        return None, None
    z = zero[0]
    n = max(neg, key=lambda r: r.e_ex)
    p = min(pos, key=lambda r: r.e_ex)
    return ((z.delta_u_uev - n.delta_u_uev) / (z.e_ex - n.e_ex),
            (p.delta_u_uev - z.delta_u_uev) / (p.e_ex - z.e_ex))


def harmonic_field_model(hbar_omega0_uev: float, beta1: float, e_ex: float) -> float:
    """Delta U of the harmonic trap model, sqrt((hbar w0)^2 + beta1 E_ex), in ueV.

    beta1 (ueV^2 per V/m) absorbs hbar^2/m_e times the microscopic
    field-coupling coefficient.  A negative radicand means the field has
    destroyed the trap.
    """
    radicand = hbar_omega0_uev ** 2 + beta1 * e_ex
    if radicand < 0.0:
        raise ModelInvalidError(
            f"field {e_ex} V/m destroys the harmonic trap (negative radicand)")
    return math.sqrt(radicand)


def fit_harmonic_field_model(e_ex, delta_u_uev) -> tuple[float, float]:
    """Least-squares fit of (hbar w0, beta1) from a Delta U(E_ex) table.

    Linear regression on Delta U^2 = (hbar w0)^2 + beta1 E_ex.
    """
    e = np.asarray(e_ex, dtype=float)
    du = np.asarray(delta_u_uev, dtype=float)
    if e.size < 2:
        raise ValueError("need at least two field points to fit")
    a = np.column_stack([np.ones_like(e), e])
    coef, *_ = np.linalg.lstsq(a, du ** 2, rcond=None)
    p0, p1 = coef
    if p0 < 0.0:
        raise ModelInvalidError("fit produced a negative zero-field stiffness")
    return math.sqrt(p0), float(p1)
