"""Electrostatics of an excess electron above a vacuum / neon / substrate stack.

The electron at height z above the neon surface feels the image potential

    V_perp(L, z) = (e^2 / 8 pi eps0) * Integral_0^inf Lambda_L(k) e^{-2kz} dk

where Lambda_L(k) is the reflection coefficient of the three-layer stack.
The integral is evaluated as the analytic bulk term plus an adaptive
Gauss-Legendre quadrature of the exponentially confined residual.  An
independent multiple-image series expansion is provided as a test oracle.
"""

from __future__ import annotations

import functools
import math
import threading
from dataclasses import dataclass

import numpy as np

from .constants import DEFAULT_CONSTANTS, PhysicalConstants, V_PER_M_TO_MEV_PER_NM


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""


@dataclass(frozen=True)
class Superconductor:
    """Ideal superconducting substrate (permittivity -> infinity)."""


@dataclass(frozen=True)
class Dielectric:
    """Dielectric substrate with relative permittivity eps_b."""

    eps_b: float

    def __post_init__(self):
        if not self.eps_b >= 1.0:
            raise ValueError(f"substrate permittivity must be >= 1, got {self.eps_b}")


Substrate = Superconductor | Dielectric


@dataclass(frozen=True)
class DielectricStack:
    """Vacuum above, neon layer of thickness_L (nm), substrate below.

    thickness_L = math.inf denotes bulk neon; thickness_L = 0 is allowed
    only as the mirror-charge limit check.
    """

    substrate: Substrate
    thickness_L: float
    eps_neon: float = DEFAULT_CONSTANTS.eps_neon_default

    def __post_init__(self):
        if not self.eps_neon > 1.0:
            raise ValueError(f"eps_neon must exceed 1, got {self.eps_neon}")
        if not (self.thickness_L >= 0.0):
            raise ValueError(f"thickness_L must be >= 0 or inf, got {self.thickness_L}")

    @property
    def is_bulk(self) -> bool:
        return math.isinf(self.thickness_L)


@dataclass(frozen=True)
class FieldSpec:
    """Uniform external field E_ex in V/m, positive pointing away from the substrate."""

    e_ex: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.e_ex):
            raise ValueError(f"e_ex must be finite, got {self.e_ex}")

    @property
    def slope_mev_per_nm(self) -> float:
        """Field expressed as potential-energy slope e*E_ex in meV/nm."""
        return self.e_ex * V_PER_M_TO_MEV_PER_NM


def _lambda_mu(stack: DielectricStack) -> tuple[float, float]:
    """Interface coefficients of the stack.

    lam = (eps0 - eps_Ne) / (eps0 + eps_Ne) is the vacuum/neon coefficient
    (also the k*L -> inf limit of Lambda_L); mu is the neon/substrate one,
    -1 for a superconductor.
    """
    eta = stack.eps_neon
    lam = (1.0 - eta) / (1.0 + eta)
    if isinstance(stack.substrate, Superconductor):
        mu = -1.0
    else:
        eps_b = stack.substrate.eps_b
        mu = (eta - eps_b) / (eta + eps_b)
    return lam, mu


def reflection_coefficient(stack: DielectricStack, k):
    """Reflection coefficient Lambda_L(k) of the three-layer stack.

    Uses the overflow-free form Lambda = (lam + mu q) / (1 + lam mu q) with
    q = exp(-2kL), algebraically identical to the tanh(kL) expression.
    k in nm^-1; scalar or array.
    """
    k_arr = np.asarray(k, dtype=float)
    if np.any(k_arr < 0.0):
        raise ValueError("wavenumber k must be non-negative")
    lam, mu = _lambda_mu(stack)
    if stack.is_bulk:
        out = np.full_like(k_arr, lam)
    else:
        q = np.exp(-2.0 * k_arr * stack.thickness_L)
        out = (lam + mu * q) / (1.0 + lam * mu * q)
    return float(out) if np.isscalar(k) else out


@functools.lru_cache(maxsize=32)
def _leggauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


def _residual_integral(stack: DielectricStack, z: np.ndarray, rtol: float = 1e-8,
                       n_start: int = 64, n_max: int = 8192) -> np.ndarray:
    """Integral of (Lambda_L(k) - lam) e^{-2kz} dk over k in [0, inf).

    The residual decays like e^{-2k(L+z)}, so the integrand is truncated at
    K with e^{-2K(L+z_min)} < 1e-12 and integrated by Gauss-Legendre with
    node doubling until the result is stable to rtol of the full potential.
    """
    lam, mu = _lambda_mu(stack)
    L = stack.thickness_L
    z = np.asarray(z, dtype=float)
    k_max = 14.0 / (L + float(z.min()))
    scale = np.abs(lam / (2.0 * z))  # bulk term sets the relative scale

    prev = None
    n = n_start
    while n <= n_max:
        x, w = _leggauss(n)
        k = 0.5 * k_max * (x + 1.0)
        wk = 0.5 * k_max * w
        q = np.exp(-2.0 * k * L)
        dlam = mu * (1.0 - lam * lam) * q / (1.0 + lam * mu * q)
        # chunk over z to bound the (n, nz) kernel matrix
        cur = np.empty_like(z)
        step = max(1, int(4e6 // n))
        for i in range(0, z.size, step):
            zc = z[i:i + step]
            cur[i:i + step] = (wk * dlam) @ np.exp(-2.0 * np.outer(k, zc))
        if prev is not None:
            err = np.abs(cur - prev) / np.maximum(scale + np.abs(cur), 1e-300)
            if float(err.max()) <= rtol:
                return cur
        prev = cur
        n *= 2
    raise QuadratureError(
        f"image-potential quadrature did not converge to rtol={rtol} "
        f"with {n_max} nodes (L={L} nm)")


def perpendicular_potential(stack: DielectricStack, z, *,
                            constants: PhysicalConstants = DEFAULT_CONSTANTS,
                            rtol: float = 1e-8):
    """Image potential V_perp(L, z) in meV for z > 0 (nm); scalar or array.

    Bulk (L = inf) and mirror-charge (L = 0) configurations use the closed
    forms; finite L adds the quadrature of the residual reflection
    coefficient to the analytic bulk term.
    """
    z_arr = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(z_arr <= 0.0):
        raise ValueError("perpendicular_potential requires z > 0 (divergent integrand)")
    lam, mu = _lambda_mu(stack)
    pref = constants.image_prefactor
    if stack.is_bulk:
        out = pref * lam / (2.0 * z_arr)
    elif stack.thickness_L == 0.0:
        lam0 = (lam + mu) / (1.0 + lam * mu)  # = (eps0 - eps_B)/(eps0 + eps_B)
        out = pref * lam0 / (2.0 * z_arr)
    else:
        out = pref * (lam / (2.0 * z_arr) + _residual_integral(stack, z_arr, rtol=rtol))
    return float(out[0]) if np.isscalar(z) or np.ndim(z) == 0 else out


def image_series_oracle(stack: DielectricStack, z, n_terms: int, *,
                        constants: PhysicalConstants = DEFAULT_CONSTANTS):
    """Multiple-image partial sum for V_perp; independent check of the quadrature.

    Expanding Lambda_L(k) geometrically in e^{-2kL} and integrating term by
    term gives

        V = pref * [ lam/(2z) + mu (1-lam^2) sum_{n>=1} (-lam mu)^{n-1} / (2(z+nL)) ]

    n_terms counts retained terms including the leading bulk one.
    """
    if stack.is_bulk:
        raise ValueError("image series is for finite L; bulk is already closed form")
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    z_arr = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(z_arr <= 0.0):
        raise ValueError("image_series_oracle requires z > 0")
    lam, mu = _lambda_mu(stack)
    L = stack.thickness_L
    total = lam / (2.0 * z_arr)
    for n in range(1, n_terms):
        total = total + mu * (1.0 - lam * lam) * (-lam * mu) ** (n - 1) / (2.0 * (z_arr + n * L))
    out = constants.image_prefactor * total
    return float(out[0]) if np.isscalar(z) or np.ndim(z) == 0 else out


def external_potential(field: FieldSpec, L: float, z, *,
                       eps_neon: float = DEFAULT_CONSTANTS.eps_neon_default):
    """Potential of the uniform external field, zero at the grounded substrate (z = -L).

    Piecewise linear: slope e E_ex / eps_Ne inside the neon (-L < z < 0) and
    e E_ex above (z > 0); continuous at the surface.  Returns meV.
    """
    if not math.isfinite(L):
        raise ValueError("external_potential requires finite L")
    z_arr = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(z_arr < -L):
        raise ValueError("z < -L lies inside the substrate")
    s = field.slope_mev_per_nm
    out = np.where(z_arr < 0.0,
                   s * (z_arr + L) / eps_neon,
                   s * (L / eps_neon + z_arr))
    return float(out[0]) if np.isscalar(z) or np.ndim(z) == 0 else out


def total_perpendicular_potential(stack: DielectricStack, field: FieldSpec, z, *,
                                  constants: PhysicalConstants = DEFAULT_CONSTANTS):
    """Potential entering the perpendicular Schroedinger equation, in meV.

    For z >= cutoff_zc: image potential plus field term.  Between the
    surface and the cutoff the image potential is held at its finite
    cutoff value; inside the neon layer (z < 0) the Pauli barrier applies.
    Bulk stacks are only supported at zero field, where the
    grounded-substrate gauge is ill-defined.
    """
    z_arr = np.atleast_1d(np.asarray(z, dtype=float))
    if stack.is_bulk:
        if field.e_ex != 0.0:
            raise ValueError("bulk stack supports only zero external field")
        v_ex = np.zeros_like(z_arr)
    else:
        v_ex = np.asarray(external_potential(field, stack.thickness_L, z_arr,
                                             eps_neon=stack.eps_neon))
    out = np.full_like(z_arr, constants.barrier_height)
    clamp = (z_arr >= 0.0) & (z_arr < constants.cutoff_zc)
    if np.any(clamp):
        out[clamp] = perpendicular_potential(stack, constants.cutoff_zc,
                                             constants=constants)
    above = z_arr >= constants.cutoff_zc
    if np.any(above):
        out[above] = perpendicular_potential(stack, z_arr[above], constants=constants)
    out = out + v_ex
    return float(out[0]) if np.isscalar(z) or np.ndim(z) == 0 else out


# The lateral module re-solves the perpendicular problem for hundreds of
# thickness values; memoize the field-independent image potential per
# (stack, z-grid) key.  Keys are frozen dataclasses plus the grid identity.
_POTENTIAL_CACHE: dict = {}
_CACHE_LOCK = threading.Lock()
_CACHE_MAX_ENTRIES = 4096


def cached_perpendicular_potential(stack: DielectricStack, z_key, z_values: np.ndarray, *,
                                   constants: PhysicalConstants = DEFAULT_CONSTANTS) -> np.ndarray:
    """Image potential on a reusable grid; z_key must uniquely identify z_values."""
    key = (stack, constants, z_key)
    with _CACHE_LOCK:
        hit = _POTENTIAL_CACHE.get(key)
    if hit is not None:
        return hit
    val = np.asarray(perpendicular_potential(stack, z_values, constants=constants))
    val.setflags(write=False)
    with _CACHE_LOCK:
        if len(_POTENTIAL_CACHE) >= _CACHE_MAX_ENTRIES:
            _POTENTIAL_CACHE.clear()
        _POTENTIAL_CACHE[key] = val
    return val
