"""Long-cylinder and parallel-plate limits of the cavity sums.

Long cylinder (b >> a): integrating the axial index out leaves, per unit
height, the bare 2-D sum

    E/b ~ (1/a^2) sum_{m,n} eta_m x_{mn}^2 ln(1 + lambda_p^2 a^2 / x_{mn}^2)

(a-dependent part only). Only its scaling with a is meaningful; no overall
prefactor is attached.

Plates (a >> b): E/area ~ -I(p)/b^3 with the cutoff number
I(p) = int_0^p s^3 (e^s + 1)/(e^s - 1) ds and p = 2 beta_p b.
"""

import math
from dataclasses import dataclass

import numpy as np

from cylcasimir.specfun.quadrature import QuadratureSpec, gauss_legendre, integrate
from cylcasimir.sum_engine import pairwise_sum

PLATE_SPEC = QuadratureSpec(abs_tol=1e-300, rel_tol=1e-13)
_SMALL_S = 1e-4


@dataclass(frozen=True)
class LongCylinderParams:
    """Radius ``a`` (m), cutoff wavenumber ``lambda_p`` (1/m), 2-D truncation."""

    a: float
    lambda_p: float
    M2: int = 200
    N2: int = 200

    def __post_init__(self):
        if not (self.a > 0 and self.lambda_p > 0 and self.M2 >= 0 and self.N2 >= 1):
            raise ValueError(f"invalid long-cylinder parameters {self}")


@dataclass(frozen=True)
class PlateParams:
    b: float
    p: float

    def __post_init__(self):
        if not (self.b > 0 and self.p > 0):
            raise ValueError("plate separation and cutoff must be positive")


def _grid(params, zeros):
    if not zeros.covers(params.M2, params.N2):
        raise IndexError(f"2-D truncation ({params.M2}, {params.N2}) exceeds the zero table")
    x = zeros.zeros[: params.M2 + 1, : params.N2]
    w = np.where(np.arange(params.M2 + 1) == 0, 1.0, 2.0)[:, None] * np.ones_like(x)
    return x.ravel(), w.ravel()


def long_cylinder_energy_per_length(params, zeros):
    """(1/a^2) sum eta_m x^2 ln(1 + lambda_p^2 a^2 / x^2), in 1/m^2."""
    x, w = _grid(params, zeros)
    r = (params.lambda_p * params.a / x) ** 2
    return pairwise_sum(w * x * x * np.log1p(r)) / params.a**2


def long_cylinder_force_per_length(params, zeros):
    """-d/da of :func:`long_cylinder_energy_per_length`, analytic."""
    x, w = _grid(params, zeros)
    a = params.a
    r = (params.lambda_p * a / x) ** 2
    logs = pairwise_sum(w * x * x * np.log1p(r))
    inv = pairwise_sum(w / (1.0 + r))
    return 2.0 * logs / a**3 - 2.0 * params.lambda_p**2 * inv / a


def scaling_exponent(f, points):
    """Least-squares slope of ln f(x) against ln x."""
    xs = np.asarray(points, dtype=np.float64)
    if xs.size < 3:
        raise ValueError("need at least 3 points")
    if np.any(xs <= 0) or np.any(np.diff(xs) <= 0):
        raise ValueError("points must be positive and ascending")
    ys = np.array([f(x) for x in xs], dtype=np.float64)
    if np.any(ys <= 0):
        raise ValueError("f must be positive at every point")
    slope, _ = np.polyfit(np.log(xs), np.log(ys), 1)
    return float(slope)


def long_cylinder_regime(lambda_p, zeros, M2=200, N2=200, decades=(3.0, 4.0)):
    """Radius range where the cutoff exceeds every retained mode.

    Returns (a_lo, a_hi) with lambda_p * a spanning ``10**decades`` times the
    largest retained zero; there the force falls off close to a^-3.
    """
    x_max = float(zeros.zeros[: M2 + 1, :N2].max())
    return 10.0 ** decades[0] * x_max / lambda_p, 10.0 ** decades[1] * x_max / lambda_p


def long_cylinder_scan(lambda_p, a_values, zeros, M2=200, N2=200):
    """Rows (a, F_per_b, local slope) plus the overall fitted exponent."""
    a_values = np.asarray(a_values, dtype=np.float64)

    def force(a):
        return long_cylinder_force_per_length(LongCylinderParams(a, lambda_p, M2, N2), zeros)

    forces = np.array([force(a) for a in a_values])
    local = np.gradient(np.log(forces), np.log(a_values))
    slope = scaling_exponent(force, a_values)
    rows = [(float(a), float(f), float(s)) for a, f, s in zip(a_values, forces, local)]
    return rows, slope


def _s_coth_half(s):
    """s (e^s + 1)/(e^s - 1) = s coth(s/2), equal to 2 at s = 0."""
    s = np.asarray(s, dtype=np.float64)
    s2 = s * s
    small = 2.0 + s2 / 6.0 - s2 * s2 / 360.0
    with np.errstate(divide="ignore", invalid="ignore"):
        big = s / np.tanh(0.5 * s)
    return np.where(np.abs(s) < _SMALL_S, small, big)


def _plate_integrand(s):
    s = np.asarray(s, dtype=np.float64)
    return s * s * _s_coth_half(s)


def plate_cutoff_integral(p, spec=None):
    """I(p) = int_0^p s^3 (e^s + 1)/(e^s - 1) ds by adaptive quadrature."""
    if not p > 0:
        raise ValueError("cutoff p must be positive")
    return integrate(_plate_integrand, 0.0, p, spec or PLATE_SPEC)


def plate_cutoff_integral_gl(p):
    """Second, independent rule for I(p): composite Gauss-Legendre."""
    return gauss_legendre(_plate_integrand, 0.0, p, order=48, panels=max(4, int(math.ceil(p))))


def plate_energy_per_area(b, p):
    """-I(p)/b^3, in units of hbar c (proportional normalization)."""
    PlateParams(b, p)
    return -plate_cutoff_integral(p) / b**3


def plate_pressure(b, p):
    """-d/db of -I(p)/b^3 at fixed p: -3 I(p)/b^4 (negative = attractive)."""
    PlateParams(b, p)
    return -3.0 * plate_cutoff_integral(p) / b**4


def plate_pressure_table(b_values, p):
    """Rows (b, pressure, pressure / pressure[0]) at fixed p."""
    i_p = plate_cutoff_integral(p)
    out = []
    ref = None
    for b in b_values:
        pr = -3.0 * i_p / b**4
        ref = pr if ref is None else ref
        out.append((float(b), pr, pr / ref))
    return out
