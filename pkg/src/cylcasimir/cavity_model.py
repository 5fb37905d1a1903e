"""Mode energies, truncated Casimir energy and forces of the cylindrical cavity.

Modes are labelled by (m, n, l): azimuthal order m >= 0 (weight 1 for m = 0,
2 otherwise), radial index n >= 1 through the Bessel zero x_{mn}, and axial
index l >= 1. The mode wavenumber is A = sqrt(x_{mn}^2/a^2 + (l pi/b)^2).

With a plasma cutoff u_p = omega_p / c on the imaginary-frequency integral,
each mode contributes A arctan(u_p/A) to the energy (up to a geometry-free
constant that is dropped), and

    -dE/da ~ x^2 w(u_p/A) / A,    -dE/db ~ l^2 w(u_p/A) / A,

with ``w(t) = arctan(t) - t/(1 + t^2) > 0``. Every force term is positive,
so both forces push outward.
"""

import math
from dataclasses import dataclass

import numpy as np

from cylcasimir.backend import njit
from cylcasimir.constants import HBAR_C, SPEED_OF_LIGHT
from cylcasimir.sum_engine import DEFAULT_CHECKPOINTS, KernelTerm, TruncationOrder, box_sum, shell_sum

PI = math.pi

# w(t) = sum_{k>=1} (-1)^(k+1) 2k/(2k+1) t^(2k+1); used below t = 0.1
_W_COEFFS = np.array([2.0 * k / (2.0 * k + 1.0) for k in range(1, 12)])
_SERIES_T = 0.1


@dataclass(frozen=True)
class CavityGeometry:
    """Radius ``a`` and height ``b`` in meters."""

    a: float
    b: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValueError("cavity radius and height must be positive")

    @property
    def alpha_ratio(self):
        return self.a / self.b

    def scaled(self, s):
        return CavityGeometry(self.a * s, self.b * s)


@dataclass(frozen=True)
class PlasmaCutoff:
    """Plasma frequency cutoff.

    ``light_speed`` converts omega_p to the wavenumber cutoff u_p. It
    defaults to the exact SI value; the reference force-sum tables correspond to
    ``ROUNDED_LIGHT_SPEED`` (3e8 m/s).
    """

    omega_p: float
    light_speed: float = SPEED_OF_LIGHT

    def __post_init__(self):
        if not self.omega_p > 0:
            raise ValueError("plasma frequency must be positive")

    @property
    def u_p(self):
        return self.omega_p / self.light_speed

    def y_p(self, geom):
        return self.omega_p * geom.a / self.light_speed


@dataclass(frozen=True)
class ModeIndex:
    m: int
    n: int
    l: int

    def __post_init__(self):
        if self.m < 0 or self.n < 1 or self.l < 1:
            raise ValueError(f"invalid mode index {self}")

    @property
    def eta(self):
        return 1 if self.m == 0 else 2


def mode_wavenumber(idx, geom, zeros):
    """A_{mnl} = sqrt(x_{mn}^2/a^2 + (l pi/b)^2), in 1/m."""
    x = zeros.zero(idx.m, idx.n)
    return math.sqrt((x / geom.a) ** 2 + (idx.l * PI / geom.b) ** 2)


def energy_integrand(u, A):
    """(A^2 - 3u^2) / (A^2 + u^2): the per-mode integrand in u = omega/c."""
    u = np.asarray(u, dtype=np.float64)
    return (A * A - 3.0 * u * u) / (A * A + u * u)


def mode_energy_closed(A, u_p):
    """Integral of the per-mode integrand over [0, u_p].

    Returns ``(4 A arctan(u_p/A) - 3 u_p, A arctan(u_p/A))``; the second
    entry is the part that depends on the geometry.
    """
    geo = A * math.atan(u_p / A)
    return 4.0 * geo - 3.0 * u_p, geo


@njit(cache=True)
def cutoff_weight(t):
    """arctan(t) - t/(1 + t^2) for t >= 0, without cancellation at small t."""
    if t < _SERIES_T:
        t2 = t * t
        acc = 0.0
        for k in range(_W_COEFFS.shape[0] - 1, -1, -1):
            acc = _W_COEFFS[k] - t2 * acc
        return t * t2 * acc
    return math.atan(t) - t / (1.0 + t * t)


def cutoff_weight_np(t):
    t = np.asarray(t, dtype=np.float64)
    t2 = t * t
    acc = np.zeros_like(t)
    for c in _W_COEFFS[::-1]:
        acc = c - t2 * acc
    series = t * t2 * acc
    direct = np.arctan(t) - t / (1.0 + t2)
    return np.where(t < _SERIES_T, series, direct)


# ---------------------------------------------------------------------------
# summands


@njit(cache=True)
def _dimensionless_kernel(m, n, l, zeros, params):
    alpha = params[0]
    yp = params[1]
    x = zeros[m, n - 1]
    q = l * PI * alpha
    s = math.sqrt(x * x + q * q)
    t = cutoff_weight(yp / s) / s
    return x * x * t, float(l * l) * t


@njit(cache=True)
def _physical_kernel(m, n, l, zeros, params):
    a = params[0]
    b = params[1]
    up = params[2]
    x = zeros[m, n - 1]
    kr = x / a
    kz = l * PI / b
    A = math.sqrt(kr * kr + kz * kz)
    t = cutoff_weight(up / A) / A
    return x * x * t, float(l * l) * t


@njit(cache=True)
def _energy_kernel(m, n, l, zeros, params):
    a = params[0]
    b = params[1]
    up = params[2]
    x = zeros[m, n - 1]
    kr = x / a
    kz = l * PI / b
    A = math.sqrt(kr * kr + kz * kz)
    geo = A * math.atan(up / A)
    return geo, 4.0 * geo - 3.0 * up


class DimensionlessForceTerm(KernelTerm):
    """(x^2 T, l^2 T) with T = w(y_p/S)/S and S = sqrt(x^2 + (l pi alpha)^2)."""

    kernel = _dimensionless_kernel

    def __init__(self, zeros, alpha_ratio, y_p):
        super().__init__(zeros, (alpha_ratio, y_p))

    def evaluate(self, m, n, l):
        alpha, yp = self.params
        x = self.zeros[m, n - 1]
        q = l * PI * alpha
        s = np.sqrt(x * x + q * q)
        t = cutoff_weight_np(yp / s) / s
        return x * x * t, (l * l).astype(np.float64) * t


class PhysicalForceTerm(KernelTerm):
    """(x^2 T, l^2 T) with T = w(u_p/A)/A in physical wavenumbers."""

    kernel = _physical_kernel

    def __init__(self, zeros, geom, u_p):
        super().__init__(zeros, (geom.a, geom.b, u_p))

    def evaluate(self, m, n, l):
        a, b, up = self.params
        x = self.zeros[m, n - 1]
        kr = x / a
        kz = l * PI / b
        A = np.sqrt(kr * kr + kz * kz)
        t = cutoff_weight_np(up / A) / A
        return x * x * t, (l * l).astype(np.float64) * t


class EnergyTerm(KernelTerm):
    """(A arctan(u_p/A), 4 A arctan(u_p/A) - 3 u_p) per mode."""

    kernel = _energy_kernel

    def __init__(self, zeros, geom, u_p):
        super().__init__(zeros, (geom.a, geom.b, u_p))

    def evaluate(self, m, n, l):
        a, b, up = self.params
        x = self.zeros[m, n - 1]
        kr = x / a
        kz = l * PI / b
        A = np.sqrt(kr * kr + kz * kz)
        geo = A * np.arctan(up / A)
        return geo, 4.0 * geo - 3.0 * up


# ---------------------------------------------------------------------------
# dimensionless route


def dimensionless_force_sums(alpha_ratio, y_p, trunc, zeros, threads=None):
    """(I_a, I_b): the force sums that depend only on a/b and y_p = u_p a."""
    if not (alpha_ratio > 0 and y_p > 0):
        raise ValueError("alpha_ratio and y_p must be positive")
    sa, sb = box_sum(DimensionlessForceTerm(zeros, alpha_ratio, y_p), trunc, threads)
    return sa, PI * PI * alpha_ratio**3 * sb


def force_sum_convergence(alpha_ratio, y_p, zeros, checkpoints=DEFAULT_CHECKPOINTS, threads=None):
    """I_a and I_b at every cube checkpoint k = M = N = L, in one pass."""
    report = shell_sum(DimensionlessForceTerm(zeros, alpha_ratio, y_p), checkpoints, threads)
    return report.scaled(1.0, PI * PI * alpha_ratio**3)


def forces_from_sums(geom, i_a, i_b):
    """Convert (I_a, I_b) to newtons: F = hbar c I / (pi a^2)."""
    pref = HBAR_C / (PI * geom.a * geom.a)
    return pref * i_a, pref * i_b


# ---------------------------------------------------------------------------
# physical route


def casimir_forces(geom, cutoff, trunc, zeros, threads=None):
    """(F_a, F_b) in newtons from the physical-unit sums; positive = repulsive."""
    sa, sb = box_sum(PhysicalForceTerm(zeros, geom, cutoff.u_p), trunc, threads)
    f_a = HBAR_C / (PI * geom.a**3) * sa
    f_b = PI * HBAR_C / geom.b**3 * sb
    return f_a, f_b


def force_radial(geom, cutoff, trunc, zeros, threads=None):
    """-dE/da on the lateral wall, newtons."""
    return casimir_forces(geom, cutoff, trunc, zeros, threads)[0]


def force_axial(geom, cutoff, trunc, zeros, threads=None):
    """-dE/db on the end caps, newtons."""
    return casimir_forces(geom, cutoff, trunc, zeros, threads)[1]


def casimir_energy(geom, cutoff, trunc, zeros, threads=None):
    """Regularized truncated energy in joules, additive constant dropped.

    (hbar c / pi) * sum eta_m A arctan(u_p / A). The dropped piece is
    independent of a and b, so it does not affect any force.
    """
    geo, _ = box_sum(EnergyTerm(zeros, geom, cutoff.u_p), trunc, threads)
    return HBAR_C / PI * geo


def force_finite_difference(geom, cutoff, trunc, zeros, which="radial", h=None, threads=None):
    """Central difference -(E(x + h) - E(x - h)) / 2h with u_p held fixed."""
    if which not in ("radial", "axial"):
        raise ValueError("which must be 'radial' or 'axial'")
    x0 = geom.a if which == "radial" else geom.b
    h = 1e-6 * geom.a if h is None else float(h)
    if not (0 < h < 0.5 * x0):
        raise ValueError(f"step h={h!r} must lie in (0, {0.5 * x0!r})")
    if which == "radial":
        plus, minus = CavityGeometry(geom.a + h, geom.b), CavityGeometry(geom.a - h, geom.b)
    else:
        plus, minus = CavityGeometry(geom.a, geom.b + h), CavityGeometry(geom.a, geom.b - h)
    e_plus = casimir_energy(plus, cutoff, trunc, zeros, threads)
    e_minus = casimir_energy(minus, cutoff, trunc, zeros, threads)
    return -(e_plus - e_minus) / (2.0 * h)


__all__ = [
    "CavityGeometry",
    "PlasmaCutoff",
    "ModeIndex",
    "TruncationOrder",
    "mode_wavenumber",
    "energy_integrand",
    "mode_energy_closed",
    "cutoff_weight",
    "cutoff_weight_np",
    "DimensionlessForceTerm",
    "PhysicalForceTerm",
    "EnergyTerm",
    "dimensionless_force_sums",
    "force_sum_convergence",
    "forces_from_sums",
    "casimir_forces",
    "force_radial",
    "force_axial",
    "casimir_energy",
    "force_finite_difference",
]
