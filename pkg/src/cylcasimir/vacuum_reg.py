"""Vacuum energy regularized by a lifetime bound on virtual photons.

A virtual photon confined to a length D lives at most D/c, and with
(E tau)_max ~ alpha_u hbar/2 its frequency is capped at alpha_u c / (2D).
Cutting every free-space integral there makes the unbounded vacuum energy
vanish and leaves the parallel-plate result

    E/area = -(pi^2 hbar c / 1440 d^3) I(alpha_u),

which is the textbook value exactly when I(alpha_u) = 1.

``alpha_u`` here is the dimensionless uncertainty constant. It is unrelated
to the cavity aspect ratio a/b.

Free-space energies and tail densities are returned in the same
proportional normalization as the formulas they implement; only their
scaling (and the D -> infinity limit) carries meaning.
"""

import math
from dataclasses import dataclass

import numpy as np

from cylcasimir.constants import HBAR_C, SPEED_OF_LIGHT
from cylcasimir.specfun.quadrature import QuadratureSpec, gauss_legendre, integrate

PI = math.pi
CUTOFF_PREFACTOR = 7.5 / PI**4
PLATE_IDEAL_COEFF = PI**2 / 1440.0
_TIGHT = QuadratureSpec(abs_tol=1e-300, rel_tol=1e-14)
_SERIES_X = 1e-4


@dataclass(frozen=True)
class UncertaintyConstant:
    alpha_u: float

    def __post_init__(self):
        if not self.alpha_u >= 0:
            raise ValueError("alpha_u must be non-negative")


@dataclass(frozen=True)
class FreeSpaceExtent:
    D: float

    def __post_init__(self):
        if not self.D > 0:
            raise ValueError("extent D must be positive")


def virtual_frequency_bound(alpha_u, D):
    """Largest virtual-photon frequency alpha_u c / (2 D), rad/s."""
    return alpha_u * SPEED_OF_LIGHT / (2.0 * D)


def free_vacuum_energy(alpha_u, D):
    """pi hbar c alpha_u^4 / (8 D^4); 0 for D = inf."""
    if math.isinf(D):
        return 0.0
    FreeSpaceExtent(D)
    return PI * HBAR_C * alpha_u**4 / (8.0 * D**4)


def free_vacuum_energy_quadrature(alpha_u, D):
    """2 pi hbar c int_0^{alpha_u/2D} k^3 dk, evaluated numerically."""
    top = alpha_u / (2.0 * D)
    if top == 0:
        return 0.0
    # integrate on [0, 1] and rescale so tolerances see O(1) numbers
    val = integrate(lambda t: t**3, 0.0, 1.0, _TIGHT)
    return 2.0 * PI * HBAR_C * top**4 * val


def free_energy_between_plates(alpha_u, D, d):
    """Free-space subtraction with the cutoff alpha_u / (2 (2D + d)).

    The (2D + d) combination is taken as given for two outer regions of
    size D around a gap d.
    """
    k = alpha_u / (2.0 * (2.0 * D + d))
    return 2.0 * PI * HBAR_C * k**4 / 4.0


def tail_energy_density(z, d, D, alpha_u, side):
    """Energy density outside a plate pair at position z, J/m^3 (proportional).

    right (z > d): -hbar c/(12 pi^2) int_0^K l^3 (1 + 2 exp(-2 l (z - d))) dl
    left (z < 0):  -hbar c/(12 pi^2) int_0^K l^3 (2 exp(2 l z) + 1) dl
    with K = alpha_u / (2D).
    """
    if side == "right":
        if not z > d:
            raise ValueError("right-side tail needs z > d")
        s = z - d
    elif side == "left":
        if not z < 0:
            raise ValueError("left-side tail needs z < 0")
        s = -z
    else:
        raise ValueError("side must be 'left' or 'right'")
    if math.isinf(D):
        return 0.0
    K = alpha_u / (2.0 * D)
    if K == 0:
        return 0.0

    def f(t):
        lam = K * t
        return t**3 * (1.0 + 2.0 * np.exp(-2.0 * lam * s))

    return -HBAR_C / (12.0 * PI**2) * K**4 * integrate(f, 0.0, 1.0, _TIGHT)


def tail_energy_density_at_plate(D, alpha_u):
    """Closed form of the right tail at z = d: -hbar c/(12 pi^2) (3/4) K^4."""
    K = alpha_u / (2.0 * D)
    return -HBAR_C / (12.0 * PI**2) * 0.75 * K**4


def _x_coth_half(x):
    x = np.asarray(x, dtype=np.float64)
    x2 = x * x
    small = 2.0 + x2 / 6.0 - x2 * x2 / 360.0
    with np.errstate(divide="ignore", invalid="ignore"):
        big = x / np.tanh(0.5 * x)
    return np.where(np.abs(x) < _SERIES_X, small, big)


def _cutoff_integrand(x):
    x = np.asarray(x, dtype=np.float64)
    return x * x * (_x_coth_half(x) + 4.0)


def cutoff_number(alpha_u, spec=None):
    """I(alpha_u) = (7.5/pi^4) int_0^alpha_u x^2 (x (e^x+1)/(e^x-1) + 4) dx."""
    if alpha_u < 0:
        raise ValueError("alpha_u must be non-negative")
    if alpha_u == 0:
        return 0.0
    return CUTOFF_PREFACTOR * integrate(_cutoff_integrand, 0.0, alpha_u, spec or _TIGHT)


def cutoff_number_gl(alpha_u):
    """I(alpha_u) with a composite Gauss-Legendre rule (independent check)."""
    if alpha_u == 0:
        return 0.0
    return CUTOFF_PREFACTOR * gauss_legendre(_cutoff_integrand, 0.0, alpha_u, order=48, panels=4)


def cutoff_number_slope(alpha_u):
    """dI/dalpha_u, the integrand itself."""
    return CUTOFF_PREFACTOR * float(_cutoff_integrand(alpha_u))


def solve_alpha_for_unit_cutoff(lo=0.0, hi=4.0, tol=1e-12):
    """Root of I(alpha_u) = 1: bisection on (lo, hi), then Newton.

    I is strictly increasing (positive integrand), so the bracket is unique.
    """
    f_lo = cutoff_number(lo) - 1.0
    f_hi = cutoff_number(hi) - 1.0
    if not (f_lo < 0.0 < f_hi):
        raise RuntimeError(f"I(alpha) - 1 does not change sign on [{lo}, {hi}]")
    for _ in range(20):
        mid = 0.5 * (lo + hi)
        if cutoff_number(mid) < 1.0:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(50):
        r = cutoff_number(x) - 1.0
        if abs(r) < tol:
            return x
        x_new = x - r / cutoff_number_slope(x)
        if not lo <= x_new <= hi:
            x_new = 0.5 * (lo + hi)
        if r < 0:
            lo = x
        else:
            hi = x
        x = x_new
    raise RuntimeError("Newton refinement of I(alpha) = 1 did not converge")


def plate_energy_per_area(d, alpha_u):
    """-(pi^2 hbar c / 1440 d^3) I(alpha_u), J/m^2."""
    if not d > 0:
        raise ValueError("plate separation must be positive")
    return -PLATE_IDEAL_COEFF * HBAR_C / d**3 * cutoff_number(alpha_u)


def plate_energy_per_area_direct(d, alpha_u):
    """-hbar c/(3 (2 pi)^2) int_0^{alpha_u/2d} l^2 ((l d) coth(l d) + 2) dl, J/m^2."""
    if not d > 0:
        raise ValueError("plate separation must be positive")
    top = alpha_u / (2.0 * d)
    if top == 0:
        return 0.0

    def f(lam):
        u = np.asarray(lam, dtype=np.float64) * d
        # (u coth u) = (2u coth(2u/2)) / 2
        return lam * lam * (0.5 * _x_coth_half(2.0 * u) + 2.0)

    return -HBAR_C / (3.0 * (2.0 * PI) ** 2) * integrate(f, 0.0, top, _TIGHT)


def plate_coth_part(d, alpha_u):
    """The coth piece of the direct route: int_0^{alpha_u/2d} l^2 (l d) coth(l d) dl.

    Equals I_plate(alpha_u) / (16 d^3), with I_plate the plate cutoff
    integral, by the substitution s = 2 l d.
    """
    top = alpha_u / (2.0 * d)

    def f(lam):
        u = np.asarray(lam, dtype=np.float64) * d
        return lam * lam * 0.5 * _x_coth_half(2.0 * u)

    return integrate(f, 0.0, top, _TIGHT)
