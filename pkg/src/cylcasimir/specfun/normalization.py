"""Radial normalization integral of the cylinder modes, checked by quadrature."""

import numpy as np

from cylcasimir.specfun.bessel import bessel_j, bessel_j_pair
from cylcasimir.specfun.quadrature import QuadratureSpec, integrate
from cylcasimir.specfun.zeros import bessel_zero


def normalization_integral(m, n, a=1.0, spec=None):
    """Integrate [(x/a)^2 J_m'(x rho/a)^2 + m^2/rho^2 J_m(x rho/a)^2] rho over (0, a].

    ``x = x_{mn}``. The m^2/rho^2 term is written as m^2 J_m^2 / rho, which
    goes to zero like rho^(2m-1) for m >= 1 and is absent for m = 0.
    """
    x = bessel_zero(m, n)
    k = x / a

    def f(rho):
        rho = np.asarray(rho, dtype=np.float64)
        t = k * rho
        jm, jm1 = bessel_j_pair(m, t)
        # J_m'(t) = (m/t) J_m - J_{m+1};  (m/t) J_m is written via rho to avoid 0/0
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(rho > 0, jm / np.where(rho > 0, rho, 1.0), 0.0)
        deriv = (m / k) * ratio - jm1 if m else -jm1
        return k * k * deriv * deriv * rho + m * m * jm * ratio

    # one breakpoint per half-oscillation keeps every panel smooth
    pts = [a * (j + 0.5) / (n + 1) for j in range(n + 1)]
    return integrate(f, 0.0, a, spec or QuadratureSpec(abs_tol=1e-14, rel_tol=1e-12), breakpoints=pts)


def normalization_closed_form(m, n):
    """x_{mn}^2 / 2 * J_{m+1}(x_{mn})^2."""
    x = bessel_zero(m, n)
    return 0.5 * x * x * bessel_j(m + 1, x) ** 2
