"""Bessel functions of the first kind, integer order, real argument."""

import numpy as np

from cylcasimir import backend
from cylcasimir.specfun import _bessel_kernels as bk

MAX_ORDER = 5000


def _check(m, x):
    if int(m) != m or m < 0 or m > MAX_ORDER:
        raise ValueError(f"unsupported Bessel order {m!r}; need integer 0 <= m <= {MAX_ORDER}")
    xa = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(xa)):
        raise ValueError("Bessel argument must be finite")
    if np.any(xa < 0):
        raise ValueError("Bessel argument must be non-negative")
    return int(m), xa


def bessel_j_pair(m, x):
    """(J_m(x), J_{m+1}(x)); scalar in, scalars out, arrays in, arrays out."""
    m, xa = _check(m, x)
    if xa.ndim == 0:
        if backend.USE_NUMBA:
            a, b = bk.jn_pair(m, float(xa))
        else:
            a, b = bk.jn_pair_np(m, xa.reshape(1))
            a, b = a[0], b[0]
        return float(a), float(b)
    if backend.USE_NUMBA:
        flat = np.ascontiguousarray(xa.ravel())
        a, b = bk.jn_pair_many(m, flat)
        return a.reshape(xa.shape), b.reshape(xa.shape)
    return bk.jn_pair_np(m, xa)


def bessel_j(m, x):
    """J_m(x) for integer ``0 <= m <= MAX_ORDER`` and ``x >= 0``.

    Accuracy is about 1e-13 relative to the local envelope
    ``hypot(J_m, J_{m+1})`` and 1e-15 absolute where J_m is exponentially
    small.
    """
    return bessel_j_pair(m, x)[0]


def bessel_j_prime(m, x):
    """dJ_m/dx, using -J_1 for m = 0 and (m/x) J_m - J_{m+1} otherwise."""
    m, xa = _check(m, x)
    if m == 0:
        return -bessel_j_pair(0, x)[1]
    a, b = bessel_j_pair(m, x)
    with np.errstate(divide="ignore", invalid="ignore"):
        d = (m / xa) * a - b
    # x = 0: only J_1 has a nonzero slope there
    at_zero = xa == 0
    if np.ndim(d) == 0:
        return (0.5 if m == 1 else 0.0) if at_zero else float(d)
    return np.where(at_zero, 0.5 if m == 1 else 0.0, d)

