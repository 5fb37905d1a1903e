"""Root refinement kernels for the Bessel zero table.

Row 0 comes from a sign-change scan of J_0; row p + 1 is found inside the
interlacing brackets (x_{p,n}, x_{p,n+1}) supplied by row p. Each root is
bisected a fixed number of times and then polished by safeguarded Newton.
Every element is refined independently, so a row does not depend on how it
is batched.
"""

import math

import numpy as np

from cylcasimir.backend import njit
from cylcasimir.specfun._bessel_kernels import jn_and_deriv, jn_and_deriv_np, jn_pair, jn_pair_np

N_BISECT = 6
MAX_NEWTON = 40
NEWTON_RTOL = 1e-15
SCAN_STEP = 0.5


@njit(cache=True)
def _refine(p, lo, hi):
    flo, _ = jn_and_deriv(p, lo)
    for _ in range(N_BISECT):
        mid = 0.5 * (lo + hi)
        fm, _ = jn_and_deriv(p, mid)
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (flo > 0.0):
            lo = mid
            flo = fm
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(MAX_NEWTON):
        f, d = jn_and_deriv(p, x)
        if f == 0.0:
            return x
        if (f > 0.0) == (flo > 0.0):
            lo = x
            flo = f
        else:
            hi = x
        dx = f / d
        if abs(dx) <= NEWTON_RTOL * x:
            return x - dx
        xn = x - dx
        if not (lo < xn < hi):
            xn = 0.5 * (lo + hi)
        x = xn
    return x


@njit(cache=True)
def row_from_brackets(p, prev_row, count):
    out = np.empty(count)
    for n in range(count):
        out[n] = _refine(p, prev_row[n], prev_row[n + 1])
    return out


@njit(cache=True)
def row_zero(count):
    out = np.empty(count)
    found = 0
    lo = SCAN_STEP
    flo, _ = jn_pair(0, lo)
    while found < count:
        hi = lo + SCAN_STEP
        fhi, _ = jn_pair(0, hi)
        if (fhi > 0.0) != (flo > 0.0):
            out[found] = _refine(0, lo, hi)
            found += 1
        lo = hi
        flo = fhi
    return out


def _refine_np(p, lo, hi):
    lo = lo.copy()
    hi = hi.copy()
    flo, _ = jn_and_deriv_np(p, lo)
    for _ in range(N_BISECT):
        mid = 0.5 * (lo + hi)
        fm, _ = jn_and_deriv_np(p, mid)
        same = (fm > 0.0) == (flo > 0.0)
        lo = np.where(same, mid, lo)
        flo = np.where(same, fm, flo)
        hi = np.where(same, hi, mid)
    x = 0.5 * (lo + hi)
    active = np.ones(x.shape, dtype=bool)
    for _ in range(MAX_NEWTON):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        xa = x[idx]
        f, d = jn_and_deriv_np(p, xa)
        same = (f > 0.0) == (flo[idx] > 0.0)
        lo_a = np.where(same, xa, lo[idx])
        hi_a = np.where(same, hi[idx], xa)
        flo[idx] = np.where(same, f, flo[idx])
        lo[idx] = lo_a
        hi[idx] = hi_a
        with np.errstate(divide="ignore", invalid="ignore"):
            dx = f / d
        exact = f == 0.0
        done = exact | (np.abs(dx) <= NEWTON_RTOL * xa)
        xn = xa - dx
        bad = ~((lo_a < xn) & (xn < hi_a))
        xn = np.where(bad & ~done, 0.5 * (lo_a + hi_a), xn)
        xn = np.where(exact, xa, xn)
        x[idx] = xn
        active[idx[done]] = False
    return x


def row_from_brackets_np(p, prev_row, count):
    return _refine_np(p, prev_row[:count], prev_row[1 : count + 1])


def row_zero_np(count):
    # x_{0,k} < (k + 1) pi, so this grid always holds `count` sign changes
    top = (count + 2) * math.pi
    grid = SCAN_STEP * np.arange(1, int(top / SCAN_STEP) + 2)
    vals, _ = jn_pair_np(0, grid)
    pos = vals > 0.0
    change = np.nonzero(pos[:-1] != pos[1:])[0][:count]
    return _refine_np(0, grid[change], grid[change + 1])
