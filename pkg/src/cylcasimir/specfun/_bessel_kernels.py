"""Bessel J_m kernels: a numba scalar path and a vectorized numpy path.

Both evaluate the pair (J_m(x), J_{m+1}(x)) with the same three regimes:

* ascending series when x**2 <= 4(m + 1), where the terms never cancel badly;
* Hankel asymptotics for J_0, J_1 followed by forward recurrence when
  x >= 25 and x >= m (forward recurrence is stable below the turning point);
* Miller backward recurrence, normalized by J_0 + 2 sum J_2k = 1, otherwise.
"""

import math

import numpy as np

from cylcasimir.backend import njit

HANKEL_MIN_X = 25.0
BIG = 1.0e250
INV_BIG = 1.0e-250
_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)
_INV_SQRT2 = 1.0 / math.sqrt(2.0)


def miller_start(m, x):
    top = max(float(m), x)
    return int(top + 8.0 * top ** (1.0 / 3.0) + 20.0)


# ---------------------------------------------------------------------------
# numba scalar kernels


@njit(cache=True)
def _series_pair(m, x):
    h = 0.5 * x
    q = -h * h
    lead = 1.0
    for i in range(1, m + 1):
        lead *= h / i
    out0 = 0.0
    out1 = 0.0
    for which in range(2):
        order = m + which
        s = 1.0
        t = 1.0
        k = 1
        while k < 200:
            t *= q / (k * (order + k))
            s += t
            if abs(t) <= 1e-17 * abs(s):
                break
            k += 1
        if which == 0:
            out0 = lead * s
        else:
            out1 = lead * (h / (m + 1)) * s
    return out0, out1


@njit(cache=True)
def _hankel_pq(mu, x):
    # P and Q of the Hankel expansion; mu = 4 nu**2
    p = 1.0
    q = 0.0
    a = 1.0
    k = 1
    prev = 1.0
    while k < 200:
        a *= (mu - (2.0 * k - 1.0) ** 2) / (k * 8.0 * x)
        if abs(a) > prev:
            break
        prev = abs(a)
        r = k % 4
        if r == 1:
            q += a
        elif r == 2:
            p -= a
        elif r == 3:
            q -= a
        else:
            p += a
        if abs(a) < 1e-18:
            break
        k += 1
    return p, q


@njit(cache=True)
def _hankel_j01(x):
    c = math.cos(x)
    s = math.sin(x)
    amp = _SQRT_2_OVER_PI / math.sqrt(x)
    p0, q0 = _hankel_pq(0.0, x)
    p1, q1 = _hankel_pq(4.0, x)
    j0 = amp * (p0 * (c + s) - q0 * (s - c)) * _INV_SQRT2
    j1 = amp * (p1 * (s - c) + q1 * (s + c)) * _INV_SQRT2
    return j0, j1


@njit(cache=True)
def _forward_pair(m, x):
    j0, j1 = _hankel_j01(x)
    if m == 0:
        return j0, j1
    prev = j0
    cur = j1
    tox = 2.0 / x
    for k in range(1, m + 1):
        nxt = k * tox * cur - prev
        prev = cur
        cur = nxt
    return prev, cur


@njit(cache=True)
def _miller_pair(m, x):
    top = max(float(m), x)
    nstart = int(top + 8.0 * top ** (1.0 / 3.0) + 20.0)
    tox = 2.0 / x
    f_next = 0.0
    f = 1.0
    even_sum = 0.0
    rescales = 0
    rec_m = 0.0
    rec_m1 = 0.0
    cnt_m = 0
    cnt_m1 = 0
    for j in range(nstart, 0, -1):
        if j == m + 1:
            rec_m1 = f
            cnt_m1 = rescales
        elif j == m:
            rec_m = f
            cnt_m = rescales
        if j % 2 == 0:
            even_sum += f
        f_prev = j * tox * f - f_next
        f_next = f
        f = f_prev
        if abs(f) > BIG:
            f *= INV_BIG
            f_next *= INV_BIG
            even_sum *= INV_BIG
            rescales += 1
    if m == 0:
        rec_m = f
        cnt_m = rescales
    norm = f + 2.0 * even_sum
    jm = rec_m / norm
    for _ in range(rescales - cnt_m):
        jm *= INV_BIG
    jm1 = rec_m1 / norm
    for _ in range(rescales - cnt_m1):
        jm1 *= INV_BIG
    return jm, jm1


@njit(cache=True)
def jn_pair(m, x):
    """(J_m(x), J_{m+1}(x)) for integer m >= 0 and x >= 0."""
    if x == 0.0:
        return (1.0 if m == 0 else 0.0), 0.0
    if x * x <= 4.0 * (m + 1):
        return _series_pair(m, x)
    if x >= HANKEL_MIN_X and x >= m:
        return _forward_pair(m, x)
    return _miller_pair(m, x)


@njit(cache=True)
def jn_and_deriv(p, x):
    """(J_p(x), J_p'(x)) for x > 0."""
    if p == 0:
        a, b = jn_pair(0, x)
        return a, -b
    a, b = jn_pair(p - 1, x)
    return b, a - (p / x) * b


@njit(cache=True)
def jn_pair_many(m, xs):
    out0 = np.empty(xs.shape[0])
    out1 = np.empty(xs.shape[0])
    for i in range(xs.shape[0]):
        out0[i], out1[i] = jn_pair(m, xs[i])
    return out0, out1


# ---------------------------------------------------------------------------
# numpy vectorized path (scalar m, array x)


def _series_pair_np(m, x):
    h = 0.5 * x
    q = -h * h
    lead = np.ones_like(x)
    for i in range(1, m + 1):
        lead *= h / i
    res = []
    for order in (m, m + 1):
        s = np.ones_like(x)
        t = np.ones_like(x)
        active = np.ones(x.shape, dtype=bool)
        for k in range(1, 200):
            t = np.where(active, t * q / (k * (order + k)), t)
            s = np.where(active, s + t, s)
            active &= np.abs(t) > 1e-17 * np.abs(s)
            if not active.any():
                break
        res.append(s)
    return lead * res[0], lead * (h / (m + 1)) * res[1]


def _hankel_pq_np(mu, x):
    p = np.ones_like(x)
    q = np.zeros_like(x)
    a = np.ones_like(x)
    prev = np.ones_like(x)
    active = np.ones(x.shape, dtype=bool)
    for k in range(1, 200):
        a_new = a * (mu - (2.0 * k - 1.0) ** 2) / (k * 8.0 * x)
        active &= np.abs(a_new) <= prev
        if not active.any():
            break
        a = np.where(active, a_new, a)
        prev = np.where(active, np.abs(a_new), prev)
        inc = np.where(active, a_new, 0.0)
        r = k % 4
        if r == 1:
            q = q + inc
        elif r == 2:
            p = p - inc
        elif r == 3:
            q = q - inc
        else:
            p = p + inc
        active &= np.abs(a_new) >= 1e-18
    return p, q


def _forward_pair_np(m, x):
    c = np.cos(x)
    s = np.sin(x)
    amp = _SQRT_2_OVER_PI / np.sqrt(x)
    p0, q0 = _hankel_pq_np(0.0, x)
    p1, q1 = _hankel_pq_np(4.0, x)
    j0 = amp * (p0 * (c + s) - q0 * (s - c)) * _INV_SQRT2
    j1 = amp * (p1 * (s - c) + q1 * (s + c)) * _INV_SQRT2
    if m == 0:
        return j0, j1
    prev, cur = j0, j1
    tox = 2.0 / x
    for k in range(1, m + 1):
        prev, cur = cur, k * tox * cur - prev
    return prev, cur


def _miller_pair_np(m, x):
    nstart = miller_start(m, float(x.max()))
    tox = 2.0 / x
    f_next = np.zeros_like(x)
    f = np.ones_like(x)
    even_sum = np.zeros_like(x)
    rescales = np.zeros(x.shape, dtype=np.int64)
    rec_m = rec_m1 = None
    cnt_m = cnt_m1 = None
    for j in range(nstart, 0, -1):
        if j == m + 1:
            rec_m1, cnt_m1 = f.copy(), rescales.copy()
        elif j == m:
            rec_m, cnt_m = f.copy(), rescales.copy()
        if j % 2 == 0:
            even_sum += f
        f_prev = j * tox * f - f_next
        f_next = f
        f = f_prev
        big = np.abs(f) > BIG
        if big.any():
            f = np.where(big, f * INV_BIG, f)
            f_next = np.where(big, f_next * INV_BIG, f_next)
            even_sum = np.where(big, even_sum * INV_BIG, even_sum)
            rescales += big
    if m == 0:
        rec_m, cnt_m = f.copy(), rescales.copy()
    norm = f + 2.0 * even_sum
    jm = rec_m / norm
    jm1 = rec_m1 / norm
    for vals, cnt in ((jm, cnt_m), (jm1, cnt_m1)):
        extra = rescales - cnt
        for _ in range(int(extra.max(initial=0))):
            vals[extra > 0] *= INV_BIG
            extra -= 1
    return jm, jm1


def jn_pair_np(m, x):
    """Vectorized (J_m(x), J_{m+1}(x)) for scalar m and an array of x >= 0."""
    x = np.asarray(x, dtype=np.float64)
    shape = x.shape
    x = x.ravel()
    j0 = np.empty_like(x)
    j1 = np.empty_like(x)
    zero = x == 0.0
    series = ~zero & (x * x <= 4.0 * (m + 1))
    forward = ~zero & ~series & (x >= HANKEL_MIN_X) & (x >= m)
    miller = ~zero & ~series & ~forward
    j0[zero] = 1.0 if m == 0 else 0.0
    j1[zero] = 0.0
    for mask, fn in ((series, _series_pair_np), (forward, _forward_pair_np), (miller, _miller_pair_np)):
        if mask.any():
            a, b = fn(m, x[mask])
            j0[mask] = a
            j1[mask] = b
    return j0.reshape(shape), j1.reshape(shape)


def jn_and_deriv_np(p, x):
    x = np.asarray(x, dtype=np.float64)
    if p == 0:
        a, b = jn_pair_np(0, x)
        return a, -b
    a, b = jn_pair_np(p - 1, x)
    return b, a - (p / x) * b
