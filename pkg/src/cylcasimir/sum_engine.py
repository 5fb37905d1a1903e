"""Deterministic triple sums over the (m, n, l) truncation box.

The box ``0 <= m <= M, 1 <= n <= N, 1 <= l <= L`` is split into shells
``max(m, n, l) = s``. Every term is multiplied by the azimuthal weight
(1 for m = 0, 2 otherwise), the terms of one shell are laid out in
lexicographic (m, n, l) order and reduced with :func:`pairwise_sum`, and
the shell totals are accumulated in ascending s. That whole recipe is the
canonical reduction tree: the result does not depend on thread count, and a
naive triple loop that buckets terms the same way reproduces it bit for bit.

A cube k = M = N = L is exactly shells 1..k, so one pass over shells yields
every checkpoint of a convergence study.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from cylcasimir import backend
from cylcasimir.backend import njit, prange

BLOCK = 128
DEFAULT_CHECKPOINTS = (10, 50, 100, 150, 200, 250, 300, 350, 400, 450, 499, 500)


@dataclass(frozen=True)
class TruncationOrder:
    """Sum limits: m in [0, M], n in [1, N], l in [1, L]."""

    M: int
    N: int
    L: int

    def __post_init__(self):
        if self.M < 0 or self.N < 1 or self.L < 1:
            raise ValueError(f"invalid truncation {self}; need M >= 0, N >= 1, L >= 1")

    @classmethod
    def cube(cls, k):
        return cls(k, k, k)

    @property
    def max_shell(self):
        return max(self.M, self.N, self.L)

    def check_table(self, zeros):
        if not zeros.covers(self.M, self.N):
            raise IndexError(
                f"truncation M={self.M}, N={self.N} exceeds zero table "
                f"(m <= {zeros.max_order}, n <= {zeros.max_index})"
            )


@dataclass(frozen=True)
class ConvergenceReport:
    checkpoints: tuple
    values_a: np.ndarray
    values_b: np.ndarray

    @property
    def ratios_a(self):
        return self.values_a[1:] / self.values_a[:-1]

    @property
    def ratios_b(self):
        return self.values_b[1:] / self.values_b[:-1]

    def index(self, k):
        try:
            return self.checkpoints.index(k)
        except ValueError:
            raise ValueError(f"checkpoint {k} not in report {self.checkpoints}") from None

    def value(self, k):
        i = self.index(k)
        return float(self.values_a[i]), float(self.values_b[i])

    def scaled(self, factor_a=1.0, factor_b=1.0):
        return ConvergenceReport(self.checkpoints, self.values_a * factor_a, self.values_b * factor_b)


def convergence_ratio(report, k_hi, k_lo):
    """(value_a(k_hi) / value_a(k_lo), value_b(k_hi) / value_b(k_lo))."""
    a_hi, b_hi = report.value(k_hi)
    a_lo, b_lo = report.value(k_lo)
    return a_hi / a_lo, b_hi / b_lo


# ---------------------------------------------------------------------------
# canonical pairwise reduction


def pairwise_sum(values):
    """Sum in fixed blocks of BLOCK (sequential), then pairwise over blocks."""
    v = np.asarray(values, dtype=np.float64).ravel()
    if v.size == 0:
        return 0.0
    nblocks = -(-v.size // BLOCK)
    padded = np.zeros(nblocks * BLOCK)
    padded[: v.size] = v
    level = np.cumsum(padded.reshape(nblocks, BLOCK), axis=1)[:, -1]
    while level.size > 1:
        odd = level.size % 2
        pairs = level[: level.size - odd : 2] + level[1 : level.size - odd : 2]
        level = np.concatenate([pairs, level[-1:]]) if odd else pairs
    return float(level[0])


@njit(cache=True)
def pairwise_sum_jit(v, count):
    if count == 0:
        return 0.0
    nblocks = (count + BLOCK - 1) // BLOCK
    level = np.empty(nblocks)
    for b in range(nblocks):
        acc = 0.0
        end = min((b + 1) * BLOCK, count)
        for i in range(b * BLOCK, end):
            acc += v[i]
        level[b] = acc
    size = nblocks
    while size > 1:
        half = size // 2
        for i in range(half):
            level[i] = level[2 * i] + level[2 * i + 1]
        if size % 2:
            level[half] = level[size - 1]
            size = half + 1
        else:
            size = half
    return level[0]


# ---------------------------------------------------------------------------
# shell enumeration


def shell_indices(s, trunc=None):
    """(m, n, l) int arrays of the shell max(m, n, l) = s, lexicographic order."""
    M, N, L = (s, s, s) if trunc is None else (trunc.M, trunc.N, trunc.L)
    mm, nn = np.meshgrid(np.arange(min(s, M) + 1), np.arange(1, min(s, N) + 1), indexing="ij")
    mm = mm.ravel()
    nn = nn.ravel()
    full = (mm == s) | (nn == s)
    lmax = min(s, L)
    counts = np.where(full, lmax, 1 if s <= L else 0)
    m = np.repeat(mm, counts)
    n = np.repeat(nn, counts)
    # l runs 1..lmax on full rows, otherwise is the single value s
    starts = np.cumsum(counts) - counts
    offset = np.arange(m.size) - np.repeat(starts, counts)
    l = np.where(np.repeat(full, counts), offset + 1, s)
    return m.astype(np.int64), n.astype(np.int64), l.astype(np.int64)


def eta(m):
    return np.where(np.asarray(m) == 0, 1.0, 2.0)


# ---------------------------------------------------------------------------
# terms


class KernelTerm:
    """A summand with both a numba scalar kernel and a numpy evaluator.

    Subclasses set ``kernel`` (an njit function ``(m, n, l, zeros, params)
    -> (a, b)``) and implement ``evaluate(m, n, l)`` on integer arrays.
    Weights are applied by the engine, not by the term.
    """

    kernel = None

    def __init__(self, zeros, params):
        self.table = zeros
        self.zeros = np.ascontiguousarray(zeros.zeros)
        self.params = np.asarray(params, dtype=np.float64)

    def evaluate(self, m, n, l):
        raise NotImplementedError

    def __call__(self, m, n, l):
        return self.evaluate(np.asarray(m), np.asarray(n), np.asarray(l))

    def evaluate_jit(self, m, n, l):
        return _evaluate_many(self.kernel, self.zeros, self.params, m.astype(np.int64), n.astype(np.int64), l.astype(np.int64))


@njit
def _evaluate_many(kernel, zeros, params, m, n, l):
    a = np.empty(m.shape[0])
    b = np.empty(m.shape[0])
    for i in range(m.shape[0]):
        a[i], b[i] = kernel(m[i], n[i], l[i], zeros, params)
    return a, b


@njit(parallel=True)
def _shell_totals_jit(kernel, zeros, params, M, N, L, smax):
    out = np.zeros((smax + 1, 2))
    for s in prange(1, smax + 1):
        mmax = min(s, M)
        nmax = min(s, N)
        lmax = min(s, L)
        count = 0
        for m in range(mmax + 1):
            for n in range(1, nmax + 1):
                if m == s or n == s:
                    count += lmax
                elif s <= L:
                    count += 1
        bufa = np.empty(count)
        bufb = np.empty(count)
        i = 0
        for m in range(mmax + 1):
            w = 1.0 if m == 0 else 2.0
            for n in range(1, nmax + 1):
                if m == s or n == s:
                    l0 = 1
                    l1 = lmax
                elif s <= L:
                    l0 = s
                    l1 = s
                else:
                    continue
                for l in range(l0, l1 + 1):
                    a, b = kernel(m, n, l, zeros, params)
                    bufa[i] = w * a
                    bufb[i] = w * b
                    i += 1
        out[s, 0] = pairwise_sum_jit(bufa, count)
        out[s, 1] = pairwise_sum_jit(bufb, count)
    return out


def _shell_total_np(term, s, trunc):
    m, n, l = shell_indices(s, trunc)
    if m.size == 0:
        return 0.0, 0.0
    a, b = term(m, n, l)
    w = eta(m)
    return pairwise_sum(w * a), pairwise_sum(w * b)


def shell_totals(term, trunc, threads=None, use_numba=None):
    """Per-shell weighted totals, shape (max_shell + 1, 2); row 0 is empty.

    ``term`` is either a :class:`KernelTerm` or any vectorized callable
    ``(m, n, l) -> (a, b)``. Only KernelTerms run on the numba path.
    """
    use_numba = backend.USE_NUMBA if use_numba is None else use_numba
    smax = trunc.max_shell
    if use_numba and isinstance(term, KernelTerm):
        backend.set_threads(threads)
        return _shell_totals_jit(term.kernel, term.zeros, term.params, trunc.M, trunc.N, trunc.L, smax)
    out = np.zeros((smax + 1, 2))
    workers = backend.set_threads(threads)
    shells = range(1, smax + 1)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            totals = list(pool.map(lambda s: _shell_total_np(term, s, trunc), shells))
    else:
        totals = [_shell_total_np(term, s, trunc) for s in shells]
    for s, tot in zip(shells, totals):
        out[s] = tot
    return out


def _accumulate(totals):
    acc = np.zeros_like(totals)
    run_a = 0.0
    run_b = 0.0
    for s in range(1, totals.shape[0]):
        run_a += totals[s, 0]
        run_b += totals[s, 1]
        acc[s] = run_a, run_b
    return acc


def shell_sum(term, checkpoints=DEFAULT_CHECKPOINTS, threads=None, use_numba=None):
    """Cumulative weighted sums over the cubes m, n, l <= k for each checkpoint k."""
    checkpoints = tuple(int(k) for k in checkpoints)
    if not checkpoints or any(k < 1 for k in checkpoints):
        raise ValueError("checkpoints must be positive integers")
    if any(b <= a for a, b in zip(checkpoints, checkpoints[1:])):
        raise ValueError("checkpoints must be strictly ascending")
    kmax = checkpoints[-1]
    if isinstance(term, KernelTerm):
        TruncationOrder.cube(kmax).check_table(term.table)
    acc = _accumulate(shell_totals(term, TruncationOrder.cube(kmax), threads, use_numba))
    idx = list(checkpoints)
    return ConvergenceReport(checkpoints, acc[idx, 0].copy(), acc[idx, 1].copy())


def box_sum(term, trunc, threads=None, use_numba=None):
    """Weighted (a, b) totals over a general box, in the canonical order."""
    if isinstance(term, KernelTerm):
        trunc.check_table(term.table)
    acc = _accumulate(shell_totals(term, trunc, threads, use_numba))
    return float(acc[-1, 0]), float(acc[-1, 1])


def naive_box_sum(term, trunc, use_numba=False):
    """Reference triple loop: bucket terms by shell, reduce, accumulate.

    Kept deliberately plain; it shares only :func:`pairwise_sum` and the
    term with the engine.
    """
    buckets = {}
    for m in range(trunc.M + 1):
        for n in range(1, trunc.N + 1):
            for l in range(1, trunc.L + 1):
                buckets.setdefault(max(m, n, l), []).append((m, n, l))
    run_a = 0.0
    run_b = 0.0
    for s in sorted(buckets):
        idx = np.array(buckets[s], dtype=np.int64)
        m, n, l = idx[:, 0], idx[:, 1], idx[:, 2]
        if use_numba:
            a, b = term.evaluate_jit(m, n, l)
        else:
            a, b = term(m, n, l)
        w = np.where(m == 0, 1.0, 2.0)
        run_a += pairwise_sum(w * a)
        run_b += pairwise_sum(w * b)
    return run_a, run_b
