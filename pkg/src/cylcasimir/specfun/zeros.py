"""Positive zeros x_{mn} of J_m, tabulated and cached on disk.

Cache layout (little endian)::

    magic      8 bytes   b"CYLBZT\\x00\\x01"
    version    uint32
    max_order  uint32
    max_index  uint32
    reserved   uint32
    accuracy   float64
    zeros      float64[(max_order + 1) * max_index], row-major by order m
    checksum   32 bytes  SHA-256 of everything above
"""

import hashlib
import logging
import os
import struct
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from cylcasimir import backend
from cylcasimir.specfun import _zero_kernels as zk
from cylcasimir.specfun.bessel import bessel_j, bessel_j_prime

log = logging.getLogger(__name__)

MAGIC = b"CYLBZT\x00\x01"
CACHE_VERSION = 1
ZERO_ACCURACY = 1e-11
MAX_TABLE_ORDER = 2000
MAX_TABLE_INDEX = 2000
_HEADER = struct.Struct("<8sIIIId")
_DIGEST_SIZE = 32


class CacheError(OSError):
    """Raised when a zero cache cannot be read or written."""


class CorruptCacheError(CacheError):
    """Checksum or header mismatch in a zero cache file."""


@dataclass(frozen=True)
class BesselZeroTable:
    """Zeros x_{mn} for 0 <= m <= max_order and 1 <= n <= max_index.

    ``zeros[m, n - 1]`` holds x_{mn}. The array is made read-only so a table
    can be shared between threads.
    """

    max_order: int
    max_index: int
    zeros: np.ndarray = field(repr=False)
    accuracy: float = ZERO_ACCURACY

    def __post_init__(self):
        if self.zeros.shape != (self.max_order + 1, self.max_index):
            raise ValueError(
                f"zero grid has shape {self.zeros.shape}, expected "
                f"({self.max_order + 1}, {self.max_index})"
            )
        self.zeros.setflags(write=False)

    def zero(self, m, n):
        if not (0 <= m <= self.max_order and 1 <= n <= self.max_index):
            raise IndexError(
                f"zero ({m}, {n}) outside table range m <= {self.max_order}, n <= {self.max_index}"
            )
        return float(self.zeros[m, n - 1])

    def covers(self, max_order, max_index):
        return max_order <= self.max_order and max_index <= self.max_index

    def sliced(self, max_order, max_index):
        if not self.covers(max_order, max_index):
            raise IndexError("requested range exceeds table")
        if (max_order, max_index) == (self.max_order, self.max_index):
            return self
        sub = np.array(self.zeros[: max_order + 1, :max_index])
        return BesselZeroTable(max_order, max_index, sub, self.accuracy)

    def to_bytes(self):
        header = _HEADER.pack(MAGIC, CACHE_VERSION, self.max_order, self.max_index, 0, self.accuracy)
        body = header + np.ascontiguousarray(self.zeros, dtype="<f8").tobytes()
        return body + hashlib.sha256(body).digest()

    @property
    def checksum(self):
        """SHA-256 hex digest of the serialized table (header and data)."""
        return hashlib.sha256(self.to_bytes()[:-_DIGEST_SIZE]).hexdigest()

    @classmethod
    def from_bytes(cls, raw):
        if len(raw) < _HEADER.size + _DIGEST_SIZE:
            raise CorruptCacheError("zero cache truncated")
        body, digest = raw[:-_DIGEST_SIZE], raw[-_DIGEST_SIZE:]
        if hashlib.sha256(body).digest() != digest:
            raise CorruptCacheError("zero cache checksum mismatch")
        magic, version, max_order, max_index, _, accuracy = _HEADER.unpack_from(body)
        if magic != MAGIC or version != CACHE_VERSION:
            raise CorruptCacheError("zero cache has unknown magic or version")
        expected = (max_order + 1) * max_index * 8
        if len(body) - _HEADER.size != expected:
            raise CorruptCacheError("zero cache payload size mismatch")
        zeros = np.frombuffer(body, dtype="<f8", offset=_HEADER.size).astype(np.float64)
        return cls(max_order, max_index, zeros.reshape(max_order + 1, max_index), accuracy)

    def residuals(self):
        """Newton-step size |J_m(z) / J_m'(z)| for every stored zero."""
        out = np.empty_like(self.zeros)
        for m in range(self.max_order + 1):
            z = self.zeros[m]
            out[m] = np.abs(bessel_j(m, z) / bessel_j_prime(m, z))
        return out

    def validate(self, tol=None):
        """Check residuals and interlacing; raise ValueError on the first failure."""
        tol = self.accuracy if tol is None else tol
        z = self.zeros
        if not np.all(np.diff(z, axis=1) > 0):
            raise ValueError("zeros are not strictly increasing in n")
        if self.max_order > 0:
            if not np.all(z[:-1] < z[1:]):
                raise ValueError("interlacing x_{m,n} < x_{m+1,n} violated")
            if self.max_index > 1 and not np.all(z[1:, :-1] < z[:-1, 1:]):
                raise ValueError("interlacing x_{m+1,n} < x_{m,n+1} violated")
        worst = float(self.residuals().max())
        if not worst < tol:
            raise ValueError(f"zero residual {worst:.3e} exceeds {tol:.1e}")
        return worst


def compute_zero_grid(max_order, max_index, use_numba=None):
    """Compute the (max_order + 1, max_index) grid by the interlacing cascade."""
    if max_order < 0 or max_index < 1:
        raise ValueError("need max_order >= 0 and max_index >= 1")
    use_numba = backend.USE_NUMBA if use_numba is None else use_numba
    row0 = zk.row_zero if use_numba else zk.row_zero_np
    step = zk.row_from_brackets if use_numba else zk.row_from_brackets_np
    grid = np.empty((max_order + 1, max_index))
    row = row0(max_index + max_order)
    grid[0] = row[:max_index]
    for m in range(1, max_order + 1):
        row = step(m, row, max_index + max_order - m)
        grid[m] = row[:max_index]
    return grid


def default_cache_dir():
    env = os.environ.get(backend.CACHE_DIR_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "cylcasimir"


def default_cache_path(max_order, max_index):
    return default_cache_dir() / f"bessel_zeros_m{max_order}_n{max_index}.bin"


def load_zero_table(path):
    """Read a cache file. Raises CorruptCacheError or OSError."""
    raw = Path(path).read_bytes()
    return BesselZeroTable.from_bytes(raw)


def save_zero_table(table, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_bytes(table.to_bytes())
    os.replace(tmp, path)


_MEMO = {}


def load_or_build_zero_table(max_order, max_index, cache_path=None):
    """Like :func:`build_zero_table` but also reports where the table came from.

    Returns ``(table, status)`` with status one of ``"memory"``, ``"loaded"``,
    ``"computed"`` or ``"recomputed"`` (cache present but corrupt or too small).
    """
    max_order = int(max_order)
    max_index = int(max_index)
    if max_order < 0 or max_index < 1:
        raise ValueError("need max_order >= 0 and max_index >= 1")
    if max_order > MAX_TABLE_ORDER or max_index > MAX_TABLE_INDEX:
        raise IndexError(
            f"zero table ({max_order}, {max_index}) beyond supported range "
            f"({MAX_TABLE_ORDER}, {MAX_TABLE_INDEX})"
        )

    if cache_path is None:
        for table in _MEMO.values():
            if table.covers(max_order, max_index):
                return table.sliced(max_order, max_index), "memory"

    status = "computed"
    if cache_path is not None:
        cache_path = Path(cache_path)
        if cache_path.exists():
            status = "recomputed"
            try:
                cached = load_zero_table(cache_path)
            except CorruptCacheError as exc:
                warnings.warn(f"{cache_path}: {exc}; recomputing", RuntimeWarning, stacklevel=3)
            else:
                if cached.covers(max_order, max_index):
                    _MEMO[(cached.max_order, cached.max_index)] = cached
                    return cached.sliced(max_order, max_index), "loaded"
                log.info("cache %s too small, recomputing", cache_path)
                # grow rather than shrink what is on disk
                grown = max(max_order, cached.max_order), max(max_index, cached.max_index)
                table, _ = load_or_build_zero_table(*grown)
                save_zero_table(table, cache_path)
                return table.sliced(max_order, max_index), status

    table = None
    for memo in _MEMO.values():
        if memo.covers(max_order, max_index):
            table = memo.sliced(max_order, max_index)
            break
    if table is None:
        log.info("computing Bessel zeros m <= %d, n <= %d", max_order, max_index)
        table = BesselZeroTable(max_order, max_index, compute_zero_grid(max_order, max_index))
        _MEMO[(max_order, max_index)] = table
    if cache_path is not None:
        save_zero_table(table, cache_path)
    return table, status


def build_zero_table(max_order, max_index, cache_path=None):
    """Return a zero table covering ``m <= max_order`` and ``n <= max_index``.

    With ``cache_path``, a valid cache that covers the range is loaded and
    sliced. A corrupt cache is reported with a warning and rebuilt; an
    unreadable one raises OSError. Tables are also memoized per process.
    """
    return load_or_build_zero_table(max_order, max_index, cache_path)[0]


def bessel_zero(m, n):
    """n-th positive zero of J_m."""
    if m < 0 or n < 1 or m > MAX_TABLE_ORDER or n > MAX_TABLE_INDEX:
        raise IndexError(f"zero ({m}, {n}) outside supported range")
    return build_zero_table(m, n).zero(m, n)
