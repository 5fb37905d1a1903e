"""Backend selection for the hot kernels.

Set ``CYLCASIMIR_BACKEND=numpy`` before import to force the pure-numpy
path. Any other value (or unset) uses numba when it can be imported.
Both implementations are always importable; only the default dispatch
changes, so tests can compare them side by side.
"""

import os

BACKEND_ENV = "CYLCASIMIR_BACKEND"
CACHE_DIR_ENV = "CYLCASIMIR_CACHE_DIR"

try:
    import numba
    from numba import njit, prange

    HAVE_NUMBA = True
    if "NUMBA_THREADING_LAYER_PRIORITY" not in os.environ:
        # skip the tbb probe, which warns on older system TBB builds
        numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    HAVE_NUMBA = False
    numba = None
    prange = range

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f


USE_NUMBA = HAVE_NUMBA and os.environ.get(BACKEND_ENV, "numba").strip().lower() != "numpy"


def backend_name():
    return "numba" if USE_NUMBA else "numpy"


def set_threads(threads):
    """Set the worker count used by parallel kernels.

    ``None`` or ``"auto"`` means one per CPU. Numba is capped at the size of
    its thread pool (``NUMBA_NUM_THREADS``); the returned request is what
    the numpy path uses for its own pool.
    """
    if threads is None or threads == "auto":
        threads = os.cpu_count() or 1
    threads = max(1, int(threads))
    if HAVE_NUMBA:
        numba.set_num_threads(min(threads, numba.config.NUMBA_NUM_THREADS))
    return threads
