import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from cylcasimir import backend

ROOT = Path(__file__).resolve().parents[1]


def _backend_in_subprocess(value):
    env = dict(os.environ, CYLCASIMIR_BACKEND=value)
    out = subprocess.run(
        [sys.executable, "-c", "from cylcasimir import backend; print(backend.backend_name())"],
        env=env, capture_output=True, text=True, check=True,
    )
    return out.stdout.strip()


@pytest.mark.parametrize("value,expected", [("numpy", "numpy"), ("NumPy ", "numpy"), ("numba", "numba"), ("", "numba")])
def test_env_flag_selects_backend(value, expected):
    assert _backend_in_subprocess(value) == expected


def test_set_threads():
    assert backend.set_threads(1) == 1
    assert backend.set_threads("auto") >= 1
    assert backend.set_threads(None) >= 1


def test_benchmark_runs_and_backends_agree():
    proc = subprocess.run(
        [sys.executable, str(ROOT / "benchmarks" / "bench_backends.py"), "--k", "12", "--zeros", "12", "--repeat", "1", "--json"],
        capture_output=True, text=True, check=True,
    )
    nb, npy = json.loads(proc.stdout)
    assert (nb["backend"], npy["backend"]) == ("numba", "numpy")
    assert nb["check"][1] == pytest.approx(npy["check"][1], rel=1e-14)
    assert nb["check"][2] == pytest.approx(npy["check"][2], rel=1e-14)
