"""Casimir energy and forces inside a perfectly conducting cylindrical cavity."""

__version__ = "0.1.0"

from cylcasimir.backend import USE_NUMBA
from cylcasimir.specfun import (
    BesselZeroTable,
    QuadratureSpec,
    bessel_j,
    bessel_j_prime,
    bessel_zero,
    build_zero_table,
    integrate,
)
from cylcasimir.sum_engine import ConvergenceReport, TruncationOrder, shell_sum
from cylcasimir.cavity_model import (
    CavityGeometry,
    PlasmaCutoff,
    casimir_energy,
    dimensionless_force_sums,
    force_axial,
    force_radial,
)

__all__ = [
    "USE_NUMBA",
    "BesselZeroTable",
    "QuadratureSpec",
    "bessel_j",
    "bessel_j_prime",
    "bessel_zero",
    "build_zero_table",
    "integrate",
    "ConvergenceReport",
    "TruncationOrder",
    "shell_sum",
    "CavityGeometry",
    "PlasmaCutoff",
    "casimir_energy",
    "dimensionless_force_sums",
    "force_axial",
    "force_radial",
]
