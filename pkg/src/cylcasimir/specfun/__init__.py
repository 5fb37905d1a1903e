"""Bessel functions, their zeros, and adaptive quadrature."""

from cylcasimir.specfun.bessel import MAX_ORDER, bessel_j, bessel_j_pair, bessel_j_prime
from cylcasimir.specfun.quadrature import (
    QuadratureError,
    QuadratureSpec,
    gauss_legendre,
    integrate,
)
from cylcasimir.specfun.zeros import (
    BesselZeroTable,
    CacheError,
    CorruptCacheError,
    bessel_zero,
    build_zero_table,
    default_cache_path,
    load_zero_table,
    save_zero_table,
)
from cylcasimir.specfun.normalization import normalization_closed_form, normalization_integral

__all__ = [
    "MAX_ORDER",
    "bessel_j",
    "bessel_j_pair",
    "bessel_j_prime",
    "QuadratureError",
    "QuadratureSpec",
    "gauss_legendre",
    "integrate",
    "BesselZeroTable",
    "CacheError",
    "CorruptCacheError",
    "bessel_zero",
    "build_zero_table",
    "default_cache_path",
    "load_zero_table",
    "save_zero_table",
    "normalization_closed_form",
    "normalization_integral",
]
