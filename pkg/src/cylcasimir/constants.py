"""Physical constants (CODATA 2018 exact/recommended values)."""

import math

HBAR = 1.054571817e-34  # J s
SPEED_OF_LIGHT = 2.99792458e8  # m/s
HBAR_C = HBAR * SPEED_OF_LIGHT  # J m

# Rounded light speed. Converting omega_p = 1e16 rad/s at a = 1e-7 m with
# this value gives y_p = 10/3, the cutoff that the reference force-sum tables use.
ROUNDED_LIGHT_SPEED = 3.0e8

PI = math.pi
