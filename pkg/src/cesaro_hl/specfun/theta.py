"""omega_2(z) = sum_{m>=1} e^{-m^2 z} and theta(z) = 1 + 2 omega_2(z), re(z) > 0."""

from __future__ import annotations

import cmath
import math

import numpy as np

from ..summation import exact_sum_complex

# e^{-re(z) M^2} < 1e-18
_LOG_CUT = 18 * math.log(10)


def _cutoff(re_z: float) -> int:
    return math.isqrt(int(math.ceil(_LOG_CUT / re_z))) + 2


def omega2(z) -> complex:
    z = complex(z)
    if not z.real > 0:
        raise ValueError(f"omega2 needs re(z) > 0, got {z}")
    m = np.arange(1, _cutoff(z.real) + 1, dtype=float)
    return exact_sum_complex(np.exp(-(m * m) * z))


def theta(z) -> complex:
    return 1 + 2 * omega2(z)


def theta_functional_eq_residual(z) -> float:
    """|theta(z) - (pi/z)^{1/2} theta(pi^2/z)|, principal square root."""
    z = complex(z)
    if not z.real > 0:
        raise ValueError(f"theta needs re(z) > 0, got {z}")
    return abs(theta(z) - cmath.sqrt(math.pi / z) * theta(math.pi**2 / z))
