"""Complex log-gamma by the Stirling series, with recurrence and reflection.

The branch is the principal one: analytic off the negative real axis and
satisfying log_gamma(z + 1) = log_gamma(z) + log(z).
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np


class PoleError(ZeroDivisionError):
    """Gamma has a pole at a nonpositive integer."""


def _bernoulli(n_max):
    # Akiyama-Tanigawa, exact
    out = []
    a = [Fraction(0)] * (n_max + 1)
    for m in range(n_max + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    return out


_B = _bernoulli(24)
# Stirling coefficients B_2j / (2j (2j - 1)), j = 1..12
_STIRLING = np.array([float(_B[2 * j] / (2 * j * (2 * j - 1))) for j in range(1, 13)])
_SHIFT = 12.0
_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)
_LOG_PI = math.log(math.pi)


def _stirling(z):
    """log Gamma(z) for |z| >= 12 away from the negative axis."""
    w = 1.0 / z
    w2 = w * w
    series = np.zeros_like(z)
    for c in _STIRLING[::-1]:
        series = series * w2 + c
    return (z - 0.5) * np.log(z) - z + _HALF_LOG_2PI + series * w


def _loggamma_right(z):
    """Principal log Gamma for re(z) >= 1/2 (vectorized)."""
    need = np.where(np.abs(z.imag) < _SHIFT, np.ceil(np.maximum(_SHIFT - z.real, 0.0)), 0.0)
    n_max = int(need.max()) if need.size else 0
    acc = np.zeros_like(z)
    for j in range(n_max):
        m = need > j
        if not m.any():
            break
        acc[m] += np.log(z[m] + j)
    return _stirling(z + need) - acc


def _logsin_pi_upper(z):
    """Analytic log sin(pi z) for im(z) >= 0, continuous across the half-plane."""
    q = np.exp(2j * np.pi * z)
    return -1j * np.pi * z + 0.5j * np.pi - math.log(2.0) + np.log1p(-q)


def log_gamma(z):
    """Principal branch of log Gamma(z) for complex (or real) z.

    Accepts scalars or arrays.  Raises :class:`PoleError` at nonpositive
    integers.
    """
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    pole = (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))
    if pole.any():
        raise PoleError(f"log_gamma pole at {z[pole][0].real:g}")
    out = np.empty_like(z)
    # positive reals: the C library lgamma is correctly anchored at 1 and 2
    pos = (z.imag == 0) & (z.real > 0)
    if pos.any():
        out[pos] = [math.lgamma(x) for x in z.real[pos]]
    right = (z.real >= 0.5) & ~pos
    if right.any():
        out[right] = _loggamma_right(z[right])
    left = ~right & ~pos
    if left.any():
        zl = z[left]
        flip = zl.imag < 0
        # work in the closed upper half-plane and conjugate back
        zu = np.where(flip, zl.conj(), zl)
        val = _LOG_PI - _logsin_pi_upper(zu) - _loggamma_right(1.0 - zu)
        out[left] = np.where(flip, val.conj(), val)
    return out[0] if scalar else out


def gamma_ratio(num, den):
    """Gamma(num) / Gamma(den) formed in log space.

    A pole of the denominator gives 0; a pole of the numerator (with a
    regular denominator) is an error.
    """
    num_a = np.asarray(num, dtype=complex)
    den_a = np.asarray(den, dtype=complex)

    def _is_pole(x):
        return (x.imag == 0) & (x.real <= 0) & (x.real == np.round(x.real))

    pn, pd = _is_pole(num_a), _is_pole(den_a)
    if np.any(pn & pd):
        raise PoleError("gamma_ratio with poles in both arguments is undefined")
    if np.any(pn):
        raise PoleError("gamma_ratio numerator at a pole")
    if np.ndim(num_a) == 0 and np.ndim(den_a) == 0:
        if pd:
            return 0j
        return complex(np.exp(log_gamma(num_a) - log_gamma(den_a)))
    num_b, den_b = np.broadcast_arrays(num_a, den_a)
    out = np.zeros(num_b.shape, dtype=complex)
    ok = ~np.broadcast_to(pd, num_b.shape)
    out[ok] = np.exp(log_gamma(num_b[ok]) - log_gamma(den_b[ok]))
    return out
