"""Numerical check of the Laplace line-integral kernels.

(1/2 pi) int_{-U}^{U} e^{iDu} (a + iu)^{-s} du tends, as U -> oo, to
D^{s-1} e^{-aD} / Gamma(s) for D > 0, to 0 for D < 0 and to 1/2 for s = 1,
D = 0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .gamma import log_gamma

_X, _W = np.polynomial.legendre.leggauss(16)


@dataclass(frozen=True)
class LaplaceCheck:
    value: complex
    target: complex
    residual: float
    tail_estimate: float
    tail_ok: bool


def _edges(a, D, U):
    pts = [0.0]
    x = 0.5 * a
    while x < U:
        pts.append(x)
        x *= 2.0
    pts.append(U)
    pts = np.array(pts)
    if D != 0:
        # at most half an oscillation per 16-point panel
        step = math.pi / abs(D)
        fine = [pts[0]]
        for lo, hi in zip(pts[:-1], pts[1:]):
            n = max(1, math.ceil((hi - lo) / step))
            fine.extend(np.linspace(lo, hi, n + 1)[1:])
        pts = np.array(fine)
    return np.concatenate([-pts[:0:-1], pts])


def laplace_integral(s, a, D, half_width):
    s = complex(s)
    e = _edges(a, D, half_width)
    lo, hi = e[:-1, None], e[1:, None]
    half = 0.5 * (hi - lo)
    u = (lo + half * (_X + 1.0)).ravel()
    w = (half * _W).ravel()
    f = np.exp(1j * D * u - s * np.log(a + 1j * u))
    return complex(np.dot(w, f)) / (2 * math.pi)


def laplace_kernel_check(s, a, D, half_width, tol=1e-6) -> LaplaceCheck:
    """Quadrature of the truncated kernel against its limit.

    ``tail_estimate`` bounds the part of the integral beyond +-half_width;
    ``tail_ok`` is false when it exceeds ``tol``, in which case a small
    residual cannot be trusted and a large one is expected.
    """
    s = complex(s)
    a = float(a)
    D = float(D)
    U = float(half_width)
    if not s.real > 0:
        raise ValueError("re(s) must be positive")
    if not a > 0 or not U > 0:
        raise ValueError("a and half_width must be positive")
    if D < 0 and not s.real > 1:
        raise ValueError("D < 0 needs re(s) > 1")
    if D == 0 and s != 1:
        raise ValueError("D = 0 is only defined here for s = 1")
    val = laplace_integral(s, a, D, U)
    if D > 0:
        target = complex(cmath.exp((s - 1) * math.log(D) - a * D - log_gamma(s)))
    elif D < 0:
        target = 0j
    else:
        target = 0.5 + 0j
    growth = math.exp(0.5 * math.pi * abs(s.imag))
    if D != 0:
        # one integration by parts on each side
        tail = growth * U ** (-s.real) / (math.pi * abs(D))
    else:
        # the odd parts cancel; the even part decays like |s| a u^{-re s - 1}
        tail = growth * abs(s) * a * U ** (-s.real) / (math.pi * s.real)
    return LaplaceCheck(val, target, abs(val - target), tail, tail <= tol)
