"""Deterministic compensated reductions.

Every reduction that feeds a reported number goes through here so that the
summation order is fixed and independent of how the work was partitioned.
"""

import math

import numpy as np


def exact_sum(values):
    """Correctly rounded sum of real values (Shewchuk, via math.fsum).

    The result does not depend on the order of ``values``.
    """
    return math.fsum(np.asarray(values, dtype=float).ravel().tolist())


def exact_sum_complex(values):
    v = np.asarray(values, dtype=complex).ravel()
    return complex(math.fsum(v.real.tolist()), math.fsum(v.imag.tolist()))


def kahan_rows(terms):
    """Neumaier-compensated sum along the last axis, processed column by column.

    ``terms`` has shape (..., n); the columns are added in ascending index
    order, so every row sees the same fixed order whatever its length.
    Works for real and complex arrays.
    """
    terms = np.asarray(terms)
    s = np.zeros(terms.shape[:-1], dtype=terms.dtype)
    c = np.zeros_like(s)
    for i in range(terms.shape[-1]):
        x = terms[..., i]
        t = s + x
        if np.iscomplexobj(terms):
            c += _neumaier_err(s.real, x.real, t.real) + 1j * _neumaier_err(s.imag, x.imag, t.imag)
        else:
            c += _neumaier_err(s, x, t)
        s = t
    return s + c


def _neumaier_err(s, x, t):
    big = np.abs(s) >= np.abs(x)
    return np.where(big, (s - t) + x, (x - t) + s)
