"""Exact arithmetic side: von Mangoldt sieve, r_{l,2}(n) and the direct Cesaro sum."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .summation import exact_sum


class CesaroWarning(UserWarning):
    """Parameters outside the range where the explicit formula is proved."""


@dataclass(frozen=True)
class SieveTable:
    """Lambda(m) for 1 <= m <= limit; index 0 is unused and holds 0."""

    limit: int
    lam: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.lam.shape != (self.limit + 1,):
            raise ValueError("lambda array must have length limit + 1")

    def __getitem__(self, m):
        return self.lam[m]

    def psi(self, x) -> float:
        """Chebyshev psi(x) = sum_{m <= x} Lambda(m)."""
        x = int(math.floor(x))
        if x > self.limit:
            raise ValueError(f"psi({x}) needs a table up to {x}, have {self.limit}")
        if x < 1:
            return 0.0
        return exact_sum(self.lam[1 : x + 1])

    def psi_array(self) -> np.ndarray:
        """Running psi(m) for m = 0..limit (plain cumulative sum)."""
        return np.cumsum(self.lam)


@dataclass(frozen=True)
class CesaroParams:
    """The triple (l, k, N).

    k must exceed 1/2 (below that the M5/M7 exchanges are not justified).
    For 1/2 < k <= 1 the parameters are accepted with ``warn`` set unless
    ``strict`` is true, in which case they are rejected.
    """

    ell: int
    k: float
    n_cap: int
    strict: bool = False

    def __post_init__(self):
        if int(self.ell) != self.ell or self.ell < 1:
            raise ValueError(f"ell must be an integer >= 1, got {self.ell!r}")
        if int(self.n_cap) != self.n_cap or self.n_cap < 1:
            raise ValueError(f"N must be a positive integer, got {self.n_cap!r}")
        if not math.isfinite(self.k) or self.k <= 0.5:
            raise ValueError(f"k must exceed 1/2, got {self.k!r}")
        if self.k <= 1:
            if self.strict:
                raise ValueError(f"strict mode requires k > 1, got {self.k!r}")
            warnings.warn(
                f"k={self.k} <= 1: outside the proved range, M6 tails are unreliable",
                CesaroWarning,
                stacklevel=3,
            )

    @property
    def warn(self) -> bool:
        return self.k <= 1

    @property
    def m1_max(self) -> int:
        """Largest m1 with m1^l + 1 <= N."""
        return iroot(max(self.n_cap - 1, 0), self.ell)


def iroot(n: int, ell: int) -> int:
    """floor(n ** (1/ell)) for n >= 0, exact."""
    if n < 0:
        raise ValueError("negative radicand")
    if n < 2 or ell == 1:
        return n
    r = int(round(n ** (1.0 / ell)))
    # the float root can be off by one either way
    while r ** ell > n:
        r -= 1
    while (r + 1) ** ell <= n:
        r += 1
    return r


def exact_root(n: int, ell: int):
    """Return m with m**ell == n, or None."""
    if n < 1:
        return None
    r = int(round(n ** (1.0 / ell)))
    for c in (r - 1, r, r + 1):
        if c >= 1 and c ** ell == n:
            return c
    return None


def build_lambda_table(limit: int) -> SieveTable:
    """Sieve of Eratosthenes, then Lambda(p^j) = log p with one log per prime."""
    limit = int(limit)
    if limit < 1:
        raise ValueError("limit must be >= 1")
    lam = np.zeros(limit + 1)
    if limit < 2:
        return SieveTable(limit, lam)
    is_p = np.ones(limit + 1, dtype=bool)
    is_p[:2] = False
    is_p[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if is_p[p]:
            is_p[p * p :: 2 * p] = False
    primes = np.flatnonzero(is_p)
    logs = np.log(primes.astype(float))
    lam[primes] = logs
    small = primes[primes <= math.isqrt(limit)]
    for p, lp in zip(small.tolist(), logs[: len(small)].tolist()):
        q = p * p
        while q <= limit:
            lam[q] = lp
            q *= p
    return SieveTable(limit, lam)


def _check_cover(table: SieveTable, n: int, ell: int):
    need = iroot(max(n - 1, 0), ell)
    if need > table.limit:
        raise ValueError(
            f"sieve table up to {table.limit} does not cover m1 <= {need} (n={n}, ell={ell})"
        )


def rep_count(n: int, ell: int, table: SieveTable) -> float:
    """r_{l,2}(n) = sum of Lambda(m1) over m1^l + m2^2 = n, m1, m2 >= 1.

    Accumulated in ascending m2, the same order as :func:`rep_counts`, so the
    two agree bit for bit.
    """
    n = int(n)
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_cover(table, n, ell)
    s = 0.0
    m2 = 1
    while m2 * m2 < n:
        m1 = exact_root(n - m2 * m2, ell)
        if m1 is not None:
            s += float(table.lam[m1])
        m2 += 1
    return s


def lambda_at_powers(n_max: int, ell: int, table: SieveTable) -> np.ndarray:
    """Array A with A[m^l] = Lambda(m) for m^l <= n_max, zero elsewhere."""
    a = np.zeros(n_max + 1)
    mmax = iroot(n_max, ell)
    if mmax > table.limit:
        raise ValueError(f"sieve table up to {table.limit} does not cover m1 <= {mmax}")
    m = np.arange(1, mmax + 1, dtype=np.int64)
    a[m ** ell] = table.lam[1 : mmax + 1]
    return a


def rep_counts(n_max: int, ell: int, table: SieveTable) -> np.ndarray:
    """r_{l,2}(n) for every 0 <= n <= n_max (entries 0 and 1 are zero)."""
    n_max = int(n_max)
    r = np.zeros(n_max + 1)
    if n_max < 2:
        return r
    a = lambda_at_powers(n_max, ell, table)
    m2 = 1
    while m2 * m2 < n_max:
        sq = m2 * m2
        r[sq:] += a[: n_max + 1 - sq]
        m2 += 1
    return r


def cesaro_weights(params: CesaroParams, nk_scale: bool = False) -> np.ndarray:
    """(1 - n/N)^k for n = 0..N, or (N - n)^k with ``nk_scale``."""
    N = params.n_cap
    n = np.arange(N + 1, dtype=float)
    if nk_scale:
        return (N - n) ** params.k
    return ((N - n) / N) ** params.k


def direct_cesaro(params: CesaroParams, table: SieveTable, nk_scale: bool = False) -> float:
    """R_k(N) = sum_{n <= N} r(n) (1 - n/N)^k / Gamma(k + 1).

    The products are reduced with a correctly rounded sum, so the value is
    independent of order; the n = N term carries weight exactly zero.
    """
    N = params.n_cap
    _check_cover(table, N, params.ell)
    if N < 2:
        return 0.0
    r = rep_counts(N, params.ell, table)
    w = cesaro_weights(params, nk_scale)
    return exact_sum(r * w) / math.gamma(params.k + 1)


@dataclass(frozen=True)
class ExpSumCheck:
    lhs: float
    rhs: float
    residual: float
    relative_residual: float
    pnt_ratio: float
    lhs_truncated: bool
    rhs_truncated: bool

    @property
    def truncated(self) -> bool:
        return self.lhs_truncated or self.rhs_truncated


def stilde(a: float, ell: int, table: SieveTable) -> tuple[float, bool]:
    """S~_l(a) = sum_m Lambda(m) exp(-m^l a), truncated at the table limit.

    Returns (value, truncated) where ``truncated`` is set when the first
    omitted weight exp(-(limit+1)^l a) is not below 1e-17.
    """
    m = np.arange(1, table.limit + 1, dtype=float)
    x = m ** ell * a
    keep = x < 745.0
    val = exact_sum(table.lam[1:][keep] * np.exp(-x[keep]))
    truncated = (table.limit + 1.0) ** ell * a < 39.0
    return val, truncated


def exp_sum_identity_check(a: float, ell: int, cutoff: int, table: SieveTable) -> ExpSumCheck:
    """Compare sum_{n <= cutoff} r(n) e^{-na} with S~_l(a) omega_2(a).

    Also reports the prime number theorem ratio S~_l(a) l a^{1/l} / Gamma(1/l),
    which tends to 1 as a -> 0+.  Truncation of either side is flagged, never
    silently accepted.
    """
    from .specfun.theta import omega2

    if not a > 0:
        raise ValueError("a must be positive")
    cutoff = int(cutoff)
    if cutoff < 2:
        raise ValueError("cutoff must be >= 2")
    r = rep_counts(cutoff, ell, table)
    n = np.arange(cutoff + 1, dtype=float)
    lhs = exact_sum(r * np.exp(-n * a))
    s, rhs_trunc = stilde(a, ell, table)
    rhs = s * float(np.real(omega2(a)))
    res = abs(lhs - rhs)
    # e^{-a cutoff} bounds the relative size of the omitted n > cutoff terms
    lhs_trunc = a * cutoff < 39.0
    ratio = s * ell * a ** (1.0 / ell) / math.gamma(1.0 / ell)
    return ExpSumCheck(
        lhs=lhs,
        rhs=rhs,
        residual=res,
        relative_residual=res / max(abs(rhs), 1e-300),
        pnt_ratio=ratio,
        lhs_truncated=lhs_trunc,
        rhs_truncated=rhs_trunc,
    )
