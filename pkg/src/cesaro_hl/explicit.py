"""The seven-term development M1..M7 and the residual against the direct sum.

All terms are on the normalized scale (the Cesaro sum divided by N^k, with
weights (1 - n/N)^k); ``nk_scale`` multiplies everything by N^k.  Zero sums
run over gamma > 0 and add 2 re(term), which accounts for the conjugate
zeros; the imaginary part left after explicitly pairing rho with its
conjugate is reported as leakage.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import zeros as zmod
from .arith import CesaroParams, SieveTable, build_lambda_table, direct_cesaro, iroot
from .specfun.bessel import BesselError, BesselRegime, log_bessel_j, log_bessel_uniform
from .specfun.gamma import log_gamma
from .summation import exact_sum, kahan_rows
from .zeros import ZeroSet

LOG_2PI = math.log(2 * math.pi)
LOG_PI = math.log(math.pi)
# ordinates below the smallest height the tail integrals accept
LOW_ZEROS = (
    14.134725142,
    21.022039639,
    25.010857580,
    30.424876126,
    32.935061588,
    37.586178159,
    40.918719012,
    43.327073281,
    48.005150881,
    49.773832478,
)
TERM_NAMES = ("m1", "m2", "m3", "m4", "m5", "m6", "m7")


@dataclass(frozen=True)
class TruncationConfig:
    """Cutoffs for the infinite sums.

    ``zero_height_T`` of None means the full height of the zero set.
    ``m6_order`` is "zero_outer" (production) or "j_outer" (debug check).
    ``reverse`` reverses every internal summation order.
    """

    zero_height_T: float | None = None
    bessel_jmax: int = 200
    target_tolerance: float = 1e-10
    m6_order: str = "zero_outer"
    reverse: bool = False
    leak_sample: int = 64

    def __post_init__(self):
        if self.bessel_jmax < 0 or int(self.bessel_jmax) != self.bessel_jmax:
            raise ValueError("bessel_jmax must be a nonnegative integer")
        if not self.target_tolerance > 0:
            raise ValueError("target_tolerance must be positive")
        if self.m6_order not in ("zero_outer", "j_outer"):
            raise ValueError(f"unknown m6_order {self.m6_order!r}")
        if self.zero_height_T is not None and not self.zero_height_T >= 0:
            raise ValueError("zero_height_T must be >= 0")


@dataclass(frozen=True)
class TermValue:
    value: float
    tail: float = 0.0
    leak: float = 0.0
    note: str = ""


@dataclass(frozen=True)
class TermBreakdown:
    m: tuple
    tails: tuple
    imag_leakage: tuple
    notes: tuple = ("",) * 7

    def relative_leakage(self):
        return tuple(l / max(1.0, abs(v)) for l, v in zip(self.imag_leakage, self.m))


@dataclass(frozen=True)
class EvalReport:
    params: CesaroParams
    direct: float
    explicit_sum: float
    residual: float
    total_tail: float
    terms: TermBreakdown
    timings: dict = field(default_factory=dict)
    nk_scale: bool = False
    zero_height: float = 0.0
    jmax: int = 0

    def residual_without(self, *names) -> float:
        """direct minus the development with the named terms ('m1'...) left out."""
        drop = {TERM_NAMES.index(n) for n in names}
        kept = [v for i, v in enumerate(self.terms.m) if i not in drop]
        return self.direct - exact_sum(kept)


# ---------------------------------------------------------------------------
# closed forms


def eval_m1(params: CesaroParams) -> float:
    ell, k, N = params.ell, params.k, params.n_cap
    lg = math.lgamma(1.0 / ell) - math.log(2 * ell)
    a = math.exp(0.5 * math.log(math.pi) + lg + (0.5 + 1.0 / ell) * math.log(N) - math.lgamma(k + 1.5 + 1.0 / ell))
    b = math.exp(lg + math.log(N) / ell - math.lgamma(k + 1 + 1.0 / ell))
    return a - b


def eval_m4(params: CesaroParams) -> float:
    k, N = params.k, params.n_cap
    return -math.sqrt(math.pi) * LOG_2PI * math.sqrt(N) / (2 * math.gamma(k + 1.5))


# ---------------------------------------------------------------------------
# zero sums


def _zero_height(zeros: ZeroSet, trunc: TruncationConfig) -> float:
    if trunc.zero_height_T is None:
        return zeros.height
    T = float(trunc.zero_height_T)
    if not zeros.empty and T > zeros.height:
        raise ValueError(f"zero height {T} exceeds the loaded height {zeros.height}")
    return T


def _active(zeros: ZeroSet, T: float) -> np.ndarray:
    return zeros.gammas[: zeros.count_below(T)]


def _ordered(x, reverse):
    return x[::-1] if reverse else x


def _m23_log_terms(gam, params, c, sign):
    ell, k = params.ell, params.k
    s = (0.5 + 1j * gam) / ell
    pref = (0.5 * LOG_PI if c == 1.5 else 0.0) - math.log(2 * ell)
    n_shift = 0.5 if c == 1.5 else 0.0
    return pref + log_gamma(s) - log_gamma(k + c + s) + (s + n_shift) * math.log(params.n_cap)


def _m23_tail(params, T, variant, c):
    ell, k, N = params.ell, params.k, params.n_cap
    tail = zmod.tail_bound_m2m3(max(T, 50.0), k, ell, N, variant)
    low = np.array([g for g in LOW_ZEROS if g > T])
    if len(low):
        # T below 50: bound the omitted low zeros by their own magnitudes
        s = (0.5 + 1j * low) / ell
        mag = np.exp((log_gamma(s) - log_gamma(k + c + s)).real + (0.5 / ell + (0.5 if c == 1.5 else 0.0)) * math.log(N))
        pref = math.sqrt(math.pi) / ell if c == 1.5 else 1.0 / ell
        tail += zmod.SAFETY * pref * float(mag.sum())
    return tail


def _eval_zero_sum(params, zeros, trunc, variant):
    c, sign = (1.5, -1.0) if variant == "m2" else (1.0, 1.0)
    T = _zero_height(zeros, trunc)
    gam = _ordered(_active(zeros, T), trunc.reverse)
    tail = _m23_tail(params, T, variant, c)
    if len(gam) == 0:
        return TermValue(0.0, tail, 0.0, "no zeros")
    t_plus = np.exp(_m23_log_terms(gam, params, c, sign))
    t_minus = np.exp(_m23_log_terms(-gam, params, c, sign))
    value = sign * exact_sum((t_plus + t_minus).real)
    leak = abs(exact_sum((t_plus + t_minus).imag))
    return TermValue(value, tail, leak)


def eval_m2(params: CesaroParams, zeros: ZeroSet, trunc: TruncationConfig) -> TermValue:
    """-(sqrt(pi)/2l) sum_rho Gamma(rho/l)/Gamma(k+3/2+rho/l) N^{rho/l+1/2}."""
    return _eval_zero_sum(params, zeros, trunc, "m2")


def eval_m3(params: CesaroParams, zeros: ZeroSet, trunc: TruncationConfig) -> TermValue:
    """(1/2l) sum_rho Gamma(rho/l)/Gamma(k+1+rho/l) N^{rho/l}."""
    return _eval_zero_sum(params, zeros, trunc, "m3")


# ---------------------------------------------------------------------------
# Bessel sums with real order


def _j_power_tail(k: float, jmax: int) -> float:
    """Upper estimate of sum_{j > jmax} j^{-k-1}."""
    if jmax == 0:
        return 1.0 + 1.0 / k
    return jmax ** (-k) / k


def _real_bessel_sum(nu, N, jmax, reverse, tol):
    """sum_{j <= jmax} J_nu(2 pi j sqrt N) / j^nu, plus the imaginary residue."""
    if jmax == 0:
        return 0.0, 0.0
    regime = BesselRegime(tol=tol)
    root = math.sqrt(N)
    terms = []
    for j in range(1, jmax + 1):
        lj, _ = log_bessel_j(nu, 2 * math.pi * j * root, regime)
        terms.append(complex(np.exp(lj - nu * math.log(j))))
    terms = _ordered(np.array(terms), reverse)
    return exact_sum(terms.real), abs(exact_sum(terms.imag))


def eval_m5(params: CesaroParams, trunc: TruncationConfig) -> TermValue:
    ell, k, N = params.ell, params.k, params.n_cap
    nu = k + 0.5 + 1.0 / ell
    coef = math.exp((0.25 - 0.5 * k + 0.5 / ell) * math.log(N) - (k + 1.0 / ell) * LOG_PI + math.lgamma(1.0 / ell) - math.log(ell))
    s, leak = _real_bessel_sum(nu, N, trunc.bessel_jmax, trunc.reverse, trunc.target_tolerance)
    tail_coef = math.exp((-0.5 * k + 0.5 / ell) * math.log(N) - (k + 1.0 / ell + 1) * LOG_PI + math.lgamma(1.0 / ell) - math.log(ell))
    tail = zmod.SAFETY * tail_coef * _j_power_tail(k, trunc.bessel_jmax)
    return TermValue(coef * s, tail, coef * leak)


def eval_m7(params: CesaroParams, trunc: TruncationConfig) -> TermValue:
    k, N = params.k, params.n_cap
    nu = k + 0.5
    coef = -LOG_2PI * math.exp((0.25 - 0.5 * k) * math.log(N) - k * LOG_PI)
    s, leak = _real_bessel_sum(nu, N, trunc.bessel_jmax, trunc.reverse, trunc.target_tolerance)
    tail = zmod.SAFETY * LOG_2PI * math.exp(-0.5 * k * math.log(N) - (k + 1) * LOG_PI) * _j_power_tail(k, trunc.bessel_jmax)
    return TermValue(coef * s, tail, abs(coef) * leak)


# ---------------------------------------------------------------------------
# M6


_CHUNK = 250_000


def m6_log_terms(gam, j, params: CesaroParams, tol: float = 1e-10):
    """log of Gamma(rho/l) (sqrt N/pi)^{rho/l} J_nu(2 pi j sqrt N) / j^nu on the (gamma, j) grid.

    nu = k + 1/2 + rho/l.  The e^{-pi gamma/2l} decay of Gamma and the
    e^{pi gamma/2l} growth of J meet in log space, so nothing is
    exponentiated until the product is of moderate size.  Points where the
    uniform expansion misses ``tol`` are redone one by one by the automatic
    regime selection.
    """
    ell, k, N = params.ell, params.k, params.n_cap
    gam = np.asarray(gam, dtype=float)
    j = np.asarray(j, dtype=float)
    s = (0.5 + 1j * gam) / ell
    a = log_gamma(s) + s * (0.5 * math.log(N) - LOG_PI)
    nu = (k + 0.5 + s)[:, None]
    u = (2 * math.pi * math.sqrt(N)) * j[None, :]
    nu_b, u_b = np.broadcast_arrays(nu, u)
    lj, err = log_bessel_uniform(nu_b.ravel(), u_b.ravel(), tol)
    lj = lj.reshape(nu_b.shape)
    bad = np.flatnonzero(~(err.reshape(nu_b.shape) <= tol).ravel())
    if len(bad):
        regime = BesselRegime(tol=tol)
        flat = lj.ravel()
        nf, uf = nu_b.ravel(), u_b.ravel()
        for i in bad:
            flat[i], _ = log_bessel_j(nf[i], uf[i], regime)
        lj = flat.reshape(nu_b.shape)
    out = a[:, None] + lj - nu * np.log(j)[None, :]
    if not np.all(out.real < 700.0):
        raise OverflowError("M6 term assembly left the double range")
    return out


def _m6_prefactor(params):
    # 1/l: the residue of -zeta'/zeta(l s) at s = rho/l, as in M2 and M3
    k, N = params.k, params.n_cap
    return -math.exp((0.25 - 0.5 * k) * math.log(N) - k * LOG_PI) / params.ell


def _m6_rows(params, gam, jmax, tol, reverse):
    """Per-zero j-sums (complex), accumulated in ascending (or reversed) j."""
    j = np.arange(1, jmax + 1, dtype=float)
    rows = np.empty(len(gam), dtype=complex)
    last = np.empty(len(gam))
    step = max(1, _CHUNK // jmax)
    for lo in range(0, len(gam), step):
        g = gam[lo : lo + step]
        t = np.exp(m6_log_terms(g, j, params, tol))
        last[lo : lo + step] = np.abs(t[:, -1])
        rows[lo : lo + step] = kahan_rows(t[:, ::-1] if reverse else t)
    return rows, last


def _m6_j_tail(params, gam, last, jmax):
    """Estimate of the omitted j > jmax part, zero by zero.

    Terms stay roughly flat up to j* = gamma / (2 pi l sqrt N) and then fall
    off like j^{-k-1}.
    """
    if len(gam) == 0:
        return 0.0
    k = params.k
    jstar = gam / (2 * math.pi * params.ell * math.sqrt(params.n_cap))
    per = last * (np.maximum(jstar - jmax, 0.0) + jmax / k)
    return zmod.SAFETY * 2.0 * float(per.sum())


def _m6_zero_tail(params, T):
    k, ell, N = params.k, params.ell, params.n_cap
    if k <= 1:
        return math.inf
    tail = zmod.tail_bound_m6(max(T, 50.0), k, ell, N)
    eps = 0.5 * (k - 1)
    for g in LOW_ZEROS:
        if g > T:
            tail += zmod.SAFETY * 2.0 * N ** (0.25 - 0.5 * k + 0.5 / ell) * g ** (-1 - eps) * math.log(g)
    return tail


def eval_m6(params: CesaroParams, zeros: ZeroSet, trunc: TruncationConfig) -> TermValue:
    """-(N^{1/4-k/2}/(l pi^k)) sum_rho Gamma(rho/l)(sqrt N/pi)^{rho/l} sum_j J_{k+1/2+rho/l}(2 pi j sqrt N)/j^{k+1/2+rho/l}.

    Imaginary leakage is measured by pairing rho with its conjugate on an
    evenly spread sample of ``trunc.leak_sample`` zeros (the conjugate terms
    are computed independently, not by conjugating).
    """
    T = _zero_height(zeros, trunc)
    jmax = trunc.bessel_jmax
    gam = _active(zeros, T)
    note = "tail unreliable for k <= 1" if params.k <= 1 else ""
    zero_tail = _m6_zero_tail(params, T)
    if jmax == 0 or len(gam) == 0:
        # the whole double series is omitted; use the zero tail from T = 50
        # (or the full estimate for jmax = 0) as the stand-in
        full = _m6_zero_tail(params, 0.0)
        return TermValue(0.0, full, 0.0, note or "empty sum")
    tol = trunc.target_tolerance
    pref = _m6_prefactor(params)
    if trunc.m6_order == "zero_outer":
        rows, last = _m6_rows(params, gam, jmax, tol, trunc.reverse)
        vals = _ordered(rows, trunc.reverse)
        value = pref * 2.0 * exact_sum(vals.real)
    else:
        value, last = _m6_j_outer(params, gam, jmax, tol, trunc.reverse)
        value *= pref
    # leakage on a sample
    n_s = min(len(gam), trunc.leak_sample)
    idx = np.unique(np.linspace(0, len(gam) - 1, n_s).round().astype(int))
    jj = np.arange(1, jmax + 1, dtype=float)
    tp = np.exp(m6_log_terms(gam[idx], jj, params, tol)).sum(axis=1)
    tm = np.exp(m6_log_terms(-gam[idx], jj, params, tol)).sum(axis=1)
    leak_rel = np.abs((tp + tm).imag) / np.maximum(np.abs(tp + tm), 1e-300)
    # scale the worst sampled relative leakage to the whole sum
    leak = float(leak_rel.max()) * abs(value)
    tail = zero_tail + _m6_j_tail(params, gam, last, jmax) * abs(pref)
    return TermValue(value, tail, leak, note)


def _m6_j_outer(params, gam, jmax, tol, reverse):
    """Debug order: for each j, the sum over zeros; then the sum over j."""
    per_j = []
    last = None
    for j in range(1, jmax + 1):
        col = np.exp(m6_log_terms(gam, np.array([float(j)]), params, tol))[:, 0]
        per_j.append(2.0 * exact_sum(col.real))
        if j == jmax:
            last = np.abs(col)
    return exact_sum(_ordered(np.array(per_j), reverse)), last


# ---------------------------------------------------------------------------


def evaluate(
    params: CesaroParams,
    zeros: ZeroSet,
    trunc: TruncationConfig | None = None,
    table: SieveTable | None = None,
    nk_scale: bool = False,
) -> EvalReport:
    """Direct sum, the seven terms, residual and total tail for one (l, k, N)."""
    trunc = trunc or TruncationConfig()
    timings = {}
    t0 = time.perf_counter()
    if table is None:
        table = build_lambda_table(max(iroot(params.n_cap, params.ell), 1))
    direct = direct_cesaro(params, table)
    timings["direct"] = time.perf_counter() - t0
    out = []
    for name, fn in (
        ("m1", lambda: TermValue(eval_m1(params))),
        ("m2", lambda: eval_m2(params, zeros, trunc)),
        ("m3", lambda: eval_m3(params, zeros, trunc)),
        ("m4", lambda: TermValue(eval_m4(params))),
        ("m5", lambda: eval_m5(params, trunc)),
        ("m6", lambda: eval_m6(params, zeros, trunc)),
        ("m7", lambda: eval_m7(params, trunc)),
    ):
        t0 = time.perf_counter()
        try:
            out.append(fn())
        except BesselError as exc:
            raise BesselError(f"{name}: {exc}", exc.nu, exc.u, exc.achieved) from exc
        timings[name] = time.perf_counter() - t0
    scale = params.n_cap ** params.k if nk_scale else 1.0
    terms = TermBreakdown(
        m=tuple(scale * t.value for t in out),
        tails=tuple(scale * t.tail for t in out),
        imag_leakage=tuple(scale * t.leak for t in out),
        notes=tuple(t.note for t in out),
    )
    direct *= scale
    explicit_sum = exact_sum(terms.m)
    return EvalReport(
        params=params,
        direct=direct,
        explicit_sum=explicit_sum,
        residual=direct - explicit_sum,
        total_tail=math.fsum(terms.tails),
        terms=terms,
        timings=timings,
        nk_scale=nk_scale,
        zero_height=_zero_height(zeros, trunc),
        jmax=trunc.bessel_jmax,
    )


def loglog_slope(ns, values) -> float:
    """Least-squares slope of log|value| against log N."""
    x = np.log(np.asarray(ns, dtype=float))
    y = np.log(np.abs(np.asarray(values, dtype=float)))
    return float(np.polyfit(x, y, 1)[0])
