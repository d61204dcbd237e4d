"""Bessel J of complex order and positive real argument.

Four evaluators, each returning log J together with an estimate of its own
relative error so that callers (and the cross-regime tests) can tell when a
regime is applicable:

series              ascending power series, cancellation-limited for large u
poisson_quadrature  Poisson integral over [0, 1], composite Gauss-Legendre
                    graded towards t = 1, analytic endpoint piece
asymptotic          leading Hankel term sqrt(2/(pi u)) cos(u - pi nu/2 - pi/4)
uniform             Debye expansion in w = sqrt(nu^2 - u^2); no turning point
                    on the real u axis when im(nu) != 0, so it covers the
                    |im nu| >> 1 orders met in the zero sums

Everything is assembled in log space: for im(nu) = tau the value grows like
e^{pi |tau| / 2}, which overflows double precision past |tau| ~ 450.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .gamma import log_gamma

EPS = 2.220446049250313e-16
MODES = ("series", "poisson_quadrature", "asymptotic", "uniform", "auto")


class BesselError(ArithmeticError):
    """A regime could not deliver the requested accuracy."""

    def __init__(self, msg, nu=None, u=None, achieved=None):
        super().__init__(msg)
        self.nu = nu
        self.u = u
        self.achieved = achieved


@dataclass(frozen=True)
class BesselRegime:
    """Regime selection.

    ``switch_lo``/``switch_hi`` are factors on the default thresholds: series
    below ``switch_hi * max(10, |nu|)``, asymptotic above
    ``switch_lo * asymptotic_threshold(nu)``.  With both factors at 1 the
    windows touch; widening them creates the overlaps used for
    cross-validation.
    """

    mode: str = "auto"
    switch_lo: float = 1.0
    switch_hi: float = 1.0
    tol: float = 1e-10

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown Bessel mode {self.mode!r}")
        if not self.switch_lo > 0 or not self.switch_hi > 0:
            raise ValueError("switch factors must be positive")


AUTO = BesselRegime()


def series_threshold(nu) -> float:
    return max(10.0, abs(complex(nu)))


def asymptotic_threshold(nu) -> float:
    """u beyond which the leading Hankel term is accurate to ~1e-3 relative.

    The first neglected Hankel term is (4 nu^2 - 1) / (8 u) relative to the
    leading one, so we need u >= 1e3 |4 nu^2 - 1| / 8 as well as the
    u >= 1e3 (1 + |im nu|) floor.
    """
    nu = complex(nu)
    return max(1e3 * (1.0 + abs(nu.imag)), 1e3 * abs(4 * nu * nu - 1) / 8.0)


# ---------------------------------------------------------------------------
# ascending series


def log_bessel_series(nu, u, max_terms=100_000):
    """(log J, relative error estimate) from the power series.

    Terminates when a term drops below 1e-16 of the partial sum (after the
    terms have started to decrease).  The error estimate is the cancellation
    ratio max|term| / |sum| times the unit roundoff.
    """
    nu = complex(nu)
    u = float(u)
    if u <= 0:
        raise ValueError("u must be positive")
    if nu.imag == 0 and nu.real <= -1 and nu.real == round(nu.real):
        raise BesselError("integer negative order not supported", nu, u)
    x = -0.25 * u * u
    s = 1 + 0j
    t = 1 + 0j
    big = 1.0
    m = 0
    while True:
        m += 1
        t *= x / (m * (nu + m))
        s += t
        at = abs(t)
        big = max(big, at)
        if big > 1e250:
            # cancellation already far beyond double precision
            raise BesselError("series cancellation too severe", nu, u, achieved=math.inf)
        if at < 1e-16 * abs(s) and abs(x) < m * abs(nu + m):
            break
        if m >= max_terms:
            raise BesselError("series did not converge", nu, u)
    if s == 0:
        raise BesselError("series sum vanished", nu, u)
    lead = nu * math.log(0.5 * u) - log_gamma(nu + 1)
    err = EPS * (big / abs(s)) * math.sqrt(m + 1)
    return complex(lead + np.log(s)), err


# ---------------------------------------------------------------------------
# Poisson integral

_GL = {n: np.polynomial.legendre.leggauss(n) for n in (16, 24)}


def _gl_panels(edges, n):
    x, w = _GL[n]
    a = edges[:-1, None]
    b = edges[1:, None]
    half = 0.5 * (b - a)
    t = (a + half * (x[None, :] + 1.0)).ravel()
    wt = (half * w[None, :]).ravel()
    return t, wt


def _poisson_edges(nu, u, delta):
    """Panel edges on [0, 1 - delta], graded geometrically towards t = 1."""
    tau = abs(nu.imag)
    coarse = [0.0, 0.5]
    h = 0.5
    while h > 2 * delta:
        h *= 0.5
        coarse.append(1.0 - h)
    coarse.append(1.0 - delta)
    edges = [0.0]
    for t0, t1 in zip(coarse[:-1], coarse[1:]):
        # local phase speed of cos(u t) (1 - t^2)^{i tau} at the right edge
        freq = (u + 2 * tau * t1 / (1 - t1 * t1)) / (2 * math.pi)
        # 16 nodes per <= 1.5 oscillations, i.e. >= 10 nodes per oscillation
        n_sub = max(1, math.ceil((t1 - t0) * freq / 1.5))
        edges.extend(np.linspace(t0, t1, n_sub + 1)[1:].tolist())
    return np.array(edges)


def _poisson_endpoint(nu, u, delta, n_terms=80):
    """int_{1-delta}^1 (1 - t^2)^{nu - 1/2} cos(u t) dt by term-wise integration.

    With s = 1 - t the integrand is s^{nu-1/2} g(s), g(s) = (2 - s)^{nu-1/2}
    cos(u - u s); g is expanded in powers of s.
    """
    mu = nu - 0.5
    # binomial series of (1 - s/2)^mu, with s -> delta * sigma folded in
    b = np.empty(n_terms, dtype=complex)
    b[0] = 1.0
    for i in range(1, n_terms):
        b[i] = b[i - 1] * (mu - i + 1) / i * (-0.5 * delta)
    # Taylor coefficients of cos(u - u s) in (delta sigma)
    c = np.empty(n_terms)
    cu, su = math.cos(u), math.sin(u)
    v = u * delta
    term = 1.0
    for j in range(n_terms):
        if j:
            term *= v / j
        # d^j/ds^j cos(u - u s) = u^j cos(u - j pi/2 ... ) evaluated at 0
        c[j] = term * (cu, su, -cu, -su)[j % 4]
    g = np.convolve(b, c)[:n_terms]
    m = np.arange(n_terms)
    terms = g / (mu + 1 + m)
    tot = complex(np.sum(terms))
    lead = mu * math.log(2.0) + (mu + 1) * math.log(delta)
    err = abs(terms[-5:]).sum() / max(abs(tot), 1e-300)
    return tot, lead, err


def log_bessel_poisson(nu, u, tol=1e-10):
    """(log J, relative error estimate) from the Poisson integral.

    J_nu(u) = 2 (u/2)^nu / (sqrt(pi) Gamma(nu + 1/2)) int_0^1 (1-t^2)^{nu-1/2} cos(ut) dt,
    valid for re(nu) > -1/2.  The error estimate is the larger of the
    16- vs 24-point panel difference and the roundoff amplification
    sum |w f| / |sum w f|.  Raises :class:`BesselError` when it exceeds
    ``tol``.
    """
    nu = complex(nu)
    u = float(u)
    if u <= 0:
        raise ValueError("u must be positive")
    if nu.real <= -0.5:
        raise BesselError("Poisson integral needs re(nu) > -1/2", nu, u)
    delta = 0.25 * min(1.0, 1.0 / u, 1.0 / max(abs(nu - 0.5), 1.0))
    edges = _poisson_edges(nu, u, delta)
    mu = nu - 0.5
    vals = []
    mag = 0.0
    for n in (16, 24):
        t, w = _gl_panels(edges, n)
        f = np.exp(mu * np.log1p(-t * t)) * np.cos(u * t)
        vals.append(complex(np.dot(w, f)))
        mag = float(np.dot(w, np.abs(f)))
    end, end_lead, end_err = _poisson_endpoint(nu, u, delta)
    end_val = end * np.exp(end_lead)
    total = vals[1] + end_val
    if total == 0:
        raise BesselError("Poisson integral vanished", nu, u, achieved=math.inf)
    scale = abs(total)
    err = max(
        abs(vals[1] - vals[0]) / scale,
        EPS * math.sqrt(len(edges)) * (mag + abs(end_val)) / scale,
        end_err * abs(end_val) / scale,
    )
    if err > tol:
        raise BesselError(
            f"Poisson quadrature reached only {err:.2e} relative (wanted {tol:.1e})",
            nu,
            u,
            achieved=err,
        )
    lead = math.log(2.0) + nu * math.log(0.5 * u) - 0.5 * math.log(math.pi) - log_gamma(nu + 0.5)
    return complex(lead + np.log(total)), err


# ---------------------------------------------------------------------------
# leading asymptotic


def log_cos(theta):
    """log cos(theta) for complex theta, dominant exponential factored out."""
    theta = np.asarray(theta, dtype=complex)
    # im(theta) < 0: e^{i theta} dominates; im(theta) >= 0: e^{-i theta}
    s = np.where(theta.imag < 0, 1.0, -1.0)
    return 1j * s * theta + np.log1p(np.exp(-2j * s * theta)) - math.log(2.0)


def log_bessel_asymptotic(nu, u):
    """(log J, relative error estimate) from the leading Hankel term."""
    nu = complex(nu)
    u = float(u)
    if u <= 0:
        raise ValueError("u must be positive")
    theta = u - 0.5 * math.pi * nu - 0.25 * math.pi
    val = 0.5 * math.log(2.0 / (math.pi * u)) + complex(log_cos(theta))
    err = abs(4 * nu * nu - 1) / (8.0 * u) * max(1.0, abs(math.tan(theta.real)) if nu.imag == 0 else 1.0)
    return val, err


# ---------------------------------------------------------------------------
# Debye / uniform expansion


def _debye_polys(kmax):
    """Coefficients of the Debye polynomials U_k(p), exact then converted."""
    polys = [[Fraction(1)]]
    for _ in range(kmax):
        u = polys[-1]
        deg = len(u) - 1
        # (1/2) p^2 (1 - p^2) U'
        du = [Fraction(i) * u[i] for i in range(1, deg + 1)]
        a = [Fraction(0)] * (deg + 4)
        for i, c in enumerate(du):
            a[i + 2] += c / 2
            a[i + 4] -= c / 2
        # (1/8) int_0^p (1 - 5 t^2) U(t) dt
        prod = [Fraction(0)] * (deg + 3)
        for i, c in enumerate(u):
            prod[i] += c
            prod[i + 2] += -5 * c
        integ = [Fraction(0)] + [prod[i] / (i + 1) for i in range(len(prod))]
        n = max(len(a), len(integ))
        nxt = [Fraction(0)] * n
        for i, c in enumerate(a):
            nxt[i] += c
        for i, c in enumerate(integ):
            nxt[i] += c / 8
        while len(nxt) > 1 and nxt[-1] == 0:
            nxt.pop()
        polys.append(nxt)
    return [np.array([float(c) for c in p]) for p in polys]


DEBYE_KMAX = 10
_DEBYE = _debye_polys(DEBYE_KMAX)


def _debye_branch(nu, u):
    w = np.sqrt((nu - u) * (nu + u))
    # keep im(w) on the side of im(nu): w is then analytic in u along u > 0
    flip = ((nu.imag > 0) & (w.imag < 0)) | ((nu.imag < 0) & (w.imag > 0))
    return np.where(flip, -w, w)


# U_k(p) / nu^k = w^{-k} Q_k(p^2): Q_k holds the coefficients of U_k at p^k, p^{k+2}, ...
_DEBYE_Q = [c[k::2][::-1].copy() for k, c in enumerate(_DEBYE)]


def _horner(coef, x):
    out = np.full(x.shape, coef[0], dtype=x.dtype)
    for c in coef[1:]:
        out = out * x + c
    return out


def log_bessel_uniform(nu, u, tol=1e-12):
    """(log J, relative error estimate) from the Debye expansion, vectorized.

    With D(w) = e^{w - nu log((nu+w)/u)} / sqrt(2 pi w) sum_k U_k(nu/w)/nu^k,
    J = D(w) + D(-w) past the transition (u >= |nu|, where both Hankel
    exponentials are present) and J = D(w) before it.  When im(nu) != 0 the
    omitted exponential there is smaller by about e^{-pi |im nu|}; it is
    included in the error estimate.  D(-w) reuses the logarithms of D(w):
    log((nu-w)/u) = -log((nu+w)/u) since the product of the two is 1, and
    the odd terms of the series flip sign.
    """
    nu_a, u_a = np.broadcast_arrays(np.asarray(nu, dtype=complex), np.asarray(u, dtype=float))
    scalar = nu_a.ndim == 0
    nu_a = np.atleast_1d(nu_a).astype(complex)
    u_a = np.atleast_1d(u_a).astype(float)
    if np.any(u_a <= 0):
        raise ValueError("u must be positive")
    w = _debye_branch(nu_a, u_a)
    big_l = np.log((nu_a + w) / u_a)
    log_w = np.log(2 * np.pi * w)
    r = 1.0 / w
    q = (nu_a * r) ** 2
    even = np.ones_like(w)
    odd = np.zeros_like(w)
    rk = np.ones_like(w)
    last = np.zeros(w.shape)
    for k in range(1, DEBYE_KMAX + 1):
        rk = rk * r
        term = _horner(_DEBYE_Q[k], q) * rk
        if k % 2:
            odd += term
        else:
            even += term
        last = np.abs(term)
        if np.all(last < 0.1 * tol):
            break
    s_plus = even + odd
    s_minus = even - odd
    # principal log(-w) = log(w) - i pi sigma
    sigma = np.where(np.angle(w) > 0, 1.0, -1.0)
    lp = w - nu_a * big_l - 0.5 * log_w + np.log(s_plus)
    lratio = -2 * w + 2 * nu_a * big_l + 0.5j * np.pi * sigma
    lratio = np.minimum(lratio.real, 700.0) + 1j * lratio.imag
    ratio = np.exp(lratio) * (s_minus / s_plus)
    ep = last / np.abs(s_plus)
    past = u_a >= np.abs(nu_a)
    real_order = nu_a.imag == 0
    with np.errstate(invalid="ignore", divide="ignore"):
        logj = np.where(past, lp + np.log1p(ratio), lp)
    err = np.where(past, ep * np.maximum(1.0, np.abs(ratio)), ep)
    # before the transition with complex order the weight of D(-w) is unknown
    err = np.where(~past & ~real_order, np.maximum(err, 2 * np.abs(ratio)), err)
    if scalar:
        return complex(logj[0]), float(err[0])
    return logj, err


# ---------------------------------------------------------------------------
# public entry points


def log_bessel_j(nu, u, regime: BesselRegime = AUTO):
    """(log J_nu(u), relative error estimate) for scalar nu and u > 0."""
    nu = complex(nu)
    u = float(u)
    if not u > 0:
        raise ValueError("u must be positive")
    if nu.imag < 0:
        lj, err = log_bessel_j(nu.conjugate(), u, regime)
        return lj.conjugate(), err
    mode = regime.mode
    if mode == "series":
        out = log_bessel_series(nu, u)
    elif mode == "poisson_quadrature":
        out = log_bessel_poisson(nu, u, regime.tol)
    elif mode == "asymptotic":
        out = log_bessel_asymptotic(nu, u)
    elif mode == "uniform":
        out = log_bessel_uniform(nu, u, regime.tol)
    else:
        return _auto(nu, u, regime)
    if out[1] > regime.tol and mode != "asymptotic":
        raise BesselError(
            f"{mode} reached only {out[1]:.2e} relative at nu={nu}, u={u}",
            nu,
            u,
            achieved=out[1],
        )
    return out


def _auto(nu, u, regime):
    tol = regime.tol
    tried = []
    if u <= regime.switch_hi * series_threshold(nu):
        lj, err = log_bessel_series(nu, u)
        if err <= tol:
            return lj, err
        tried.append(("series", err))
    lj, err = log_bessel_uniform(nu, u, tol)
    if err <= tol:
        return lj, err
    tried.append(("uniform", err))
    if nu.real > -0.5:
        try:
            return log_bessel_poisson(nu, u, tol)
        except BesselError as exc:
            tried.append(("poisson_quadrature", exc.achieved))
    if u >= regime.switch_lo * asymptotic_threshold(nu):
        return log_bessel_asymptotic(nu, u)
    raise BesselError(
        "no regime reached tolerance %.1e at nu=%s, u=%s: %s"
        % (tol, nu, u, ", ".join("%s %.1e" % t for t in tried)),
        nu,
        u,
        achieved=min(e for _, e in tried) if tried else math.inf,
    )


def bessel_j(nu, u, regime: BesselRegime = AUTO) -> complex:
    """J_nu(u) for complex order and real u > 0.

    Overflows to inf for |im nu| beyond ~450; use :func:`log_bessel_j` there.
    """
    lj, _ = log_bessel_j(nu, u, regime)
    if lj.real > 709:
        return complex(math.inf, math.inf)
    return complex(np.exp(lj))


def applicable_regimes(nu, u, tol=1e-10):
    """Map regime name -> (log J, error) for every regime that meets ``tol``.

    The asymptotic regime is reported only past its threshold.  Used for
    cross-regime validation.
    """
    nu = complex(nu)
    out = {}
    for mode in ("series", "poisson_quadrature", "uniform"):
        try:
            lj, err = log_bessel_j(nu, u, BesselRegime(mode=mode, tol=tol))
        except BesselError:
            continue
        out[mode] = (lj, err)
    if u >= asymptotic_threshold(nu):
        out["asymptotic"] = log_bessel_asymptotic(nu, u) if nu.imag >= 0 else tuple(
            x.conjugate() if isinstance(x, complex) else x
            for x in log_bessel_asymptotic(nu.conjugate(), u)
        )
    return out


def sonine_bessel(nu, u, half_width=1e4, panel=0.5):
    """J_nu(u) from the contour integral on re(s) = 1, truncated at |im s| = half_width.

    (u/2)^nu / (2 pi i) int s^{-nu-1} e^{s} e^{-u^2/(4s)} ds.  Test identity
    only: the integrand decays like |s|^{-re(nu)-1}, so the truncation error
    is about half_width^{-re(nu)} / (pi re(nu)).
    """
    nu = complex(nu)
    edges = np.arange(-half_width, half_width + panel, panel)
    y, w = _gl_panels(edges, 16)
    s = 1.0 + 1j * y
    f = np.exp(-(nu + 1) * np.log(s) + s - 0.25 * u * u / s)
    val = complex(np.dot(w, f)) / (2 * math.pi)
    return complex(np.exp(nu * math.log(0.5 * u))) * val
