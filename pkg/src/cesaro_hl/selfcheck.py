"""Identity suites run by ``cesaro-hl selfcheck``.

Each suite returns a list of :class:`Check` rows; a suite passes when every
row does.  Seeds are fixed so runs are repeatable.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .arith import build_lambda_table, exp_sum_identity_check, stilde
from .specfun.bessel import BesselRegime, applicable_regimes, log_bessel_j
from .specfun.laplace import laplace_kernel_check
from .specfun.theta import omega2, theta_functional_eq_residual
from .zeros import load_zeros

SEED = 20240229


@dataclass(frozen=True)
class Check:
    name: str
    achieved: float
    required: float
    detail: str = ""

    @property
    def ok(self) -> bool:
        return bool(self.achieved < self.required)


def theta_suite(n_points=100, seed=SEED):
    rng = np.random.default_rng(seed)
    re = rng.uniform(0.01, 10.0, n_points)
    im = rng.uniform(-10.0, 10.0, n_points)
    worst = max(theta_functional_eq_residual(complex(a, b)) for a, b in zip(re, im))
    return [
        Check("theta functional equation, fixed point z=pi", theta_functional_eq_residual(math.pi), 1e-14),
        Check("theta functional equation, z=1", theta_functional_eq_residual(1.0), 1e-12),
        Check("theta functional equation, z=0.01+0.5i", theta_functional_eq_residual(0.01 + 0.5j), 1e-10),
        Check(f"theta functional equation, {n_points} random points", worst, 1e-10),
    ]


def laplace_suite():
    rows = []
    for label, args in (
        ("s=2 a=1 D=1", (2.0, 1.0, 1.0, 1e4)),
        ("s=3 a=1 D=-2", (3.0, 1.0, -2.0, 1e4)),
        ("s=1 a=1 D=0", (1.0, 1.0, 0.0, 1e6)),
    ):
        c = laplace_kernel_check(*args)
        note = f"U={args[3]:g}, tail estimate {c.tail_estimate:.1e}"
        rows.append(Check(f"Laplace kernel {label}", c.residual, 1e-6, note))
    return rows


def omega_suite():
    a = np.geomspace(1e-4, 50.0, 60)
    # omega_2(a) <= (1/2) sqrt(pi / a): report the largest ratio minus one
    ratio = max(omega2(x).real / (0.5 * math.sqrt(math.pi / x)) for x in a)
    return [Check("omega_2(a) <= sqrt(pi/a)/2 (max ratio - 1 < 0)", ratio - 1.0, 0.0)]


def bessel_grid(n_re=5, n_u=12, taus=(0.0, 2.5, -10.0, 30.0, 60.0)):
    for a in np.linspace(-0.4, 5.0, n_re):
        for tau in taus:
            for u in np.geomspace(1.0, 1e5, n_u):
                yield complex(a, tau), float(u)


def _envelope_rel(la, lb, nu, u):
    # asymptotic comparisons are measured against the envelope magnitude
    env = 0.5 * math.log(2 / (math.pi * u)) + 0.5 * math.pi * abs(nu.imag) + math.log(2.0)
    return abs(np.exp(la - env) - np.exp(lb - env))


def bessel_agreement(grid=None):
    """(pairs checked, points with overlap, worst ratio to tolerance, worst description)."""
    grid = list(grid if grid is not None else bessel_grid())
    worst, where, n_pairs, n_over = 0.0, "", 0, 0
    for nu, u in grid:
        regs = applicable_regimes(nu, u, tol=1e-8)
        if len(regs) >= 2:
            n_over += 1
        for x, y in itertools.combinations(sorted(regs), 2):
            la, lb = regs[x][0], regs[y][0]
            if "asymptotic" in (x, y):
                rel, tol = _envelope_rel(la, lb, nu, u), 1e-3
            else:
                rel, tol = abs(np.exp(lb - la) - 1), 1e-6
            n_pairs += 1
            if rel / tol > worst:
                worst, where = rel / tol, f"{x} vs {y} at nu={nu}, u={u:.4g}"
    return n_pairs, n_over, worst, where


def envelope_exponent(nu, u_max=1e4, n=4000):
    """Slope of the upper envelope max_{v >= u} |J_nu(v)| on a log-log scale.

    Fitted from the first maximum of |J_nu| (u ~ nu) onwards, where the
    u^{-1/2} shape applies.  Asks for 1e-8 relative accuracy: next to a zero
    of J no regime can promise more.
    """
    regime = BesselRegime(tol=1e-8)
    u = np.geomspace(1.0, u_max, n)
    mag = np.array([math.exp(log_bessel_j(nu, x, regime)[0].real) for x in u])
    env = np.maximum.accumulate(mag[::-1])[::-1]
    start = int(np.argmax(mag))
    return float(np.polyfit(np.log(u[start:]), np.log(env[start:]), 1)[0])


def bessel_suite():
    n_pairs, n_over, worst, where = bessel_agreement()
    rows = [
        Check(f"Bessel regime agreement ({n_pairs} pairs, {n_over} overlap points)", worst, 1.0, where),
        Check("Bessel grid has >= 200 overlap points", 200 - n_over, 1),
    ]
    for nu in (0.5, 1.5, 3.0):
        rows.append(Check(f"Bessel envelope exponent nu={nu} (<= -0.45)", envelope_exponent(nu), -0.45))
    return rows


def pnt_suite(sieve_limit=10**7):
    table = build_lambda_table(sieve_limit)
    s, trunc = stilde(1e-6, 1, table)
    small = build_lambda_table(10**4)
    ident = exp_sum_identity_check(0.1, 1, 10**4, small)
    return [
        Check("S~_1(a) a -> 1 at a=1e-6", abs(s * 1e-6 - 1.0), 0.05, "truncated" if trunc else ""),
        Check("exp-sum identity a=0.1 l=1", ident.residual, 1e-10, "truncated" if ident.truncated else ""),
    ]


def zeros_suite(path=None):
    z = load_zeros(path)
    return [Check(f"zero table {z.source}: {len(z)} ordinates loaded, density ok", 0.0, 1.0)]


SUITES = {
    "theta": theta_suite,
    "laplace": laplace_suite,
    "omega": omega_suite,
    "bessel": bessel_suite,
    "pnt": pnt_suite,
    "zeros": zeros_suite,
}
