import cmath
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from cesaro_hl.specfun import (
    BesselError,
    BesselRegime,
    PoleError,
    applicable_regimes,
    bessel_j,
    gamma_ratio,
    laplace_kernel_check,
    log_bessel_j,
    log_bessel_uniform,
    log_gamma,
    omega2,
    sonine_bessel,
    theta,
    theta_functional_eq_residual,
)
from cesaro_hl.specfun.bessel import asymptotic_threshold, log_bessel_asymptotic, log_cos
from oracles import bessel_series_sum

# --- log gamma -------------------------------------------------------------


def test_log_gamma_examples():
    assert abs(log_gamma(1.0)) < 1e-14
    assert log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), abs=1e-14)
    g = cmath.exp(log_gamma(1 + 1j))
    assert g == pytest.approx(0.498015668118356 - 0.154949828301811j, abs=1e-13)


def test_log_gamma_stirling_size():
    z = 0.25 + 7.0675j
    approx = math.sqrt(2 * math.pi) * math.exp(-math.pi * 7.0675 / 2) * 7.0675 ** (-0.25)
    assert abs(cmath.exp(log_gamma(z))) == pytest.approx(approx, rel=0.02)


def test_log_gamma_poles():
    for z in (0, -1, -7):
        with pytest.raises(PoleError):
            log_gamma(z)


@pytest.mark.parametrize("scale", [1.0, 10.0, 100.0, 1e4, 1e6])
def test_log_gamma_vs_scipy(scale):
    rng = np.random.default_rng(1)
    z = scale * (rng.uniform(-1, 1, 400) + 1j * rng.uniform(-1, 1, 400))
    z = z[np.abs(z.imag) > 1e-3]
    ours = log_gamma(z)
    ref = special.loggamma(z)
    err = np.abs(ours - ref) / np.maximum(np.abs(ref), 1.0)
    assert err.max() < 1e-12


def test_log_gamma_vs_mpmath_negative_real():
    for x in (-2.5, -0.3, -10.7):
        assert complex(log_gamma(x)) == pytest.approx(complex(mp.loggamma(x)), abs=1e-12)


finite_z = st.complex_numbers(max_magnitude=1e5, allow_nan=False, allow_infinity=False).filter(
    lambda z: abs(z.imag) > 1e-6 or z.real > 0.1
)


@given(finite_z)
def test_log_gamma_conjugate(z):
    a = complex(log_gamma(z.conjugate()))
    b = complex(log_gamma(z)).conjugate()
    assert abs(a - b) <= 1e-12 * max(1.0, abs(b))


# beyond |z| ~ 100 the two logs are large enough that their rounding alone
# exceeds 1e-12 of the difference
@given(st.complex_numbers(min_magnitude=1e-3, max_magnitude=100, allow_nan=False, allow_infinity=False))
def test_log_gamma_recurrence(z):
    ratio = cmath.exp(complex(log_gamma(z + 1)) - complex(log_gamma(z)))
    assert abs(ratio - z) <= 1e-12 * abs(z)


def test_gamma_ratio():
    assert gamma_ratio(1, 2) == pytest.approx(1.0)
    z = 3 + 4j
    assert gamma_ratio(z, z + 1) == pytest.approx(1 / z, rel=1e-13)
    assert abs(gamma_ratio(0.5 + 100j, 3 + 100j)) == pytest.approx(100**-2.5, rel=0.02)
    assert gamma_ratio(1.5, -2) == 0
    with pytest.raises(PoleError):
        gamma_ratio(-1, 2.5)
    with pytest.raises(PoleError):
        gamma_ratio(-1, -3)
    v = gamma_ratio(np.array([1.0, 2.0]), np.array([-1.0, 3.0]))
    assert v[0] == 0 and v[1] == pytest.approx(0.5)


def test_gamma_ratio_large_imaginary_no_underflow():
    # each Gamma underflows double precision here
    r = gamma_ratio(0.5 + 75000j, 3.0 + 75000j)
    assert abs(r) == pytest.approx(75000**-2.5, rel=1e-3)


# --- Bessel ----------------------------------------------------------------


def test_bessel_half_order():
    assert bessel_j(0.5, math.pi / 2) == pytest.approx(2 / math.pi, rel=1e-13)
    assert bessel_j(0.0, 1e-8, BesselRegime("series")) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("mode", ["series", "poisson_quadrature"])
def test_bessel_modes_closed_form(mode):
    for u in (0.3, 1.0, 2.0, 7.5):
        ref = math.sqrt(2 / (math.pi * u)) * math.sin(u)
        assert bessel_j(0.5, u, BesselRegime(mode)).real == pytest.approx(ref, rel=1e-11)


def test_bessel_cross_regime_first_zero_order():
    nu, u = 1.6 + 14.1347j, 30.0
    a = bessel_j(nu, u, BesselRegime("poisson_quadrature"))
    b = bessel_j(nu, u, BesselRegime("series", tol=1e-8))
    ref = complex(mp.besselj(nu, u))
    assert abs(a / b - 1) < 1e-8
    assert abs(a / ref - 1) < 1e-10


CASES = [
    (2.5, 30.0),
    (3.5 + 7j, 100.0),
    (1.6 + 14.13j, 500.0),
    (2 + 60j, 3000.0),
    (0.3 + 3j, 20.0),
    (-0.3 + 5j, 40.0),
    (3.5 - 20j, 80.0),
    (4 + 200j, 1000.0),
    (10.0, 50.0),
    (-0.4, 3.0),
]


@pytest.mark.parametrize("nu,u", CASES)
def test_bessel_auto_vs_mpmath(nu, u):
    lj, err = log_bessel_j(nu, u)
    ref = complex(mp.besselj(mp.mpc(nu), u))
    assert abs(cmath.exp(lj) / ref - 1) < 1e-9
    assert err <= 1e-10


@pytest.mark.parametrize("nu,u", CASES)
def test_bessel_every_applicable_regime_vs_mpmath(nu, u):
    ref = complex(mp.log(mp.besselj(mp.mpc(nu), u)))
    for mode, (lj, err) in applicable_regimes(nu, u, tol=1e-8).items():
        tol = 2e-3 if mode == "asymptotic" else 1e-7
        assert abs(cmath.exp(lj - ref) - 1) < tol, mode


@settings(max_examples=30, deadline=None)
@given(st.floats(-0.4, 5), st.floats(0, 60), st.floats(1, 2000))
def test_bessel_conjugation(a, tau, u):
    nu = complex(a, tau)
    x = log_bessel_j(nu, u)[0]
    y = log_bessel_j(nu.conjugate(), u)[0]
    assert abs(cmath.exp(y - x.conjugate()) - 1) < 1e-10


def test_bessel_uniform_conjugate_branch_independent():
    # the tau < 0 branch is evaluated directly, not through conjugation
    nu = np.array([2.5 + 300j, 2.5 - 300j])
    lj, _ = log_bessel_uniform(nu, np.array([900.0, 900.0]))
    assert abs(cmath.exp(lj[1] - lj[0].conjugate()) - 1) < 1e-12


@pytest.mark.parametrize("tau", [50.0, 500.0, 5000.0, 60000.0])
def test_uniform_series_vs_poisson_summation(tau):
    # Gamma(nu) sum_j J_nu(2 pi j sqrt N) / j^nu against its square-sum closed form
    N = 4096
    nu = 3.5 + 1j * tau
    j = np.arange(1, 4001, dtype=float)
    lj, err = log_bessel_uniform(np.full(j.shape, nu), 2 * math.pi * 64 * j)
    assert err.max() < 1e-12
    lg = complex(log_gamma(nu))
    terms = np.exp(lg + lj - nu * np.log(j))
    ours = complex(np.sum(terms))
    ref = bessel_series_sum(nu, N)
    # past j* the terms fall off like j^{-re(nu) - 1/2}
    tail = abs(terms[-1]) * len(j) / (nu.real - 0.5)
    assert abs(ours - ref) <= 1e-9 * abs(ref) + 2 * tail


def test_bessel_precondition_errors():
    with pytest.raises(BesselError):
        log_bessel_j(-0.7, 3.0, BesselRegime("poisson_quadrature"))
    with pytest.raises(ValueError):
        log_bessel_j(1.0, 0.0)
    with pytest.raises(ValueError):
        BesselRegime("nope")


def test_quadrature_reports_achieved_tolerance():
    # large order and argument: the integral is ~1e-22 of its integrand
    with pytest.raises(BesselError) as info:
        log_bessel_j(5.0, 1e4, BesselRegime("poisson_quadrature", tol=1e-12))
    assert info.value.achieved > 1e-12


def test_series_refuses_cancellation():
    with pytest.raises(BesselError):
        log_bessel_j(2.0 + 50j, 5000.0, BesselRegime("series"))


def test_asymptotic_threshold_and_error():
    assert asymptotic_threshold(2.0) >= 1000
    assert asymptotic_threshold(2 + 60j) >= 61_000
    lj, err = log_bessel_asymptotic(2.5, 2e5)
    ref = complex(mp.besselj(2.5, 2e5))
    assert abs(cmath.exp(lj) - ref) < 3 * err * math.sqrt(2 / (math.pi * 2e5))


def test_log_cos_no_overflow():
    theta_ = 3.0 - 2000j
    v = complex(log_cos(theta_))
    assert v.real == pytest.approx(2000 - math.log(2), rel=1e-12)


def test_sonine_identity():
    for nu, u in ((2.5, 3.0), (1.0 + 2j, 5.0), (3.0, 12.0)):
        # contour truncated at |im s| = 1e4
        trunc = 1e4 ** (-nu.real if isinstance(nu, complex) else -nu) * math.exp(math.pi * abs(complex(nu).imag))
        assert abs(sonine_bessel(nu, u) - bessel_j(nu, u)) < 1e-9 + 10 * trunc


def test_bessel_envelope_decay():
    from cesaro_hl.selfcheck import envelope_exponent

    assert envelope_exponent(0.5) <= -0.45
    assert envelope_exponent(2.0) <= -0.45


def test_large_order_overflow_signal():
    assert math.isinf(bessel_j(2 + 2000j, 100.0).real)
    assert log_bessel_j(2 + 2000j, 100.0)[0].real > 709


# --- theta -----------------------------------------------------------------


def test_omega2_values():
    assert omega2(1.0) == pytest.approx(0.3863186024133261, abs=1e-15)
    assert theta(1.0) == pytest.approx(1 + 2 * 0.3863186024133261)
    with pytest.raises(ValueError):
        omega2(0.0)
    with pytest.raises(ValueError):
        theta_functional_eq_residual(-1 + 1j)


@given(st.floats(1e-4, 100))
def test_omega2_bound(a):
    assert omega2(a).real <= 0.5 * math.sqrt(math.pi / a)


def test_theta_functional_equation():
    assert theta_functional_eq_residual(math.pi) < 1e-14
    assert theta_functional_eq_residual(1.0) < 1e-12
    assert theta_functional_eq_residual(0.01 + 0.5j) < 1e-10


@settings(max_examples=60)
@given(st.floats(0.01, 10), st.floats(-10, 10))
def test_theta_functional_equation_random(a, b):
    assert theta_functional_eq_residual(complex(a, b)) < 1e-10


def test_omega2_vs_mpmath():
    z = 0.05 + 2j
    ref = complex(mp.nsum(lambda m: mp.exp(-m * m * mp.mpc(z)), [1, mp.inf]))
    assert omega2(z) == pytest.approx(ref, abs=1e-13)


# --- Laplace kernels -------------------------------------------------------


def test_laplace_examples():
    c = laplace_kernel_check(2, 1, 1, 1e4)
    assert c.target.real == pytest.approx(math.exp(-1))
    assert c.residual < 1e-6 and c.tail_ok
    assert laplace_kernel_check(3, 1, -2, 1e4).residual < 1e-6
    c = laplace_kernel_check(1, 1, 0, 1e6)
    assert c.residual < 1e-6 and c.value.real == pytest.approx(0.5, abs=1e-6)


def test_laplace_tail_reported():
    c = laplace_kernel_check(1, 1, 0, 1e3)
    assert not c.tail_ok
    assert c.residual == pytest.approx(c.tail_estimate, rel=0.05)


def test_laplace_complex_s():
    c = laplace_kernel_check(2.5 + 3j, 0.5, 2.0, 1e4)
    assert c.residual < 1e-6


def test_laplace_preconditions():
    with pytest.raises(ValueError):
        laplace_kernel_check(1.0, 1.0, -1.0, 1e3)
    with pytest.raises(ValueError):
        laplace_kernel_check(-1.0, 1.0, 1.0, 1e3)
