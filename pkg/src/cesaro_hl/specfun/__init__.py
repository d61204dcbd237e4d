from .bessel import (
    BesselError,
    BesselRegime,
    applicable_regimes,
    bessel_j,
    log_bessel_j,
    log_bessel_uniform,
    sonine_bessel,
)
from .gamma import PoleError, gamma_ratio, log_gamma
from .laplace import LaplaceCheck, laplace_kernel_check
from .theta import omega2, theta, theta_functional_eq_residual

__all__ = [
    "BesselError",
    "BesselRegime",
    "LaplaceCheck",
    "PoleError",
    "applicable_regimes",
    "bessel_j",
    "gamma_ratio",
    "laplace_kernel_check",
    "log_bessel_j",
    "log_bessel_uniform",
    "log_gamma",
    "omega2",
    "sonine_bessel",
    "theta",
    "theta_functional_eq_residual",
]
