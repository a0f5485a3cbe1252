"""Master-equation coefficients: analytic forms, quadrature oracle, integrated series."""

from .closed import (
    cancellation_digits,
    closed_coefficients,
    delta_closed,
    gamma_closed,
    g_integral,
    pi_closed,
    printed_coefficients,
    subohmic_delta_highT_erf,
)
from .oracle import coeff_oracle, oracle_series
from .series import (
    COEFF_COLUMNS,
    CoeffMethod,
    CoefficientSet,
    Truncation,
    compute_coefficients,
    default_grid,
    integrate_big_gamma,
    secular_integrals,
    write_coefficients_csv,
)
