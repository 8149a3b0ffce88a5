"""Saddle-point asymptotics of convolution powers V^{*j}(t).

Specs are dicts such as {"family": "affine", "a": 1, "b": 1}; log-scale
values are natural logs, -inf for zero.
"""

from ._convpow import (
    ConvpowError,
    HorizonTooSmall,
    InadmissibleMoments,
    InvalidArgument,
    InvalidSpec,
    MissingMoment,
    NoRoot,
    NotProbability,
    OutOfDomain,
    RatioOutOfRange,
    ScanInconclusive,
    SolverStall,
    Spec,
    UnsupportedOrder,
    check_conditions,
    convolve_power,
    cor_clt,
    cor_lin_growth,
    domain_of,
    eval_V,
    exact_power_law,
    exact_shifted_exp,
    expansion_coeffs,
    grid_oracle,
    laguerre_case1_rates,
    laguerre_eval,
    laplace_at,
    linear_expansion_estimate,
    modulus_ratio,
    range_bounds,
    renewal_asymptotic,
    renewal_b_coeffs,
    renewal_betas,
    solve_kappa,
    solve_theta_for_slope,
    solve_theta_star,
    thm_a,
    thm_b,
    tilt_moments,
)


def spec(family, **params):
    """Shorthand: spec("affine", a=1, b=1)."""
    return Spec({"family": family, **params})


__all__ = [name for name in dir() if not name.startswith("_")]
