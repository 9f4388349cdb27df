"""Volatility-jump model: simulation, theory curves, shock detection and calibration."""

from ._voljump import (
    CouplingParams,
    Error,
    ModelParams,
    __version__,
    autocorr_limit,
    calibrate,
    cross_corr_limit,
    cross_cov_limit,
    detect,
    detrend,
    empirical_autocorr,
    moment_rate,
    q_star,
    run,
    sample_shock_train,
    scaling_density,
    scaling_exponent,
    scaling_fit,
    simulate,
    time_change,
    v_hat,
)

__all__ = [
    "CouplingParams",
    "Error",
    "ModelParams",
    "__version__",
    "autocorr_limit",
    "calibrate",
    "cross_corr_limit",
    "cross_cov_limit",
    "detect",
    "detrend",
    "empirical_autocorr",
    "moment_rate",
    "q_star",
    "run",
    "sample_shock_train",
    "scaling_density",
    "scaling_exponent",
    "scaling_fit",
    "simulate",
    "time_change",
    "v_hat",
]
