"""Survival function estimation under multiplicative measurement error.

Keyword arguments of simulate, estimate, select_k, mise and tables are the
configuration-file keys (target, error, n, seed, chi, k, variant, ...).
"""

from ._core import (
    ConfigError,
    NumericalError,
    complex_gamma,
    complex_log_gamma,
    config_keys,
    delta_g,
    density,
    empirical_mellin,
    error_keys,
    estimate,
    mise,
    rate_fit,
    select_k,
    simulate,
    survival,
    tables,
    target_keys,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "NumericalError",
    "complex_gamma",
    "complex_log_gamma",
    "config_keys",
    "delta_g",
    "density",
    "empirical_mellin",
    "error_keys",
    "estimate",
    "mise",
    "rate_fit",
    "select_k",
    "simulate",
    "survival",
    "tables",
    "target_keys",
]
