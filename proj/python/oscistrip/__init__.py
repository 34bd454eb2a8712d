"""Reaction-diffusion with oscillating boundary-strip terms."""

from ._core import (
    Config,
    ConfigError,
    Nonlinearity,
    boundary_limit,
    conc_integral,
    load_config,
    mu,
    parse_config,
    run_suite,
    set_threads,
    suite_names,
)

__all__ = [
    "Config",
    "ConfigError",
    "Nonlinearity",
    "boundary_limit",
    "conc_integral",
    "load_config",
    "mu",
    "parse_config",
    "run_suite",
    "set_threads",
    "suite_names",
]
