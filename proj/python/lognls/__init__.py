"""Python front end of the logarithmic Schrodinger toolbox.

The heavy lifting lives in the compiled extension; this package re-exports
the config-driven entry points (run, validate, scenarios) and a few small
numeric kernels useful for notebook-side checks.
"""

from ._lognls import (
    ConfigError,
    ConstraintError,
    SolverError,
    even_step_dt,
    log_lipschitz_gap,
    run,
    scenarios,
    tau_path,
    validate,
)

__all__ = [
    "ConfigError",
    "ConstraintError",
    "SolverError",
    "even_step_dt",
    "log_lipschitz_gap",
    "run",
    "scenarios",
    "tau_path",
    "validate",
]
