"""SBP discretizations of dispersive wave equations."""

from ._core import (
    ConfigurationError,
    ConstructionError,
    Semidiscretization,
    StepFailure,
    bbm_solitary,
    compute_eoc,
    integrate,
    operator_check,
    operators,
    petviashvili,
    run_experiment,
)

try:
    from ._core import __version__
except ImportError:
    __version__ = "0.0.0"

__all__ = [
    "ConfigurationError",
    "ConstructionError",
    "Semidiscretization",
    "StepFailure",
    "bbm_solitary",
    "compute_eoc",
    "integrate",
    "operator_check",
    "operators",
    "petviashvili",
    "run_experiment",
]
