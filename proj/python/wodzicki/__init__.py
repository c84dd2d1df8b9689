"""Spectral functionals of (noncommutative) tori."""

from ._core import (
    ConfigurationError,
    NumericalError,
    compute,
    run_suite,
    set_thread_count,
    sphere_moment,
    sphere_volume,
    suite_names,
    thread_count,
)

__all__ = [
    "ConfigurationError",
    "NumericalError",
    "compute",
    "run_suite",
    "set_thread_count",
    "sphere_moment",
    "sphere_volume",
    "suite_names",
    "thread_count",
]
