"""Numerical laboratory for a rectilinear chain crawler.

The heavy lifting lives in the C++ core; this package exposes the main
operations: scenario loading, simulation, limit-cycle search, certificates
and asymptotic classification.
"""

from ._core import (
    PreconditionUnmet,
    ScenarioError,
    build_projection,
    certify,
    classify,
    find_cycle,
    list_scenarios,
    scenario_info,
    simulate,
)

__all__ = [
    "PreconditionUnmet",
    "ScenarioError",
    "build_projection",
    "certify",
    "classify",
    "find_cycle",
    "list_scenarios",
    "scenario_info",
    "simulate",
]

__version__ = "0.1.0"
