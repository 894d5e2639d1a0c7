"""Least-squares solutions of linear second-order ODEs in a Chebyshev basis."""

from ._core import (
    ControlSolution,
    Problem,
    Solution,
    TfcError,
    catalog_ids,
    chebyshev,
    solve,
    solve_control,
    sweep,
)

__all__ = [
    "ControlSolution",
    "Problem",
    "Solution",
    "TfcError",
    "catalog_ids",
    "chebyshev",
    "solve",
    "solve_control",
    "sweep",
]
