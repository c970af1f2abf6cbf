"""Branching curves grown from derivative coordinates."""

from ._dendrite import (
    DendriteError,
    EvaluatedTree,
    FractalParams,
    Tree,
    bound,
    classify,
    compare,
    compile,
    format_program,
    from_json,
    smooth_fractal,
    straight_fractal,
)

__all__ = [
    "DendriteError",
    "EvaluatedTree",
    "FractalParams",
    "Tree",
    "bound",
    "classify",
    "compare",
    "compile",
    "format_program",
    "from_json",
    "smooth_fractal",
    "straight_fractal",
]
