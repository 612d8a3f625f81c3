"""Exact computations with Lie superalgebras, Casimir elements and Shapovalov determinants.

Rational results are returned as ``fractions.Fraction``; weights are given as
strings in the same syntax as the command line tool (``"2a"``, ``"a1+a2"``, ``"e'"``).
"""

from ._core import (
    Algebra,
    MathError,
    a_map,
    build,
    c3,
    conjecture,
    from_json,
    kk_formula,
    km_check,
    load,
    omega0,
    shapovalov_det,
    singular_vectors,
    verify,
)

__all__ = [
    "Algebra",
    "MathError",
    "a_map",
    "build",
    "c3",
    "conjecture",
    "from_json",
    "kk_formula",
    "km_check",
    "load",
    "omega0",
    "shapovalov_det",
    "singular_vectors",
    "verify",
]
__version__ = "0.1.0"
