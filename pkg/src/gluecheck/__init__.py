"""Gluing diagnostics for multi-pullbacks of finite-dimensional algebras over Q."""

from gluecheck.exactlin import Matrix, Subspace, kernel, image, preimage, quotient, rref, span
from gluecheck.algebra import Algebra, AlgebraHom, GluingFamily, Ideal, quotient_algebra
from gluecheck.lattice import generate_lattice, is_distributive, check_distributive_family
from gluecheck.multipullback import (
    build_pullback,
    check_cocycle,
    check_condition2,
    check_condition3,
    check_theorem_equivalence,
    projection_surjective,
    repair,
)
from gluecheck.finset import FiniteGluing, dualize, duality_check, glue, check_embedding

__version__ = "0.1.0"

__all__ = [
    "Matrix",
    "Subspace",
    "kernel",
    "image",
    "preimage",
    "quotient",
    "rref",
    "span",
    "Algebra",
    "AlgebraHom",
    "GluingFamily",
    "Ideal",
    "quotient_algebra",
    "generate_lattice",
    "is_distributive",
    "check_distributive_family",
    "build_pullback",
    "check_cocycle",
    "check_condition2",
    "check_condition3",
    "check_theorem_equivalence",
    "projection_surjective",
    "repair",
    "FiniteGluing",
    "dualize",
    "duality_check",
    "glue",
    "check_embedding",
    "__version__",
]
