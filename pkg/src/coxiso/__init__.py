"""Isomorphism decisions for finitely generated Coxeter groups.

Diagrams are rewritten by pseudo-transposition reductions and diagram twists;
two groups are isomorphic (unconditionally, when a reduced side has no A3,
C3 or H3 subdiagram) exactly when the reduced reductions are twist-equivalent.
Every combinatorial move can be checked against an exact geometric
representation over a cyclotomic ring.
"""

from .canonical import canonical_form, find_isomorphism
from .classify import is_spherical, opposition_involution, recognize_irreducible
from .diagram import INFINITY, CoxeterMatrix, DiagramError, parse_diagram, serialize_diagram
from .explorer import Certificate, Verdict, decide_isomorphism, twist_class, twist_equivalent
from .geometry import (
    UNKNOWN,
    GeometricRep,
    GroupElement,
    build_rep,
    enumerate_group,
    is_reflection,
    longest_element,
    order_of_product,
)
from .moves import (
    AdmissiblePair,
    MoveRecord,
    PseudoTransposition,
    admissible_pairs,
    apply_reduction,
    apply_twist,
    pseudo_transpositions,
    reduced_reduction,
)

__version__ = "0.1.0"

__all__ = [
    "AdmissiblePair",
    "Certificate",
    "CoxeterMatrix",
    "DiagramError",
    "GeometricRep",
    "GroupElement",
    "INFINITY",
    "MoveRecord",
    "PseudoTransposition",
    "UNKNOWN",
    "Verdict",
    "admissible_pairs",
    "apply_reduction",
    "apply_twist",
    "build_rep",
    "canonical_form",
    "decide_isomorphism",
    "enumerate_group",
    "find_isomorphism",
    "is_reflection",
    "is_spherical",
    "longest_element",
    "opposition_involution",
    "order_of_product",
    "parse_diagram",
    "pseudo_transpositions",
    "recognize_irreducible",
    "reduced_reduction",
    "serialize_diagram",
    "twist_class",
    "twist_equivalent",
]
