"""Proof, refutation and tableau engines for basic normal lattice-expansion logics."""

from .signature import Signature, bundled_signature, load_signature, make_signature
from .syntax import Kind, Sequent, parse_formula, parse_sequent, parse_structure, show

__all__ = [
    "Kind",
    "Sequent",
    "Signature",
    "bundled_signature",
    "load_signature",
    "make_signature",
    "parse_formula",
    "parse_sequent",
    "parse_structure",
    "show",
]
