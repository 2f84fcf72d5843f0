"""fibdecide: a decision procedure, exact sequence oracles, automaton
synthesis, and linear representations for the Fibonacci (Zeckendorf)
numeration system."""

from .numeration import (
    fib,
    lucas,
    encode,
    decode,
    floor_phi,
    floor_phi2,
    floor_phi_half,
    floor_phi2_half,
)
from .automata import Automaton, regex_compile, equivalent, partial_state_count
from .logic import Session, parse_formula
from .arith import build_catalog
from .seqs import oracle

__version__ = "0.1.0"

__all__ = [
    "fib",
    "lucas",
    "encode",
    "decode",
    "floor_phi",
    "floor_phi2",
    "floor_phi_half",
    "floor_phi2_half",
    "Automaton",
    "regex_compile",
    "equivalent",
    "partial_state_count",
    "Session",
    "parse_formula",
    "build_catalog",
    "oracle",
    "__version__",
]
