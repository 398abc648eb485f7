"""Simply typed lambda calculus with pairs and ⊤ where isomorphic types are
interconvertible through explicit witnesses."""

from .core import (
    EMPTY,
    STAR,
    TOP,
    App,
    Arrow,
    Context,
    Iso,
    Lam,
    Pair,
    Product,
    Proj,
    Side,
    Star,
    Term,
    Top,
    Type,
    Var,
    Witness,
)
from .evaluation import FuelExhausted, Trace, evaluate, format_trace
from .iso import apply_iso, check_iso, sym_normalize, synth_chain
from .syntax import elaborate, parse_term, parse_type, print_term, print_type
from .typecheck import TypeCheckError, infer

__all__ = [
    "EMPTY",
    "STAR",
    "TOP",
    "App",
    "Arrow",
    "Context",
    "Iso",
    "Lam",
    "Pair",
    "Product",
    "Proj",
    "Side",
    "Star",
    "Term",
    "Top",
    "Type",
    "Var",
    "Witness",
    "FuelExhausted",
    "Trace",
    "evaluate",
    "format_trace",
    "apply_iso",
    "check_iso",
    "sym_normalize",
    "synth_chain",
    "elaborate",
    "parse_term",
    "parse_type",
    "print_term",
    "print_type",
    "TypeCheckError",
    "infer",
]
