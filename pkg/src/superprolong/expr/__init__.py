"""Exact symbolic expressions: representation, parsing, calculus, zero testing."""

from .core import (
    COORD_NAMES, I, I_ATOM, ONE, PI, ZERO, Atom, Expr, Fn, FuncApp, ImagUnit, Jet, Paren, Sym,
    arctan, as_expr, bind_functions, coefficient, conj, cos, differentiate, exp, fn, jet,
    jets_of, funcapps_of, map_atoms, mi_add, mi_name, sin, split_by, sqrt, substitute, sym, tan,
    to_str, unit_mi,
)
from .oracle import (
    DEFAULT_SEED, DEFAULT_TRIALS, Domains, SingularSampleError, UnboundSymbolError, ZeroResult,
    eval_numeric, evaluate, is_zero, sample_env,
)
from .parse import (
    Context, ParseError, UnknownIdentifierError, default_context, evaluate_scalar, parse,
    parse_ast,
)

__all__ = [name for name in dir() if not name.startswith("_")]
