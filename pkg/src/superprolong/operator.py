"""Matrix differential operators in (t, x, y) with symbolic coefficients.

An entry is a dict {multi-index: Expr}; the term f * d^J acts as f times the
J-th partial derivative.  Composition uses the generalized Leibniz rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .expr import core
from .expr.core import Expr, Sym
from .expr.oracle import DEFAULT_SEED, DEFAULT_TRIALS, DEFAULT_DOMAINS, Domains, ZeroResult, is_zero
from .expr.parse import Context, ParseError, default_context, evaluate_scalar, parse_ast

COORD_ATOMS = tuple(Sym(n, "coord") for n in core.COORD_NAMES)
D_TOKENS = {"Dt": (1, 0, 0), "Dx": (0, 1, 0), "Dy": (0, 0, 1)}
MI0 = (0, 0, 0)


class DimensionError(ValueError):
    pass


class ParityError(ValueError):
    pass


@lru_cache(maxsize=1 << 16)
def coord_partial(E: Expr, mi: tuple) -> Expr:
    """Partial derivative of a coefficient by the multi-index mi."""
    for k, n in enumerate(mi):
        for _ in range(n):
            E = core.differentiate(E, COORD_ATOMS[k])
            if not E.terms:
                return E
    return E


# ---------------------------------------------------------------- scalar operators


def _acc(out: dict, mi, c: Expr):
    if not c.terms:
        return
    prev = out.get(mi)
    v = c if prev is None else prev + c
    if v.terms:
        out[mi] = v
    else:
        out.pop(mi, None)


def sop_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for mi, c in b.items():
        _acc(out, mi, c)
    return out


def sop_scale(a: dict, k) -> dict:
    out = {}
    for mi, c in a.items():
        _acc(out, mi, c * k)
    return out


def _below(a):
    for i in range(a[0] + 1):
        for j in range(a[1] + 1):
            for k in range(a[2] + 1):
                yield (i, j, k)


def sop_compose(a: dict, b: dict) -> dict:
    """(f d^p)(g d^q) = sum_{c<=p} C(p,c) f (d^c g) d^(p-c+q)."""
    out: dict = {}
    for p, f in a.items():
        for q, g in b.items():
            for c in _below(p):
                dg = coord_partial(g, c)
                if not dg.terms:
                    continue
                k = comb(p[0], c[0]) * comb(p[1], c[1]) * comb(p[2], c[2])
                mi = (p[0] - c[0] + q[0], p[1] - c[1] + q[1], p[2] - c[2] + q[2])
                _acc(out, mi, (f * dg) * k if k != 1 else f * dg)
    return out


def sop_apply(a: dict, f: Expr) -> Expr:
    out = core.ZERO
    for mi, c in a.items():
        out = out + c * coord_partial(f, mi)
    return out


# ---------------------------------------------------------------- matrix operators


class MatrixDiffOp:
    __slots__ = ("n", "entries")

    def __init__(self, entries):
        self.entries = tuple(tuple(dict(e) for e in row) for row in entries)
        self.n = len(self.entries)
        if any(len(row) != self.n for row in self.entries):
            raise DimensionError("operator matrix must be square")

    # constructors
    @staticmethod
    def zero(n: int) -> "MatrixDiffOp":
        return MatrixDiffOp([[{} for _ in range(n)] for _ in range(n)])

    @staticmethod
    def from_matrix(rows) -> "MatrixDiffOp":
        """Multiplication operator from a matrix of Expr (or numbers)."""
        out = []
        for row in rows:
            r = []
            for v in row:
                v = core.as_expr(v)
                r.append({MI0: v} if v.terms else {})
            out.append(r)
        return MatrixDiffOp(out)

    @staticmethod
    def scalar(n: int, f) -> "MatrixDiffOp":
        f = core.as_expr(f)
        return MatrixDiffOp([[({MI0: f} if (i == j and f.terms) else {}) for j in range(n)] for i in range(n)])

    @staticmethod
    def identity(n: int) -> "MatrixDiffOp":
        return MatrixDiffOp.scalar(n, 1)

    @staticmethod
    def deriv(n: int, mi) -> "MatrixDiffOp":
        return MatrixDiffOp([[({tuple(mi): core.ONE} if i == j else {}) for j in range(n)] for i in range(n)])

    @staticmethod
    def diag(ops) -> "MatrixDiffOp":
        """Diagonal operator from scalar operator dicts."""
        n = len(ops)
        return MatrixDiffOp([[dict(ops[i]) if i == j else {} for j in range(n)] for i in range(n)])

    # structure
    def items(self):
        for r, row in enumerate(self.entries):
            for c, e in enumerate(row):
                for mi, coeff in e.items():
                    yield r, c, mi, coeff

    def is_exact_zero(self) -> bool:
        return not any(e for row in self.entries for e in row)

    def t_order(self) -> int:
        return max((mi[0] for _, _, mi, _ in self.items()), default=0)

    def map_coeffs(self, f) -> "MatrixDiffOp":
        out = []
        for row in self.entries:
            r = []
            for e in row:
                d = {}
                for mi, c in e.items():
                    _acc(d, mi, f(c))
                r.append(d)
            out.append(r)
        return MatrixDiffOp(out)

    def __eq__(self, other):
        return isinstance(other, MatrixDiffOp) and self.entries == other.entries

    def __hash__(self):
        return hash(tuple(frozenset(e.items()) for row in self.entries for e in row))

    # arithmetic
    def _check(self, other):
        if self.n != other.n:
            raise DimensionError(f"dimension mismatch {self.n} vs {other.n}")

    def __add__(self, other):
        self._check(other)
        return MatrixDiffOp([[sop_add(a, b) for a, b in zip(ra, rb)]
                             for ra, rb in zip(self.entries, other.entries)])

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k) -> "MatrixDiffOp":
        """Left multiplication by a scalar function or number."""
        if isinstance(k, (int, Fraction)) and k == 1:
            return self
        return MatrixDiffOp([[sop_scale(e, k) for e in row] for row in self.entries])

    def __mul__(self, k):
        if isinstance(k, MatrixDiffOp):
            return compose(self, k)
        return self.scale(k)

    def __rmul__(self, k):
        return self.scale(k)

    def __matmul__(self, other):
        return compose(self, other)

    def __repr__(self):
        return f"MatrixDiffOp({format_op(self)})"


def compose(A: MatrixDiffOp, B: MatrixDiffOp) -> MatrixDiffOp:
    A._check(B)
    n = A.n
    out = []
    for r in range(n):
        row = []
        for c in range(n):
            acc: dict = {}
            for k in range(n):
                a, b = A.entries[r][k], B.entries[k][c]
                if a and b:
                    acc = sop_add(acc, sop_compose(a, b))
            row.append(acc)
        out.append(row)
    return MatrixDiffOp(out)


def power(A: MatrixDiffOp, k: int) -> MatrixDiffOp:
    out = MatrixDiffOp.identity(A.n)
    for _ in range(k):
        out = compose(out, A)
    return out


def commutator(A: MatrixDiffOp, B: MatrixDiffOp) -> MatrixDiffOp:
    return compose(A, B) - compose(B, A)


def anticommutator(A: MatrixDiffOp, B: MatrixDiffOp) -> MatrixDiffOp:
    return compose(A, B) + compose(B, A)


def apply(A: MatrixDiffOp, psi) -> list:
    psi = [core.as_expr(p) for p in psi]
    if len(psi) != A.n:
        raise DimensionError(f"vector of length {len(psi)} for a {A.n}x{A.n} operator")
    if any(core.jets_of(p) for p in psi):
        raise ValueError("wave function components must be free of jet symbols")
    out = []
    for r in range(A.n):
        acc = core.ZERO
        for c in range(A.n):
            if A.entries[r][c]:
                acc = acc + sop_apply(A.entries[r][c], psi[c])
        out.append(acc)
    return out


# ---------------------------------------------------------------- graded structure


@dataclass(frozen=True)
class GradedGenerator:
    name: str
    op: MatrixDiffOp
    parity: str = "unclassified"

    def with_op(self, op: MatrixDiffOp) -> "GradedGenerator":
        return GradedGenerator(self.name, op, self.parity)


def bracket_kind(pa: str, pb: str) -> str:
    for p in (pa, pb):
        if p not in ("even", "odd"):
            raise ParityError("graded bracket needs classified parities")
    return "anticommutator" if pa == pb == "odd" else "commutator"


def graded_bracket(A: GradedGenerator, B: GradedGenerator) -> MatrixDiffOp:
    if bracket_kind(A.parity, B.parity) == "anticommutator":
        return anticommutator(A.op, B.op)
    return commutator(A.op, B.op)


def product_parity(pa: str, pb: str) -> str:
    return "even" if pa == pb else "odd"


@dataclass
class EqResult:
    ok: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.ok


def is_zero_op(A: MatrixDiffOp, seed: int = DEFAULT_SEED, trials: int = DEFAULT_TRIALS,
               domains: Domains = DEFAULT_DOMAINS) -> EqResult:
    for r, c, mi, coeff in A.items():
        z = is_zero(coeff, seed, trials, domains)
        if not z.ok:
            return EqResult(False, (r + 1, c + 1, mi, z))
    return EqResult(True)


def equals(A: MatrixDiffOp, B: MatrixDiffOp, seed: int = DEFAULT_SEED, trials: int = DEFAULT_TRIALS,
           domains: Domains = DEFAULT_DOMAINS) -> EqResult:
    """Oracle equality; the witness is (row, col, multi-index, ZeroResult), 1-based."""
    A._check(B)
    return is_zero_op(A - B, seed, trials, domains)


def classify_parity(A: MatrixDiffOp, gamma: MatrixDiffOp, seed: int = DEFAULT_SEED,
                    trials: int = DEFAULT_TRIALS, domains: Domains = DEFAULT_DOMAINS) -> str:
    A._check(gamma)
    if is_zero_op(commutator(gamma, A), seed, trials, domains):
        return "even"
    if is_zero_op(anticommutator(gamma, A), seed, trials, domains):
        return "odd"
    return "neither"


def on_shell(X: MatrixDiffOp, H: MatrixDiffOp) -> MatrixDiffOp:
    """Replace d_t^k by (-i H)^k acting on the right.

    Valid on solutions of i d_t Psi = H Psi when H has no d_t and does not
    depend on t, which holds for every built-in model.
    """
    if H.t_order():
        raise ValueError("Hamiltonian must not contain Dt")
    t = COORD_ATOMS[0]
    if any(t in c.free for _, _, _, c in H.items()):
        raise ValueError("on-shell reduction needs a t-independent Hamiltonian")
    K = X.t_order()
    if K == 0:
        return X
    parts = [[[{} for _ in range(X.n)] for _ in range(X.n)] for _ in range(K + 1)]
    for r, c, mi, coeff in X.items():
        parts[mi[0]][r][c][(0, mi[1], mi[2])] = coeff
    minus_iH = H.scale(-core.I)
    out = MatrixDiffOp(parts[0])
    Hk = MatrixDiffOp.identity(X.n)
    for k in range(1, K + 1):
        Hk = compose(Hk, minus_iH)
        Xk = MatrixDiffOp(parts[k])
        if not Xk.is_exact_zero():
            out = out + compose(Xk, Hk)
    return out


# ---------------------------------------------------------------- matrices


def e_matrix(n: int, r: int, c: int, f=1) -> MatrixDiffOp:
    rows = [[0] * n for _ in range(n)]
    rows[r][c] = f
    return MatrixDiffOp.from_matrix(rows)


def block(op: MatrixDiffOp, n: int, br: int, bc: int) -> MatrixDiffOp:
    """Place op as block (br, bc) of an n-by-n operator."""
    m = op.n
    rows = [[{} for _ in range(n)] for _ in range(n)]
    for r in range(m):
        for c in range(m):
            rows[br * m + r][bc * m + c] = dict(op.entries[r][c])
    return MatrixDiffOp(rows)


def block_diag(*ops: MatrixDiffOp) -> MatrixDiffOp:
    n = sum(o.n for o in ops)
    out = MatrixDiffOp.zero(n)
    for k, o in enumerate(ops):
        out = out + block(o, n, k, k)
    return out


def scalar_op(n: int, sop: dict) -> MatrixDiffOp:
    """Scalar operator times the identity matrix."""
    return MatrixDiffOp.diag([sop] * n)


SIGMA0 = MatrixDiffOp.from_matrix([[1, 0], [0, 1]])
SIGMA3 = MatrixDiffOp.from_matrix([[1, 0], [0, -1]])
SIGMA_PLUS = MatrixDiffOp.from_matrix([[0, 1], [0, 0]])
SIGMA_MINUS = MatrixDiffOp.from_matrix([[0, 0], [1, 0]])


# ---------------------------------------------------------------- text format


STANDARD_OPS = {"sigma0": SIGMA0, "sigma3": SIGMA3, "sigmap": SIGMA_PLUS, "sigmam": SIGMA_MINUS}


def _as_scalar(v, node, text: str) -> Expr:
    if isinstance(v, dict) and set(v) <= {MI0}:
        return v.get(MI0, core.ZERO)
    raise ParseError("operator where a scalar is required", node[-1], text)


def _promote(v, n: int) -> MatrixDiffOp:
    if isinstance(v, MatrixDiffOp):
        return v
    return scalar_op(n, v)


def _combine(kind: str, a, b):
    if isinstance(a, dict) and isinstance(b, dict):
        if kind == "add":
            return sop_add(a, b)
        if kind == "sub":
            return sop_add(a, sop_scale(b, -1))
        return sop_compose(a, b)
    n = a.n if isinstance(a, MatrixDiffOp) else b.n
    a, b = _promote(a, n), _promote(b, n)
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    return compose(a, b)


def _block_matrix(vals, node, text):
    ops = [v for row in vals for v in row if isinstance(v, MatrixDiffOp)]
    if not ops:
        return MatrixDiffOp(vals)
    m = ops[0].n
    if any(o.n != m for o in ops):
        raise ParseError("blocks of different sizes", node[-1], text)
    k = len(vals)
    out = MatrixDiffOp.zero(k * m)
    for br, row in enumerate(vals):
        for bc, v in enumerate(row):
            if isinstance(v, dict) and not v:
                continue
            out = out + block(_promote(v, m), k * m, br, bc)
    return out


def eval_node(node, ctx: Context, names: dict, text: str = ""):
    """Evaluate an AST to a scalar operator dict or a MatrixDiffOp.

    Names in `names` are operators; Dt, Dx, Dy are derivatives; products
    compose left to right; comm(A, B) and acomm(A, B) are brackets; a matrix
    literal whose entries are operators builds a block matrix.
    """
    kind = node[0]
    if kind == "num":
        return {MI0: core.Expr.const(node[1])} if node[1] else {}
    if kind == "name":
        name = node[1]
        if name in names:
            return names[name]
        if name in D_TOKENS:
            return {D_TOKENS[name]: core.ONE}
        if name in STANDARD_OPS:
            return STANDARD_OPS[name]
        v = evaluate_scalar(node, ctx, text)
        return {MI0: v} if v.terms else {}
    if kind == "neg":
        v = eval_node(node[1], ctx, names, text)
        return sop_scale(v, -1) if isinstance(v, dict) else -v
    if kind in ("add", "sub", "mul"):
        a = eval_node(node[1], ctx, names, text)
        b = eval_node(node[2], ctx, names, text)
        if isinstance(a, MatrixDiffOp) and isinstance(b, MatrixDiffOp) and a.n != b.n:
            raise ParseError(f"dimension mismatch {a.n} vs {b.n}", node[3], text)
        return _combine(kind, a, b)
    if kind == "div":
        num = eval_node(node[1], ctx, names, text)
        den = _as_scalar(eval_node(node[2], ctx, names, text), node[2], text)
        if not den.terms:
            raise ParseError("division by zero", node[3], text)
        inv = den ** -1
        return sop_scale(num, inv) if isinstance(num, dict) else num.scale(inv)
    if kind == "pow":
        base = eval_node(node[1], ctx, names, text)
        if isinstance(base, dict) and set(base) <= {MI0}:
            b = base.get(MI0, core.ZERO)
            if node[2] < 0 and not b.terms:
                raise ParseError("zero raised to a negative power", node[3], text)
            v = b ** node[2]
            return {MI0: v} if v.terms else {}
        if node[2] < 0:
            raise ParseError("negative power of a differential operator", node[3], text)
        out = {MI0: core.ONE} if isinstance(base, dict) else MatrixDiffOp.identity(base.n)
        for _ in range(node[2]):
            out = _combine("mul", out, base)
        return out
    if kind == "call":
        fname, args = node[1], node[2]
        if fname in ("comm", "acomm"):
            if len(args) != 2:
                raise ParseError(f"{fname} takes two arguments", node[3], text)
            a = eval_node(args[0], ctx, names, text)
            b = eval_node(args[1], ctx, names, text)
            ab = _combine("mul", a, b)
            ba = _combine("mul", b, a)
            return _combine("sub" if fname == "comm" else "add", ab, ba)
        vals = [eval_node(a, ctx, names, text) for a in args]
        for a, v in zip(args, vals):
            _as_scalar(v, a, text)
        v = evaluate_scalar(node, ctx, text)
        return {MI0: v} if v.terms else {}
    if kind == "matrix":
        vals = [[eval_node(item, ctx, names, text) for item in row] for row in node[1]]
        if any(len(r) != len(vals) for r in vals):
            raise ParseError("operator matrix must be square", node[2], text)
        return _block_matrix(vals, node, text)
    raise ParseError(f"bad node {kind}", 0, text)


def parse_opexpr(text: str, ctx: Context | None = None, names: dict | None = None,
                 n: int | None = None) -> MatrixDiffOp:
    """Parse an operator expression; a bare scalar operator needs the size n."""
    ctx = ctx or default_context()
    v = eval_node(parse_ast(text), ctx, names or {}, text)
    if isinstance(v, dict):
        if n is None:
            raise ParseError("scalar operator needs a matrix size", 0, text)
        return scalar_op(n, v)
    if n is not None and v.n != n:
        raise DimensionError(f"expected a {n}x{n} operator, got {v.n}x{v.n}")
    return v


def parse_op(text: str, ctx: Context | None = None) -> MatrixDiffOp:
    """Parse a matrix literal whose entries may contain Dt, Dx, Dy."""
    node = parse_ast(text)
    if node[0] != "matrix":
        raise ParseError("operator must be a matrix literal", 0, text)
    return parse_opexpr(text, ctx)


def parse_scalar_op(text: str, ctx: Context | None = None) -> dict:
    ctx = ctx or default_context()
    v = eval_node(parse_ast(text), ctx, {}, text)
    if isinstance(v, MatrixDiffOp):
        raise ParseError("matrix where a scalar operator was expected", 0, text)
    return v


def _mi_str(mi) -> str:
    parts = []
    for tok, k in zip(("Dt", "Dx", "Dy"), mi):
        if k == 1:
            parts.append(tok)
        elif k > 1:
            parts.append(f"{tok}^{k}")
    return "*".join(parts)


def format_entry(e: dict) -> str:
    if not e:
        return "0"
    out = []
    for mi in sorted(e):
        c = core.to_str(e[mi])
        d = _mi_str(mi)
        if not d:
            out.append(f"({c})" if len(e) > 1 else c)
        elif c == "1":
            out.append(d)
        else:
            out.append(f"({c})*{d}")
    return " + ".join(out)


def format_op(A: MatrixDiffOp) -> str:
    return "[" + ", ".join("[" + ", ".join(format_entry(e) for e in row) + "]"
                           for row in A.entries) + "]"
