"""Canonical sum-of-products expressions with exact rational coefficients.

An expression is a dict {monomial: Fraction}.  A monomial is a sorted tuple of
(atom, integer power) pairs.  Atoms are the imaginary unit, named symbols, jet
symbols, elementary functions of an expression, applications of unknown
functions and parenthesised sums carrying a negative power.

Canonical rules applied on construction:
  * like monomials merged, zero coefficients dropped
  * i^2 = -1
  * all exp factors of a monomial merged into one exp(sum), exp(0) = 1
  * sqrt(a)^2 = a
  * a sum raised to a negative power becomes Paren(base)^n with the base
    scaled so its leading coefficient is 1
Trigonometric identities are left alone; zero testing is numeric.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping

ZERO_Q = Fraction(0)
ONE_Q = Fraction(1)
COORD_NAMES = ("t", "x", "y")


def mi_name(mi: tuple[int, ...]) -> str:
    return "".join(c * k for c, k in zip(COORD_NAMES, mi))


def mi_add(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(p + q for p, q in zip(a, b))


def unit_mi(k: int) -> tuple[int, int, int]:
    mi = [0, 0, 0]
    mi[k] = 1
    return tuple(mi)


# ---------------------------------------------------------------- atoms


class Atom:
    __slots__ = ("key", "_hash", "free")

    def _setup(self, key, free):
        self.key = key
        self._hash = hash(key)
        self.free = frozenset([self]) if free is None else free

    def __eq__(self, other):
        return self is other or (isinstance(other, Atom) and self.key == other.key)

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.key < other.key

    def __repr__(self):
        return f"<{atom_str(self)}>"


class ImagUnit(Atom):
    __slots__ = ()

    def __init__(self):
        self._setup((0,), frozenset())


class Sym(Atom):
    """Named symbol.  kind is one of const, param, coord, label."""

    __slots__ = ("name", "kind", "conj_name")
    RANKS = {"const": 1, "param": 1, "coord": 2, "label": 7}

    def __init__(self, name: str, kind: str = "param", conj_name: str | None = None):
        self.name = name
        self.kind = kind
        self.conj_name = conj_name
        if kind == "coord":
            idx = COORD_NAMES.index(name) if name in COORD_NAMES else 9
            key = (2, idx, name)
        else:
            key = (self.RANKS[kind], name)
        self._setup(key, frozenset() if kind == "const" else None)

    def partner(self) -> "Sym":
        if self.conj_name is None:
            return self
        return Sym(self.conj_name, self.kind, self.name)


class Jet(Atom):
    """Jet symbol u_alpha^J (dep is 1-based); conj marks the conjugate family."""

    __slots__ = ("dep", "conj", "mi")

    def __init__(self, dep: int, conj: bool = False, mi: tuple[int, ...] = (0, 0, 0)):
        self.dep = dep
        self.conj = bool(conj)
        self.mi = tuple(mi)
        self._setup((5, dep, self.conj, self.mi), None)

    @property
    def name(self) -> str:
        base = ("cu" if self.conj else "u") + str(self.dep)
        suffix = mi_name(self.mi)
        return base + ("_" + suffix if suffix else "")

    @property
    def order(self) -> int:
        return sum(self.mi)

    def shifted(self, k: int) -> "Jet":
        return Jet(self.dep, self.conj, mi_add(self.mi, unit_mi(k)))

    def flipped(self) -> "Jet":
        return Jet(self.dep, not self.conj, self.mi)


FUNCTIONS = ("sin", "cos", "exp", "sqrt", "tan", "arctan")


class Fn(Atom):
    __slots__ = ("name", "arg")

    def __init__(self, name: str, arg: "Expr"):
        self.name = name
        self.arg = arg
        self._setup((3, name, arg.sort_key()), arg.free)


class FuncApp(Atom):
    """Unknown function applied to symbol arguments, with a derivative order per argument."""

    __slots__ = ("name", "conj_name", "args", "deriv")

    def __init__(self, name: str, args: Iterable[Atom], deriv: Iterable[int] | None = None,
                 conj_name: str | None = None):
        args = tuple(args)
        deriv = tuple(deriv) if deriv is not None else (0,) * len(args)
        pairs = sorted(zip(args, deriv), key=lambda p: p[0].key)
        self.name = name
        self.conj_name = conj_name
        self.args = tuple(a for a, _ in pairs)
        self.deriv = tuple(d for _, d in pairs)
        self._setup((4, name, tuple(a.key for a in self.args), self.deriv), frozenset(self.args))

    def bare(self) -> "FuncApp":
        return FuncApp(self.name, self.args, None, self.conj_name)


class Paren(Atom):
    """A sum kept as a single factor; only appears with a negative power."""

    __slots__ = ("base",)

    def __init__(self, base: "Expr"):
        self.base = base
        self._setup((6, base.sort_key()), base.free)


I_ATOM = ImagUnit()
PI = Sym("pi", "const")


# ---------------------------------------------------------------- expressions


def mono_key(m):
    return tuple((a.key, p) for a, p in m)


class Expr:
    __slots__ = ("terms", "_hash", "_skey", "_free")

    def __init__(self, terms: dict | None = None):
        self.terms = terms if terms is not None else {}
        self._hash = None
        self._skey = None
        self._free = None

    # construction helpers
    @staticmethod
    def const(c) -> "Expr":
        c = Fraction(c)
        return Expr({(): c}) if c else Expr({})

    @staticmethod
    def atom(a: Atom, power: int = 1) -> "Expr":
        return Expr(_normalize({a: power}))

    # identity
    def __eq__(self, other):
        if not isinstance(other, Expr):
            if isinstance(other, (int, Fraction)):
                other = Expr.const(other)
            else:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def sort_key(self):
        if self._skey is None:
            self._skey = tuple(sorted((mono_key(m), c) for m, c in self.terms.items()))
        return self._skey

    @property
    def free(self) -> frozenset:
        if self._free is None:
            s = set()
            for m in self.terms:
                for a, _ in m:
                    s |= a.free
            self._free = frozenset(s)
        return self._free

    def atoms(self) -> set:
        """All atoms, including those nested in function arguments."""
        out = set()
        stack = [self]
        while stack:
            e = stack.pop()
            for m in e.terms:
                for a, _ in m:
                    if a in out:
                        continue
                    out.add(a)
                    if isinstance(a, Fn):
                        stack.append(a.arg)
                    elif isinstance(a, Paren):
                        stack.append(a.base)
        return out

    def is_zero_exact(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def const_value(self) -> Fraction:
        return self.terms.get((), ZERO_Q) if self.is_const() else None

    def __bool__(self):
        return bool(self.terms)

    # arithmetic
    def __add__(self, other):
        other = as_expr(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        acc = dict(self.terms)
        for m, c in other.terms.items():
            v = acc.get(m, ZERO_Q) + c
            if v:
                acc[m] = v
            else:
                acc.pop(m, None)
        return Expr(acc)

    __radd__ = __add__

    def __neg__(self):
        return Expr({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-as_expr(other))

    def __rsub__(self, other):
        return as_expr(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            k = Fraction(other)
            if not k:
                return Expr({})
            return Expr({m: c * k for m, c in self.terms.items()})
        other = as_expr(other)
        return Expr(_mul_terms(self.terms, other.terms))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (ONE_Q / Fraction(other))
        return self * (as_expr(other) ** -1)

    def __rtruediv__(self, other):
        return as_expr(other) * (self ** -1)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("only integer powers are supported")
        if n == 0:
            return Expr.const(1)
        if n == 1:
            return self
        if n > 0:
            result = Expr.const(1)
            base = self
            while n:
                if n & 1:
                    result = result * base
                n >>= 1
                if n:
                    base = base * base
            return result
        if not self.terms:
            raise ZeroDivisionError("zero raised to a negative power")
        if len(self.terms) == 1:
            (m, c), = self.terms.items()
            powers = {a: p * n for a, p in m}
            out = Expr(_normalize(powers))
            return out * (c ** n)
        lead = min(self.terms, key=mono_key)
        c = self.terms[lead]
        base = self * (ONE_Q / c)
        return Expr({((Paren(base), n),): c ** n})

    def __repr__(self):
        return f"Expr({to_str(self)})"

    def __str__(self):
        return to_str(self)


def as_expr(v) -> Expr:
    if isinstance(v, Expr):
        return v
    if isinstance(v, Atom):
        return Expr.atom(v)
    if isinstance(v, (int, Fraction)):
        return Expr.const(v)
    if isinstance(v, str):
        return Expr.const(Fraction(v))
    raise TypeError(f"cannot convert {type(v).__name__} to Expr")




def sym(name: str, kind: str = "param", conj_name: str | None = None) -> Expr:
    return Expr.atom(Sym(name, kind, conj_name))


def jet(dep: int, conj: bool = False, mi=(0, 0, 0)) -> Expr:
    return Expr.atom(Jet(dep, conj, mi))


# ---------------------------------------------------------------- monomial algebra


def _normalize(powers: Mapping[Atom, int]) -> dict:
    coeff = ONE_Q
    plain = []
    extra = []
    exp_arg = None
    for a, p in powers.items():
        if p == 0:
            continue
        if isinstance(a, ImagUnit):
            p %= 4
            if p >= 2:
                coeff = -coeff
                p -= 2
            if p:
                plain.append((a, 1))
        elif isinstance(a, Fn) and a.name == "exp":
            part = a.arg * p
            exp_arg = part if exp_arg is None else exp_arg + part
        elif isinstance(a, Fn) and a.name == "sqrt" and abs(p) >= 2:
            q = int(p / 2)
            r = p - 2 * q
            if r:
                plain.append((a, r))
            extra.append(a.arg ** q)
        elif isinstance(a, Paren) and p > 0:
            extra.append(a.base ** p)
        else:
            plain.append((a, p))
    if exp_arg is not None and exp_arg.terms:
        plain.append((Fn("exp", exp_arg), 1))
    plain.sort(key=lambda ap: ap[0].key)
    out = {tuple(plain): coeff}
    for f in extra:
        out = _mul_terms(out, f.terms)
    return out


@lru_cache(maxsize=1 << 18)
def _mono_mul(m1, m2):
    powers = dict(m1)
    for a, p in m2:
        powers[a] = powers.get(a, 0) + p
    return tuple(_normalize(powers).items())


def _mul_terms(t1: dict, t2: dict) -> dict:
    acc: dict = {}
    get = acc.get
    for m1, c1 in t1.items():
        for m2, c2 in t2.items():
            c = c1 * c2
            if not m1:
                items = ((m2, ONE_Q),)
            elif not m2:
                items = ((m1, ONE_Q),)
            else:
                items = _mono_mul(m1, m2)
            for m, k in items:
                v = get(m, ZERO_Q) + (c if k == 1 else c * k)
                if v:
                    acc[m] = v
                else:
                    acc.pop(m, None)
    return acc


ZERO = Expr({})
ONE = Expr.const(1)
I = Expr.atom(I_ATOM)


# ---------------------------------------------------------------- functions


def _perfect_sqrt(q: Fraction):
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def fn(name: str, arg) -> Expr:
    """Apply an elementary function, folding the trivial constant cases."""
    if name not in FUNCTIONS:
        raise ValueError(f"unknown function {name!r}")
    arg = as_expr(arg)
    if not arg.terms:
        return ONE if name in ("cos", "exp") else ZERO
    if name == "sqrt" and arg.is_const():
        r = _perfect_sqrt(arg.const_value())
        if r is not None:
            return Expr.const(r)
    return Expr.atom(Fn(name, arg))


def sin(a):
    return fn("sin", a)


def cos(a):
    return fn("cos", a)


def exp(a):
    return fn("exp", a)


def sqrt(a):
    return fn("sqrt", a)


def tan(a):
    return fn("tan", a)


def arctan(a):
    return fn("arctan", a)


# ---------------------------------------------------------------- differentiation


def _fn_prime(a: Fn) -> Expr:
    u = a.arg
    if a.name == "sin":
        return cos(u)
    if a.name == "cos":
        return -sin(u)
    if a.name == "exp":
        return Expr.atom(a)
    if a.name == "sqrt":
        return Expr({((a, -1),): Fraction(1, 2)})
    if a.name == "tan":
        return ONE + Expr.atom(a, 2)
    if a.name == "arctan":
        return (ONE + u * u) ** -1
    raise ValueError(a.name)


@lru_cache(maxsize=1 << 16)
def _atom_diff(a: Atom, v: Atom) -> Expr:
    if v not in a.free:
        return ZERO
    if isinstance(a, (Sym, Jet)):
        return ONE if a == v else ZERO
    if isinstance(a, Fn):
        return _fn_prime(a) * differentiate(a.arg, v)
    if isinstance(a, Paren):
        return differentiate(a.base, v)
    if isinstance(a, FuncApp):
        k = a.args.index(v)
        d = list(a.deriv)
        d[k] += 1
        return Expr.atom(FuncApp(a.name, a.args, d, a.conj_name))
    return ZERO


def differentiate(E: Expr, v) -> Expr:
    """Partial derivative with respect to a symbol or jet atom."""
    if isinstance(v, Expr):
        (m, _), = v.terms.items()
        v = m[0][0]
    if v not in E.free:
        return ZERO
    acc: dict = {}
    for m, c in E.terms.items():
        for idx, (a, p) in enumerate(m):
            if v not in a.free:
                continue
            da = _atom_diff(a, v)
            if not da.terms:
                continue
            if p == 1:
                rest = m[:idx] + m[idx + 1:]
                rest_terms = {rest: c}
            elif isinstance(a, Fn) and a.name == "sqrt":
                powers = dict(m)
                powers[a] = p - 1
                rest_terms = {mm: k * c * p for mm, k in _normalize(powers).items()}
            else:
                rest = m[:idx] + ((a, p - 1),) + m[idx + 1:]
                rest_terms = {rest: c * p}
            for mm, k in _mul_terms(rest_terms, da.terms).items():
                val = acc.get(mm, ZERO_Q) + k
                if val:
                    acc[mm] = val
                else:
                    acc.pop(mm, None)
    return Expr(acc)


# ---------------------------------------------------------------- mapping atoms


_UNCHANGED = object()


def map_atoms(E: Expr, f: Callable[[Atom], Expr | None]) -> Expr:
    """Rebuild E with each atom replaced by f(atom); None keeps the atom."""
    cache: dict = {}
    acc: dict = {}
    for m, c in E.terms.items():
        keep = {}
        factors = []
        for a, p in m:
            r = cache.get(a, _UNCHANGED)
            if r is _UNCHANGED:
                r = cache[a] = f(a)
            if r is None:
                keep[a] = p
            else:
                factors.append(r ** p)
        terms = {mm: k * c for mm, k in _normalize(keep).items()}
        for fac in factors:
            terms = _mul_terms(terms, fac.terms)
        for mm, k in terms.items():
            val = acc.get(mm, ZERO_Q) + k
            if val:
                acc[mm] = val
            else:
                acc.pop(mm, None)
    return Expr(acc)


def conj(E: Expr) -> Expr:
    """Complex conjugate: i -> -i, jets flip family, symbols go to partners."""

    def f(a):
        if isinstance(a, ImagUnit):
            return -I
        if isinstance(a, Sym):
            return Expr.atom(a.partner()) if a.conj_name else None
        if isinstance(a, Jet):
            return Expr.atom(a.flipped())
        if isinstance(a, Fn):
            ca = conj(a.arg)
            return None if ca == a.arg else fn(a.name, ca)
        if isinstance(a, Paren):
            cb = conj(a.base)
            return None if cb == a.base else cb
        if isinstance(a, FuncApp):
            args = [conj_atom(x) for x in a.args]
            name = a.conj_name or a.name
            return Expr.atom(FuncApp(name, args, a.deriv, a.name if a.conj_name else None))
        return None

    return map_atoms(E, f)


def conj_atom(a: Atom) -> Atom:
    if isinstance(a, Jet):
        return a.flipped()
    if isinstance(a, Sym):
        return a.partner()
    raise TypeError("only symbol atoms have atom conjugates")


def substitute(E: Expr, bindings: Mapping) -> Expr:
    """Simultaneous substitution of symbol or jet atoms by expressions."""
    binds = {}
    for k, v in bindings.items():
        if isinstance(k, Expr):
            (m, _), = k.terms.items()
            k = m[0][0]
        binds[k] = as_expr(v)
    if not binds:
        return E
    keys = frozenset(binds)

    def f(a):
        if not (a.free & keys):
            return None
        if a in binds:
            return binds[a]
        if isinstance(a, Fn):
            return fn(a.name, substitute(a.arg, binds))
        if isinstance(a, Paren):
            return substitute(a.base, binds)
        if isinstance(a, FuncApp):
            raise ValueError(f"cannot bind argument of unknown function {a.name}")
        return None

    if not (E.free & keys):
        return E
    return map_atoms(E, f)


def bind_functions(E: Expr, defs: Mapping[str, Expr], max_depth: int = 8) -> Expr:
    """Replace unknown-function applications by explicit bodies.

    defs maps a function name to its body written in the function's own
    argument symbols; derivative orders are applied to the body.
    """
    for _ in range(max_depth):
        hit = [a for a in E.atoms() if isinstance(a, FuncApp) and a.name in defs]
        if not hit:
            return E

        def f(a):
            if isinstance(a, FuncApp) and a.name in defs:
                body = defs[a.name]
                for arg, k in zip(a.args, a.deriv):
                    for _ in range(k):
                        body = differentiate(body, arg)
                return body
            if isinstance(a, Fn) and any(isinstance(b, FuncApp) for b in a.arg.atoms()):
                return fn(a.name, bind_functions(a.arg, defs))
            if isinstance(a, Paren) and any(isinstance(b, FuncApp) for b in a.base.atoms()):
                return bind_functions(a.base, defs)
            return None

        E = map_atoms(E, f)
    raise RecursionError("function bindings did not terminate")


# ---------------------------------------------------------------- printing


def atom_str(a: Atom) -> str:
    if isinstance(a, ImagUnit):
        return "i"
    if isinstance(a, (Sym, Jet)):
        return a.name
    if isinstance(a, Fn):
        return f"{a.name}({to_str(a.arg)})"
    if isinstance(a, Paren):
        return f"({to_str(a.base)})"
    if isinstance(a, FuncApp):
        call = f"{a.name}({', '.join(atom_str(x) for x in a.args)})"
        vs = []
        for x, k in zip(a.args, a.deriv):
            vs.extend([atom_str(x)] * k)
        return f"D({call}, {', '.join(vs)})" if vs else call
    return "?"


def _factor_str(a: Atom, p: int) -> str:
    s = atom_str(a)
    return s if p == 1 else f"{s}^{p}"


def term_str(m, c: Fraction) -> tuple[bool, str]:
    neg = c < 0
    a = -c if neg else c
    if not m:
        return neg, str(a)
    body = "*".join(_factor_str(x, p) for x, p in m)
    if a == 1:
        return neg, body
    return neg, f"{a}*{body}"


def to_str(E: Expr) -> str:
    if not E.terms:
        return "0"
    out = []
    items = sorted(E.terms.items(), key=lambda mc: mono_key(mc[0]))
    for idx, (m, c) in enumerate(items):
        neg, s = term_str(m, c)
        if idx == 0:
            out.append("-" + s if neg else s)
        else:
            out.append((" - " if neg else " + ") + s)
    return "".join(out)


# ---------------------------------------------------------------- queries


def jets_of(E: Expr) -> set:
    return {a for a in E.free if isinstance(a, Jet)}


def funcapps_of(E: Expr) -> set:
    return {a for a in E.atoms() if isinstance(a, FuncApp)}


def coefficient(E: Expr, a: Atom, power: int = 1) -> Expr:
    """Coefficient of a^power in E, treating E as polynomial in the atom a."""
    acc = {}
    for m, c in E.terms.items():
        d = dict(m)
        if d.get(a, 0) != power:
            continue
        rest = tuple((x, p) for x, p in m if x != a)
        acc[rest] = acc.get(rest, ZERO_Q) + c
    return Expr({m: c for m, c in acc.items() if c})


def split_by(E: Expr, pred: Callable[[Atom], bool]) -> dict:
    """Group terms by the sub-monomial made of atoms satisfying pred."""
    groups: dict = {}
    for m, c in E.terms.items():
        sel = tuple((a, p) for a, p in m if pred(a))
        rest = tuple((a, p) for a, p in m if not pred(a))
        g = groups.setdefault(sel, {})
        g[rest] = g.get(rest, ZERO_Q) + c
    return {k: Expr({m: c for m, c in v.items() if c}) for k, v in groups.items()}
