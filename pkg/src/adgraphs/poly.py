"""Sparse multivariate polynomials over a finite field, plus the univariate
tools used for permutation-polynomial questions: reduction modulo X^q - X,
reduced powers, Hermite-Dickson testing and value sets.
"""

from __future__ import annotations

import ast
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from adgraphs.ff import Field

Exps = tuple[int, ...]


class MultiPoly:
    """A polynomial in ``arity`` variables with coefficients in ``field``.

    ``terms`` maps exponent tuples to nonzero coefficients.  Instances are
    treated as immutable.
    """

    __slots__ = ("field", "arity", "terms")

    def __init__(self, field: Field, arity: int, terms: Mapping[Exps, int] | None = None):
        self.field = field
        self.arity = arity
        clean: dict[Exps, int] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(k) for k in exps)
            if len(exps) != arity:
                raise ValueError(f"exponent tuple {exps} does not have length {arity}")
            if any(k < 0 for k in exps):
                raise ValueError(f"negative exponent in {exps}")
            c = int(c) % field.q if field.e == 1 else int(c)
            if not 0 <= c < field.q:
                raise ValueError(f"{c} is not an element of F_{field.q}")
            if c:
                clean[exps] = c
        self.terms = clean

    # -- constructors ---------------------------------------------------------

    @classmethod
    def constant(cls, field: Field, arity: int, c: int) -> MultiPoly:
        return cls(field, arity, {(0,) * arity: c})

    @classmethod
    def variable(cls, field: Field, arity: int, i: int) -> MultiPoly:
        exps = [0] * arity
        exps[i] = 1
        return cls(field, arity, {tuple(exps): 1})

    @classmethod
    def univariate(cls, field: Field, coeffs: Mapping[int, int] | Sequence[int]) -> MultiPoly:
        """From ``{degree: coeff}`` or a low-degree-first coefficient list."""
        if not isinstance(coeffs, Mapping):
            coeffs = dict(enumerate(coeffs))
        return cls(field, 1, {(k,): c for k, c in coeffs.items()})

    # -- arithmetic -----------------------------------------------------------

    def _check(self, other: MultiPoly) -> None:
        if other.field != self.field or other.arity != self.arity:
            raise ValueError("polynomials over different rings")

    def _coerce(self, other) -> MultiPoly:
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        if isinstance(other, (int, np.integer)):
            return MultiPoly.constant(self.field, self.arity, self.field.from_int(int(other)))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.field
        out = dict(self.terms)
        for exps, c in other.terms.items():
            out[exps] = F.add(out.get(exps, 0), c)
        return MultiPoly(F, self.arity, out)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return MultiPoly(F, self.arity, {k: F.neg(c) for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.field
        out: dict[Exps, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                out[exps] = F.add(out.get(exps, 0), F.mul(c1, c2))
        return MultiPoly(F, self.arity, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.constant(self.field, self.arity, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        return (isinstance(other, MultiPoly) and self.field == other.field
                and self.arity == other.arity and self.terms == other.terms)

    def __hash__(self):
        return hash((self.field, self.arity, frozenset(self.terms.items())))

    # -- inspection -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def coeff(self, exps: int | Exps) -> int:
        if isinstance(exps, int):
            exps = (exps,)
        return self.terms.get(tuple(exps), 0)

    def coefficients_in_prime_field(self) -> bool:
        return all(self.field.in_prime_field(c) for c in self.terms.values())

    def eval(self, *point):
        """Evaluate at a point; each coordinate may be an int or an int array."""
        if len(point) == 1 and isinstance(point[0], tuple):
            point = point[0]
        if len(point) != self.arity:
            raise ValueError(f"expected {self.arity} coordinates, got {len(point)}")
        F = self.field
        xs = [np.asarray(x, dtype=np.int64) for x in point]
        shape = np.broadcast_shapes(*(x.shape for x in xs)) if xs else ()
        total = np.zeros(shape, dtype=np.int64)
        for exps, c in self.terms.items():
            term = np.full(shape, c, dtype=np.int64)
            for x, k in zip(xs, exps):
                if k:
                    term = F.mul(term, F.pow(x, k))
            total = F.add(total, term)
        total = np.asarray(total)
        return int(total) if total.ndim == 0 else total

    __call__ = eval

    def __repr__(self):
        return f"MultiPoly({format_poly(self)!r}, q={self.field.q})"


def format_poly(poly: MultiPoly, names: Sequence[str] | None = None) -> str:
    if names is None:
        names = ["x"] if poly.arity == 1 else [f"x{i + 1}" for i in range(poly.arity)]
    if poly.is_zero():
        return "0"
    parts = []
    for exps in sorted(poly.terms, key=lambda e: (-sum(e), tuple(-k for k in e))):
        c = poly.terms[exps]
        mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, exps) if k)
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        else:
            parts.append(f"{c}*{mono}")
    return " + ".join(parts)


# -- text format ---------------------------------------------------------------

def parse_poly(text: str, field: Field, variables: Sequence[str]) -> MultiPoly:
    """Parse ``text`` such as ``"p1*p2*l1*(p1+p2+p1*p2)"`` into a MultiPoly.

    ``variables`` fixes the variable order.  Integer literals are mapped into
    the prime field.  Operators: ``+ - * ^`` (``**`` also accepted) and
    parentheses.
    """
    arity = len(variables)
    index = {name: i for i, name in enumerate(variables)}
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse polynomial {text!r}: {exc.msg}") from None

    def walk(node) -> MultiPoly:
        if isinstance(node, ast.BinOp):
            left = walk(node.left)
            if isinstance(node.op, ast.Pow):
                k = _int_literal(node.right)
                return left ** k
            right = walk(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
        elif isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            inner = walk(node.operand)
            return -inner if isinstance(node.op, ast.USub) else inner
        elif isinstance(node, ast.Name):
            if node.id not in index:
                raise ValueError(f"unknown variable {node.id!r} in {text!r}; "
                                 f"allowed: {', '.join(variables)}")
            return MultiPoly.variable(field, arity, index[node.id])
        elif isinstance(node, ast.Constant) and isinstance(node.value, int):
            return MultiPoly.constant(field, arity, field.from_int(node.value))
        raise ValueError(f"unsupported syntax in polynomial {text!r}")

    def _int_literal(node) -> int:
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and node.value >= 0:
            return node.value
        raise ValueError(f"exponents must be non-negative integer literals in {text!r}")

    return walk(tree.body)


def poly_variables(text: str) -> set[str]:
    tree = ast.parse(text.replace("^", "**"), mode="eval")
    return {n.id for n in ast.walk(tree) if isinstance(n, ast.Name)}


# -- univariate reduction and powers -------------------------------------------

def reduce_exponent(k: int, q: int) -> int:
    """Exponent of X^k after substituting X^q -> X repeatedly (k = 0 kept)."""
    return k if k < q else (k - 1) % (q - 1) + 1


def _require_univariate(poly: MultiPoly) -> None:
    if poly.arity != 1:
        raise ValueError(f"expected a univariate polynomial, got arity {poly.arity}")


def reduce_mod_xq(poly: MultiPoly, field: Field | None = None) -> MultiPoly:
    """Reduce a univariate polynomial modulo X^q - X (result has degree < q)."""
    _require_univariate(poly)
    F = field or poly.field
    out: dict[Exps, int] = {}
    for (k,), c in poly.terms.items():
        r = (reduce_exponent(k, F.q),)
        out[r] = F.add(out.get(r, 0), c)
    return MultiPoly(F, 1, out)


def _dense(poly: MultiPoly) -> np.ndarray:
    F = poly.field
    a = np.zeros(F.q, dtype=np.int64)
    for (k,), c in reduce_mod_xq(poly).terms.items():
        a[k] = c
    return a


def _from_dense(field: Field, a: np.ndarray) -> MultiPoly:
    nz = np.flatnonzero(a)
    return MultiPoly(field, 1, {(int(k),): int(a[k]) for k in nz})


def _times_sparse(F: Field, dense: np.ndarray, terms: list[tuple[int, int]]) -> np.ndarray:
    """(dense * sparse) mod (X^q - X), both of degree < q."""
    q = F.q
    acc = np.zeros((q, F.e), dtype=np.int64)
    src = np.arange(q)
    for k, c in terms:
        vals = F.mul(c, dense)
        tgt = src + k
        tgt = np.where(tgt >= q, (tgt - 1) % (q - 1) + 1, tgt)
        np.add.at(acc, tgt, F.digits[vals])
    return (acc % F.p) @ (F.p ** np.arange(F.e, dtype=np.int64))


def reduced_powers(poly: MultiPoly, t_max: int):
    """Yield ``(t, dense coefficients of poly^t mod X^q - X)`` for t = 1..t_max."""
    _require_univariate(poly)
    F = poly.field
    base = reduce_mod_xq(poly)
    terms = [(k, c) for (k,), c in base.terms.items()]
    cur = _dense(base)
    for t in range(1, t_max + 1):
        if t > 1:
            cur = _times_sparse(F, cur, terms)
        yield t, cur


def pow_reduced(poly: MultiPoly, t: int, field: Field | None = None) -> MultiPoly:
    """``poly**t`` reduced modulo X^q - X, computed one factor at a time."""
    if t < 1:
        raise ValueError("t must be >= 1")
    F = field or poly.field
    for k, dense in reduced_powers(poly, t):
        if k == t:
            return _from_dense(F, dense)
    raise AssertionError("unreachable")


# -- permutation polynomials ---------------------------------------------------

def values_on_field(poly: MultiPoly) -> np.ndarray:
    _require_univariate(poly)
    return np.asarray(poly.eval(np.arange(poly.field.q)))


def is_pp_bruteforce(poly: MultiPoly, field: Field | None = None) -> bool:
    """True iff x -> poly(x) is a bijection of F_q, by evaluating everywhere."""
    F = field or poly.field
    return len(np.unique(values_on_field(poly))) == F.q


def is_pp_hermite_dickson(poly: MultiPoly, field: Field | None = None) -> bool:
    """Permutation test via the Hermite-Dickson criterion.

    (i) exactly one root in F_q, and (ii) for 1 <= t <= q-2 with p not
    dividing t, the reduction of poly^t modulo X^q - X has no X^(q-1) term.
    """
    F = field or poly.field
    roots = int(np.count_nonzero(values_on_field(poly) == 0))
    if roots != 1:
        return False
    for t, dense in reduced_powers(poly, F.q - 2):
        if t % F.p and dense[F.q - 1] != 0:
            return False
    return True


@dataclass(frozen=True)
class ValueSetReport:
    size: int
    values: frozenset[int]
    is_pp: bool


def value_set(poly: MultiPoly, field: Field | None = None) -> ValueSetReport:
    F = field or poly.field
    vals = frozenset(int(v) for v in np.unique(values_on_field(poly)))
    return ValueSetReport(len(vals), vals, len(vals) == F.q)


def wan_bound(n: int, field: Field | int) -> int:
    """Upper bound q - ceil((q-1)/n) on the value-set size of a non-PP of degree n."""
    if n < 1:
        raise ValueError("degree must be >= 1")
    q = field if isinstance(field, int) else field.q
    return q - math.ceil((q - 1) / n)


@dataclass(frozen=True)
class JPoly:
    """``X^3 + c2 X^2 + c1 X + cm1 X^(q-2)``; with cm1 == 0 it is the plain cubic."""

    c2: int
    c1: int
    cm1: int

    def to_poly(self, field: Field) -> MultiPoly:
        terms = {3: 1, 2: self.c2, 1: self.c1}
        p = MultiPoly.univariate(field, terms)
        if self.cm1:
            p = p + MultiPoly.univariate(field, {field.q - 2: self.cm1})
        return p

    def values(self, field: Field, exclude_zero_input: bool) -> np.ndarray:
        """Values of j on F^x (or of J on F, where J(0) = 0)."""
        F = field
        t = F.nonzero if exclude_zero_input else np.arange(F.q)
        cubic = MultiPoly.univariate(F, {3: 1, 2: self.c2, 1: self.c1}).eval(t)
        if not self.cm1:
            return np.asarray(cubic)
        safe = np.where(t == 0, 1, t)
        recip = np.where(t == 0, 0, F.mul(self.cm1, F.inv(safe)))
        return np.asarray(F.add(cubic, recip))

    @classmethod
    def random(cls, field: Field, rng: np.random.Generator, nonzero_cm1: bool = False) -> JPoly:
        c2, c1 = (int(v) for v in rng.integers(0, field.q, size=2))
        lo = 1 if nonzero_cm1 else 0
        cm1 = int(rng.integers(lo, field.q))
        return cls(c2, c1, cm1)


def j_value_count(j: JPoly, field: Field, exclude_zero_input: bool) -> int:
    return len(np.unique(j.values(field, exclude_zero_input)))


def leading_coefficient_identities(j: JPoly, field: Field) -> dict[int, tuple[int, int]]:
    """For n = 2, 3, 4: (coefficient of X^(q-1) in J^n mod X^q - X, closed form).

    Closed forms: 2*c1*cm1, 3*c2*cm1^2, 4*cm1^3 + 6*c1^2*cm1^2.  They hold
    for q >= 17.
    """
    F = field
    c2, c1, m = j.c2, j.c1, j.cm1
    k = F.from_int
    closed = {
        2: F.mul(k(2), F.mul(c1, m)),
        3: F.mul(k(3), F.mul(c2, F.mul(m, m))),
        4: F.add(F.mul(k(4), F.pow(m, 3)), F.mul(k(6), F.mul(F.mul(c1, c1), F.mul(m, m)))),
    }
    poly = MultiPoly.univariate(F, {3: 1, 2: c2, 1: c1, F.q - 2: m})
    out = {}
    for n, dense in reduced_powers(poly, 4):
        if n >= 2:
            out[n] = (int(dense[F.q - 1]), closed[n])
    return out


def all_polys(field: Field, max_degree: int, monic_degree: int | None = None) -> Iterable[MultiPoly]:
    """Every univariate polynomial of degree <= max_degree, or every monic one
    of exactly ``monic_degree``."""

    q = field.q
    if monic_degree is not None:
        for low in itertools.product(range(q), repeat=monic_degree):
            yield MultiPoly.univariate(field, list(low) + [1])
        return
    for coeffs in itertools.product(range(q), repeat=max_degree + 1):
        yield MultiPoly.univariate(field, coeffs)
