"""Finite fields F_q, q = p^e with p an odd prime.

Elements are plain ints in ``[0, q)``.  For ``e == 1`` the int is the residue
mod p.  For ``e > 1`` it holds the base-p digits of the coefficient vector in
the polynomial basis 1, X, ..., X^(e-1), lowest degree in the least
significant digit.

All scalar operations also accept numpy integer arrays and broadcast.
"""

from __future__ import annotations

import itertools
from functools import cached_property

import numpy as np

# q x q tables are built up to this order; above it, log/exp arithmetic is used
TABLE_LIMIT = 1024
MAX_ORDER = 1 << 20


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, e)`` with ``q == p**e``; raise if q is not a prime power."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise FieldError(f"{q} is not a prime power")
    return p, e


# -- polynomials over F_p as coefficient lists, low degree first -------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a: list[int], m: list[int], p: int) -> list[int]:
    """Remainder of a modulo the monic polynomial m over F_p."""
    a = _trim([x % p for x in a])
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        lead = a[-1]
        shift = len(a) - 1 - dm
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - lead * c) % p
        _trim(a)
    return a


def _is_irreducible(m: list[int], p: int) -> bool:
    """Trial division of monic m by every monic polynomial of degree <= deg(m)/2."""
    e = len(m) - 1
    for d in range(1, e // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _polymod(list(m), list(low) + [1], p):
                return False
    return True


def smallest_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree e over F_p.

    Coefficient tuples ``(c_0, ..., c_{e-1})`` are compared with ``c_0`` most
    significant.  The returned tuple includes the leading 1.
    """
    for low in itertools.product(range(p), repeat=e):
        m = list(low) + [1]
        if low[0] != 0 and _is_irreducible(m, p):
            return tuple(m)
    raise FieldError(f"no irreducible polynomial of degree {e} over F_{p}")


class Field:
    """The finite field with ``q = p**e`` elements.

    Immutable after construction.  Build with :func:`make_field` or
    :func:`field_of_order`.
    """

    def __init__(self, p: int, e: int = 1):
        if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
            raise FieldError(f"{p} is not prime")
        if p == 2:
            raise FieldError("characteristic 2 is not supported")
        if e < 1:
            raise FieldError(f"exponent must be positive, got {e}")
        if p ** e > MAX_ORDER:
            raise FieldError(f"field order {p}^{e} exceeds {MAX_ORDER}")
        self.p = int(p)
        self.e = int(e)
        self.q = self.p ** self.e
        self.modulus: tuple[int, ...] = () if e == 1 else smallest_irreducible(self.p, self.e)

        q, pp = self.q, self.p
        idx = np.arange(q, dtype=np.int64)
        # digits[v, i]: coefficient of X^i in element v
        self._pows = pp ** np.arange(self.e, dtype=np.int64)
        self.digits = (idx[:, None] // self._pows[None, :]) % pp
        self.neg_table = self._from_digits((-self.digits) % pp)

        self.generator, self.exp_table, self.log_table = self._build_log_exp()
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = self.exp_table[(-self.log_table[1:]) % (q - 1)]
        self.inv_table = inv
        self.frob_table = self.pow(idx, pp)

        self.add_table = self.mul_table = None
        if q <= TABLE_LIMIT:
            self.add_table = self._add_digits(idx[:, None], idx[None, :])
            self.mul_table = self._mul_log(idx[:, None], idx[None, :])
        for t in (self.digits, self.neg_table, self.exp_table, self.log_table,
                  self.inv_table, self.frob_table, self.add_table, self.mul_table):
            if t is not None:
                t.setflags(write=False)

    # -- construction helpers ------------------------------------------------

    def _from_digits(self, d: np.ndarray) -> np.ndarray:
        return (d * self._pows).sum(axis=-1)

    def _add_digits(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.e == 1:
            return (a + b) % self.p
        return self._from_digits((self.digits[a] + self.digits[b]) % self.p)

    def _mulmod_scalar(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        da, db = self.digits[a], self.digits[b]
        prod = [0] * (2 * self.e - 1)
        for i in range(self.e):
            if da[i]:
                for j in range(self.e):
                    prod[i + j] += int(da[i]) * int(db[j])
        r = _polymod(prod, list(self.modulus), self.p)
        return sum(c * self.p ** i for i, c in enumerate(r))

    def _build_log_exp(self):
        q = self.q
        for g in range(2, q):
            exp = np.empty(q - 1, dtype=np.int64)
            x = 1
            ok = True
            for k in range(q - 1):
                if k > 0 and x == 1:
                    ok = False
                    break
                exp[k] = x
                x = self._mulmod_scalar(x, g)
            if ok and x == 1:
                log = np.zeros(q, dtype=np.int64)
                log[exp] = np.arange(q - 1)
                return g, exp, log
        raise FieldError("no primitive element found")  # unreachable for a field

    def _mul_log(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        r = self.exp_table[(self.log_table[a] + self.log_table[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, r)

    # -- arithmetic ------------------------------------------------------------

    def elements(self) -> list[int]:
        return list(range(self.q))

    def add(self, a, b):
        if self.add_table is not None:
            r = self.add_table[a, b]
        else:
            r = self._add_digits(a, b)
        return _scalar(r)

    def neg(self, a):
        return _scalar(self.neg_table[a])

    def sub(self, a, b):
        return self.add(a, self.neg_table[b])

    def mul(self, a, b):
        if self.mul_table is not None:
            r = self.mul_table[a, b]
        else:
            r = self._mul_log(a, b)
        return _scalar(r)

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError("inverse of zero in F_%d" % self.q)
        return _scalar(self.inv_table[a])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, k: int):
        """``a**k`` for integer k >= 0 (``0**0 == 1``); negative k inverts."""
        a = np.asarray(a, dtype=np.int64)
        if k < 0:
            return self.pow(self.inv(a), -k)
        if k == 0:
            return _scalar(np.ones_like(a))
        r = self.exp_table[(self.log_table[a] * (k % (self.q - 1))) % (self.q - 1)]
        return _scalar(np.where(a == 0, 0, r))

    def frobenius(self, a):
        return _scalar(self.frob_table[a])

    def arith(self, op: str, *args):
        """Dispatch by name: add, sub, mul, inv, neg, pow (exponent last)."""
        fn = {"add": self.add, "sub": self.sub, "mul": self.mul,
              "inv": self.inv, "neg": self.neg, "pow": self.pow, "div": self.div}
        if op not in fn:
            raise ValueError(f"unknown field operation {op!r}")
        return fn[op](*args)

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> F_p inside F_q."""
        return n % self.p

    def element_order(self, a: int) -> int:
        if a == 0:
            raise ValueError("zero has no multiplicative order")
        x, k = a, 1
        while x != 1:
            x = self.mul(x, a)
            k += 1
        return k

    def in_prime_field(self, a: int) -> bool:
        return 0 <= a < self.p

    @cached_property
    def nonzero(self) -> np.ndarray:
        return np.arange(1, self.q, dtype=np.int64)

    def __eq__(self, other):
        return isinstance(other, Field) and (self.p, self.e) == (other.p, other.e)

    def __hash__(self):
        return hash((self.p, self.e))

    def __repr__(self):
        if self.e == 1:
            return f"Field(F_{self.q})"
        return f"Field(F_{self.q}, modulus={self.modulus})"


def _scalar(r):
    r = np.asarray(r)
    return int(r) if r.ndim == 0 else r


_CACHE: dict[tuple[int, int], Field] = {}


def make_field(p: int, e: int = 1) -> Field:
    key = (int(p), int(e))
    if key not in _CACHE:
        _CACHE[key] = Field(p, e)
    return _CACHE[key]


def field_of_order(q: int) -> Field:
    p, e = prime_power(q)
    return make_field(p, e)
