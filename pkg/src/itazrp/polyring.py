"""Exact sparse polynomials in the rate variables w1, ..., wn.

A :class:`Polynomial` is an immutable map from exponent tuples to nonzero
Python integers.  Every polynomial carries its ambient variable count ``n``;
arithmetic between polynomials of different ``n`` raises
:class:`DimensionError`.

Canonical term order is descending lexicographic on exponent vectors, so
``w1`` precedes ``w2`` and ``w1^2`` precedes ``w1*w2``.  Both the text form
(``"w1^2+2*w1*w2"``) and the JSON form use this order.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

__all__ = [
    "DimensionError",
    "NotDivisible",
    "NotHomogeneous",
    "Polynomial",
    "add",
    "mul",
    "exact_div_var",
    "evaluate",
    "homogeneous_degree",
]

Monomial = tuple  # tuple[int, ...] of length n


class DimensionError(ValueError):
    """Operands live in rings with different numbers of variables."""


class NotDivisible(ArithmeticError):
    """Exact division by a variable failed."""


class _NotHomogeneousType:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NotHomogeneous"

    def __bool__(self):
        return False


NotHomogeneous = _NotHomogeneousType()
"""Marker returned by :func:`homogeneous_degree` for mixed-degree input."""


class Polynomial:
    """Immutable sparse polynomial with integer coefficients.

    Parameters
    ----------
    n : int
        Number of variables ``w1..wn``.
    terms : mapping, optional
        Exponent tuple -> coefficient.  Zero coefficients are dropped.
    """

    __slots__ = ("n", "_terms", "_hash")

    def __init__(self, n: int, terms: Mapping[Monomial, int] | None = None):
        if n < 0:
            raise ValueError("variable count must be nonnegative")
        clean = {}
        if terms:
            for exps, c in terms.items():
                exps = tuple(exps)
                if len(exps) != n:
                    raise DimensionError(
                        f"monomial {exps} has {len(exps)} exponents, ring has {n}")
                if any(e < 0 for e in exps):
                    raise ValueError(f"negative exponent in {exps}")
                if c:
                    clean[exps] = int(c)
        self.n = n
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, n, terms):
        # trusted constructor: terms already clean
        p = cls.__new__(cls)
        p.n = n
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, n: int) -> "Polynomial":
        return cls._raw(n, {})

    @classmethod
    def constant(cls, c: int, n: int) -> "Polynomial":
        return cls._raw(n, {(0,) * n: int(c)} if c else {})

    @classmethod
    def one(cls, n: int) -> "Polynomial":
        return cls.constant(1, n)

    @classmethod
    def var(cls, a: int, n: int) -> "Polynomial":
        """The variable ``w_a`` (1-based species index)."""
        return cls.monomial(_unit(a, n), 1)

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff: int = 1) -> "Polynomial":
        exps = tuple(exps)
        return cls(len(exps), {exps: coeff})

    @classmethod
    def variables(cls, n: int) -> tuple:
        """``(w1, ..., wn)`` as polynomials."""
        return tuple(cls.var(a, n) for a in range(1, n + 1))

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict:
        """Copy of the term map."""
        return dict(self._terms)

    def items(self):
        """Terms in canonical order."""
        return sorted(self._terms.items(), reverse=True)

    def coeff(self, exps: Sequence[int]) -> int:
        return self._terms.get(tuple(exps), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.n == other.n and self._terms == other._terms
        if isinstance(other, int):
            return self._terms == ({(0,) * self.n: other} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._terms.items())))
        return self._hash

    def total_degrees(self) -> set:
        return {sum(e) for e in self._terms}

    def nonnegative(self) -> bool:
        return all(c > 0 for c in self._terms.values())

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.n != self.n:
                raise DimensionError(f"ring sizes differ: {self.n} vs {other.n}")
            return other
        if isinstance(other, int):
            return Polynomial.constant(other, self.n)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if len(other._terms) > len(self._terms):
            big, small = other._terms, self._terms
        else:
            big, small = self._terms, other._terms
        out = dict(big)
        for e, c in small.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Polynomial._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.n, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return Polynomial.zero(self.n)
            return Polynomial._raw(self.n, {e: c * other for e, c in self._terms.items()})
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    del out[e]
        return Polynomial._raw(self.n, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = Polynomial.one(self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, exps: Sequence[int]) -> "Polynomial":
        """Multiply by the monomial with exponent vector ``exps``."""
        exps = tuple(exps)
        if len(exps) != self.n:
            raise DimensionError("monomial length mismatch")
        return Polynomial._raw(
            self.n, {tuple(x + y for x, y in zip(e, exps)): c for e, c in self._terms.items()})

    def times_var(self, a: int) -> "Polynomial":
        """Multiply by ``w_a``."""
        i = a - 1
        return Polynomial._raw(
            self.n, {e[:i] + (e[i] + 1,) + e[i + 1:]: c for e, c in self._terms.items()})

    def div_var(self, a: int) -> "Polynomial":
        """Exact division by ``w_a``; raises :class:`NotDivisible`."""
        if not 1 <= a <= self.n:
            raise DimensionError(f"species {a} out of range 1..{self.n}")
        i = a - 1
        out = {}
        for e, c in self._terms.items():
            if e[i] == 0:
                raise NotDivisible(f"{_format_term(e, c, True)} is not divisible by w{a}")
            out[e[:i] + (e[i] - 1,) + e[i + 1:]] = c
        return Polynomial._raw(self.n, out)

    def embed(self, n: int) -> "Polynomial":
        """Same polynomial viewed in a ring with ``n >= self.n`` variables."""
        if n < self.n:
            raise DimensionError("cannot embed into a smaller ring")
        pad = (0,) * (n - self.n)
        return Polynomial._raw(n, {e + pad: c for e, c in self._terms.items()})

    def evaluate(self, w: Sequence) -> Fraction:
        if len(w) != self.n:
            raise DimensionError(f"expected {self.n} values, got {len(w)}")
        w = [Fraction(x) for x in w]
        total = Fraction(0)
        for e, c in self._terms.items():
            t = Fraction(c)
            for x, k in zip(w, e):
                if k:
                    t *= x ** k
            total += t
        return total

    def homogeneous_degree(self):
        if not self._terms:
            raise ValueError("the zero polynomial has no degree")
        degs = self.total_degrees()
        return degs.pop() if len(degs) == 1 else NotHomogeneous

    # -- serialization ----------------------------------------------------

    def to_json(self) -> list:
        return [{"exps": list(e), "coeff": str(c)} for e, c in self.items()]

    @classmethod
    def from_json(cls, data: Iterable[Mapping], n: int) -> "Polynomial":
        terms: dict = {}
        for item in data:
            e = tuple(int(x) for x in item["exps"])
            terms[e] = terms.get(e, 0) + int(item["coeff"])
        return cls(n, terms)

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for i, (e, c) in enumerate(self.items()):
            s = _format_term(e, c, i == 0)
            parts.append(s)
        return "".join(parts)

    def __repr__(self):
        return f"Polynomial({self.n}, {str(self)!r})"

    @classmethod
    def parse(cls, text: str, n: int) -> "Polynomial":
        """Parse the canonical text form, e.g. ``"w1^2+2*w1*w2-3"``."""
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty polynomial text")
        terms: dict = {}
        pos = 0
        for chunk in re.split(r"(?=[+-])", s):
            if not chunk:
                continue
            m = _TERM_RE.fullmatch(chunk)
            if not m:
                raise ValueError(f"cannot parse term {chunk!r} at position {pos} in {text!r}")
            sign = -1 if m.group("sign") == "-" else 1
            coeff = int(m.group("coeff")) if m.group("coeff") is not None else 1
            exps = [0] * n
            for v in _VAR_RE.finditer(m.group("vars") or ""):
                a = int(v.group(1))
                if not 1 <= a <= n:
                    raise DimensionError(f"variable w{a} outside ring of size {n}")
                exps[a - 1] += int(v.group(2) or 1)
            e = tuple(exps)
            terms[e] = terms.get(e, 0) + sign * coeff
            pos += len(chunk)
        return cls(n, terms)


_TERM_RE = re.compile(
    r"(?P<sign>[+-])?(?:(?P<coeff>\d+)(?:\*(?=w)|$)|(?=w))"
    r"(?P<vars>w\d+(?:\^\d+)?(?:\*w\d+(?:\^\d+)?)*)?")
_VAR_RE = re.compile(r"w(\d+)(?:\^(\d+))?")


def _unit(a: int, n: int) -> tuple:
    if not 1 <= a <= n:
        raise DimensionError(f"species {a} out of range 1..{n}")
    e = [0] * n
    e[a - 1] = 1
    return tuple(e)


def _format_term(e, c, first):
    factors = [f"w{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k]
    mag = abs(c)
    if not factors:
        body = str(mag)
    elif mag == 1:
        body = "*".join(factors)
    else:
        body = f"{mag}*" + "*".join(factors)
    if c < 0:
        return "-" + body
    return body if first else "+" + body


# Functional aliases mirroring the operation names used in the docs.

def add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def exact_div_var(p: Polynomial, a: int) -> Polynomial:
    return p.div_var(a)


def evaluate(p: Polynomial, w: Sequence) -> Fraction:
    return p.evaluate(w)


def homogeneous_degree(p: Polynomial):
    return p.homogeneous_degree()
