"""Matrix-product steady state, evaluated level by level.

The probability of a level-``n`` configuration is

    P(sigma) = w_n^{-1} sum_{mu in S(m_1..m_{n-1})} Pbar(mu) Tr(A_{mu_1,sigma_1} ... A_{mu_L,sigma_L})

where ``Pbar`` is the level-``(n-1)`` steady state and every level-1 probability
is 1.  Traces live on ``n - 1`` modes truncated at ``m_1, ..., m_{n-1}``; no
reachable occupation exceeds those caps, and ``headroom=True`` recomputes every
trace with larger caps to confirm it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, prod
from typing import Iterator, Mapping

from .fock import TruncatedSpace, build_A, trace_product
from .polyring import NotDivisible, Polynomial
from .states import Configuration, Sector, enumerate_sector, format_config, parse_config

__all__ = [
    "SteadyState",
    "InternalError",
    "steady_state_mpf",
    "probability_mpf",
    "probability_unrolled",
    "normalization_check",
]


class InternalError(RuntimeError):
    """A consistency condition that holds for all valid inputs was violated."""


@dataclass
class SteadyState:
    """Unnormalized steady-state polynomials over a whole sector."""

    sector: Sector
    probs: dict
    method: str
    basis: list = field(default=None, repr=False)

    def __post_init__(self):
        if self.basis is None:
            self.basis = enumerate_sector(self.sector)

    def __getitem__(self, config) -> Polynomial:
        if isinstance(config, str):
            config = parse_config(config, self.sector.n)
        return self.probs[config]

    def __len__(self):
        return len(self.probs)

    def items(self) -> Iterator:
        """``(config, polynomial)`` pairs in canonical sector order."""
        for c in self.basis:
            yield c, self.probs[c]

    def evaluate(self, w) -> dict:
        return {c: p.evaluate(w) for c, p in self.items()}

    def unit_sum(self, w) -> dict:
        vals = self.evaluate(w)
        z = sum(vals.values())
        return {c: v / z for c, v in vals.items()}

    def total(self) -> Polynomial:
        """``Z(w)``, the sum of all probabilities."""
        z = Polynomial.zero(self.sector.n)
        for _, p in self.items():
            z = z + p
        return z

    def to_json(self, poly_format: str = "text") -> dict:
        if poly_format == "text":
            return {format_config(c): str(p) for c, p in self.items()}
        if poly_format == "terms":
            return {format_config(c): p.to_json() for c, p in self.items()}
        raise ValueError(f"unknown polynomial format {poly_format!r}")


# -- recursion -----------------------------------------------------------------

def _space(sector: Sector, headroom: bool) -> TruncatedSpace:
    caps = sector.m[:-1]
    return TruncatedSpace(c + 1 for c in caps) if headroom else TruncatedSpace(caps)


def _trace(mus, sigma, space) -> Polynomial:
    return trace_product([build_A(mu, s, space) for mu, s in zip(mus, sigma)])


@lru_cache(maxsize=64)
def _level_table(sector: Sector, headroom: bool = False) -> dict:
    """``{config: polynomial}`` for every configuration of ``sector``."""
    sector.require_basic()
    n = sector.n
    basis = enumerate_sector(sector)
    if n == 1:
        one = Polynomial.one(1)
        return {c: one for c in basis}
    parent = [(mu, p.embed(n)) for mu, p in _level_table(sector.parent(), headroom).items()]
    space = _space(sector, headroom)
    return {sigma: _assemble(sigma, parent, space, n) for sigma in basis}


def _assemble(sigma, parent, space, n) -> Polynomial:
    acc = Polynomial.zero(n)
    for mu, pbar in parent:
        t = _trace(mu, sigma, space)
        if t:
            acc = acc + pbar * t
    try:
        return acc.div_var(n)
    except NotDivisible as exc:
        raise InternalError(f"trace sum for {format_config(sigma)} not divisible by w{n}") from exc


def steady_state_mpf(sector: Sector, headroom: bool = False) -> SteadyState:
    """Steady state of a basic sector from the matrix-product recursion.

    With ``headroom`` the whole table is recomputed on caps raised by one and
    must agree exactly with the plain computation.
    """
    table = _level_table(sector, False)
    if headroom:
        wider = _level_table(sector, True)
        diff = next((c for c in table if table[c] != wider[c]), None)
        if diff is not None:
            raise InternalError(f"trace changed under larger caps at {format_config(diff)}")
    return SteadyState(sector, dict(table), "mpf")


def probability_mpf(config: Configuration, sector: Sector | None = None) -> Polynomial:
    """Probability of one configuration; reuses the memoized parent level."""
    config = tuple(tuple(s) for s in config)
    n = len(config[0])
    if sector is None:
        sector = Sector(len(config), [sum(col) for col in zip(*config)])
    if not sector.contains(config):
        raise ValueError(f"{format_config(config)} is not in {sector}")
    sector.require_basic()
    if n == 1:
        return Polynomial.one(1)
    parent = [(mu, p.embed(n)) for mu, p in _level_table(sector.parent()).items()]
    return _assemble(config, parent, _space(sector, False), n)


def probability_unrolled(config: Configuration) -> Polynomial:
    """Full nested trace sum over every level at once, for ``n <= 3``.

    Sums products of traces over all chains ``sigma^1, ..., sigma^{n-1}`` and
    divides by ``w_2 ... w_n`` only at the end.  Shares no memoized table with
    :func:`steady_state_mpf`, so it serves as an independent cross-check.
    """
    config = tuple(tuple(s) for s in config)
    n = len(config[0])
    if n > 3:
        raise ValueError("the unrolled sum is only offered for n <= 3")
    m = [sum(col) for col in zip(*config)]
    sector = Sector(len(config), m).require_basic()
    if n == 1:
        return Polynomial.one(1)

    def chains(level_sigma, level):
        # yields products of traces from `level` down to 2, in the n-variable ring
        if level == 1:
            yield Polynomial.one(n)
            return
        sub = Sector(sector.L, m[:level - 1])
        space = TruncatedSpace(m[:level - 1])
        for mu in enumerate_sector(sub):
            t = _trace(mu, level_sigma, space)
            if not t:
                continue
            t = t.embed(n)
            for rest in chains(mu, level - 1):
                yield t * rest

    acc = Polynomial.zero(n)
    for term in chains(config, n):
        acc = acc + term
    for a in range(2, n + 1):
        acc = acc.div_var(a)
    return acc


@dataclass
class NormalizationResult:
    total: Fraction
    expected: int

    @property
    def passed(self) -> bool:
        return self.total == self.expected

    def __bool__(self):
        return self.passed


def normalization_check(ss: SteadyState) -> NormalizationResult:
    """Sum at ``w = (1, ..., 1)`` against ``prod_a binom(L - 1 + ell_a, ell_a)``."""
    ones = [1] * ss.sector.n
    total = sum((p.evaluate(ones) for _, p in ss.items()), Fraction(0))
    expected = prod(comb(ss.sector.L - 1 + x, x) for x in ss.sector.ell)
    return NormalizationResult(total, expected)
