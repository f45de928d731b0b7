"""Transition rule, generator matrix and steady-state checks.

Particles hop from site ``i+1`` to its left neighbour ``i`` (periodically).
A site with content ``beta = (b_1 <= ... <= b_r)`` (multiset form) can
release any tail ``b_k, ..., b_r``; the rate of that move is ``w_{b_k}``,
the smallest species among the movers.

Matrix convention: ``H[row, col]`` is the rate from configuration ``col`` to
configuration ``row``; columns sum to zero and the steady state spans the
right kernel of ``H``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Mapping, Sequence

import numpy as np

from .polyring import Polynomial
from .states import (
    Configuration,
    LocalState,
    Sector,
    cyclic_shift,
    enumerate_sector,
    format_config,
    to_multiset,
)

__all__ = [
    "local_transitions",
    "predecessors",
    "g",
    "config_transitions",
    "exit_rate",
    "GeneratorMatrix",
    "build_generator",
    "SteadyCheck",
    "check_steady",
    "kernel_solve_numeric",
    "kernel_dimension",
    "KernelError",
]


class KernelError(RuntimeError):
    """The numeric generator does not have a one-dimensional kernel."""


def local_transitions(alpha: LocalState, beta: LocalState) -> list:
    """Outcomes ``(gamma, delta, species)`` of the pair ``(alpha, beta)``.

    One outcome per split point ``k``; listed from the smallest move (only the
    largest particle hops) to the largest (the whole site empties).
    """
    ms = to_multiset(beta)
    n = len(beta)
    out = []
    gamma = list(alpha)
    delta = list(beta)
    for k in range(len(ms) - 1, -1, -1):
        a = ms[k] - 1
        gamma[a] += 1
        delta[a] -= 1
        out.append((tuple(gamma), tuple(delta), ms[k]))
    assert len(out) == sum(beta) and (not out or len(out[0][0]) == n)
    return out


def predecessors(alpha: LocalState, beta: LocalState) -> list:
    """All ``(gamma, delta, species)`` with ``(gamma, delta) -> (alpha, beta)``.

    ``delta = beta + T`` and ``gamma = alpha - T`` for a nonempty sub-multiset
    ``T`` of ``alpha`` whose species are all ``>= max(beta)``.
    """
    n = len(alpha)
    bmax = max((a + 1 for a in range(n) if beta[a]), default=1)
    ranges = [range(alpha[a] + 1) if a + 1 >= bmax else range(1) for a in range(n)]
    out = []
    for t in _box(ranges):
        if not any(t):
            continue
        gamma = tuple(x - y for x, y in zip(alpha, t))
        delta = tuple(x + y for x, y in zip(beta, t))
        species = next(a + 1 for a in range(n) if t[a])
        out.append((gamma, delta, species))
    return out


def _box(ranges):
    if not ranges:
        yield ()
        return
    for head in ranges[0]:
        for rest in _box(ranges[1:]):
            yield (head,) + rest


def g(beta: LocalState, n: int | None = None) -> Polynomial:
    """Total exit rate ``w_1 b^1 + ... + w_n b^n`` of a site with content ``beta``.

    ``n`` lets an (n-1)-species state be read in the n-variable ring.
    """
    n = len(beta) if n is None else n
    terms = {}
    for a, k in enumerate(beta):
        if k:
            e = [0] * n
            e[a] = 1
            terms[tuple(e)] = k
    return Polynomial(n, terms)


def config_transitions(config: Configuration) -> list:
    """Every ``(site, target, species)`` move out of ``config``.

    ``site`` is the 0-based receiving site ``i``; particles come from ``i+1``.
    Moves leading to the same target are kept separate.
    """
    L = len(config)
    if L < 2:
        return []
    out = []
    for i in range(L):
        j = (i + 1) % L
        for gamma, delta, b in local_transitions(config[i], config[j]):
            c = list(config)
            c[i], c[j] = gamma, delta
            out.append((i, tuple(c), b))
    return out


def exit_rate(config: Configuration) -> Polynomial:
    """``sum_i g(sigma_i)``, the diagonal magnitude of the generator."""
    n = len(config[0])
    if len(config) < 2:
        return Polynomial.zero(n)
    total = [0] * n
    for s in config:
        for a, k in enumerate(s):
            total[a] += k
    return g(tuple(total))


@dataclass
class GeneratorMatrix:
    """Sparse generator over the canonical basis of a sector."""

    sector: Sector
    basis: list
    entries: dict = field(repr=False)  # (row, col) -> Polynomial
    index: dict = field(init=False, repr=False)

    def __post_init__(self):
        self.index = {c: i for i, c in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def column_sums(self) -> list:
        n = self.sector.n
        sums = [Polynomial.zero(n) for _ in self.basis]
        for (_, col), p in self.entries.items():
            sums[col] = sums[col] + p
        return sums

    def numeric(self, w: Sequence) -> list:
        """Row-major sparse rows ``[{col: Fraction}]`` of ``H`` at rates ``w``."""
        w = [Fraction(x) for x in w]
        rows = [dict() for _ in self.basis]
        for (r, c), p in self.entries.items():
            v = p.evaluate(w)
            if v:
                rows[r][c] = v
        return rows

    def permutation_commutes(self) -> bool:
        """Whether ``H`` commutes with the cyclic shift of sites."""
        perm = [self.index[cyclic_shift(c)] for c in self.basis]
        shifted = {(perm[r], perm[c]): p for (r, c), p in self.entries.items()}
        return shifted == self.entries

    def to_triplets(self) -> list:
        return [
            {"row": r, "col": c, "poly": p.to_json()}
            for (r, c), p in sorted(self.entries.items())
        ]


def build_generator(sector: Sector) -> GeneratorMatrix:
    basis = enumerate_sector(sector)
    index = {c: i for i, c in enumerate(basis)}
    n = sector.n
    acc: dict = {}
    for col, config in enumerate(basis):
        diag = -exit_rate(config)
        if diag:
            acc[(col, col)] = dict(diag.terms)
        for _, target, b in config_transitions(config):
            e = [0] * n
            e[b - 1] = 1
            e = tuple(e)
            cell = acc.setdefault((index[target], col), {})
            cell[e] = cell.get(e, 0) + 1
    entries = {}
    for key, terms in acc.items():
        p = Polynomial(n, terms)
        if p:
            entries[key] = p
    return GeneratorMatrix(sector, basis, entries)


@dataclass
class SteadyCheck:
    """Outcome of :func:`check_steady`; truthy when ``H P = 0`` holds."""

    passed: bool
    failures: int = 0
    row: Configuration | None = None
    residual: Polynomial | None = None

    def __bool__(self):
        return self.passed

    def witness(self) -> dict | None:
        if self.passed:
            return None
        return {"row": format_config(self.row), "residual": str(self.residual),
                "failing_rows": self.failures}


def check_steady(sector_or_generator, probs: Mapping) -> SteadyCheck:
    """Verify ``H P = 0`` exactly; ``probs`` maps configurations to polynomials."""
    gen = (sector_or_generator if isinstance(sector_or_generator, GeneratorMatrix)
           else build_generator(sector_or_generator))
    missing = [c for c in gen.basis if c not in probs]
    if missing:
        raise ValueError(f"no probability given for {format_config(missing[0])} "
                         f"({len(missing)} configurations missing)")
    n = gen.sector.n
    residual = [dict() for _ in gen.basis]
    for (r, c), h in gen.entries.items():
        acc = residual[r]
        for e1, c1 in h._terms.items():
            for e2, c2 in probs[gen.basis[c]]._terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                acc[e] = acc.get(e, 0) + c1 * c2
    failures, first = 0, None
    for r, acc in enumerate(residual):
        p = Polynomial(n, acc)
        if p:
            failures += 1
            if first is None:
                first = (gen.basis[r], p)
    if failures:
        return SteadyCheck(False, failures, first[0], first[1])
    return SteadyCheck(True)


# -- exact rational kernel ---------------------------------------------------
#
# Elimination runs modulo word-size primes (dense numpy, RREF), the kernel
# vector is lifted by CRT and rational reconstruction, and the lift is then
# verified against the exact rational matrix.  rank_p <= rank_Q, so a
# mod-p rank of N-1 together with the zero column sums certifies a
# one-dimensional rational kernel.

_PRIMES = (
    2147483647, 2147483629, 2147483587, 2147483579, 2147483563, 2147483549,
    2147483543, 2147483497, 2147483489, 2147483477, 2147483423, 2147483399,
    2147483353, 2147483323, 2147483269, 2147483249,
)


def _integer_rows(rows: list) -> list:
    """Clear denominators row by row (the kernel is unchanged)."""
    out = []
    for row in rows:
        den = 1
        for v in row.values():
            den = den * v.denominator // gcd(den, v.denominator)
        out.append({c: int(v * den) for c, v in row.items()})
    return out


def _rref_mod(int_rows: list, ncols: int, p: int):
    """Reduced row echelon form mod ``p``; returns ``(matrix, pivot_cols)``."""
    a = np.zeros((len(int_rows), ncols), dtype=np.int64)
    for r, row in enumerate(int_rows):
        for c, v in row.items():
            a[r, c] = v % p
    pivots = []
    rank = 0
    for c in range(ncols):
        if rank == a.shape[0]:
            break
        nz = np.flatnonzero(a[rank:, c])
        if nz.size == 0:
            continue
        r = rank + nz[0]
        if r != rank:
            a[[rank, r]] = a[[r, rank]]
        inv = pow(int(a[rank, c]), p - 2, p)
        a[rank] = a[rank] * inv % p
        col = a[:, c].copy()
        col[rank] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = (a[hit] - col[hit, None] * a[rank]) % p
        pivots.append(c)
        rank += 1
    return a[:rank], pivots


def _rank_mod(int_rows: list, ncols: int, p: int) -> int:
    return len(_rref_mod(int_rows, ncols, p)[1])


def _ratrecon(u: int, m: int):
    """Rational ``a/b`` with ``a = u b mod m`` and ``|a|, b <= sqrt(m/2)``."""
    bound = isqrt(m // 2)
    r0, r1 = m, u % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    return Fraction(r1, s1)


def _verify_kernel(rows: list, x: list) -> bool:
    for row in rows:
        if sum((v * x[c] for c, v in row.items()), Fraction(0)):
            return False
    return True


def kernel_dimension(sector_or_generator, w: Sequence) -> int:
    """Dimension of the rational kernel of ``H(w)``.

    A mod-p rank of ``N - 1`` settles it; otherwise the rank is taken as the
    largest mod-p rank over several primes, which equals the rational rank
    unless every prime divides the relevant minors.
    """
    gen = (sector_or_generator if isinstance(sector_or_generator, GeneratorMatrix)
           else build_generator(sector_or_generator))
    ints = _integer_rows(gen.numeric(w))
    best = 0
    for p in _PRIMES[:4]:
        best = max(best, _rank_mod(ints, gen.dim, p))
        if best >= gen.dim - 1:
            break
    return gen.dim - best


def kernel_solve_numeric(sector_or_generator, w: Sequence) -> dict:
    """Unit-sum stationary distribution at rates ``w``, exact.

    Raises :class:`KernelError` when the kernel is not one-dimensional.
    """
    if any(Fraction(x) <= 0 for x in w):
        raise ValueError("all rates must be positive")
    gen = (sector_or_generator if isinstance(sector_or_generator, GeneratorMatrix)
           else build_generator(sector_or_generator))
    if len(w) != gen.sector.n:
        raise ValueError(f"expected {gen.sector.n} rates, got {len(w)}")
    N = gen.dim
    rows = gen.numeric(w)
    if N == 1:
        return {gen.basis[0]: Fraction(1)}
    ints = _integer_rows(rows)
    residues, modulus, free = [], 1, None
    for p in _PRIMES:
        a, piv = _rref_mod(ints, N, p)
        if len(piv) != N - 1:
            continue  # unlucky prime, or a genuinely larger kernel
        f = next(c for c in range(N) if c not in set(piv))
        if free is None:
            free = f
        elif f != free:
            continue
        x = [0] * N
        x[f] = 1
        for i, c in enumerate(piv):
            x[c] = int(-a[i, f]) % p
        if not residues:
            residues = [0] * N
        residues = [_crt(r, modulus, v, p) for r, v in zip(residues, x)]
        modulus *= p
        lifted = [_ratrecon(r, modulus) for r in residues]
        if None in lifted:
            continue
        if _verify_kernel(rows, lifted):
            total = sum(lifted)
            return {c: v / total for c, v in zip(gen.basis, lifted)}
    if free is None:
        raise KernelError(f"kernel of H(w) is not one-dimensional for {gen.sector}")
    raise KernelError(f"rational reconstruction did not converge for {gen.sector}")


def _crt(r: int, m: int, v: int, p: int) -> int:
    """Combine ``x = r mod m`` and ``x = v mod p``."""
    t = (v - r) * pow(m, -1, p) % p
    return r + m * t


def rescale(dist: Mapping, reference: Configuration, value) -> dict:
    """Scale ``dist`` so that ``dist[reference] == value``."""
    f = Fraction(value) / dist[reference]
    return {c: x * f for c, x in dist.items()}


def total_variation(p: Mapping, q: Mapping) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(float(p.get(k, 0)) - float(q.get(k, 0))) for k in keys)


def uniform(sector: Sector) -> dict:
    basis = enumerate_sector(sector)
    return {c: Fraction(1, len(basis)) for c in basis}


def normalization_target(sector: Sector) -> int:
    return sector.multiline_size

