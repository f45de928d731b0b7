"""Truncated multi-mode boson operators with polynomial entries.

Operators act on ``F^{(x)(n-1)}`` truncated to occupations ``0..cap_b`` in
mode ``b``.  A creation that would leave the box is dropped, so products are
exact whenever no intermediate state exceeds the caps; every caller picks
caps large enough for that (see :func:`trace_product`).

The composite operators of level ``n`` (``n - 1`` modes) are

    A_{mu,alpha}    = P+(mu) (sum_r [alpha^{r+1..n} = 0] w_r K_r + w_n K_n) P-(alpha_bar)
    Ahat_{mu,alpha} = same with w_r replaced by w_r (w_r + g(alpha))

where ``K_r = k^{(x)(r-1)} (x) d (x) 1...``, ``K_n = k^{(x)(n-1)}``, ``k`` projects
onto the vacuum of one mode and ``d = 1 - k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from typing import Iterable, Sequence

from .markov import g, local_transitions, predecessors
from .polyring import Polynomial

__all__ = [
    "TruncatedSpace",
    "FockOperator",
    "identity",
    "a_plus",
    "a_minus",
    "k_op",
    "d_op",
    "K",
    "P_plus",
    "P_minus",
    "build_A",
    "build_A_from_generators",
    "trace_product",
    "HatCheck",
    "check_hat_relation",
]


@dataclass(frozen=True)
class TruncatedSpace:
    """Product of boson modes, mode ``b`` truncated at occupation ``caps[b]``."""

    caps: tuple

    def __init__(self, caps: Sequence[int]):
        caps = tuple(int(c) for c in caps)
        if any(c < 0 for c in caps):
            raise ValueError("caps must be nonnegative")
        object.__setattr__(self, "caps", caps)

    @property
    def modes(self) -> int:
        return len(self.caps)

    @cached_property
    def basis(self) -> list:
        return list(product(*(range(c + 1) for c in self.caps)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __contains__(self, state) -> bool:
        return len(state) == len(self.caps) and all(
            0 <= s <= c for s, c in zip(state, self.caps))

    def raised(self, k: int = 1) -> "TruncatedSpace":
        return TruncatedSpace(c + k for c in self.caps)


class FockOperator:
    """Sparse matrix over a truncated basis, stored column-wise.

    ``cols[in_state][out_state]`` is a :class:`Polynomial` in ``n`` variables.
    Treat instances as immutable.
    """

    __slots__ = ("space", "n", "cols")

    def __init__(self, space: TruncatedSpace, n: int, cols: dict | None = None):
        self.space = space
        self.n = n
        self.cols = cols if cols is not None else {}

    def _check(self, other: "FockOperator"):
        if other.space != self.space or other.n != self.n:
            raise ValueError("operators live on different spaces or rings")

    def apply(self, state) -> dict:
        """Column of ``state`` as ``{out_state: coefficient}``."""
        return self.cols.get(tuple(state), {})

    def element(self, out_state, in_state) -> Polynomial:
        return self.cols.get(tuple(in_state), {}).get(
            tuple(out_state), Polynomial.zero(self.n))

    def __matmul__(self, other: "FockOperator") -> "FockOperator":
        self._check(other)
        cols = {}
        for s, col in other.cols.items():
            acc: dict = {}
            for mid, c1 in col.items():
                for out, c2 in self.cols.get(mid, {}).items():
                    v = c2 * c1
                    prev = acc.get(out)
                    acc[out] = v if prev is None else prev + v
            acc = {k: v for k, v in acc.items() if v}
            if acc:
                cols[s] = acc
        return FockOperator(self.space, self.n, cols)

    def __add__(self, other: "FockOperator") -> "FockOperator":
        self._check(other)
        cols = {s: dict(col) for s, col in self.cols.items()}
        for s, col in other.cols.items():
            acc = cols.setdefault(s, {})
            for out, c in col.items():
                v = acc.get(out)
                acc[out] = c if v is None else v + c
        return FockOperator(self.space, self.n, _prune(cols))

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar) -> "FockOperator":
        if isinstance(scalar, int):
            scalar = Polynomial.constant(scalar, self.n)
        cols = {s: {o: c * scalar for o, c in col.items()} for s, col in self.cols.items()}
        return FockOperator(self.space, self.n, _prune(cols))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, FockOperator):
            return NotImplemented
        return (self.space == other.space and self.n == other.n
                and _prune(self.cols) == _prune(other.cols))

    def is_zero(self) -> bool:
        return not _prune(self.cols)

    def restricted(self, states: Iterable) -> dict:
        """Columns for the given input states only."""
        return {s: self.cols[s] for s in map(tuple, states) if s in self.cols}

    def trace(self) -> Polynomial:
        total = Polynomial.zero(self.n)
        for s, col in self.cols.items():
            if s in col:
                total = total + col[s]
        return total

    def to_triplets(self) -> list:
        return [
            {"out": list(o), "in": list(s), "poly": c.to_json()}
            for s in sorted(self.cols) for o, c in sorted(self.cols[s].items())
        ]

    def __repr__(self):
        nnz = sum(len(c) for c in self.cols.values())
        return f"FockOperator(caps={self.space.caps}, n={self.n}, nnz={nnz})"


def _prune(cols: dict) -> dict:
    out = {}
    for s, col in cols.items():
        col = {o: c for o, c in col.items() if c}
        if col:
            out[s] = col
    return out


# -- generators ----------------------------------------------------------------

def _diagonal(space, n, fn) -> FockOperator:
    cols = {}
    for s in space.basis:
        c = fn(s)
        if c:
            cols[s] = {s: c}
    return FockOperator(space, n, cols)


def identity(space: TruncatedSpace, n: int) -> FockOperator:
    one = Polynomial.one(n)
    return _diagonal(space, n, lambda s: one)


def _shift(space, n, delta) -> FockOperator:
    one = Polynomial.one(n)
    cols = {}
    for s in space.basis:
        t = tuple(x + d for x, d in zip(s, delta))
        if t in space:
            cols[s] = {t: one}
    return FockOperator(space, n, cols)


def a_plus(space: TruncatedSpace, n: int, mode: int, power: int = 1) -> FockOperator:
    """``(a+)^power`` on ``mode`` (0-based), identity elsewhere."""
    delta = [0] * space.modes
    delta[mode] = power
    return _shift(space, n, delta)


def a_minus(space: TruncatedSpace, n: int, mode: int, power: int = 1) -> FockOperator:
    delta = [0] * space.modes
    delta[mode] = -power
    return _shift(space, n, delta)


def k_op(space: TruncatedSpace, n: int, mode: int) -> FockOperator:
    one = Polynomial.one(n)
    return _diagonal(space, n, lambda s: one if s[mode] == 0 else None)


def d_op(space: TruncatedSpace, n: int, mode: int) -> FockOperator:
    one = Polynomial.one(n)
    return _diagonal(space, n, lambda s: one if s[mode] > 0 else None)


def K(space: TruncatedSpace, n: int, r: int) -> FockOperator:
    """``K_r`` for ``1 <= r <= n``; ``K_n`` is the joint vacuum projector."""
    one = Polynomial.one(n)
    modes = space.modes
    if not 1 <= r <= modes + 1:
        raise ValueError(f"r={r} outside 1..{modes + 1}")

    def coeff(s):
        if any(s[:r - 1]):
            return None
        if r <= modes and s[r - 1] == 0:
            return None
        return one

    return _diagonal(space, n, coeff)


def P_plus(space: TruncatedSpace, n: int, mu: Sequence[int]) -> FockOperator:
    return _shift(space, n, tuple(mu))


def P_minus(space: TruncatedSpace, n: int, alpha_bar: Sequence[int]) -> FockOperator:
    return _shift(space, n, tuple(-x for x in alpha_bar))


# -- composite operators -------------------------------------------------------

def _weights(alpha: tuple, hat: bool) -> list:
    """``weights[r-1]`` multiplies ``K_r``; ``None`` where the delta condition fails."""
    n = len(alpha)
    gsum = g(alpha) if hat else None
    out = []
    for r in range(1, n + 1):
        if r < n and any(alpha[r:]):
            out.append(None)
            continue
        w = Polynomial.var(r, n)
        out.append(w * (w + gsum) if hat else w)
    return out


def build_A(mu: Sequence[int], alpha: Sequence[int], space: TruncatedSpace | None = None,
            hat: bool = False) -> FockOperator:
    """Materialize ``A_{mu,alpha}`` (or ``Ahat`` when ``hat``) on ``space``.

    ``alpha`` is a level-``n`` local state and ``mu`` a level-``(n-1)`` one.
    Without ``space`` the caps are taken just large enough to hold ``mu`` and
    ``alpha_bar``.
    """
    mu, alpha = tuple(mu), tuple(alpha)
    n = len(alpha)
    if n < 2:
        raise ValueError("composite operators need n >= 2")
    if len(mu) != n - 1:
        raise ValueError(f"mu must have {n - 1} entries, got {len(mu)}")
    if space is None:
        space = TruncatedSpace(max(x, y, 1) for x, y in zip(mu, alpha))
    if space.modes != n - 1:
        raise ValueError(f"space has {space.modes} modes, level {n} needs {n - 1}")
    return _build_A_cached(mu, alpha, space, hat)


@lru_cache(maxsize=65536)
def _build_A_cached(mu, alpha, space, hat) -> FockOperator:
    n = len(alpha)
    abar = alpha[:-1]
    weights = _weights(alpha, hat)
    cols = {}
    for s in space.basis:
        t = tuple(x - y for x, y in zip(s, abar))
        if min(t, default=0) < 0:
            continue
        r = next((b + 1 for b, x in enumerate(t) if x), n)
        c = weights[r - 1]
        if c is None:
            continue
        out = tuple(x + y for x, y in zip(t, mu))
        if out in space:
            cols[s] = {out: c}
    return FockOperator(space, n, cols)


def build_A_from_generators(mu, alpha, space, hat=False) -> FockOperator:
    """Same operator assembled literally from ``a+``, ``a-``, ``K_r`` products."""
    mu, alpha = tuple(mu), tuple(alpha)
    n = len(alpha)
    middle = None
    for r, wt in enumerate(_weights(alpha, hat), start=1):
        if wt is None:
            continue
        term = K(space, n, r) * wt
        middle = term if middle is None else middle + term
    return P_plus(space, n, mu) @ middle @ P_minus(space, n, alpha[:-1])


def trace_product(ops: Sequence[FockOperator]) -> Polynomial:
    """``Tr(ops[0] ops[1] ... ops[-1])`` over the truncated space.

    Each basis vector is pushed through the product right to left, so the
    product matrix is never formed.
    """
    if not ops:
        raise ValueError("trace of an empty product")
    space, n = ops[0].space, ops[0].n
    for op in ops:
        if op.space != space or op.n != n:
            raise ValueError("operators live on different spaces or rings")
    total: dict = {}
    for s in space.basis:
        vec = {s: None}  # None stands for the coefficient 1
        for op in reversed(ops):
            nxt: dict = {}
            for st, coef in vec.items():
                for out, c in op.cols.get(st, {}).items():
                    v = c if coef is None else c * coef
                    prev = nxt.get(out)
                    nxt[out] = v if prev is None else prev + v
            vec = nxt
            if not vec:
                break
        c = vec.get(s)
        if c is not None:
            for e, k in c._terms.items():
                total[e] = total.get(e, 0) + k
    return Polynomial(n, total)


# -- generalized hat relation ------------------------------------------------

@dataclass
class HatCheck:
    """Result of :func:`check_hat_relation`."""

    n: int
    bound: int
    tuples: int
    failures: list

    @property
    def passed(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.passed

    def summary(self) -> dict:
        return {"n": self.n, "bound": self.bound, "checked": self.tuples,
                "failed": len(self.failures), "passed": self.passed,
                "first_failure": self.failures[0] if self.failures else None}


def _successors(mu, nu):
    return local_transitions(mu, nu)


def check_hat_relation(n: int, bound: int, stop_after: int | None = 1) -> HatCheck:
    """Check the generalized hat relation for all small indices.

    For every ``alpha, beta`` in ``{0..bound}^n`` and ``mu, nu`` in
    ``{0..bound}^(n-1)`` verifies, as operators,

        sum_{gamma,delta} h^{alpha,beta}_{gamma,delta} A_{mu,gamma} A_{nu,delta}
          - sum_{kappa,lambda} hbar^{kappa,lambda}_{mu,nu} A_{kappa,alpha} A_{lambda,beta}
          = Ahat_{mu,alpha} A_{nu,beta} - A_{mu,alpha} Ahat_{nu,beta}

    Both sides are weighted shifts by ``mu + nu - alpha_bar - beta_bar``; their
    coefficient on ``|s>`` only changes with ``s_b`` up to
    ``alpha_b + beta_b + 1``, so inputs are taken from that box and the caps
    leave room for the two creations.  Exact polynomial comparison.
    """
    if n < 2 or bound < 1:
        raise ValueError("need n >= 2 and bound >= 1")
    modes = n - 1
    box_cap = 2 * bound + 1
    space = TruncatedSpace([box_cap + 2 * bound] * modes)
    loc_n = list(product(range(bound + 1), repeat=n))
    loc_m = list(product(range(bound + 1), repeat=modes))
    zero = Polynomial.zero(n)
    failures = []
    count = 0

    def pair_coeffs(op1, op2, box, acc, sign, scale=None):
        # acc[s] += sign * scale * <out| op1 op2 |s>, all weighted shifts
        for s in box:
            col2 = op2.cols.get(s)
            if not col2:
                continue
            (mid, c2), = col2.items()
            col1 = op1.cols.get(mid)
            if not col1:
                continue
            (_, c1), = col1.items()
            v = c1 * c2
            if scale is not None:
                v = v * scale
            acc[s] = acc.get(s, zero) + (v if sign > 0 else -v)

    for alpha, beta in product(loc_n, repeat=2):
        preds = predecessors(alpha, beta)
        diag_ab = -g(beta)
        box = list(product(*(range(alpha[b] + beta[b] + 2) for b in range(modes))))
        for mu, nu in product(loc_m, repeat=2):
            count += 1
            acc: dict = {}
            for gamma, delta, b in preds:
                pair_coeffs(build_A(mu, gamma, space), build_A(nu, delta, space), box, acc,
                            +1, Polynomial.var(b, n))
            pair_coeffs(build_A(mu, alpha, space), build_A(nu, beta, space), box, acc,
                        +1, diag_ab)
            for kappa, lam, b in _successors(mu, nu):
                pair_coeffs(build_A(kappa, alpha, space), build_A(lam, beta, space), box, acc,
                            -1, Polynomial.var(b, n))
            pair_coeffs(build_A(mu, alpha, space), build_A(nu, beta, space), box, acc,
                        -1, -g(nu, n))
            pair_coeffs(build_A(mu, alpha, space, hat=True), build_A(nu, beta, space), box,
                        acc, -1)
            pair_coeffs(build_A(mu, alpha, space), build_A(nu, beta, space, hat=True), box,
                        acc, +1)
            bad = next(((s, p) for s, p in acc.items() if p), None)
            if bad is not None:
                failures.append({"alpha": list(alpha), "beta": list(beta), "mu": list(mu),
                                 "nu": list(nu), "state": list(bad[0]),
                                 "residual": str(bad[1])})
                if stop_after is not None and len(failures) >= stop_after:
                    return HatCheck(n, bound, count, failures)
    return HatCheck(n, bound, count, failures)
