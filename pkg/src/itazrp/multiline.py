"""Combinatorial steady state from multiline states.

Level ``a`` takes a configuration ``sigma`` of the ``(a-1)``-species process
(top row) and a row ``x^a`` of dots (bottom row, ``x^a_i`` dots in box ``i``).
Colors ``b = 1, ..., a-1`` are handled in turn: every species-``b`` particle at
site ``j`` looks at bottom boxes ``j-1, j-2, ...`` (periodically) and colors
the first uncolored dot it meets with ``b``.  The line it draws crosses the
borders between the boxes it passes; border ``i`` separates box ``i`` from box
``i+1``.  Dots still uncolored at the end get species ``a``.

The resulting configuration is ``Phi``; the weight is
``varpi = w_a^{-1} prod_i eta_i`` with ``eta_i = w_a`` on an uncrossed border
and ``w_{min color crossing}`` otherwise.  Composing the levels gives
``pi(x)`` and ``W(x)``, and summing ``W`` over each fiber of ``pi`` gives the
steady state.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

from .mpf import InternalError, SteadyState
from .polyring import Polynomial
from .states import (
    Configuration,
    MultilineState,
    Sector,
    enumerate_multiline,
    enumerate_sector,
    format_config,
)

__all__ = [
    "PairingDiagram",
    "pair",
    "pair_and_project",
    "project_pi",
    "weight_W",
    "level_trace",
    "steady_state_multiline",
    "fiber_census",
    "fiber",
]


@dataclass(frozen=True)
class PairingDiagram:
    """Outcome of pairing one level, kept for inspection and JSON dumps."""

    level: int
    top: tuple
    bottom: tuple
    hlines: tuple  # (color, start site, end box, (box, ordinal))
    dot_colors: tuple  # per box, tuple of colors (None = uncolored)
    crossings: tuple  # per border, sorted colors crossing it
    phi: tuple
    eta: tuple  # species index of each border factor

    @property
    def varpi_exps(self) -> tuple:
        e = [0] * self.level
        for s in self.eta:
            e[s - 1] += 1
        e[self.level - 1] -= 1
        return tuple(e)

    @property
    def varpi(self) -> Polynomial:
        return Polynomial.monomial(self.varpi_exps)

    def eta_polys(self) -> list:
        return [Polynomial.var(s, self.level) for s in self.eta]

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "top": format_config(self.top),
            "bottom": list(self.bottom),
            "hlines": [
                {"color": c, "from_site": j + 1, "to_box": k + 1,
                 "dot": [d[0] + 1, d[1]]}
                for c, j, k, d in self.hlines
            ],
            "dot_colors": [[c if c is not None else self.level for c in box]
                           for box in self.dot_colors],
            "crossings": [list(x) for x in self.crossings],
            "eta": [f"w{s}" for s in self.eta],
            "phi": format_config(self.phi),
            "varpi": str(self.varpi),
        }


ParticleOrder = Callable[[int, list], Sequence[int]]


def pair(a: int, sigma: Configuration, xa: Sequence[int],
         particle_order: ParticleOrder | None = None,
         dot_choice: str = "lowest") -> PairingDiagram:
    """Pair the particles of ``sigma`` with the dots of ``xa`` at level ``a``.

    ``particle_order(color, sites)`` may reorder the list of sites (one entry
    per particle, ascending) to process within a color; ``dot_choice`` is
    ``"lowest"`` or ``"highest"`` ordinal among the uncolored dots of the
    capturing box.  Every choice yields the same ``phi`` and ``eta``.
    """
    L = len(sigma)
    xa = tuple(int(v) for v in xa)
    if a < 2:
        raise ValueError("pairing starts at level 2")
    if len(xa) != L:
        raise ValueError(f"bottom row has {len(xa)} boxes, top has {L} sites")
    if any(len(s) != a - 1 for s in sigma):
        raise ValueError(f"top row must be a level-{a - 1} configuration")
    if dot_choice not in ("lowest", "highest"):
        raise ValueError("dot_choice must be 'lowest' or 'highest'")
    if sum(map(sum, sigma)) >= sum(xa):
        raise ValueError("need more dots than particles (m_a >= 1)")

    colors = [[None] * x for x in xa]
    crossings = [[] for _ in range(L)]
    hlines = []
    for b in range(1, a):
        sites = [j for j in range(L) for _ in range(sigma[j][b - 1])]
        if particle_order is not None:
            sites = list(particle_order(b, sites))
        for j in sites:
            for step in range(1, L + 1):
                box = (j - step) % L
                free = [k for k, c in enumerate(colors[box]) if c is None]
                if free:
                    break
            else:
                raise InternalError(f"no free dot for color {b} from site {j + 1}")
            k = free[0] if dot_choice == "lowest" else free[-1]
            colors[box][k] = b
            for t in range(step - 1):
                crossings[(box + t) % L].append(b)
            hlines.append((b, j, box, (box, k)))

    phi = []
    for box in colors:
        counts = [0] * a
        for c in box:
            counts[(c if c is not None else a) - 1] += 1
        phi.append(tuple(counts))
    eta = tuple(min(x) if x else a for x in crossings)
    if a not in eta:
        raise InternalError(f"eta product {eta} not divisible by w{a}")
    return PairingDiagram(
        level=a,
        top=tuple(sigma),
        bottom=xa,
        hlines=tuple(hlines),
        dot_colors=tuple(tuple(b) for b in colors),
        crossings=tuple(tuple(sorted(x)) for x in crossings),
        phi=tuple(phi),
        eta=eta,
    )


def pair_and_project(a: int, sigma: Configuration, xa: Sequence[int]) -> tuple:
    """``(Phi, varpi)`` for one level with the default pairing policy."""
    phi, exps = _pair_cached(a, tuple(sigma), tuple(xa))
    return phi, Polynomial.monomial(exps)


@lru_cache(maxsize=1 << 18)
def _pair_cached(a, sigma, xa):
    d = pair(a, sigma, xa)
    return d.phi, d.varpi_exps


def _base(x1) -> Configuration:
    return tuple((v,) for v in x1)


def level_trace(x: MultilineState) -> list:
    """``[(sigma^1, None), (sigma^2, varpi_2), ..., (sigma^n, varpi_n)]``."""
    sigma = _base(x[0])
    out = [(sigma, None)]
    for a in range(2, len(x) + 1):
        sigma, varpi = pair_and_project(a, sigma, x[a - 1])
        out.append((sigma, varpi))
    return out


def project_pi(x: MultilineState) -> Configuration:
    sigma = _base(x[0])
    for a in range(2, len(x) + 1):
        sigma, _ = _pair_cached(a, sigma, tuple(x[a - 1]))
    return sigma


def _pi_and_exps(x: MultilineState) -> tuple:
    n = len(x)
    sigma = _base(x[0])
    total = [0] * n
    for a in range(2, n + 1):
        sigma, exps = _pair_cached(a, sigma, tuple(x[a - 1]))
        for i, e in enumerate(exps):
            total[i] += e
    return sigma, tuple(total)


def weight_W(x: MultilineState) -> Polynomial:
    """Product of the per-level weights, in ``n = len(x)`` variables."""
    return Polynomial.monomial(_pi_and_exps(x)[1])


def steady_state_multiline(sector: Sector) -> SteadyState:
    """Sum ``W(x)`` into the bucket ``pi(x)`` over all of ``B(m)``."""
    sector.require_basic()
    buckets: dict = defaultdict(lambda: defaultdict(int))
    for x in enumerate_multiline(sector):
        sigma, exps = _pi_and_exps(x)
        buckets[sigma][exps] += 1
    basis = enumerate_sector(sector)
    missing = [c for c in basis if c not in buckets]
    if missing or len(buckets) != len(basis):
        raise InternalError(f"projection misses {len(missing)} configurations")
    n = sector.n
    probs = {c: Polynomial(n, buckets[c]) for c in basis}
    return SteadyState(sector, probs, "multiline", basis)


def fiber_census(sector: Sector) -> dict:
    """``{config: #pi^{-1}(config)}``."""
    counts: dict = defaultdict(int)
    for x in enumerate_multiline(sector):
        counts[project_pi(x)] += 1
    return dict(counts)


def fiber(sector: Sector, config: Configuration) -> list:
    """All multiline states projecting to ``config``, in enumeration order."""
    config = tuple(config)
    return [x for x in enumerate_multiline(sector) if project_pi(x) == config]
