"""Local states, configurations, sectors and multiline states.

Representations used throughout the package:

* a local state is a tuple of ``n`` multiplicities ``(s^1, ..., s^n)``;
* a configuration is a tuple of ``L`` local states (site 1 first);
* a multiline state is a tuple of rows ``(x^1, ..., x^n)``, row ``a`` summing
  to ``ell_a = m_1 + ... + m_a``.  Note the storage order is bottom-up,
  the reverse of the tensor notation ``x^n (x) ... (x) x^1``.

Text form of a configuration: sites separated by ``|``, the empty site is
``e`` and a nonempty site lists its species as sorted decimal digits
(``"e|13|2"``).  This is only available for ``n <= 9``; the multiplicity
form ``"0,0;1,1"`` (sites separated by ``;``) works for every ``n`` and is
accepted everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from math import comb, prod
from typing import Iterator, Sequence

LocalState = tuple  # tuple[int, ...], multiplicity representation
Configuration = tuple  # tuple[LocalState, ...]
MultilineState = tuple  # tuple[row, ...], row a-1 is x^a


class SectorError(ValueError):
    """Invalid or non-basic sector."""


class ConfigParseError(ValueError):
    """Malformed configuration text; ``position`` is a character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class Sector:
    """The sector ``S(m)`` of the ``n``-species process on ``L`` sites."""

    L: int
    m: tuple

    def __init__(self, L: int, m: Sequence[int]):
        object.__setattr__(self, "L", int(L))
        object.__setattr__(self, "m", tuple(int(x) for x in m))
        if self.L < 1:
            raise SectorError("chain length L must be at least 1")
        if not self.m:
            raise SectorError("need at least one species")
        if any(x < 0 for x in self.m):
            raise SectorError(f"negative multiplicity in m={self.m}")

    @property
    def n(self) -> int:
        return len(self.m)

    @property
    def is_basic(self) -> bool:
        return all(x >= 1 for x in self.m)

    def require_basic(self) -> "Sector":
        if not self.is_basic:
            missing = [a + 1 for a, x in enumerate(self.m) if x == 0]
            raise SectorError(
                f"sector m={self.m} is not basic (species {missing} absent); "
                "relabel the present species 1..n' and drop the absent rates")
        return self

    @cached_property
    def ell(self) -> tuple:
        """Partial sums ``ell_a = m_1 + ... + m_a``."""
        out, s = [], 0
        for x in self.m:
            s += x
            out.append(s)
        return tuple(out)

    def parent(self) -> "Sector":
        """The sector ``S(m_1, ..., m_{n-1})`` of the (n-1)-species process."""
        if self.n < 2:
            raise SectorError("a one-species sector has no parent")
        return Sector(self.L, self.m[:-1])

    @property
    def size(self) -> int:
        """``#S(m) = prod_a binom(L + m_a - 1, m_a)``."""
        return prod(comb(self.L + x - 1, x) for x in self.m)

    @property
    def multiline_size(self) -> int:
        """``#B(m) = prod_a binom(L - 1 + ell_a, ell_a)``."""
        return prod(comb(self.L - 1 + x, x) for x in self.ell)

    def contains(self, config: Configuration) -> bool:
        if len(config) != self.L or any(len(s) != self.n for s in config):
            return False
        return tuple(map(sum, zip(*config))) == self.m

    def __str__(self):
        return f"S({','.join(map(str, self.m))}) on L={self.L}"


# -- conversions -------------------------------------------------------------

def to_multiset(state: LocalState) -> tuple:
    """``(3,0,2,1) -> (1,1,1,3,3,4)``."""
    return tuple(a + 1 for a, k in enumerate(state) for _ in range(k))


def from_multiset(species: Sequence[int], n: int) -> LocalState:
    out = [0] * n
    for a in species:
        if not 1 <= a <= n:
            raise ValueError(f"species {a} outside 1..{n}")
        out[a - 1] += 1
    return tuple(out)


def compositions(total: int, parts: int) -> Iterator[tuple]:
    """Weak compositions of ``total`` into ``parts`` parts, lexicographic."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_sector(sector: Sector) -> list:
    """All configurations of a basic sector, in lexicographic order of the
    flattened multiplicity vector ``(s_1^1..s_1^n, s_2^1, ...)``."""
    sector.require_basic()
    L, n = sector.L, sector.n
    per_species = [list(compositions(x, L)) for x in sector.m]
    configs = [
        tuple(tuple(c[i] for c in choice) for i in range(L))
        for choice in product(*per_species)
    ]
    configs.sort()
    return configs


def enumerate_multiline(sector: Sector) -> Iterator[MultilineState]:
    """All multiline states of ``B(m)``.

    Order: lexicographic on ``(x^n, ..., x^1)``, i.e. the tensor notation
    read left to right.  Each yielded state is stored bottom-up as
    ``(x^1, ..., x^n)``.
    """
    sector.require_basic()
    rows = [list(compositions(x, sector.L)) for x in reversed(sector.ell)]
    for choice in product(*rows):
        yield tuple(reversed(choice))


def multiline_from_tensor(*rows) -> MultilineState:
    """Build a multiline state from rows written as ``x^n, ..., x^1``."""
    return tuple(tuple(r) for r in reversed(rows))


def multiline_sector(x: MultilineState, L: int | None = None) -> Sector:
    ell = [sum(r) for r in x]
    m = [ell[0]] + [b - a for a, b in zip(ell, ell[1:])]
    return Sector(L if L is not None else len(x[0]), m)


def cyclic_shift(config: Configuration, k: int = 1) -> Configuration:
    """``(s_1, ..., s_L) -> (s_L, s_1, ..., s_{L-1})``, applied ``k`` times."""
    if not config:
        return config
    k %= len(config)
    return config[-k:] + config[:-k] if k else config


def orbit(config: Configuration) -> list:
    """Distinct cyclic shifts of ``config``, starting with itself."""
    seen, out = set(), []
    c = config
    for _ in range(len(config)):
        if c not in seen:
            seen.add(c)
            out.append(c)
        c = cyclic_shift(c)
    return out


def species_counts(config: Configuration) -> tuple:
    return tuple(map(sum, zip(*config)))


# -- text form ---------------------------------------------------------------

def format_local(state: LocalState) -> str:
    if len(state) > 9:
        return ",".join(map(str, state))
    ms = to_multiset(state)
    return "".join(map(str, ms)) if ms else "e"


def format_config(config: Configuration) -> str:
    """Canonical text: multiset form for ``n <= 9``, multiplicity form above."""
    n = len(config[0])
    if n <= 9:
        return "|".join(format_local(s) for s in config)
    return format_config_mult(config)


def format_config_mult(config: Configuration) -> str:
    return ";".join(",".join(map(str, s)) for s in config)


def parse_config(text: str, n: int) -> Configuration:
    """Parse either text form into a configuration of ``n``-species states."""
    if n < 1:
        raise ValueError("n must be positive")
    if ";" in text or "," in text:
        return _parse_mult(text, n)
    return _parse_multiset(text, n)


def _parse_multiset(text: str, n: int) -> Configuration:
    if n > 9:
        raise ConfigParseError("multiset digit form needs n <= 9; use 'a,b,...;...'", 0)
    sites, pos = [], 0
    for chunk in text.split("|"):
        if chunk == "":
            raise ConfigParseError("empty site (use 'e' for an empty site)", pos)
        if chunk in ("e", "∅"):
            sites.append((0,) * n)
        else:
            prev = 0
            counts = [0] * n
            for j, ch in enumerate(chunk):
                if not ch.isdigit():
                    raise ConfigParseError(f"unexpected character {ch!r}", pos + j)
                a = int(ch)
                if not 1 <= a <= n:
                    raise ConfigParseError(f"species {a} outside 1..{n}", pos + j)
                if a < prev:
                    raise ConfigParseError("species within a site must be sorted", pos + j)
                prev = a
                counts[a - 1] += 1
            sites.append(tuple(counts))
        pos += len(chunk) + 1
    return tuple(sites)


def _parse_mult(text: str, n: int) -> Configuration:
    sites, pos = [], 0
    for chunk in text.split(";"):
        parts = chunk.split(",")
        if len(parts) != n:
            raise ConfigParseError(f"site has {len(parts)} entries, expected {n}", pos)
        vals = []
        off = pos
        for p in parts:
            if not p.strip().isdigit():
                raise ConfigParseError(f"bad multiplicity {p!r}", off)
            vals.append(int(p))
            off += len(p) + 1
        sites.append(tuple(vals))
        pos += len(chunk) + 1
    return tuple(sites)


def config_to_json(config: Configuration) -> list:
    return [list(s) for s in config]


def config_from_json(data) -> Configuration:
    return tuple(tuple(int(v) for v in s) for s in data)
