"""Checks a steady state must pass, bundled for the CLI and the test suite."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .markov import GeneratorMatrix, build_generator, check_steady, kernel_solve_numeric
from .mpf import SteadyState, normalization_check, steady_state_mpf
from .multiline import steady_state_multiline
from .polyring import Polynomial
from .states import Sector, cyclic_shift, format_config, parse_config

__all__ = [
    "CheckResult",
    "check_degree",
    "check_nonnegative",
    "check_cyclic",
    "check_agreement",
    "check_kernel_agreement",
    "verify_steady_state",
    "verify_sector",
    "load_steady_json",
]


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: dict | None = None

    def __bool__(self):
        return self.passed

    def to_json(self) -> dict:
        out = {"check": self.name, "passed": self.passed}
        if self.detail:
            out["witness"] = self.detail
        return out


def check_degree(ss: SteadyState) -> CheckResult:
    want = (ss.sector.n - 1) * (ss.sector.L - 1)
    for c, p in ss.items():
        if not p or p.homogeneous_degree() != want:
            degs = sorted(p.total_degrees()) if p else []
            return CheckResult(f"degree[{ss.method}]", False,
                               {"config": format_config(c), "degrees": degs, "expected": want})
    return CheckResult(f"degree[{ss.method}]", True)


def check_nonnegative(ss: SteadyState) -> CheckResult:
    for c, p in ss.items():
        if not p.nonnegative():
            return CheckResult(f"nonnegative[{ss.method}]", False,
                               {"config": format_config(c), "poly": str(p)})
    return CheckResult(f"nonnegative[{ss.method}]", True)


def check_cyclic(ss: SteadyState) -> CheckResult:
    for c, p in ss.items():
        s = cyclic_shift(c)
        if ss.probs[s] != p:
            return CheckResult(f"cyclic[{ss.method}]", False,
                               {"config": format_config(c), "shifted": format_config(s)})
    return CheckResult(f"cyclic[{ss.method}]", True)


def check_agreement(a: SteadyState, b: SteadyState) -> CheckResult:
    name = f"agreement[{a.method}={b.method}]"
    for c, p in a.items():
        q = b.probs.get(c)
        if q != p:
            return CheckResult(name, False, {"config": format_config(c),
                                             a.method: str(p), b.method: str(q)})
    return CheckResult(name, True)


def check_kernel_agreement(ss: SteadyState, w, gen: GeneratorMatrix | None = None) -> CheckResult:
    name = f"kernel[{ss.method}]"
    exact = kernel_solve_numeric(gen or ss.sector, w)
    mine = ss.unit_sum(w)
    for c, v in exact.items():
        if mine[c] != v:
            return CheckResult(name, False, {"config": format_config(c), "kernel": str(v),
                                             ss.method: str(mine[c])})
    return CheckResult(name, True)


def _steady(ss: SteadyState, gen: GeneratorMatrix) -> CheckResult:
    res = check_steady(gen, ss.probs)
    return CheckResult(f"steady[{ss.method}]", res.passed, res.witness())


def _normalization(ss: SteadyState) -> CheckResult:
    res = normalization_check(ss)
    return CheckResult(f"normalization[{ss.method}]", res.passed,
                       None if res else {"total": str(res.total), "expected": res.expected})


def verify_steady_state(ss: SteadyState, gen: GeneratorMatrix | None = None) -> list:
    """Every single-method check on one steady state."""
    gen = gen or build_generator(ss.sector)
    return [_steady(ss, gen), check_degree(ss), check_nonnegative(ss), _normalization(ss),
            check_cyclic(ss)]


def verify_sector(sector: Sector, deep: bool = False, w=None) -> list:
    """Both constructions, all invariants, and (``deep``) the numeric kernel."""
    sector.require_basic()
    gen = build_generator(sector)
    a = steady_state_mpf(sector)
    b = steady_state_multiline(sector)
    results = verify_steady_state(a, gen) + verify_steady_state(b, gen)
    results.append(check_agreement(a, b))
    if deep:
        w = list(w) if w is not None else list(range(1, sector.n + 1))
        results.append(check_kernel_agreement(a, [Fraction(x) for x in w], gen))
    return results


def load_steady_json(data: Mapping, sector: Sector, method: str = "file") -> SteadyState:
    """Inverse of ``SteadyState.to_json`` for either polynomial format."""
    n = sector.n
    probs = {}
    for key, val in data.items():
        c = parse_config(key, n)
        if not sector.contains(c):
            raise ValueError(f"{key} is not in {sector}")
        probs[c] = Polynomial.parse(val, n) if isinstance(val, str) else Polynomial.from_json(val, n)
    return SteadyState(sector, probs, method)
