"""Command-line entry point.

Subcommands: ``sector``, ``steady``, ``verify``, ``hat-check``, ``simulate``.
JSON goes to stdout, diagnostics to stderr.  Exit status 0 on success, 2 for
bad input, 3 when a verification fails.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .fock import check_hat_relation
from .gillespie import SimConfig, run_replicas
from .markov import KernelError, kernel_solve_numeric
from .mpf import InternalError, steady_state_mpf
from .multiline import steady_state_multiline
from .polyring import NotDivisible
from .states import Sector, SectorError, enumerate_multiline, enumerate_sector, format_config
from .verify import load_steady_json, verify_sector, verify_steady_state

EXIT_OK, EXIT_INPUT, EXIT_FAILED = 0, 2, 3


class InputError(ValueError):
    pass


def _int_list(text: str) -> list:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _rate_list(text: str) -> list:
    try:
        vals = [Fraction(x) for x in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected comma-separated rationals, got {text!r}")
    if any(v <= 0 for v in vals):
        raise argparse.ArgumentTypeError("rates must be positive")
    return vals


def _sector(args) -> Sector:
    if args.m is None or args.L is None:
        raise InputError("--L and --m are required")
    if args.n is not None and args.n != len(args.m):
        raise InputError(f"--n {args.n} does not match --m with {len(args.m)} entries")
    return Sector(args.L, args.m).require_basic()


def _rates(args, n: int) -> list:
    if args.w is None:
        return None
    if len(args.w) != n:
        raise InputError(f"--w needs {n} values, got {len(args.w)}")
    return args.w


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("TAZRP_THREADS")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        raise InputError(f"TAZRP_THREADS must be an integer, got {env!r}")


def _emit(obj, args, table=None):
    if args.pretty and table is not None:
        width = max((len(k) for k, _ in table), default=0)
        for k, v in table:
            print(f"{k:<{width}}  {v}")
    else:
        print(json.dumps(obj, indent=2 if args.pretty else None))


# -- commands --------------------------------------------------------------------

def cmd_sector(args) -> int:
    s = _sector(args)
    configs = [format_config(c) for c in enumerate_sector(s)]
    out = {"n": s.n, "L": s.L, "m": list(s.m), "size": s.size,
           "multiline_size": s.multiline_size, "configs": configs}
    if args.multiline:
        out["multiline"] = [[list(r) for r in reversed(x)] for x in enumerate_multiline(s)]
    _emit(out, args, [(c, "") for c in configs])
    return EXIT_OK


def cmd_steady(args) -> int:
    s = _sector(args)
    if args.method == "kernel":
        w = _rates(args, s.n)
        if w is None:
            raise InputError("--method kernel requires --w")
        dist = kernel_solve_numeric(s, w)
        scale = steady_state_multiline(s).total()
        z = scale.evaluate(w)
        basis = enumerate_sector(s)
        out = {
            "method": "kernel",
            "w": [str(x) for x in w],
            "unit_sum": {format_config(c): str(dist[c]) for c in basis},
            "polynomial_scale": {"Z": str(scale), "Z_at_w": str(z)},
            "polynomial_normalized": {format_config(c): str(dist[c] * z) for c in basis},
        }
        _emit(out, args, [(format_config(c), str(dist[c])) for c in basis])
        return EXIT_OK
    if args.method == "mpf":
        ss = steady_state_mpf(s, headroom=args.headroom)
    else:
        ss = steady_state_multiline(s)
    data = ss.to_json(args.format)
    _emit(data, args, [(format_config(c), str(p)) for c, p in ss.items()])
    return EXIT_OK


def cmd_verify(args) -> int:
    s = _sector(args)
    w = _rates(args, s.n)
    if args.golden:
        with open(args.golden) as fh:
            data = json.load(fh)
        ss = load_steady_json(data, s, "golden")
        missing = [format_config(c) for c in enumerate_sector(s) if c not in ss.probs]
        if missing:
            raise InputError(f"golden file lacks {len(missing)} configurations, e.g. {missing[0]}")
        results = verify_steady_state(ss)
    else:
        results = verify_sector(s, deep=args.deep, w=w)
    ok = all(results)
    report = {"sector": {"n": s.n, "L": s.L, "m": list(s.m)}, "passed": ok,
              "checks": [r.to_json() for r in results]}
    _emit(report, args, [(r.name, "pass" if r else "FAIL") for r in results])
    return EXIT_OK if ok else EXIT_FAILED


def cmd_hat_check(args) -> int:
    if args.n is None:
        raise InputError("--n is required")
    if args.n < 2 or args.bound < 1:
        raise InputError("need --n >= 2 and --bound >= 1")
    res = check_hat_relation(args.n, args.bound, stop_after=1)
    summ = res.summary()
    _emit(summ, args, [(k, str(v)) for k, v in summ.items()])
    return EXIT_OK if res else EXIT_FAILED


def cmd_simulate(args) -> int:
    s = _sector(args)
    if args.w is None:
        raise InputError("--w is required")
    w = _rates(args, s.n)
    if args.events <= args.burn_in:
        raise InputError("--events must exceed --burn-in (events include the burn-in)")
    cfg = SimConfig(s, [float(x) for x in w], args.seed, args.events, args.burn_in)
    emp = run_replicas(cfg, args.replicas, _threads(args))
    basis = enumerate_sector(s)
    out = {"fractions": emp.to_json(basis), "total_time": emp.total_time}
    if args.exact:
        exact = kernel_solve_numeric(s, w)
        out["summary"] = {"tv_distance": emp.tv_distance(exact)}
    fr = emp.fractions()
    _emit(out, args, [(format_config(c), f"{fr.get(c, 0.0):.6f}") for c in basis])
    return EXIT_OK


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="number of species (defaults to len(--m))")
    common.add_argument("--L", type=int, help="number of sites")
    common.add_argument("--m", type=_int_list, help="species counts, e.g. 1,2,1")
    common.add_argument("--pretty", action="store_true", help="human-readable output")
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: $TAZRP_THREADS or 1)")

    p = argparse.ArgumentParser(prog="itazrp", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("sector", parents=[common], help="enumerate a sector")
    q.add_argument("--multiline", action="store_true", help="also list multiline states")
    q.set_defaults(func=cmd_sector)

    q = sub.add_parser("steady", parents=[common], help="compute the steady state")
    q.add_argument("--method", choices=["mpf", "multiline", "kernel"], default="mpf")
    q.add_argument("--w", type=_rate_list, help="numeric rates for --method kernel")
    q.add_argument("--format", choices=["text", "terms"], default="text",
                   help="polynomial encoding in the JSON output")
    q.add_argument("--headroom", action="store_true",
                   help="recompute traces with larger caps and compare (mpf only)")
    q.set_defaults(func=cmd_steady)

    q = sub.add_parser("verify", parents=[common], help="run the consistency checks")
    q.add_argument("--deep", action="store_true", help="add the exact numeric kernel check")
    q.add_argument("--w", type=_rate_list, help="rates for --deep (default 1,2,...,n)")
    q.add_argument("--golden", metavar="FILE",
                   help="check a stored steady state (JSON config -> polynomial) instead")
    q.set_defaults(func=cmd_verify)

    q = sub.add_parser("hat-check", parents=[common], help="check the operator identity")
    q.add_argument("--bound", type=int, default=1)
    q.set_defaults(func=cmd_hat_check)

    q = sub.add_parser("simulate", parents=[common], help="Monte Carlo estimate")
    q.add_argument("--w", type=_rate_list)
    q.add_argument("--events", type=int, default=1_000_000,
                   help="total jumps, burn-in included")
    q.add_argument("--burn-in", type=int, default=0)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--replicas", type=int, default=1)
    q.add_argument("--exact", action="store_true",
                   help="compare with the exact distribution and report tv_distance")
    q.set_defaults(func=cmd_simulate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, SectorError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InternalError, NotDivisible, KernelError, AssertionError) as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
