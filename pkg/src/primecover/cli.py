"""Command-line front end.

Exit codes: 0 success, 1 usage or parse error, 2 failed invariant,
3 resource cap or node budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from pathlib import Path

from . import __version__
from .ancestors import partition
from .cover import NODE_BUDGET, CostFunction, minimize
from .cube import MAX_VARS
from .errors import BudgetExceeded, ConfigurationError, ParseError, ResourceLimitError
from .formats import read_cost_table, read_function, read_pla
from .oracle import corpus
from .primes import SumOfProducts, build_universe, complete_primes, essential_primes
from .triples import build_table
from .verify import check_function

EXIT_OK, EXIT_USAGE, EXIT_INVARIANT, EXIT_RESOURCE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _num(x):
    if isinstance(x, float) and x.is_integer():
        return int(x)
    return x


def render_text(report, indent: int = 0) -> str:
    """Plain-text rendering that shows every field of a JSON report."""
    pad = "  " * indent
    lines = []
    for key, value in report.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.append(render_text(value, indent + 1))
        elif isinstance(value, list):
            lines.append(f"{pad}{key}: ({len(value)})")
            for item in value:
                if isinstance(item, dict):
                    body = render_text(item, indent + 2).splitlines()
                    lines.append(f"{pad}  - {body[0].strip()}")
                    lines.extend(body[1:])
                else:
                    lines.append(f"{pad}    {item}")
        else:
            if isinstance(value, bool):
                value = "yes" if value else "no"
            elif value is None:
                value = "-"
            lines.append(f"{pad}{key}: {value}")
    return "\n".join(line for line in lines if line)


def _emit(report, as_json: bool) -> None:
    if as_json:
        print(json.dumps(report, indent=2))
    else:
        print(render_text(report))


def _load(args) -> SumOfProducts:
    text = Path(args.input).read_text()
    reader = read_pla if args.pla else read_function
    return reader(text, args.max_vars)


def _cost(args, n: int) -> CostFunction:
    choice = getattr(args, "cost", "unit")
    if choice == "unit":
        return CostFunction.unit()
    if choice in ("literals", "literal_count"):
        return CostFunction.literal_count()
    return CostFunction.from_table(read_cost_table(Path(choice).read_text(), n))


def _cost_name(args) -> str:
    choice = getattr(args, "cost", "unit")
    return {"literals": "literal_count"}.get(choice, choice)


def cmd_primes(args) -> int:
    f = _load(args)
    primes = complete_primes(f)
    ess = essential_primes(primes)
    report = {
        "n": f.n,
        "counts": {"primes": len(primes), "essentials": len(ess)},
        "primes": [str(p) for p in primes],
        "essentials": [str(p) for p in ess],
    }
    _emit(report, args.json)
    return EXIT_OK


def _partition_report(f, cost_fn, args):
    u = build_universe(f.normalized(), cost_fn)
    part = partition(build_table(u), u)
    report = {
        "n": f.n,
        "cost": _cost_name(args),
        "essentials": [str(c) for c in part.essentials],
        "unnecessary": {
            "free": [str(c) for c in part.unnecessary_free],
            "surplus": [str(c) for c in part.surplus_cubes],
        },
        "components": [
            {
                "id": k,
                "batch": b,
                "representative": str(u.cube(comp.representative)),
                "primeset": [str(c) for c in part.primeset_cubes(comp)],
                "members": len(comp.members),
                "sub_table": len(comp.sub_table),
            }
            for k, (b, comp) in enumerate(zip(part.batches, part.components))
        ],
    }
    if not part.components:
        report["message"] = "all primes essential or free"
    return report


def cmd_partition(args) -> int:
    f = _load(args)
    _emit(_partition_report(f, _cost(args, f.n), args), args.json)
    return EXIT_OK


def _minimize_report(f, result, args):
    u = result.universe
    report = {
        "n": f.n,
        "cost": _cost_name(args),
        "basis": [str(c) for c in result.basis],
        "nonfree_cost": _num(result.total_cost),
        "essentials_cost": _num(result.essentials_cost),
        "optimal": result.optimal,
        "components": [
            {
                "id": s.component,
                "method": s.method,
                "chosen": [str(u.cube(q)) for q in s.chosen],
                "cost": _num(s.cost),
                "optimal": s.optimal,
                "lower_bound": _num(s.lower_bound),
            }
            for s in result.solutions
        ],
    }
    return report


def cmd_minimize(args) -> int:
    f = _load(args)
    cost_fn = _cost(args, f.n)
    try:
        result = minimize(f, cost_fn, node_budget=args.node_budget, parallel=args.parallel)
    except BudgetExceeded as exc:
        if not hasattr(exc.best, "basis"):
            raise
        report = _minimize_report(f, exc.best, args)
        report["lower_bound"] = _num(exc.lower_bound)
        _emit(report, args.json)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    _emit(_minimize_report(f, result, args), args.json)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.input is None and args.seed is None:
        raise ParseError("verify needs an input file or --seed")
    if args.input is not None:
        functions = [_load(args)]
    else:
        n_values = tuple(int(v) for v in args.vars.split(","))
        functions = list(corpus(args.seed, args.count, n_values, args.terms))

    tally: dict[str, Counter] = {}
    failures = []
    for k, f in enumerate(functions):
        cost_fn = _cost(args, f.n)
        for check in check_function(f, cost_fn):
            tally.setdefault(check.name, Counter())[check.status] += 1
            if check.failed:
                failures.append({"function": k, "check": check.name, "detail": check.detail,
                                 "terms": [str(t) for t in f.terms]})
    report = {
        "functions": len(functions),
        "checks": [
            {"name": name, "status": "fail" if c["fail"] else ("pass" if c["pass"] else "skip"),
             "pass": c["pass"], "fail": c["fail"], "skip": c["skip"]}
            for name, c in tally.items()
        ],
        "failures": failures,
    }
    _emit(report, args.json)
    return EXIT_INVARIANT if failures else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="primecover", description="Exact two-level Boolean minimization.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, input_required=True):
        sp.add_argument("input", nargs=None if input_required else "?",
                        help="function file (or PLA file with --pla)")
        sp.add_argument("--pla", action="store_true", help="read a single-output PLA file")
        sp.add_argument("--json", action="store_true", help="emit JSON")
        sp.add_argument("--max-vars", type=int, default=MAX_VARS,
                        help=f"largest accepted variable count (default {MAX_VARS})")

    sp = sub.add_parser("primes", help="complete prime set and essentials")
    common(sp)
    sp.set_defaults(func=cmd_primes)

    cost_help = "unit, literals, or a CSV file of term,cost rows"
    sp = sub.add_parser("partition", help="canonical partition of the primes")
    common(sp)
    sp.add_argument("--cost", default="unit", help=cost_help)
    sp.set_defaults(func=cmd_partition)

    sp = sub.add_parser("minimize", help="minimum-cost basis")
    common(sp)
    sp.add_argument("--cost", default="unit", help=cost_help)
    sp.add_argument("--node-budget", type=int, default=NODE_BUDGET,
                    help="branch-and-bound node budget per component")
    sp.add_argument("--parallel", action="store_true", help="solve components concurrently")
    sp.set_defaults(func=cmd_minimize)

    sp = sub.add_parser("verify", help="run the invariant suite against brute force")
    common(sp, input_required=False)
    sp.add_argument("--cost", default="unit", help=cost_help)
    sp.add_argument("--seed", type=int, help="check a random corpus with this seed")
    sp.add_argument("--count", type=int, default=100, help="corpus size")
    sp.add_argument("--vars", default="3,4,5,6", help="comma-separated variable counts")
    sp.add_argument("--terms", type=int, default=8, help="maximum terms per function")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ConfigurationError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
