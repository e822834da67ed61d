"""Command-line front end: ``solve``, ``reduce``, ``gen``, ``bench``, ``verify``.

Exit codes: 0 success, 1 input error (including a failed ``verify``),
2 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bench
from .game import (
    DiscountedGame,
    InvalidGameError,
    ProfileCapExceeded,
    bellman_violations,
    brute_force_equilibrium,
    dumps_game,
    game_from_dict,
    optimal_actions,
)
from .instances import FAMILIES, RANDOM_FAMILY, FamilySpec, RandomGameParams, generate
from .lcp import (
    InvariantError,
    LCPInstance,
    check_solution,
    dumps_lcp,
    lcp_from_dict,
    solution_from_dict,
    solution_to_dict,
)
from .rational import format_rational, parse_rational
from .reduction import LiftError, lift_solution, reduce_to_lcp, strategy_tie_audit
from .solvers import CoveringVector, IndexOrdering, cottle_dantzig_solve, lemke_solve


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _read_json(path: str) -> dict:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _load_problem(path: str, strict: bool) -> DiscountedGame | LCPInstance:
    data = _read_json(path)
    if "vertices" in data:
        return game_from_dict(data, strict)
    if "M" in data:
        return lcp_from_dict(data, strict)
    raise UsageError(f"{path} is neither a game nor an LCP file")


def _covering(text: str, seed: int) -> CoveringVector:
    if text == "unit":
        return CoveringVector.unit()
    if text == "random":
        return CoveringVector.random(seed)
    return CoveringVector.explicit([parse_rational(x) for x in text.split(",")])


def _ordering(text: str, seed: int) -> IndexOrdering:
    if text == "identity":
        return IndexOrdering.identity()
    if text == "random":
        return IndexOrdering.random(seed)
    if text.startswith("@"):
        return IndexOrdering.explicit(_read_json(text[1:]))
    return IndexOrdering.explicit([int(x) for x in text.split(",")])


def _strategy_dict(s) -> dict:
    return {str(u): i for u, i in s.choice.items()}


def cmd_solve(args) -> int:
    problem = _load_problem(args.file, args.strict)
    cert = None
    if isinstance(problem, DiscountedGame):
        cert = reduce_to_lcp(problem)
        lcp = cert.lcp
    else:
        lcp = problem
    if args.algorithm == "lemke":
        result = lemke_solve(lcp, _covering(args.covering, args.seed))
    else:
        result = cottle_dantzig_solve(lcp, _ordering(args.ordering, args.seed))
    out = {"algorithm": args.algorithm, "trace": result.trace.to_dict()}
    if result.message:
        out["message"] = result.message
    if result.solution is not None:
        if check_solution(lcp, result.solution):
            raise InvariantError("solver returned a non-solution")
        out["lcp_solution"] = solution_to_dict(result.solution)
        if cert is not None:
            values, smax, smin = lift_solution(cert, result.solution)
            out["values"] = [format_rational(v) for v in values]
            out["strategies"] = {"max": _strategy_dict(smax), "min": _strategy_dict(smin)}
            out["ties"] = list(strategy_tie_audit(cert, result.solution).tied)
    elif cert is not None:
        raise InvariantError(f"{args.algorithm} did not solve a P-matrix game LCP: {result.outcome}")
    if result.ray is not None:
        out["ray"] = {"point": {str(k): format_rational(v) for k, v in result.ray.point.items()},
                      "direction": {str(k): format_rational(v) for k, v in result.ray.direction.items()}}
    if args.json:
        _write(json.dumps(out, indent=1) + "\n", args.out)
    else:
        lines = [f"outcome: {result.outcome}", f"pivots: {result.trace.pivot_count}"]
        if args.algorithm == "cottle-dantzig":
            lines.append(f"major cycles: {result.trace.major_cycles}")
        if "values" in out:
            lines.append("values: " + " ".join(out["values"]))
            lines.append("max strategy: " + json.dumps(out["strategies"]["max"]))
            lines.append("min strategy: " + json.dumps(out["strategies"]["min"]))
        elif "lcp_solution" in out:
            lines.append("z: " + " ".join(out["lcp_solution"]["z"]))
            lines.append("w: " + " ".join(out["lcp_solution"]["w"]))
        if result.message:
            lines.append(result.message)
        _write("\n".join(lines) + "\n", args.out)
    return 0


def cmd_reduce(args) -> int:
    problem = _load_problem(args.file, args.strict)
    if not isinstance(problem, DiscountedGame):
        raise UsageError("reduce expects a game file")
    _write(dumps_lcp(reduce_to_lcp(problem).lcp), args.out)
    return 0


def cmd_gen(args) -> int:
    if args.family == RANDOM_FAMILY and args.seed is None:
        raise UsageError("--seed is required for the random family")
    params = RandomGameParams(parse_rational(args.discount), args.reward_min, args.reward_max)
    seed = args.seed if args.family == RANDOM_FAMILY else None
    game, ordering = generate(FamilySpec(args.family, args.n, seed, params))
    _write(dumps_game(game), args.out)
    if args.ordering_out:
        if ordering is None:
            raise UsageError(f"{args.family} does not prescribe an ordering")
        Path(args.ordering_out).write_text(json.dumps(list(ordering.permutation)) + "\n")
    return 0


def cmd_bench(args) -> int:
    cfg = bench.config_from_dict(_read_json(args.config))
    report = bench.run_experiment(cfg)
    csv_path = args.csv or cfg.output
    _write(report.to_csv(), csv_path)
    if args.summary:
        Path(args.summary).write_text(report.to_json())
    else:
        for entry in report.summary:
            stats = (f"mean={entry['mean']} median={entry['median']} max={entry['max']}"
                     if "mean" in entry else "no verified rows")
            print(f"{entry['family']} {entry['algorithm']}/{entry['variant']} n={entry['n']}: "
                  f"{stats} ({entry['verified']}/{entry['rows']} verified)", file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    problem = _load_problem(args.file, args.strict)
    sol = _read_json(args.solution)
    if isinstance(problem, LCPInstance):
        lcp_sol = solution_from_dict(sol.get("lcp_solution", sol))
        problems = check_solution(problem, lcp_sol)
        for p in problems:
            print(p, file=sys.stderr)
        print("ok" if not problems else "FAILED")
        return 1 if problems else 0
    if "values" not in sol:
        raise UsageError("game solution file needs a 'values' list")
    values = tuple(parse_rational(x) for x in sol["values"])
    if len(values) != problem.n:
        raise UsageError(f"{len(values)} values for a game with {problem.n} vertices")
    failures = []
    try:
        oracle = brute_force_equilibrium(problem, cap=args.cap)[0]
        if values != oracle:
            bad = [u for u in range(problem.n) if values[u] != oracle[u]]
            failures.append(f"values differ from brute force at vertices {bad}")
        method = "brute force"
    except ProfileCapExceeded:
        bad = bellman_violations(problem, values)
        if bad:
            failures.append(f"Bellman optimality fails at vertices {bad}")
        method = "Bellman optimality"
    acts = optimal_actions(problem, values)
    for player in ("max", "min"):
        for u, i in sol.get("strategies", {}).get(player, {}).items():
            if int(i) not in acts[int(u)]:
                failures.append(f"{player} edge {i} at v{u} is not optimal")
    for f in failures:
        print(f, file=sys.stderr)
    print(f"ok ({method})" if not failures else "FAILED")
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dglcp", description="Discounted games via linear complementarity.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True)

    s = sub.add_parser("solve", help="solve a game or LCP file")
    s.add_argument("file")
    s.add_argument("--algorithm", choices=["lemke", "cottle-dantzig"], default="lemke")
    s.add_argument("--covering", default="unit", help="unit | random | d1,d2,...")
    s.add_argument("--ordering", default="identity",
                   help="identity | random | p1,p2,... | @file (1-based permutation)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--json", action="store_true")
    s.add_argument("--strict", action="store_true", help="reject non-reduced rationals")
    s.add_argument("-o", "--out")
    s.set_defaults(func=cmd_solve)

    r = sub.add_parser("reduce", help="reduce a binary game file to an LCP file")
    r.add_argument("file")
    r.add_argument("--strict", action="store_true")
    r.add_argument("-o", "--out")
    r.set_defaults(func=cmd_reduce)

    g = sub.add_parser("gen", help="generate a family instance")
    g.add_argument("--family", choices=FAMILIES, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int)
    g.add_argument("--discount", default="1/2")
    g.add_argument("--reward-min", type=int, default=-10)
    g.add_argument("--reward-max", type=int, default=10)
    g.add_argument("-o", "--out")
    g.add_argument("--ordering-out", help="write the family's ordering (cd-lower-bound)")
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="run a pivot-count experiment from a config file")
    b.add_argument("config")
    b.add_argument("--csv", help="CSV output path (default: config 'output' or stdout)")
    b.add_argument("--summary", help="write summary and fits as JSON here")
    b.set_defaults(func=cmd_bench)

    v = sub.add_parser("verify", help="check a solution file against the oracle")
    v.add_argument("file", help="game or LCP file")
    v.add_argument("solution", help="output of 'solve --json' (or a {w, z} file for LCPs)")
    v.add_argument("--cap", type=int, default=2 ** 16, help="max strategy profiles to enumerate")
    v.add_argument("--strict", action="store_true")
    v.set_defaults(func=cmd_verify)
    return p


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (InvariantError, LiftError, bench.OracleMismatch) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 2
    except (UsageError, InvalidGameError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
