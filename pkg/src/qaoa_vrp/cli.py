"""Command-line interface: ``qaoa-vrp {gen,solve,resources,sweep,decode}``.

Exit codes: 0 success, 1 usage error, 2 resource error, 3 infeasible decode.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ._validation import ResourceError, ValidationError
from .analysis import decode, penalty_sweep, sweep_to_table
from .instance import generate_random, read_instance, write_instance
from .optimizer import solve
from .resources import comparison_table, comparison_to_table

EXIT_OK, EXIT_USAGE, EXIT_RESOURCE, EXIT_INFEASIBLE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_instance_args(p):
    p.add_argument("--instance", type=Path, help="instance JSON file")
    p.add_argument("--nodes", type=int, help="generate a random instance with this many nodes")
    p.add_argument("--vehicles", type=int)
    p.add_argument("--seed", type=int, default=0, help="master seed")


def _add_solver_args(p):
    p.add_argument("--p", type=int, default=2, help="QAOA depth")
    p.add_argument("--shots", type=int, default=10_000)
    p.add_argument("--budget", type=int, default=300, help="objective evaluations per restart")
    p.add_argument("--restarts", type=int, default=3)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qaoa-vrp", description="QAOA workbench for small vehicle routing problems")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate a random instance")
    g.add_argument("--nodes", type=int, required=True)
    g.add_argument("--vehicles", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", type=Path, help="output file (default: stdout)")

    s = sub.add_parser("solve", help="run the QAOA pipeline")
    _add_instance_args(s)
    _add_solver_args(s)
    s.add_argument("--multiplier", type=float, default=2.0)
    s.add_argument("--normalize", action=argparse.BooleanOptionalAction, default=False)
    s.add_argument("--out", type=Path, default=Path("."), help="output directory")

    r = sub.add_parser("resources", help="formulation resource comparison table")
    r.add_argument("--nodes", type=int, nargs="+", default=[3, 4, 5, 6])
    r.add_argument("--vehicles", type=int, nargs="+", default=[2])
    r.add_argument("--formulations", nargs="+", default=["edge", "time_expanded"],
                   choices=["edge", "time_expanded"])
    r.add_argument("--p", type=int, default=2)
    r.add_argument("--out", type=Path, help="output CSV (default: stdout)")

    w = sub.add_parser("sweep", help="penalty multiplier / normalization sweep")
    _add_instance_args(w)
    _add_solver_args(w)
    w.add_argument("--multipliers", type=float, nargs="+", default=[0.5, 1.0, 1.5, 2.0, 2.5, 3.0])
    w.add_argument("--repeats", type=int, default=3, help="runs per configuration (seeds seed..seed+repeats-1)")
    w.add_argument("--top-k", type=int, default=1000)
    w.add_argument("--weighted", action="store_true", help="feasibility ratio over shot mass")
    w.add_argument("--out", type=Path, help="output CSV (default: stdout)")

    d = sub.add_parser("decode", help="decode an edge bitstring")
    d.add_argument("bitstring")
    _add_instance_args(d)
    return parser


def _load_instance(args):
    if args.instance is not None and args.nodes is not None:
        raise UsageError("give either --instance or --nodes/--vehicles, not both")
    if args.instance is not None:
        return read_instance(args.instance)
    if args.nodes is None or args.vehicles is None:
        raise UsageError("an instance is required: --instance FILE or --nodes N --vehicles K")
    return generate_random(args.nodes, args.vehicles, args.seed)


def _emit(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)


def cmd_gen(args):
    inst = generate_random(args.nodes, args.vehicles, args.seed)
    if args.out is None:
        sys.stdout.write(json.dumps(inst.to_dict(), indent=2) + "\n")
    else:
        write_instance(inst, args.out)
    return EXIT_OK


def cmd_solve(args):
    inst = _load_instance(args)
    report = solve(
        inst,
        p=args.p,
        multiplier=args.multiplier,
        normalize=args.normalize,
        shots=args.shots,
        seed=args.seed,
        budget=args.budget,
        restarts=args.restarts,
    )
    out = args.out
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(report.dumps())
    (out / "samples.csv").write_text(report.counts.to_table())
    (out / "trace.csv").write_text(report.trace.to_table(report.p))
    top = report.top_decoded
    print(f"qubits={report.qubits} expectation={report.expectation:.3f} top={report.top_bitstring}")
    print(f"top routes: {top.routes if top.feasible else 'infeasible ' + ' '.join(top.verdict.violations)}")
    print(f"wall time: {report.wall_time:.2f}s", file=sys.stderr)
    return EXIT_OK


def cmd_resources(args):
    rows = comparison_table(args.nodes, args.vehicles, p=args.p, formulations=tuple(args.formulations))
    _emit(comparison_to_table(rows), args.out)
    return EXIT_OK


def cmd_sweep(args):
    inst = _load_instance(args)
    seeds = [args.seed + r for r in range(args.repeats)]
    records = penalty_sweep(
        inst,
        args.multipliers,
        p=args.p,
        shots=args.shots,
        seeds=seeds,
        budget=args.budget,
        restarts=args.restarts,
        top_k=args.top_k,
        weighted=args.weighted,
    )
    _emit(sweep_to_table(records), args.out)
    return EXIT_OK


def cmd_decode(args):
    inst = _load_instance(args)
    expected = inst.n * (inst.n - 1)
    if len(args.bitstring) != expected or set(args.bitstring) - {"0", "1"}:
        raise UsageError(f"bitstring must be {expected} characters of 0/1 for n={inst.n}")
    result = decode(args.bitstring, inst)
    if not result.feasible:
        print("infeasible: " + " ".join(result.verdict.violations))
        return EXIT_INFEASIBLE
    print(f"feasible: {result.routes}")
    return EXIT_OK


COMMANDS = {"gen": cmd_gen, "solve": cmd_solve, "resources": cmd_resources, "sweep": cmd_sweep, "decode": cmd_decode}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"qaoa-vrp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceError as exc:
        print(f"qaoa-vrp: resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ValidationError, OSError) as exc:
        print(f"qaoa-vrp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
