"""Command-line entry point.

Exit codes: 0 success, 1 validation failure, 2 infeasible road map,
3 strategy fault or step limit, 4 usage error.
"""

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import certificate as cert_mod
from .engine import Outcome, StrategyFault, simulate
from .graph import GraphError, RoadMap, validate
from .instance import Instance, dumps_instance, load_instance, rational
from .instances import (TooLarge, TooManyConfigurations, exhaustive_worst_ratio, gen_shell,
                        gen_weighted_family, gen_westphal, minimax_ratio, random_outerplanar)
from .oracle import InfeasibleRoadMap, is_feasible, opt_cost, stretch
from .strategies import decompose_wrapper, exp_balancing_any, reposition

EXIT_OK, EXIT_INVALID, EXIT_INFEASIBLE, EXIT_FAULT, EXIT_USAGE = 0, 1, 2, 3, 4

HEADER = ["instance", "strategy", "k", "traversed", "d_opt", "ratio", "bound", "pass", "recursions", "events"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class ExperimentRow:
    instance: str
    strategy: str
    k: int
    traversed: Fraction
    d_opt: Fraction
    ratio: Fraction
    bound: Fraction
    recursions: int
    events: int

    @property
    def passed(self):
        return self.ratio <= self.bound

    def cells(self):
        return [self.instance, self.strategy, str(self.k), rational(self.traversed), rational(self.d_opt),
                rational(self.ratio), rational(self.bound), "true" if self.passed else "false",
                str(self.recursions), str(self.events)]


def write_report(rows, out=None):
    """CSV text for `rows`, sorted by instance then strategy; also written to `out` if given."""
    if not rows:
        raise OSError("refusing to write an empty report")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for r in sorted(rows, key=lambda r: (r.instance, r.strategy)):
        w.writerow(r.cells())
    text = buf.getvalue()
    if out is not None:
        Path(out).write_text(text, encoding="utf-8")
    return text


def _factory(name):
    if name == "expbalancing":
        return decompose_wrapper(exp_balancing_any)
    if name == "reposition":
        return reposition
    raise UsageError(f"unknown strategy {name}")


def _bound(name, inst):
    if name == "expbalancing":
        return 9 * stretch(inst.graph)
    return Fraction(2 * inst.budget() + 1)


def run_row(inst, strategy, trace_out=None):
    """Simulate one strategy on one instance and summarize it as a report row."""
    rm = inst.roadmap
    strat = _factory(strategy)(rm.graph, rm.embedding, rm.source, rm.target)
    res = simulate(strat, rm)
    if trace_out is not None:
        from .engine import trace_lines
        Path(trace_out).write_text(trace_lines(res.trace), encoding="utf-8")
    if res.outcome is not Outcome.REACHED:
        raise StrategyFault(f"run ended with {res.outcome.value}")
    d = opt_cost(rm)
    recursions = sum(1 for e in res.trace if e.get("kind") == "recurse")
    return ExperimentRow(inst.name, strategy, inst.budget(), res.traversed, d, res.traversed / d,
                         _bound(strategy, inst), recursions, len(res.trace))


def _load_checked(path):
    inst = load_instance(path)
    report = validate(inst.graph, inst.embedding)
    return inst, report


def _cmd_validate(args):
    inst, report = _load_checked(args.file)
    if not is_feasible(inst.graph, inst.source, inst.target, inst.blocked):
        report = report + [f"{inst.source} cannot reach {inst.target} avoiding the blocked edges"]
    for line in report:
        print(line)
    if report:
        return EXIT_INVALID
    print("ok")
    return EXIT_OK


def _require_valid(inst, report, allow_invalid=False):
    if report and not allow_invalid:
        for line in report:
            print(line, file=sys.stderr)
        return EXIT_INVALID
    return None


def _cmd_run(args):
    inst, report = _load_checked(args.instance)
    bad = _require_valid(inst, report, args.strategy == "reposition")
    if bad is not None:
        return bad
    row = run_row(inst, args.strategy, args.trace)
    sys.stdout.write(write_report([row]))
    return EXIT_OK


def _cmd_worst(args):
    inst, report = _load_checked(args.instance)
    bad = _require_valid(inst, report, args.strategy == "reposition")
    if bad is not None:
        return bad
    if inst.universe is None:
        raise UsageError("instance has no universe field")
    ratio, config = exhaustive_worst_ratio(_factory(args.strategy), inst)
    print(f"ratio={rational(ratio)}")
    print("configuration=" + ",".join(f"{u}-{v}" for u, v in sorted(config)))
    return EXIT_OK


def _cmd_minimax(args):
    inst = load_instance(args.instance)
    if inst.universe is None:
        raise UsageError("instance has no universe field")
    print(rational(minimax_ratio(inst)))
    return EXIT_OK


def _cmd_gen(args):
    kind = args.kind
    if kind == "westphal":
        inst = gen_westphal(args.k, Fraction(args.eps or "1/10"))
    elif kind == "shell":
        inst = gen_shell(args.n)
    elif kind == "hfamily":
        inst = gen_weighted_family(args.i, Fraction(args.epsstar or "1/100"))
    else:
        weights = args.weights
        if weights.startswith("stretch:"):
            weights = ("stretch", int(weights.split(":", 1)[1]))
        g, emb = random_outerplanar(args.n, args.seed, weights)
        inst = Instance(f"random-{args.n}-{args.seed}", RoadMap(g, emb, "v0", f"v{args.n // 2}"))
    text = dumps_instance(inst)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_cert(args):
    eps = Fraction(args.eps)
    choice = cert_mod.j_search(eps)
    c = cert_mod.construct_y(choice.j, eps, expected_clamps=None)
    ok = cert_mod.verify_certificate(cert_mod.build_system(choice.j, eps), c)
    print(f"j={choice.j}")
    print(f"seed={choice.seed}")
    print(f"clamped={c.clamped}")
    print(f"pattern_ok={'true' if choice.pattern_ok else 'false'}")
    print(f"objective={float(c.objective):.12g}")
    print(f"residual_min={float(min(c.residual)):.12g}")
    print(f"verified={'true' if ok else 'false'}")
    if args.out:
        Path(args.out).write_text(cert_mod.certificate_json(c), encoding="utf-8")
    return EXIT_OK if ok else EXIT_INVALID


def _cmd_gk(args):
    g = cert_mod.g_of_k(args.k)
    print(f"{g:.12g}")
    if args.report and args.k >= 3:
        lhs = math.log(args.k) / math.log(math.log(args.k))
        print(f"ln k / ln ln k = {lhs:.12g}; g(k) = {g:.12g}; ln k = {math.log(args.k):.12g}")
    return EXIT_OK


def _cmd_sweep(args):
    files = sorted(Path(args.corpus).glob("*.json"))
    if not files:
        raise UsageError(f"no instances in {args.corpus}")
    rows = []
    for f in files:
        inst, report = _load_checked(f)
        if report and args.strategy == "expbalancing":
            print(f"skipping {f.name}: " + "; ".join(report), file=sys.stderr)
            continue
        rows.append(run_row(inst, args.strategy))
    write_report(rows, args.report)
    print(f"wrote {len(rows)} rows to {args.report}")
    return EXIT_OK


def build_parser():
    p = _Parser(prog="ctp", description="Canadian traveller experiments on outerplanar graphs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("validate", help="check an instance file")
    v.add_argument("file")
    v.set_defaults(func=_cmd_validate)

    strategies = ["expbalancing", "reposition"]
    r = sub.add_parser("run", help="simulate a strategy and print a report row")
    r.add_argument("--strategy", choices=strategies, required=True)
    r.add_argument("--instance", required=True)
    r.add_argument("--trace", help="write the JSON-lines trace here")
    r.set_defaults(func=_cmd_run)

    w = sub.add_parser("worst", help="worst ratio over every admissible blockage set")
    w.add_argument("--strategy", choices=strategies, required=True)
    w.add_argument("--instance", required=True)
    w.set_defaults(func=_cmd_worst)

    m = sub.add_parser("minimax", help="game value against an adaptive adversary")
    m.add_argument("--instance", required=True)
    m.set_defaults(func=_cmd_minimax)

    gen = sub.add_parser("gen", help="generate an instance")
    gen.add_argument("kind", choices=["westphal", "shell", "hfamily", "random"])
    gen.add_argument("--k", type=int, default=2)
    gen.add_argument("--n", type=int, default=5)
    gen.add_argument("--i", type=int, default=1)
    gen.add_argument("--eps")
    gen.add_argument("--epsstar")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--weights", default="unit", help="unit, arbitrary or stretch:S")
    gen.add_argument("--out")
    gen.set_defaults(func=_cmd_gen)

    c = sub.add_parser("cert", help="build and verify a certificate for a given eps")
    c.add_argument("--eps", required=True)
    c.add_argument("--out")
    c.set_defaults(func=_cmd_cert)

    gk = sub.add_parser("gk", help="evaluate g(k)")
    gk.add_argument("--k", type=int, required=True)
    gk.add_argument("--report", action="store_true", help="also print ln k / ln ln k and ln k")
    gk.set_defaults(func=_cmd_gk)

    sw = sub.add_parser("sweep", help="run a strategy over a directory of instances")
    sw.add_argument("--corpus", required=True)
    sw.add_argument("--strategy", choices=strategies, required=True)
    sw.add_argument("--report", required=True)
    sw.set_defaults(func=_cmd_sweep)
    return p


def dispatch(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, (TooLarge, TooManyConfigurations)):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_FAULT
        if isinstance(exc, InfeasibleRoadMap):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INFEASIBLE
        if isinstance(exc, GraphError):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INVALID
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StrategyFault as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAULT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(dispatch(sys.argv[1:]))
