import argparse
import json
import sys
from typing import List, Optional

import pygments
from pygments.formatters import Terminal256Formatter
from pygments.lexers.data import JsonLexer

from fewswitch import colorings, compgraph, harness, switchpaths, torus
from fewswitch.core import (
    FewSwitchError,
    InternalAssertion,
    InvalidParameter,
    Profiling,
    colored,
    dblog,
    is_unreachable,
    settings,
)
from fewswitch.graphs import (
    Automorphism,
    Graph,
    farthest_point_automorphism,
    identity_automorphism,
    parse_graph_spec,
    product_spec_of,
    require_hypercube,
    spec_string,
    validate_automorphism,
)

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _positive_int(value: str) -> int:
    try:
        n = int(value)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected integer, got: {value!r}") from e
    if n <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got: {n}")
    return n


def _nonnegative_int(value: str) -> int:
    try:
        n = int(value)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected integer, got: {value!r}") from e
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got: {n}")
    return n


def _probability(value: str) -> float:
    try:
        p = float(value)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected a number, got: {value!r}") from e
    if not 0.0 <= p <= 1.0:
        raise argparse.ArgumentTypeError(f"expected a probability in [0, 1], got: {p}")
    return p


def _int_list(value: str) -> List[int]:
    try:
        return [int(x) for x in value.split(",") if x.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got: {value!r}") from e


def _graph_spec(value: str) -> Graph:
    try:
        return parse_graph_spec(value)
    except InvalidParameter as e:
        raise argparse.ArgumentTypeError(str(e)) from e


# =================================
#   Helpers
# =================================


def _echo(text: str):
    dblog(text, enable=settings.LOG_CLI)


def _write_json(path: str, obj):
    text = json.dumps(obj, indent=2, sort_keys=True)
    with open(path, "w") as f:
        f.write(text + "\n")
    if settings.LOG_REPORT:
        print(pygments.highlight(text, JsonLexer(), Terminal256Formatter()), end="")
    _echo(f"wrote {path}")


def resolve_phi(g: Graph, text: Optional[str]) -> Automorphism:
    "`farthest` (alias `antipodal`), `identity`, or a JSON file holding a permutation."
    if text in (None, "farthest", "antipodal"):
        return farthest_point_automorphism(product_spec_of(g))
    if text == "identity":
        return identity_automorphism(g)
    with open(text) as f:
        obj = json.load(f)
    return validate_automorphism(g, obj["perm"] if isinstance(obj, dict) else obj)


def _status(ok: bool) -> str:
    return colored("PASS", "green") if ok else colored("VIOLATION", "red")


# =================================
#   Subcommands
# =================================


def cmd_gen(args) -> int:
    params = dict(k=args.k, m=args.m, n=args.n, p=args.p, seed=args.seed, graph=args.graph, color=args.color)
    g, c = colorings.family_set.generate(args.family, **params)
    colorings.save_coloring(c, args.output)
    _echo(f"# gen {args.family} seed={args.seed}: {spec_string(g.spec)}, {g.edge_count} edges, {c.red_count} red")
    return EXIT_OK


def cmd_comp(args) -> int:
    c = colorings.load_coloring(args.coloring)
    cg = compgraph.build(c.graph, c)
    search = compgraph.longest_cycle_length(cg, args.budget)
    _echo(f"# comp {spec_string(c.graph.spec)}")
    _echo(f"components: {cg.red_count} red, {cg.blue_count} blue; meta-edges: {len(cg.meta_edges)}")
    _echo(f"tree: {compgraph.is_tree(cg)}; complete bipartite: {compgraph.is_complete_bipartite(cg)}")
    _echo(f"longest cycle: {search.kind} {search.length}")
    if args.dot:
        with open(args.dot, "w") as f:
            f.write(compgraph.export_dot(cg))
        _echo(f"wrote {args.dot}")
    if args.output:
        _write_json(args.output, {**compgraph.to_json(cg), "longest_cycle": {"kind": search.kind, "length": search.length}})
    return EXIT_OK


def cmd_switch(args) -> int:
    c = colorings.load_coloring(args.coloring)
    g = c.graph
    if args.u is not None or args.v is not None:
        if args.u is None or args.v is None:
            raise UsageError("switch: --u and --v go together")
        path = switchpaths.min_switches(g, c, args.u, args.v)
        if is_unreachable(path):
            _echo(f"{args.u} -> {args.v}: unreachable")
            return EXIT_OK
        out = switchpaths.path_to_json(path)
    else:
        result = switchpaths.orbit_objective(g, c, resolve_phi(g, args.phi))
        path = result.path
        out = result.to_json()
    _echo(f"{path.start} -> {path.end}: {path.switches} switches over {path.length} edges")
    if args.output:
        _write_json(args.output, out)
    return EXIT_OK


def cmd_witness(args) -> int:
    c = colorings.load_coloring(args.coloring)
    result = switchpaths.theorem_witness(c.graph, c, resolve_phi(c.graph, args.phi), args.k, args.budget)
    if result.kind == "witness":
        _echo(f"witness u={result.u}: {result.path.switches} <= {args.k} switches after {len(result.trace)} rounds")
    elif result.kind == "hypothesis_violated":
        _echo(f"hypothesis violated: meta-cycle of length {len(result.cycle)} >= {2 * args.k + 3}")
    else:
        _echo(colored(f"failure: {result.reason}", "red"))
    if args.output:
        _write_json(args.output, result.to_json())
    return EXIT_INTERNAL if result.kind == "failure" else EXIT_OK


def cmd_torus_pair(args) -> int:
    if args.coloring:
        tc = torus.torus_of(colorings.load_coloring(args.coloring))
    else:
        if args.a is None or args.b is None:
            raise UsageError("torus-pair: give a coloring file or --a and --b")
        tc = torus.random_torus_coloring(args.a, args.b, args.seed)
        _echo(f"# torus-pair random a={args.a} b={args.b} seed={args.seed}")
    pair = torus.find_pair(tc)
    _echo(f"u={tc.coords(pair.u)} v={tc.coords(pair.v)}: {pair.path.switches} <= {tc.b - 1} switches")
    if args.output:
        _write_json(args.output, torus.report_json(tc, pair))
    return EXIT_OK


def _verify_report(args) -> harness.VerificationReport:
    mode = "exhaustive" if args.exhaustive else args.mode
    if mode == "exhaustive":
        return harness.exhaustive_report(args.graph, resolve_phi(args.graph, args.phi), args.workers)
    if mode == "sampled":
        return harness.sampled_d(args.graph, resolve_phi(args.graph, args.phi), args.samples, args.seed, args.workers)
    if mode == "simple":
        return harness.simple_coloring_suite(require_hypercube(args.graph))
    if mode == "main-theorem":
        return harness.main_theorem_suite(args.samples, args.seed, node_budget=args.budget)
    if mode == "induced":
        return harness.induced_cycle_suite(args.ns, args.samples, args.seed, args.budget)
    if mode == "torus":
        lengths = product_spec_of(args.graph).cycle_lengths
        if len(lengths) != 2 or any(n % 2 for n in lengths):
            raise InvalidParameter(f"{spec_string(args.graph.spec)} is not a torus C_2a x C_2b")
        return harness.torus_suite(lengths[0] // 2, lengths[1] // 2, args.samples, args.seed)
    if mode == "metric":
        return harness.metric_equivalence_suite(args.samples, args.seed)
    return harness.antipodal_suite(require_hypercube(args.graph), args.samples, args.seed)


def cmd_verify(args) -> int:
    if args.mode in ("sampled", "main-theorem", "induced", "torus", "metric", "antipodal") and not args.exhaustive:
        _echo(f"# verify {args.mode} seed={args.seed} samples={args.samples}")
    with Profiling(enabled=args.profile):
        report = _verify_report(args)
    if args.exhaustive or args.mode == "exhaustive":
        _echo(f"d = {report.worst_case_switches} over {report.samples} colorings")
    else:
        _echo(f"worst = {report.worst_case_switches} over {report.samples} {report.mode} colorings")
    _echo(f"{_status(report.ok)} {report.instance} bound={report.bound} ({report.runtime_ms:.0f} ms)")
    if args.output:
        out = report.to_json()
        del out["runtime_ms"]
        _write_json(args.output, out)
    return EXIT_OK if report.ok else EXIT_VIOLATION


def cmd_experiment(args) -> int:
    _echo(f"# experiment {args.kind} seed={args.seed} samples={args.samples}")
    points = []
    with Profiling(enabled=args.profile):
        for n in args.ns:
            if args.kind == "tree-fraction":
                value = harness.tree_fraction_experiment(n, args.samples, args.seed)
            elif args.kind == "connectivity":
                value = harness.connectivity_experiment(n, args.p, args.samples, args.seed)
            elif args.kind == "middle-component":
                value = harness.middle_component_experiment(n, args.samples, args.seed, args.p)
            else:
                g, c = colorings.level_alternating_coloring(n)
                value = harness.average_switch_experiment(g, c, farthest_point_automorphism([2] * n)).mean
            points.append(harness.ExperimentPoint(n, args.samples, value))
            _echo(f"n={n:3d} value={value:.6f}")
    if args.kind == "connectivity" and args.p == 0.5:
        _echo("reference 1/e = 0.367879")
    if args.output:
        harness.write_curve_csv(args.output, points)
        _echo(f"wrote {args.output}")
    return EXIT_OK


# =================================
#   Parser
# =================================


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fewswitch", description="Few-switch paths in 2-edge-colored graphs.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    gen = sub.add_parser("gen", help="write a named coloring family to a coloring file")
    gen.add_argument("--family", required=True, choices=colorings.family_set.names())
    gen.add_argument("--k", type=_positive_int)
    gen.add_argument("--m", type=_positive_int)
    gen.add_argument("--n", type=_positive_int)
    gen.add_argument("--p", type=_probability)
    gen.add_argument("--graph", help="graph spec such as hypercube:4, cycle:6 or product:4x6")
    gen.add_argument("--color", choices=["R", "B"])
    gen.add_argument("--seed", type=_nonnegative_int, default=settings.SEED)
    gen.add_argument("-o", "--output", required=True)
    gen.set_defaults(fn=cmd_gen)

    comp = sub.add_parser("comp", help="component graph of a coloring file")
    comp.add_argument("coloring")
    comp.add_argument("--dot")
    comp.add_argument("--budget", type=_positive_int)
    comp.add_argument("-o", "--output")
    comp.set_defaults(fn=cmd_comp)

    switch = sub.add_parser("switch", help="fewest color changes between u and v, or over u -> phi(u)")
    switch.add_argument("coloring")
    switch.add_argument("--u", type=_nonnegative_int)
    switch.add_argument("--v", type=_nonnegative_int)
    switch.add_argument("--phi")
    switch.add_argument("-o", "--output")
    switch.set_defaults(fn=cmd_switch)

    witness = sub.add_parser("witness", help="run the main-theorem witness finder")
    witness.add_argument("coloring")
    witness.add_argument("--k", type=_nonnegative_int, required=True)
    witness.add_argument("--phi")
    witness.add_argument("--budget", type=_positive_int)
    witness.add_argument("-o", "--output")
    witness.set_defaults(fn=cmd_witness)

    pair = sub.add_parser("torus-pair", help="few-switch farthest pair on C_2a x C_2b")
    pair.add_argument("coloring", nargs="?")
    pair.add_argument("--a", type=_positive_int)
    pair.add_argument("--b", type=_positive_int)
    pair.add_argument("--seed", type=_nonnegative_int, default=settings.SEED)
    pair.add_argument("-o", "--output")
    pair.set_defaults(fn=cmd_torus_pair)

    verify = sub.add_parser("verify", help="exhaustive or sampled verification runs")
    verify.add_argument("--graph", type=_graph_spec, default=None)
    verify.add_argument("--phi")
    verify.add_argument(
        "--mode",
        default="sampled",
        choices=["exhaustive", "sampled", "simple", "main-theorem", "induced", "torus", "metric", "antipodal"],
    )
    verify.add_argument("--exhaustive", action="store_true", help="same as --mode exhaustive")
    verify.add_argument("--samples", type=_positive_int, default=1000)
    verify.add_argument("--seed", type=_nonnegative_int, default=settings.SEED)
    verify.add_argument("--workers", type=_positive_int, default=settings.WORKERS)
    verify.add_argument("--ns", type=_int_list, default=[4, 5, 6])
    verify.add_argument("--budget", type=_positive_int)
    verify.add_argument("--profile", action="store_true")
    verify.add_argument("-o", "--output")
    verify.set_defaults(fn=cmd_verify)

    experiment = sub.add_parser("experiment", help="random-coloring trend experiments")
    experiment.add_argument(
        "--kind", required=True, choices=["tree-fraction", "connectivity", "middle-component", "average-switch"]
    )
    experiment.add_argument("--ns", type=_int_list, default=[6, 8, 10])
    experiment.add_argument("--samples", type=_positive_int, default=2000)
    experiment.add_argument("--p", type=_probability, default=0.5)
    experiment.add_argument("--seed", type=_nonnegative_int, default=settings.SEED)
    experiment.add_argument("--profile", action="store_true")
    experiment.add_argument("-o", "--output")
    experiment.set_defaults(fn=cmd_experiment)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "verify" and args.graph is None and (args.exhaustive or args.mode not in ("main-theorem", "induced", "metric")):
            raise UsageError("verify: --graph is required for this mode")
        return args.fn(args)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except InternalAssertion as e:
        print(colored(f"internal assertion: {e}", "red"), file=sys.stderr)
        return EXIT_INTERNAL
    except (FewSwitchError, OSError, json.JSONDecodeError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
