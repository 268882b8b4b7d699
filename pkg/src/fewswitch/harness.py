import csv
import math
from multiprocessing import Pool
from typing import Any, Callable, Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from fewswitch.colorings import (
    EdgeColoring,
    coloring_from_mask,
    coloring_to_json,
    is_simple,
    monochromatic_coloring,
    random_antipodal_coloring,
    random_coloring,
)
from fewswitch.compgraph import build, is_tree, longest_cycle_length, longest_induced_cycle, meta_distance_matrix
from fewswitch.core import (
    RED,
    InternalAssertion,
    InvalidParameter,
    Timing,
    dblog,
    list_map,
    rng_for,
    settings,
)
from fewswitch.graphs import (
    Automorphism,
    Graph,
    antipodal_automorphism,
    distance,
    explicit_graph,
    farthest_point_automorphism,
    hypercube,
    hypercube_dimension,
    is_connected,
    product_spec_of,
    spec_string,
    validate_automorphism,
)
from fewswitch.switchpaths import (
    geodesic_min_switches,
    make_switch_path,
    min_switches,
    orbit_objective,
    orbit_pair_array,
    theorem_witness,
)
from fewswitch.torus import charge_table, find_pair, random_torus_coloring

# =================================
#   Reports
# =================================


class VerificationReport(NamedTuple):
    instance: str
    mode: str
    samples: int
    seed: Optional[int]
    worst_case_switches: Optional[int]
    worst_case_coloring: Optional[dict]
    violations: Tuple[dict, ...]
    runtime_ms: float
    bound: Optional[int] = None
    extra: Dict[str, Any] = {}

    ok = property(lambda self: not self.violations)

    def to_json(self) -> dict:
        out = self._asdict()
        out["violations"] = list(self.violations)
        out["extra"] = dict(self.extra)
        return out

    def __repr__(self):
        status = "ok" if self.ok else f"{len(self.violations)} violations"
        return f"<VerificationReport: {self.instance} {self.mode}({self.samples}) worst={self.worst_case_switches} {status}>"


class ExhaustiveResult(NamedTuple):
    d: int
    coloring: EdgeColoring
    count: int


class ExperimentPoint(NamedTuple):
    n: int
    samples: int
    value: float


class SwitchStats(NamedTuple):
    mean: float
    histogram: Dict[int, int]
    unreachable: int
    vertex_count: int


def conjectured_bound(g: Graph) -> Optional[int]:
    "1 on hypercubes; max(a_i)/2 - 1 on products of even cycles; None otherwise."
    if hypercube_dimension(g) is not None:
        return 1
    try:
        lengths = product_spec_of(g).cycle_lengths
    except InvalidParameter:
        return None
    if any(a % 2 for a in lengths):
        return None
    return max(lengths) // 2 - 1


def _describe(g: Graph, phi: Optional[Automorphism] = None) -> str:
    return spec_string(g.spec) + ("" if phi is None else f" order-{phi.order} map")


def _orbit_value(g: Graph, c: EdgeColoring, phi: Automorphism) -> int:
    values = orbit_pair_array(build(g, c), phi)
    best = values.min() if values.size else math.inf
    return -1 if math.isinf(best) else int(best)


def _run_chunks(fn: Callable, chunks: List[tuple], workers: Optional[int]) -> List:
    "Maps `fn` over chunks in order, in a process pool when asked for more than one worker."
    workers = settings.WORKERS if workers is None else workers
    if workers <= 1 or len(chunks) <= 1:
        return list_map(fn, chunks)
    with Pool(workers) as pool:
        return pool.map(fn, chunks)


def _chunk_ranges(total: int, workers: Optional[int]) -> List[Tuple[int, int]]:
    workers = max(1, settings.WORKERS if workers is None else workers)
    size = max(1, -(-total // (4 * workers)))
    return [(lo, min(lo + size, total)) for lo in range(0, total, size)]


# =================================
#   d(G, phi)
# =================================


def _exhaustive_chunk(args) -> Tuple[int, int]:
    g, phi, lo, hi = args
    best, best_mask = -1, lo
    for mask in range(lo, hi):
        value = _orbit_value(g, coloring_from_mask(g, mask), phi)
        if value > best:
            best, best_mask = value, mask
    return best, best_mask


def exhaustive_d(g: Graph, phi: Automorphism, workers: Optional[int] = None) -> ExhaustiveResult:
    "max over all 2^m colorings of the orbit objective, with the lowest extremal mask."
    if g.edge_count > settings.MAX_EXHAUSTIVE_EDGES:
        raise InvalidParameter(f"{g.edge_count} edges is too many to enumerate, use sampled_d")
    if not is_connected(g):
        raise InvalidParameter(f"{g!r} is not connected")
    total = 1 << g.edge_count
    chunks = [(g, phi, lo, hi) for lo, hi in _chunk_ranges(total, workers)]
    best, best_mask = -1, 0
    with Timing(f"exhaustive {_describe(g)} ", enabled=settings.LOG_HARNESS):
        for value, mask in _run_chunks(_exhaustive_chunk, chunks, workers):
            if value > best:
                best, best_mask = value, mask
    return ExhaustiveResult(best, coloring_from_mask(g, best_mask), total)


def exhaustive_report(g: Graph, phi: Automorphism, workers: Optional[int] = None) -> VerificationReport:
    with Timing(enabled=False) as t:
        result = exhaustive_d(g, phi, workers)
    bound = conjectured_bound(g)
    violations = ()
    if bound is not None and result.d > bound:
        violations = ({"switches": result.d, "coloring": coloring_to_json(result.coloring)},)
    return VerificationReport(
        _describe(g, phi), "exhaustive", result.count, None, result.d, coloring_to_json(result.coloring), violations, t.ms, bound
    )


def _sample_coloring(g: Graph, p: float, seed: int, index: int) -> EdgeColoring:
    return monochromatic_coloring(g, RED) if index == 0 else random_coloring(g, p, seed, index)


def _sampled_chunk(args) -> Tuple[int, int, List[Tuple[int, int]]]:
    g, phi, p, seed, bound, lo, hi = args
    best, best_index, over = -1, lo, []
    for i in range(lo, hi):
        value = _orbit_value(g, _sample_coloring(g, p, seed, i), phi)
        if value > best:
            best, best_index = value, i
        if bound is not None and value > bound:
            over.append((i, value))
    return best, best_index, over


def sampled_d(
    g: Graph, phi: Automorphism, samples: int, seed: int = 0, workers: Optional[int] = None, p: float = 0.5
) -> VerificationReport:
    """Worst orbit objective over `samples` colorings; sample 0 is all red and sample i
    draws from `rng_for(seed, i)`, so the report does not depend on `workers`."""
    if samples < 1:
        raise InvalidParameter(f"samples must be positive, got {samples}")
    if not is_connected(g):
        raise InvalidParameter(f"{g!r} is not connected")
    bound = conjectured_bound(g)
    chunks = [(g, phi, p, seed, bound, lo, hi) for lo, hi in _chunk_ranges(samples, workers)]
    best, best_index, violations = -1, 0, []
    with Timing(f"sampled {_describe(g)} ", enabled=settings.LOG_HARNESS) as t:
        for value, index, over in _run_chunks(_sampled_chunk, chunks, workers):
            if value > best:
                best, best_index = value, index
            for i, v in over:
                violations.append({"sample": i, "switches": v, "coloring": coloring_to_json(_sample_coloring(g, p, seed, i))})
    if violations:
        dblog(f"VIOLATION: {len(violations)} samples exceed {bound}", enable=settings.LOG_HARNESS)
    worst = coloring_to_json(_sample_coloring(g, p, seed, best_index))
    return VerificationReport(
        _describe(g, phi), "sampled", samples, seed, best, worst, tuple(violations), t.ms, bound, {"worst_sample": best_index}
    )


# =================================
#   Random-coloring experiments
# =================================


def _check_dim(n: int, limit: int):
    if not 1 <= n <= limit:
        raise InvalidParameter(f"n must lie in [1, {limit}], got {n}")


def tree_fraction_experiment(n: int, samples: int = 0, seed: int = 0, exhaustive: bool = False) -> float:
    "Share of p = 1/2 colorings of Q_n whose component graph is a tree."
    _check_dim(n, 14)
    g = hypercube(n)
    if exhaustive:
        if g.edge_count > settings.MAX_EXHAUSTIVE_EDGES:
            raise InvalidParameter(f"Q_{n} has too many colorings to enumerate")
        colorings = (coloring_from_mask(g, mask) for mask in range(1 << g.edge_count))
        total = 1 << g.edge_count
    else:
        if samples < 1:
            raise InvalidParameter(f"samples must be positive, got {samples}")
        colorings = (random_coloring(g, 0.5, seed, i) for i in range(samples))
        total = samples
    trees = sum(1 for c in colorings if is_tree(build(g, c)))
    dblog(f"tree fraction Q_{n}: {trees}/{total}", enable=settings.LOG_HARNESS)
    return trees / total


def _red_component_sizes(g: Graph, c: EdgeColoring) -> np.ndarray:
    labels = build(g, c).vertex_to_components[:, RED]
    return np.bincount(labels)


def connectivity_experiment(n: int, p: float, samples: int, seed: int = 0) -> float:
    "Estimate of P(Q_{n,p} is connected), keeping the red edges of a p-coloring."
    _check_dim(n, 16)
    if samples < 1:
        raise InvalidParameter(f"samples must be positive, got {samples}")
    g = hypercube(n)
    hits = sum(1 for i in range(samples) if len(_red_component_sizes(g, random_coloring(g, p, seed, i))) == 1)
    return hits / samples


def middle_component_experiment(n: int, samples: int, seed: int = 0, p: float = 0.5) -> float:
    "Estimate of P(Q_{n,p} has a component with between 2 and 2^(n-1) vertices)."
    _check_dim(n, 16)
    if samples < 1:
        raise InvalidParameter(f"samples must be positive, got {samples}")
    g = hypercube(n)
    half = 1 << (n - 1)
    hits = 0
    for i in range(samples):
        sizes = _red_component_sizes(g, random_coloring(g, p, seed, i))
        hits += bool(np.any((sizes >= 2) & (sizes <= half)))
    return hits / samples


def average_switch_experiment(g: Graph, c: EdgeColoring, phi: Automorphism) -> SwitchStats:
    "Mean and histogram of min_switches(u, phi(u)) over all u; unreachable pairs are counted apart."
    values = orbit_pair_array(build(g, c), phi)
    finite = values[np.isfinite(values)].astype(np.int64)
    histogram = {int(k): int(v) for k, v in zip(*np.unique(finite, return_counts=True))}
    mean = float(finite.mean()) if finite.size else math.nan
    return SwitchStats(mean, histogram, int(values.size - finite.size), g.vertex_count)


def write_curve_csv(path: str, points: Iterable[ExperimentPoint]):
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["n", "samples", "value"])
        for point in points:
            writer.writerow([point.n, point.samples, point.value])


# =================================
#   Property suites
# =================================


def simple_coloring_suite(n: int) -> VerificationReport:
    "Every simple coloring of Q_n must give a tree component graph and a monochromatic antipodal path."
    _check_dim(n, 3)
    g, phi = hypercube(n), antipodal_automorphism(n)
    violations, simple, worst = [], 0, 0
    with Timing(enabled=False) as t:
        for mask in range(1 << g.edge_count):
            c = coloring_from_mask(g, mask)
            if not is_simple(g, c):
                continue
            simple += 1
            cg = build(g, c)
            value = orbit_objective(g, c, phi, cg).best_switches
            worst = max(worst, value)
            if value != 0 or not is_tree(cg):
                violations.append({"mask": mask, "switches": value, "tree": is_tree(cg), "coloring": coloring_to_json(c)})
    return VerificationReport(
        f"hypercube:{n} simple colorings", "exhaustive", 1 << g.edge_count, None, worst, None, tuple(violations), t.ms, 0,
        {"simple": simple},
    )


def random_symmetric_graph(rng: np.random.Generator, max_vertices: int = 10) -> Tuple[Graph, Automorphism]:
    """Connected graph on at most `max_vertices` vertices closed under a random permutation.

    A random spanning tree plus a few extra edges is closed under the orbits of the
    permutation, which makes the permutation an automorphism.
    """
    n = int(rng.integers(2, max_vertices + 1))
    perm = rng.permutation(n).tolist()
    order = rng.permutation(n).tolist()
    seeds = [(order[v], order[int(rng.integers(0, v))]) for v in range(1, n)]
    for _ in range(int(rng.integers(0, n))):
        u, v = (int(x) for x in rng.integers(0, n, size=2))
        if u != v:
            seeds.append((u, v))
    edges = set()
    for u, v in seeds:
        x, y = u, v
        while (min(x, y), max(x, y)) not in edges:
            edges.add((min(x, y), max(x, y)))
            x, y = perm[x], perm[y]
    g = explicit_graph(n, edges)
    return g, validate_automorphism(g, perm)


def random_connected_graph(rng: np.random.Generator, max_vertices: int = 12) -> Graph:
    n = int(rng.integers(2, max_vertices + 1))
    order = rng.permutation(n).tolist()
    edges = {tuple(sorted((order[v], order[int(rng.integers(0, v))]))) for v in range(1, n)}
    for _ in range(int(rng.integers(0, 2 * n))):
        u, v = (int(x) for x in rng.integers(0, n, size=2))
        if u != v:
            edges.add((min(u, v), max(u, v)))
    return explicit_graph(n, edges)


def _rng_coloring(g: Graph, rng: np.random.Generator, p: float = 0.5) -> EdgeColoring:
    return EdgeColoring(g, np.where(rng.random(g.edge_count) < p, 0, 1))


def main_theorem_suite(
    instances: int, seed: int = 0, ks: Sequence[int] = (0, 1, 2), max_vertices: int = 10, node_budget: Optional[int] = None
) -> VerificationReport:
    """Random graphs with an automorphism and a coloring: whenever every meta-cycle is shorter
    than 2k + 3, the witness finder must return a path with at most k changes and the orbit
    objective must be at most k."""
    violations, tested, inconclusive, worst = [], 0, 0, -1
    with Timing(enabled=False) as t:
        for i in range(instances):
            rng = rng_for(seed, i)
            g, phi = random_symmetric_graph(rng, max_vertices)
            c = _rng_coloring(g, rng)
            k = ks[i % len(ks)]
            search = longest_cycle_length(build(g, c), node_budget)
            if search.kind == "lower_bound":
                inconclusive += 1
                continue
            if search.kind == "exact" and search.length >= 2 * k + 3:
                continue
            tested += 1
            result = theorem_witness(g, c, phi, k, node_budget)
            value = orbit_objective(g, c, phi).best_switches
            worst = max(worst, value)
            ok = (
                result.kind == "witness"
                and result.path.switches <= k
                and result.path.start == result.u
                and result.path.end == phi(result.u)
                and value <= k
            )
            if not ok:
                violations.append({"instance": i, "k": k, "result": result.to_json(), "orbit": value, "coloring": coloring_to_json(c)})
    dblog(f"main theorem: {tested}/{instances} instances met the hypothesis", enable=settings.LOG_HARNESS)
    return VerificationReport(
        f"random graphs <= {max_vertices} vertices",
        "sampled",
        instances,
        seed,
        worst,
        None,
        tuple(violations),
        t.ms,
        None,
        {"tested": tested, "inconclusive": inconclusive},
    )


def induced_cycle_suite(ns: Sequence[int] = (4, 5, 6), samples: int = 100, seed: int = 0, node_budget: Optional[int] = None) -> VerificationReport:
    "Colorings of Q_n with antipodal objective k > 1 must have an induced meta-cycle of length >= max(4, 2k - 2)."
    violations, tested, inconclusive, worst = [], 0, 0, -1
    with Timing(enabled=False) as t:
        for i in range(samples):
            n = ns[i % len(ns)]
            g = hypercube(n)
            c = random_coloring(g, 0.5, seed, i)
            cg = build(g, c)
            k = orbit_objective(g, c, antipodal_automorphism(n), cg).best_switches
            worst = max(worst, k)
            if k <= 1:
                continue
            tested += 1
            found = longest_induced_cycle(cg, max(4, 2 * k - 2), node_budget)
            if found.kind == "budget_exhausted":
                inconclusive += 1
            elif not found.found:
                violations.append({"sample": i, "n": n, "k": k, "coloring": coloring_to_json(c)})
    return VerificationReport(
        f"hypercube:{list(ns)} induced cycles", "sampled", samples, seed, worst, None, tuple(violations), t.ms, None,
        {"tested": tested, "inconclusive": inconclusive},
    )


def torus_suite(a: int, b: int, samples: int, seed: int = 0) -> VerificationReport:
    "find_pair on random colorings of C_2a x C_2b, with the diagonal charging and averaging checks."
    phi = farthest_point_automorphism([2 * a, 2 * b])
    violations, worst = [], -1
    with Timing(enabled=False) as t:
        for i in range(samples):
            tc = random_torus_coloring(a, b, seed, i)
            problems = []
            try:
                pair = find_pair(tc)
            except InternalAssertion as e:
                violations.append({"sample": i, "problems": [str(e)], "coloring": coloring_to_json(tc.coloring)})
                continue
            path = make_switch_path(tc.graph, tc.coloring, pair.path.vertices)
            worst = max(worst, path.switches)
            if pair.v != phi(pair.u):
                problems.append("endpoints are not at offset (a, b)")
            if distance(tc.graph, pair.u, pair.v) != a + b:
                problems.append("endpoints are not at distance a + b")
            if path.switches > b - 1:
                problems.append(f"{path.switches} switches > {b - 1}")
            if orbit_objective(tc.graph, tc.coloring, phi).best_switches > path.switches:
                problems.append("orbit objective above the constructed path")
            if not pair.proper:
                charges = charge_table(tc, pair.table)
                if any(asc + desc > 2 for asc, desc in charges.values()):
                    problems.append("a 4-cycle is charged more than 2 changes")
                if sum(asc + desc for asc, desc in charges.values()) != sum(d.switches for d in pair.table):
                    problems.append("charges do not add up to the diagonal switches")
                if sum(d.switches for d in pair.table) > a * len(pair.table):
                    problems.append(f"mean diagonal switches above {a}")
            if problems:
                violations.append({"sample": i, "problems": problems, "coloring": coloring_to_json(tc.coloring)})
    return VerificationReport(
        f"product:{2 * a}x{2 * b} torus pairs", "sampled", samples, seed, worst, None, tuple(violations), t.ms, b - 1
    )


def metric_equivalence_suite(samples: int, seed: int = 0, max_vertices: int = 12) -> VerificationReport:
    "0/1 BFS switch counts against meta-distances between the components of both endpoints."
    violations = []
    with Timing(enabled=False) as t:
        for i in range(samples):
            rng = rng_for(seed, i)
            g = random_connected_graph(rng, max_vertices)
            c = _rng_coloring(g, rng)
            cg = build(g, c)
            dm = meta_distance_matrix(cg)
            vtc = cg.vertex_to_components
            for u in g.vertices():
                for v in g.vertices():
                    expected = dm[np.ix_(vtc[u], vtc[v])].min()
                    got = min_switches(g, c, u, v).switches
                    if got != expected:
                        violations.append({"sample": i, "u": u, "v": v, "bfs": got, "meta": float(expected)})
    return VerificationReport(
        f"random graphs <= {max_vertices} vertices", "sampled", samples, seed, None, None, tuple(violations), t.ms
    )


def antipodal_suite(n: int, samples: int, seed: int = 0) -> VerificationReport:
    """Random antipodal colorings of Q_n: some antipodal pair should be joined by a
    monochromatic path, and some by a geodesic with at most one change."""
    g, phi = hypercube(n), antipodal_automorphism(n)
    violations, worst, worst_geodesic, worst_coloring = [], -1, -1, None
    with Timing(enabled=False) as t:
        for i in range(samples):
            c = random_antipodal_coloring(n, seed, i)
            value = orbit_objective(g, c, phi).best_switches
            geodesic = min(geodesic_min_switches(g, c, u).switches for u in g.vertices())
            if value > worst:
                worst, worst_coloring = value, coloring_to_json(c)
            worst_geodesic = max(worst_geodesic, geodesic)
            if value > 0 or geodesic > 1:
                violations.append({"sample": i, "switches": value, "geodesic": geodesic, "coloring": coloring_to_json(c)})
    return VerificationReport(
        f"hypercube:{n} antipodal colorings", "sampled", samples, seed, worst, worst_coloring, tuple(violations), t.ms, 0,
        {"worst_geodesic": worst_geodesic},
    )
