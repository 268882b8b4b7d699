from collections import deque
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from fewswitch.colorings import EdgeColoring
from fewswitch.compgraph import (
    ComponentGraph,
    ball,
    build,
    image_component_set,
    longest_cycle_length,
    meta_distance_matrix,
)
from fewswitch.core import (
    COLOR_LETTERS,
    InternalAssertion,
    InvalidParameter,
    Unreachable,
    dblog,
    loop_erase,
    settings,
    unreachable,
)
from fewswitch.graphs import Automorphism, Graph, is_connected, require_hypercube

# =================================
#   Paths
# =================================


class SwitchPath(NamedTuple):
    vertices: Tuple[int, ...]
    switches: int
    colors: Tuple[int, ...]

    start = property(lambda self: self.vertices[0])
    end = property(lambda self: self.vertices[-1])
    length = property(lambda self: len(self.colors))

    def letters(self) -> str:
        return "".join(COLOR_LETTERS[x] for x in self.colors)

    def __repr__(self):
        return f"<SwitchPath: {self.start}->{self.end} len={self.length} switches={self.switches}>"


def count_switches(colors: Sequence[int]) -> int:
    return sum(1 for x, y in zip(colors, colors[1:]) if x != y)


def make_switch_path(g: Graph, c: EdgeColoring, vertices: Sequence[int]) -> SwitchPath:
    if not vertices:
        raise InvalidParameter("a path needs at least one vertex")
    colors = []
    for x, y in zip(vertices, vertices[1:]):
        if not g.has_edge(x, y):
            raise InvalidParameter(f"({x}, {y}) is not an edge")
        colors.append(c.color(x, y))
    return SwitchPath(tuple(vertices), count_switches(colors), tuple(colors))


def path_to_json(path: SwitchPath, phi_u: Optional[int] = None) -> dict:
    return {
        "u": path.start,
        "phi_u": path.end if phi_u is None else phi_u,
        "switches": path.switches,
        "vertices": list(path.vertices),
        "colors": path.letters(),
    }


def walk_components(cg: ComponentGraph, path: SwitchPath) -> List[int]:
    "Meta-vertices a path passes through, one per monochromatic run."
    walk: List[int] = []
    for x, col in zip(path.vertices, path.colors):
        comp = int(cg.vertex_to_components[x, col])
        if not walk or walk[-1] != comp:
            walk.append(comp)
    return walk


def _zero_one_bfs(g: Graph, c: EdgeColoring, u: int, v: int, step_ok: Optional[Callable[[int, int], bool]] = None):
    """0/1 BFS over (vertex, color of the last edge) states; both colors start free at u.
    Returns the vertex walk of an optimal route, or None if v is unreachable."""
    n = g.vertex_count
    dist = np.full(2 * n, np.iinfo(np.int64).max, dtype=np.int64)
    parent = np.full(2 * n, -1, dtype=np.int64)
    queue = deque()
    for col in (0, 1):
        dist[2 * u + col] = 0
        queue.append(2 * u + col)
    colors = c.colors
    while queue:
        state = queue.popleft()
        x, last = divmod(state, 2)
        d = dist[state]
        for y, e in g.incidence[x]:
            if step_ok is not None and not step_ok(x, y):
                continue
            col = int(colors[e])
            nxt, w = 2 * y + col, int(col != last)
            if d + w < dist[nxt]:
                dist[nxt] = d + w
                parent[nxt] = state
                if w:
                    queue.append(nxt)
                else:
                    queue.appendleft(nxt)
    end = 2 * v if dist[2 * v] <= dist[2 * v + 1] else 2 * v + 1
    if parent[end] < 0 and v != u:
        return None
    walk = []
    state = end
    while state >= 0 and not (state // 2 == u and parent[state] < 0):
        walk.append(state // 2)
        state = int(parent[state])
    walk.append(u)
    return walk[::-1], int(dist[end])


def min_switches(g: Graph, c: EdgeColoring, u: int, v: int) -> Union[SwitchPath, Unreachable]:
    "Fewest color changes from u to v; `unreachable` when they lie in different components."
    c.check_graph(g)
    g.check_vertex(u)
    g.check_vertex(v)
    if u == v:
        return SwitchPath((u,), 0, ())
    found = _zero_one_bfs(g, c, u, v)
    if found is None:
        return unreachable
    walk, best = found
    path = make_switch_path(g, c, loop_erase(walk))
    assert path.switches == best, f"loop erasure changed the switch count {best} -> {path.switches}"
    return path


def geodesic_min_switches(qn: Graph, c: EdgeColoring, u: int) -> SwitchPath:
    "Fewest color changes over the length-n paths from u to its antipode."
    n = require_hypercube(qn)
    c.check_graph(qn)
    qn.check_vertex(u)
    target = u ^ ((1 << n) - 1)
    # only flip coordinates where x still agrees with u
    walk, best = _zero_one_bfs(qn, c, u, target, step_ok=lambda x, y: not (x ^ u) & (x ^ y))
    path = make_switch_path(qn, c, walk)
    assert path.length == n and path.switches == best
    return path


# =================================
#   Orbit objective
# =================================


def orbit_pair_array(cg: ComponentGraph, phi: Automorphism) -> np.ndarray:
    """min_switches(u, phi(u)) for every u as a float array, `inf` where unreachable.

    A path with s changes walks through s + 1 components, so the value is the smallest
    meta-distance between a component of u and a component of phi(u).
    """
    if cg.graph.vertex_count == 0:
        return np.zeros(0)
    dm = meta_distance_matrix(cg)
    red, blue = cg.vertex_to_components[:, 0], cg.vertex_to_components[:, 1]
    perm = np.asarray(phi.perm, dtype=np.int64)
    return np.minimum.reduce([dm[red, red[perm]], dm[red, blue[perm]], dm[blue, red[perm]], dm[blue, blue[perm]]])


def orbit_pair_switches(g: Graph, c: EdgeColoring, phi: Automorphism, cg: Optional[ComponentGraph] = None) -> List:
    cg = build(g, c) if cg is None else cg
    return [unreachable if np.isinf(x) else int(x) for x in orbit_pair_array(cg, phi)]


class OrbitObjectiveResult(NamedTuple):
    best_switches: int
    witness_vertex: int
    path: SwitchPath

    def to_json(self) -> dict:
        return {"best_switches": self.best_switches, **path_to_json(self.path)}


def orbit_objective(g: Graph, c: EdgeColoring, phi: Automorphism, cg: Optional[ComponentGraph] = None) -> OrbitObjectiveResult:
    "min over u of min_switches(u, phi(u)); ties go to the lowest u."
    c.check_graph(g)
    cg = build(g, c) if cg is None else cg
    values = orbit_pair_array(cg, phi)
    if not values.size or np.all(np.isinf(values)):
        raise InvalidParameter("no vertex u is connected to phi(u)")
    u = int(np.argmin(values))
    path = min_switches(g, c, u, phi(u))
    if path.switches != int(values[u]):
        raise InternalAssertion(f"meta-distance {values[u]} disagrees with 0/1 BFS {path.switches} at u={u}", payload=path)
    return OrbitObjectiveResult(path.switches, u, path)


# =================================
#   Witness finder
# =================================


class WitnessStep(NamedTuple):
    a: int
    ball_size: int
    x_size: int
    h_size: int
    cut: Optional[int]


class WitnessResult(NamedTuple):
    kind: str
    u: Optional[int] = None
    path: Optional[SwitchPath] = None
    cycle: Optional[Tuple[int, ...]] = None
    trace: Tuple[WitnessStep, ...] = ()
    reason: str = ""

    @classmethod
    def witness(cls, u, path, trace):
        return cls("witness", u, path, trace=tuple(trace))

    @classmethod
    def hypothesis_violated(cls, cycle):
        return cls("hypothesis_violated", cycle=tuple(cycle))

    @classmethod
    def failure(cls, reason, trace=()):
        return cls("failure", trace=tuple(trace), reason=reason)

    def to_json(self) -> dict:
        out = {"kind": self.kind, "trace": [s._asdict() for s in self.trace]}
        if self.path is not None:
            out.update(path_to_json(self.path))
        if self.cycle is not None:
            out["cycle"] = list(self.cycle)
        if self.reason:
            out["reason"] = self.reason
        return out

    def __repr__(self):
        detail = self.path if self.kind == "witness" else (self.cycle if self.cycle else self.reason)
        return f"<WitnessResult: {self.kind} {detail}>"


def _mono_bfs(g: Graph, c: EdgeColoring, x: int, color: int, targets) -> List[int]:
    "Shortest path from x along `color` edges to the first vertex in `targets`."
    if x in targets:
        return [x]
    parent = {x: None}
    queue = deque([x])
    while queue:
        y = queue.popleft()
        for z, e in g.incidence[y]:
            if z in parent or c.colors[e] != color:
                continue
            parent[z] = y
            if z in targets:
                path = [z]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                return path[::-1]
            queue.append(z)
    raise InternalAssertion(f"no {COLOR_LETTERS[color]} route from {x} to {sorted(targets)[:8]}")


def _meta_path(cg: ComponentGraph, a: int, b: int) -> List[int]:
    "Shortest meta-path, lowest-id parents first."
    parent = {a: None}
    queue = deque([a])
    while queue and b not in parent:
        x = queue.popleft()
        for y in cg.adjacency[x]:
            if y not in parent:
                parent[y] = x
                queue.append(y)
    path = [b]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    return path[::-1]


def stitch_meta_path(g: Graph, c: EdgeColoring, cg: ComponentGraph, meta: Sequence[int], u: int, v: int) -> SwitchPath:
    "Base path from u in meta[0] to v in meta[-1], crossing each component in turn."
    vtc = cg.vertex_to_components
    walk = [u]
    for here, there in zip(meta, meta[1:]):
        mv = cg.meta_vertices[here]
        shared = {x for x in mv.members if there in (vtc[x, 0], vtc[x, 1])}
        walk += _mono_bfs(g, c, walk[-1], mv.color, shared)[1:]
    last = cg.meta_vertices[meta[-1]]
    walk += _mono_bfs(g, c, walk[-1], last.color, {v})[1:]
    return make_switch_path(g, c, loop_erase(walk))


def _region(cg: ComponentGraph, start: int, blocked) -> set:
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in cg.adjacency[x]:
            if y not in seen and y not in blocked:
                seen.add(y)
                queue.append(y)
    return seen


def _menger_cut(cg: ComponentGraph, a: int, k: int, hubs) -> Tuple[int, int]:
    "Single vertex separating a from `hubs` inside B_{k+1}(a); returns (flow value, cut vertex)."
    inner = ball(cg, a, k + 1)
    D = nx.DiGraph()
    for x in inner:
        if x != a:
            D.add_edge((x, "in"), (x, "out"), capacity=1)
    for x in inner:
        for y in cg.adjacency[x]:
            if y in inner and y != a:
                D.add_edge((x, "out"), (y, "in"))
    for h in hubs:
        D.add_edge((h, "out"), "sink")
    value, (reachable, _) = nx.minimum_cut(D, (a, "out"), "sink")
    cut = [x for x in inner if x != a and (x, "in") in reachable and (x, "out") not in reachable]
    return int(value), (cut[0] if len(cut) == 1 else None)


def theorem_witness(
    g: Graph, c: EdgeColoring, phi: Automorphism, k: int, node_budget: Optional[int] = None
) -> WitnessResult:
    """Finds u with a path to phi(u) of at most k changes when every meta-cycle is shorter than 2k + 3.

    Starting from the largest component, each round either finds a component of S(a) inside
    B_k(a), or moves a one step towards the vertex cutting a off from the frontier H of the
    region X holding S(a); X shrinks every round.
    """
    if k < 0:
        raise InvalidParameter(f"k must be non-negative, got {k}")
    c.check_graph(g)
    if not is_connected(g):
        raise InvalidParameter(f"{g!r} is not connected")
    cg = build(g, c)
    search = longest_cycle_length(cg, node_budget)
    if search.kind != "acyclic" and search.length >= 2 * k + 3:
        return WitnessResult.hypothesis_violated(search.cycle)
    if search.kind == "lower_bound":
        return WitnessResult.failure(f"longest meta-cycle unresolved within budget (>= {search.length})")

    a = max(cg.meta_vertices, key=lambda mv: (mv.size, -mv.id)).id
    trace: List[WitnessStep] = []
    prev_region = None
    for _ in range(cg.order + 1):
        near = ball(cg, a, k)
        images = image_component_set(cg, phi, a)
        hits = [b for b in images if b in near]
        if hits:
            b = min(hits, key=lambda b: (near[b], b))
            trace.append(WitnessStep(a, len(near), 0, 0, None))
            targets = set(cg.meta_vertices[b].members)
            u = next(x for x in cg.meta_vertices[a].members if phi(x) in targets)
            path = stitch_meta_path(g, c, cg, _meta_path(cg, a, b), u, phi(u))
            if path.switches > k:
                raise InternalAssertion(f"stitched path has {path.switches} > {k} switches", payload=path)
            dblog(f"witness u={u} switches={path.switches} after {len(trace)} rounds", enable=settings.LOG_WITNESS)
            return WitnessResult.witness(u, path, trace)
        region = _region(cg, min(images), near)
        if not images <= region:
            return WitnessResult.failure(f"S({a}) is split by B_{k}({a})", trace)
        hubs = sorted(x for x in region if any(y in near for y in cg.adjacency[x]))
        value, cut = _menger_cut(cg, a, k, hubs)
        trace.append(WitnessStep(a, len(near), len(region), len(hubs), cut))
        dblog(f"a={a} |B|={len(near)} |X|={len(region)} |H|={len(hubs)} s={cut} flow={value}", enable=settings.LOG_WITNESS)
        if prev_region is not None and not region < prev_region:
            return WitnessResult.failure("region did not shrink", trace)
        if value != 1 or cut is None:
            raise InternalAssertion(f"expected a single cut vertex, got flow {value}", payload=trace)
        towards = ball(cg, cut, cg.order)
        a = min(y for y in cg.adjacency[a] if towards.get(y) == towards[a] - 1)
        prev_region = region
    return WitnessResult.failure("iteration limit reached", trace)
