from collections import deque
from typing import Dict, FrozenSet, List, NamedTuple, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from fewswitch.colorings import EdgeColoring
from fewswitch.core import (
    BLUE,
    RED,
    InvalidParameter,
    color_letter,
    dblog,
    settings,
    unreachable,
)
from fewswitch.graphs import Automorphism, Graph

# =================================
#   Component graph
# =================================


class MetaVertex(NamedTuple):
    id: int
    color: int
    members: Tuple[int, ...]

    size = property(lambda self: len(self.members))

    def label(self, red_count: int) -> str:
        index = self.id if self.color == RED else self.id - red_count
        return f"{color_letter(self.color)}{index}({self.size})"


class ComponentGraph:
    """Monochromatic components of a colored graph and their intersection graph.

    Red components get ids `0..R-1` and blue components `R..R+B-1`, each color ordered
    by smallest member. `vertex_to_components[v]` is the `(red id, blue id)` pair of v.
    """

    def __init__(self, graph: Graph, coloring: EdgeColoring, meta_vertices, meta_edges, vertex_to_components):
        self.graph = graph
        self.coloring = coloring
        self.meta_vertices: Tuple[MetaVertex, ...] = tuple(meta_vertices)
        self.meta_edges: Tuple[Tuple[int, int], ...] = tuple(meta_edges)
        self.vertex_to_components: np.ndarray = vertex_to_components
        self.red_count = sum(1 for mv in self.meta_vertices if mv.color == RED)
        adjacency = [[] for _ in self.meta_vertices]
        for i, j in self.meta_edges:
            adjacency[i].append(j)
            adjacency[j].append(i)
        self.adjacency: Tuple[Tuple[int, ...], ...] = tuple(tuple(sorted(a)) for a in adjacency)

    @property
    def order(self) -> int:
        return len(self.meta_vertices)

    @property
    def blue_count(self) -> int:
        return self.order - self.red_count

    def component_of(self, v: int, color: int) -> int:
        self.graph.check_vertex(v)
        return int(self.vertex_to_components[v, color])

    def check_meta_vertex(self, a: int):
        if not hasattr(a, "__index__") or not 0 <= int(a) < self.order:
            raise InvalidParameter(f"invalid meta-vertex {a!r}, component graph has {self.order}")

    def __repr__(self):
        return f"<ComponentGraph: {self.red_count} red, {self.blue_count} blue, {len(self.meta_edges)} edges>"


def _color_components(n: int, edges: np.ndarray) -> Tuple[int, np.ndarray]:
    "Component labels numbered in order of smallest member."
    if n == 0:
        return 0, np.zeros(0, dtype=np.int64)
    mat = csr_matrix((np.ones(len(edges), dtype=np.int8), (edges[:, 0], edges[:, 1])), shape=(n, n))
    count, labels = connected_components(mat, directed=False)
    _, first = np.unique(labels, return_index=True)
    remap = np.empty(count, dtype=np.int64)
    remap[np.argsort(first, kind="stable")] = np.arange(count)
    return count, remap[labels]


def build(g: Graph, c: EdgeColoring) -> ComponentGraph:
    c.check_graph(g)
    n = g.vertex_count
    ids = np.zeros((n, 2), dtype=np.int64)
    metas: List[MetaVertex] = []
    offset = 0
    for color in (RED, BLUE):
        count, labels = _color_components(n, g.edge_array[c.colors == color])
        ids[:, color] = labels + offset
        order = np.argsort(labels, kind="stable")
        bounds = np.searchsorted(labels[order], np.arange(count + 1))
        for i in range(count):
            metas.append(MetaVertex(offset + i, color, tuple(order[bounds[i] : bounds[i + 1]].tolist())))
        offset += count
    edges = np.unique(ids, axis=0) if n else np.zeros((0, 2), dtype=np.int64)
    ids.setflags(write=False)
    cg = ComponentGraph(g, c, metas, [tuple(e) for e in edges.tolist()], ids)
    dblog(f"Built {cg!r}", enable=settings.LOG_SEARCH > 1)
    return cg


# =================================
#   Queries
# =================================


def image_component_set(cg: ComponentGraph, phi: Automorphism, a: int) -> FrozenSet[int]:
    "S(a): the components of either color that meet phi(a)."
    cg.check_meta_vertex(a)
    if len(phi.perm) != cg.graph.vertex_count:
        raise InvalidParameter(f"{phi!r} does not act on {cg.graph!r}")
    image = np.array(phi.image(cg.meta_vertices[a].members), dtype=np.int64)
    return frozenset(np.unique(cg.vertex_to_components[image]).tolist())


def is_connected(cg: ComponentGraph) -> bool:
    return cg.order == 0 or len(ball(cg, 0, cg.order)) == cg.order


def is_tree(cg: ComponentGraph) -> bool:
    return cg.order > 0 and len(cg.meta_edges) == cg.order - 1 and is_connected(cg)


def is_complete_bipartite(cg: ComponentGraph) -> bool:
    return cg.red_count > 0 and cg.blue_count > 0 and len(cg.meta_edges) == cg.red_count * cg.blue_count


def ball(cg: ComponentGraph, a: int, k: int) -> Dict[int, int]:
    "Closed meta-ball B_k(a) as {meta-vertex: distance}, in BFS order."
    cg.check_meta_vertex(a)
    dist = {a: 0}
    queue = deque([a])
    while queue:
        x = queue.popleft()
        if dist[x] == k:
            continue
        for y in cg.adjacency[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def meta_distance(cg: ComponentGraph, a: int, b: int):
    cg.check_meta_vertex(a)
    cg.check_meta_vertex(b)
    return ball(cg, a, cg.order).get(b, unreachable)


def meta_distance_matrix(cg: ComponentGraph) -> np.ndarray:
    "All-pairs meta-distances; `inf` marks unreachable pairs."
    if cg.order == 0:
        return np.zeros((0, 0))
    return shortest_path(_meta_matrix(cg), directed=False, unweighted=True)


def component_sizes(cg: ComponentGraph, color: int) -> List[int]:
    return [mv.size for mv in cg.meta_vertices if mv.color == color]


def largest_component(cg: ComponentGraph, color: int) -> MetaVertex:
    "Largest component of `color`, lowest id on ties."
    candidates = [mv for mv in cg.meta_vertices if mv.color == color]
    if not candidates:
        raise InvalidParameter(f"no {color_letter(color)} components")
    return max(candidates, key=lambda mv: (mv.size, -mv.id))


def to_networkx(cg: ComponentGraph) -> nx.Graph:
    G = nx.Graph()
    for mv in cg.meta_vertices:
        G.add_node(mv.id, color=color_letter(mv.color), size=mv.size)
    G.add_edges_from(cg.meta_edges)
    return G


def to_json(cg: ComponentGraph) -> dict:
    return {
        "vertices": [{"id": mv.id, "color": color_letter(mv.color), "members": list(mv.members)} for mv in cg.meta_vertices],
        "edges": [list(e) for e in cg.meta_edges],
    }


def export_dot(cg: ComponentGraph) -> str:
    lines = ["graph {"]
    for mv in cg.meta_vertices:
        lines.append(f'  {mv.id} [label="{mv.label(cg.red_count)}"];')
    for i, j in cg.meta_edges:
        lines.append(f"  {i} -- {j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# =================================
#   Cycle searches
# =================================


class CycleSearch(NamedTuple):
    kind: str
    length: int = 0
    cycle: Optional[Tuple[int, ...]] = None

    is_exact = property(lambda self: self.kind == "exact")

    @classmethod
    def exact(cls, length, cycle):
        return cls("exact", length, tuple(cycle))

    @classmethod
    def lower_bound(cls, length, cycle):
        return cls("lower_bound", length, tuple(cycle) if cycle else None)

    @classmethod
    def acyclic(cls):
        return cls("acyclic")

    def __repr__(self):
        return f"<CycleSearch: {self.kind} {self.length}>"


class InducedCycleSearch(NamedTuple):
    kind: str
    cycle: Optional[Tuple[int, ...]] = None

    found = property(lambda self: self.kind == "found")
    length = property(lambda self: len(self.cycle) if self.cycle else 0)

    @classmethod
    def found_cycle(cls, cycle):
        return cls("found", tuple(cycle))

    @classmethod
    def not_found(cls, best=None):
        return cls("not_found", tuple(best) if best else None)

    @classmethod
    def budget_exhausted(cls, best=None):
        return cls("budget_exhausted", tuple(best) if best else None)

    def __repr__(self):
        return f"<InducedCycleSearch: {self.kind} {self.length}>"


class _Budget:
    def __init__(self, limit: Optional[int]):
        self.limit = settings.NODE_BUDGET if limit is None else limit
        self.spent = 0

    def spend(self) -> bool:
        self.spent += 1
        return self.spent <= self.limit


def _longest_cycle_in_block(adj, block: Sequence[int], best: List, budget: _Budget) -> bool:
    """Backtracks over paths whose smallest vertex is the start. Updates `best` in place,
    returns False once the budget runs out."""
    members = sorted(block)
    for rank, s in enumerate(members):
        if len(members) - rank <= best[0]:
            break
        allowed = set(members[rank:])
        path, on_path = [s], {s}
        stack = [iter(adj[s])]
        while stack:
            for w in stack[-1]:
                if w in allowed and w not in on_path:
                    if not budget.spend():
                        return False
                    path.append(w)
                    on_path.add(w)
                    if len(path) >= 3 and s in adj[w] and len(path) > best[0]:
                        best[0], best[1] = len(path), tuple(path)
                        dblog(f"cycle of length {len(path)} from {s}", enable=settings.LOG_SEARCH)
                        if best[0] == len(members):
                            return True
                    stack.append(iter(adj[w]))
                    break
            else:
                stack.pop()
                on_path.discard(path.pop())
    return True


def longest_cycle_length(cg: ComponentGraph, node_budget: Optional[int] = None) -> CycleSearch:
    """Exact longest meta-cycle when the backtracking finishes within `node_budget` expanded
    nodes, otherwise the best cycle found as a lower bound."""
    parts = connected_components(_meta_matrix(cg), directed=False)[0] if cg.order else 0
    if len(cg.meta_edges) == cg.order - parts:
        return CycleSearch.acyclic()
    budget = _Budget(node_budget)
    best = [0, None]
    blocks = sorted((sorted(b) for b in nx.biconnected_components(to_networkx(cg)) if len(b) >= 3), key=len, reverse=True)
    for block in blocks:
        if len(block) <= best[0]:
            break
        if not _longest_cycle_in_block(cg.adjacency, block, best, budget):
            dblog(f"node budget {budget.limit} exhausted, best {best[0]}", enable=settings.LOG_SEARCH)
            return CycleSearch.lower_bound(best[0], best[1])
    return CycleSearch.exact(best[0], best[1])


def _meta_matrix(cg: ComponentGraph) -> csr_matrix:
    e = np.array(cg.meta_edges, dtype=np.int64).reshape(-1, 2)
    return csr_matrix((np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(cg.order, cg.order))


def longest_induced_cycle(cg: ComponentGraph, min_len: int, node_budget: Optional[int] = None) -> InducedCycleSearch:
    """First induced meta-cycle with at least `min_len` vertices.

    Grows chordless paths from each start s over vertices larger than s; `touch[v]` counts the
    path vertices other than s adjacent to v, so a vertex may extend the path only if it touches
    the current end and nothing earlier.
    """
    if min_len < 4:
        raise InvalidParameter(f"component graphs are bipartite, min_len must be >= 4, got {min_len}")
    adj = cg.adjacency
    budget = _Budget(node_budget)
    best: List = [()]
    for s in range(cg.order):
        if cg.order - s < min_len:
            break
        touch = [0] * cg.order
        path, on_path = [s], {s}
        stack = [iter(adj[s])]
        while stack:
            for w in stack[-1]:
                if w <= s or w in on_path or touch[w] != (0 if len(path) == 1 else 1):
                    continue
                if not budget.spend():
                    return InducedCycleSearch.budget_exhausted(best[0])
                if len(path) >= 3 and s in adj[w]:
                    cyc = path + [w]
                    if len(cyc) > len(best[0]):
                        best[0] = tuple(cyc)
                    if len(cyc) >= min_len:
                        dblog(f"induced cycle {cyc}", enable=settings.LOG_SEARCH)
                        return InducedCycleSearch.found_cycle(cyc)
                    continue
                if len(path) >= 2 and s in adj[w]:
                    continue
                path.append(w)
                on_path.add(w)
                for y in adj[w]:
                    touch[y] += 1
                stack.append(iter(adj[w]))
                break
            else:
                stack.pop()
                x = path.pop()
                on_path.discard(x)
                if x != s:
                    for y in adj[x]:
                        touch[y] -= 1
    return InducedCycleSearch.not_found(best[0])
