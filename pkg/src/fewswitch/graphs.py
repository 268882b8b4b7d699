import math
import json
from collections import deque
from functools import cached_property
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from fewswitch.core import (
    InvalidParameter,
    NotAnAutomorphism,
    NotUniqueFarthest,
    settings,
    unreachable,
)

# =================================
#   Graph
# =================================


class Graph:
    """Immutable simple undirected graph.

    Edges are the pairs `(u, v)` with `u < v`, numbered `0..m-1` in lexicographic
    order; colorings and files rely on this numbering.
    """

    def __init__(self, vertex_count: int, edges: Iterable[Tuple[int, int]], spec: Optional[dict] = None):
        if vertex_count < 0:
            raise InvalidParameter(f"vertex_count must be non-negative, got {vertex_count}")
        pairs = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise InvalidParameter(f"edge ({u}, {v}) out of range for {vertex_count} vertices")
            if u == v:
                raise InvalidParameter(f"loop at vertex {u}")
            pairs.add((min(u, v), max(u, v)))
        self.vertex_count = vertex_count
        self.edges: Tuple[Tuple[int, int], ...] = tuple(sorted(pairs))
        self.edge_ids: Dict[Tuple[int, int], int] = {e: i for i, e in enumerate(self.edges)}
        adjacency = [[] for _ in range(vertex_count)]
        incidence = [[] for _ in range(vertex_count)]
        for i, (u, v) in enumerate(self.edges):
            adjacency[u].append(v)
            adjacency[v].append(u)
            incidence[u].append((v, i))
            incidence[v].append((u, i))
        self.adjacency: Tuple[Tuple[int, ...], ...] = tuple(tuple(sorted(a)) for a in adjacency)
        self.incidence: Tuple[Tuple[Tuple[int, int], ...], ...] = tuple(tuple(sorted(a)) for a in incidence)
        self.spec = spec if spec is not None else {"kind": "explicit", "n": vertex_count, "edges": [list(e) for e in self.edges]}

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_array(self) -> np.ndarray:
        "Edges as an (m, 2) int64 array, row i holding edge id i."
        arr = np.array(self.edges, dtype=np.int64).reshape(-1, 2)
        arr.setflags(write=False)
        return arr

    def vertices(self) -> range:
        return range(self.vertex_count)

    def edge_id(self, u: int, v: int) -> int:
        key = (min(u, v), max(u, v))
        if key not in self.edge_ids:
            raise InvalidParameter(f"({u}, {v}) is not an edge")
        return self.edge_ids[key]

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edge_ids

    def edge_pair(self, e: int) -> Tuple[int, int]:
        if not 0 <= e < self.edge_count:
            raise InvalidParameter(f"edge id {e} out of range")
        return self.edges[e]

    def neighbors(self, v: int) -> Tuple[int, ...]:
        self.check_vertex(v)
        return self.adjacency[v]

    def check_vertex(self, v: int):
        if not hasattr(v, "__index__") or isinstance(v, bool) or not 0 <= int(v) < self.vertex_count:
            raise InvalidParameter(f"invalid vertex id {v!r} for graph with {self.vertex_count} vertices")

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return False
        return self.vertex_count == other.vertex_count and self.edges == other.edges

    def __hash__(self):
        return hash((self.vertex_count, self.edges))

    def __repr__(self):
        return f"<Graph: {spec_string(self.spec)}, n={self.vertex_count}, m={self.edge_count}>"


class ProductSpec(NamedTuple):
    cycle_lengths: Tuple[int, ...]

    @classmethod
    def of(cls, spec: Union["ProductSpec", Sequence[int]]) -> "ProductSpec":
        lengths = tuple(int(a) for a in (spec.cycle_lengths if isinstance(spec, ProductSpec) else spec))
        if not lengths:
            raise InvalidParameter("empty product spec")
        if any(a < 2 for a in lengths):
            raise InvalidParameter(f"cycle lengths must be >= 2, got {list(lengths)}")
        return cls(lengths)

    @property
    def vertex_count(self) -> int:
        return math.prod(self.cycle_lengths)

    def __repr__(self):
        return f"<ProductSpec: {'x'.join(map(str, self.cycle_lengths))}>"


class Automorphism(NamedTuple):
    perm: Tuple[int, ...]
    order: Optional[int] = None

    def __call__(self, v: int) -> int:
        return self.perm[v]

    def image(self, vertices: Iterable[int]) -> List[int]:
        return [self.perm[v] for v in vertices]

    @property
    def is_involution(self) -> bool:
        return all(self.perm[self.perm[v]] == v for v in range(len(self.perm)))

    def __repr__(self):
        return f"<Automorphism: n={len(self.perm)}, order={self.order}>"


# =================================
#   Constructors
# =================================


def cycle(m: int) -> Graph:
    if m < 2:
        raise InvalidParameter(f"cycle length must be >= 2, got {m}")
    if m == 2:
        return Graph(2, [(0, 1)], spec={"kind": "cycle", "m": 2})
    return Graph(m, [(i, (i + 1) % m) for i in range(m)], spec={"kind": "cycle", "m": m})


def hypercube(n: int) -> Graph:
    if not 1 <= n <= settings.MAX_HYPERCUBE_DIM:
        raise InvalidParameter(f"hypercube dimension must be in [1, {settings.MAX_HYPERCUBE_DIM}], got {n}")
    edges = [(u, u | (1 << i)) for u in range(1 << n) for i in range(n) if not u >> i & 1]
    return Graph(1 << n, edges, spec={"kind": "hypercube", "n": n})


def coordinates(spec: Union[ProductSpec, Sequence[int]], v: int) -> Tuple[int, ...]:
    "Mixed-radix digits of `v`, least significant factor first."
    coords = []
    for a in ProductSpec.of(spec).cycle_lengths:
        v, x = divmod(v, a)
        coords.append(x)
    return tuple(coords)


def vertex_of(spec: Union[ProductSpec, Sequence[int]], coords: Sequence[int]) -> int:
    lengths = ProductSpec.of(spec).cycle_lengths
    if len(coords) != len(lengths):
        raise InvalidParameter(f"expected {len(lengths)} coordinates, got {len(coords)}")
    v = 0
    for a, x in zip(reversed(lengths), reversed(coords)):
        v = v * a + (x % a)
    return v


def product_of_cycles(spec: Union[ProductSpec, Sequence[int]]) -> Graph:
    spec = ProductSpec.of(spec)
    lengths = spec.cycle_lengths
    strides = [math.prod(lengths[:i]) for i in range(len(lengths))]
    edges = []
    for v in range(spec.vertex_count):
        coords = coordinates(spec, v)
        for i, (a, x) in enumerate(zip(lengths, coords)):
            w = v + (((x + 1) % a) - x) * strides[i]
            edges.append((v, w))
    return Graph(spec.vertex_count, edges, spec={"kind": "product", "cycles": list(lengths)})


def explicit_graph(n: int, edges: Iterable[Tuple[int, int]]) -> Graph:
    return Graph(n, edges)


def product_spec_of(g: Graph) -> ProductSpec:
    kind = g.spec["kind"]
    if kind == "hypercube":
        return ProductSpec((2,) * g.spec["n"])
    if kind == "cycle":
        return ProductSpec((g.spec["m"],))
    if kind == "product":
        return ProductSpec(tuple(g.spec["cycles"]))
    raise InvalidParameter(f"{g!r} is not a product of cycles")


def hypercube_dimension(g: Graph) -> Optional[int]:
    "Returns n when `g` is Q_n with bitmask vertex ids, otherwise None."
    if g.vertex_count < 2 or g.vertex_count & (g.vertex_count - 1):
        return None
    n = g.vertex_count.bit_length() - 1
    if g.edge_count != n * (1 << (n - 1)):
        return None
    if any((u ^ v) & ((u ^ v) - 1) for u, v in g.edges):
        return None
    return n


def require_hypercube(g: Graph) -> int:
    n = hypercube_dimension(g)
    if n is None:
        raise InvalidParameter(f"{g!r} is not a hypercube")
    return n


# =================================
#   Automorphisms
# =================================


def _perm_order(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    order = 1
    for v in range(len(perm)):
        length = 0
        while not seen[v]:
            seen[v] = True
            v = perm[v]
            length += 1
        if length:
            order = math.lcm(order, length)
    return order


def validate_automorphism(g: Graph, perm: Sequence[int]) -> Automorphism:
    perm = tuple(int(p) for p in perm)
    if len(perm) != g.vertex_count or sorted(perm) != list(range(g.vertex_count)):
        raise InvalidParameter(f"not a permutation of 0..{g.vertex_count - 1}")
    for u, v in g.edges:
        if not g.has_edge(perm[u], perm[v]):
            raise NotAnAutomorphism(f"edge ({u}, {v}) maps to non-edge ({perm[u]}, {perm[v]})", edge=(u, v))
    return Automorphism(perm, _perm_order(perm))


def identity_automorphism(g: Graph) -> Automorphism:
    return Automorphism(tuple(range(g.vertex_count)), 1)


def farthest_point_automorphism(spec: Union[ProductSpec, Sequence[int]]) -> Automorphism:
    spec = ProductSpec.of(spec)
    odd = [a for a in spec.cycle_lengths if a % 2]
    if odd:
        raise NotUniqueFarthest(f"odd cycle lengths {odd} have no unique farthest vertex")
    half = [a // 2 for a in spec.cycle_lengths]
    perm = [vertex_of(spec, [x + h for x, h in zip(coordinates(spec, v), half)]) for v in range(spec.vertex_count)]
    return validate_automorphism(product_of_cycles(spec), perm)


def antipodal_automorphism(n: int) -> Automorphism:
    return farthest_point_automorphism([2] * n)


def hypercube_automorphism(n: int, coordinate_perm: Sequence[int], flip_mask: int = 0) -> Automorphism:
    """Coordinate `i` of v moves to coordinate `coordinate_perm[i]`, then `flip_mask` is xor-ed in.

    Every automorphism of Q_n has this form.
    """
    if sorted(coordinate_perm) != list(range(n)):
        raise InvalidParameter(f"{list(coordinate_perm)} is not a permutation of the {n} coordinates")
    if not 0 <= flip_mask < 1 << n:
        raise InvalidParameter(f"flip mask {flip_mask} out of range for Q_{n}")
    perm = []
    for v in range(1 << n):
        w = 0
        for i in range(n):
            if v >> i & 1:
                w |= 1 << coordinate_perm[i]
        perm.append(w ^ flip_mask)
    return validate_automorphism(hypercube(n), perm)


# =================================
#   Distances
# =================================


def bfs_distances(g: Graph, source: int) -> List[Optional[int]]:
    g.check_vertex(source)
    dist: List[Optional[int]] = [None] * g.vertex_count
    dist[source] = 0
    queue = deque([source])
    while queue:
        x = queue.popleft()
        for y in g.adjacency[x]:
            if dist[y] is None:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def distance(g: Graph, u: int, v: int):
    g.check_vertex(u)
    g.check_vertex(v)
    d = bfs_distances(g, u)[v]
    return unreachable if d is None else d


def is_connected(g: Graph) -> bool:
    if g.vertex_count == 0:
        return True
    return all(d is not None for d in bfs_distances(g, 0))


# =================================
#   Graph specs
# =================================


def graph_from_spec(spec: dict) -> Graph:
    kind = spec.get("kind")
    if kind == "hypercube":
        return hypercube(int(spec["n"]))
    if kind == "cycle":
        return cycle(int(spec["m"]))
    if kind == "product":
        return product_of_cycles(spec["cycles"])
    if kind == "explicit":
        return explicit_graph(int(spec["n"]), [tuple(e) for e in spec["edges"]])
    raise InvalidParameter(f"unknown graph kind {kind!r}")


def graph_to_spec(g: Graph) -> dict:
    return dict(g.spec)


def spec_string(spec: dict) -> str:
    kind = spec["kind"]
    if kind == "hypercube":
        return f"hypercube:{spec['n']}"
    if kind == "cycle":
        return f"cycle:{spec['m']}"
    if kind == "product":
        return "product:" + "x".join(map(str, spec["cycles"]))
    return f"explicit:{spec['n']}"


def parse_graph_spec(text: str) -> Graph:
    "Parses 'hypercube:4', 'cycle:6', 'product:4x6' or a JSON graph spec."
    text = text.strip()
    if text.startswith("{"):
        return graph_from_spec(json.loads(text))
    kind, _, arg = text.partition(":")
    try:
        if kind == "hypercube":
            return hypercube(int(arg))
        if kind == "cycle":
            return cycle(int(arg))
        if kind == "product":
            return product_of_cycles([int(a) for a in arg.split("x")])
    except ValueError as e:
        if isinstance(e, InvalidParameter):
            raise
        raise InvalidParameter(f"malformed graph spec {text!r}") from e
    raise InvalidParameter(f"unknown graph spec {text!r}, expected hypercube:N, cycle:M or product:AxB")
