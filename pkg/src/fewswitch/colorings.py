import inspect
import json
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from fewswitch.core import (
    BLUE,
    COLOR_LETTERS,
    RED,
    InvalidParameter,
    color_of_letter,
    dblog,
    rng_for,
    settings,
)
from fewswitch.graphs import (
    Graph,
    ProductSpec,
    cycle,
    graph_from_spec,
    graph_to_spec,
    hypercube,
    parse_graph_spec,
    product_of_cycles,
    product_spec_of,
    require_hypercube,
)

# =================================
#   EdgeColoring
# =================================


class EdgeColoring:
    """A total red/blue assignment over the edge ids of one graph.

    `colors[e]` is `RED` (0) or `BLUE` (1) for edge id `e`; the array is read-only.
    """

    def __init__(self, graph: Graph, colors):
        arr = np.array(colors, dtype=np.uint8).reshape(-1)
        if arr.shape[0] != graph.edge_count:
            raise InvalidParameter(f"coloring has {arr.shape[0]} entries, graph has {graph.edge_count} edges")
        if arr.size and arr.max() > BLUE:
            raise InvalidParameter("colors must be 0 (red) or 1 (blue)")
        arr.setflags(write=False)
        self.graph = graph
        self.colors = arr

    def __len__(self):
        return self.colors.shape[0]

    def edge_color(self, e: int) -> int:
        return int(self.colors[e])

    def color(self, u: int, v: int) -> int:
        return int(self.colors[self.graph.edge_id(u, v)])

    def letters(self) -> str:
        return "".join(COLOR_LETTERS[c] for c in self.colors.tolist())

    def mask(self) -> int:
        "Inverse of `coloring_from_mask`."
        return sum(1 << e for e, c in enumerate(self.colors.tolist()) if c == BLUE)

    @property
    def red_count(self) -> int:
        return int((self.colors == RED).sum())

    def check_graph(self, g: Graph):
        if self.graph != g:
            raise InvalidParameter(f"coloring belongs to {self.graph!r}, not {g!r}")

    def __eq__(self, other):
        if not isinstance(other, EdgeColoring):
            return False
        return self.graph == other.graph and np.array_equal(self.colors, other.colors)

    def __hash__(self):
        return hash((self.graph, self.colors.tobytes()))

    def __repr__(self):
        shown = self.letters() if len(self) <= 32 else self.letters()[:32] + "..."
        return f"<EdgeColoring: {self.graph!r} {shown}>"


def monochromatic_coloring(g: Graph, color: int = RED) -> EdgeColoring:
    if color not in (RED, BLUE):
        raise InvalidParameter(f"unknown color {color}")
    return EdgeColoring(g, np.full(g.edge_count, color, dtype=np.uint8))


def coloring_from_mask(g: Graph, mask: int) -> EdgeColoring:
    "Bit e of `mask` is the color of edge e."
    if not 0 <= mask < 1 << g.edge_count:
        raise InvalidParameter(f"mask {mask} out of range for {g.edge_count} edges")
    bits = (np.int64(mask) >> np.arange(g.edge_count, dtype=np.int64)) & 1 if g.edge_count <= 62 else [mask >> e & 1 for e in range(g.edge_count)]
    return EdgeColoring(g, bits)


def _directions(g: Graph) -> np.ndarray:
    e = g.edge_array
    return np.log2(e[:, 0] ^ e[:, 1]).astype(np.int64)


def _popcount(x: np.ndarray, bits: int) -> np.ndarray:
    return sum((x >> i) & 1 for i in range(bits)) if bits else np.zeros_like(x)


def _block_bits(x: np.ndarray, lo: int, hi: int) -> np.ndarray:
    "Bits lo..hi-1 of x, shifted down to start at bit 0."
    return (x >> lo) & ((1 << (hi - lo)) - 1)


# =================================
#   Families
# =================================


def directional_coloring(k: int) -> Tuple[Graph, EdgeColoring]:
    "Q_{2k}: the first k directions red, the last k blue."
    if k < 1 or 2 * k > settings.MAX_HYPERCUBE_DIM:
        raise InvalidParameter(f"directional coloring needs 1 <= k <= {settings.MAX_HYPERCUBE_DIM // 2}, got {k}")
    g = hypercube(2 * k)
    return g, EdgeColoring(g, np.where(_directions(g) < k, RED, BLUE))


def two_cube_coloring(m: int, k: int) -> Tuple[Graph, EdgeColoring]:
    """Q_{m+k} with a red m-cube at the all-zeros setting of the last k coordinates and a blue one at all-ones.

    - first m/2 directions: red unless the last k coordinates are all ones;
    - next m/2 directions: red only when the last k coordinates are all zeros;
    - last k directions: red when setting the edge's coordinate to one leaves an
      even number of ones among the last k coordinates.
    """
    if m < 2 or m % 2:
        raise InvalidParameter(f"m must be a positive even integer, got {m}")
    if k < 1 or m + k > settings.MAX_HYPERCUBE_DIM:
        raise InvalidParameter(f"two-cube coloring needs k >= 1 and m + k <= {settings.MAX_HYPERCUBE_DIM}, got {m=} {k=}")
    g = hypercube(m + k)
    low, high = g.edge_array[:, 0], g.edge_array[:, 1]
    direction = _directions(g)
    tail = _block_bits(low, m, m + k)
    red = np.where(
        direction < m // 2,
        tail != (1 << k) - 1,
        np.where(direction < m, tail == 0, _popcount(_block_bits(high, m, m + k), k) % 2 == 0),
    )
    return g, EdgeColoring(g, np.where(red, RED, BLUE))


def double_level_coloring(k: int) -> Tuple[Graph, EdgeColoring]:
    """Q_{2k}; an edge in the first (last) k directions is red when setting its coordinate
    to one gives an odd sum over the first (last) k coordinates."""
    if k < 2 or 2 * k > settings.MAX_HYPERCUBE_DIM:
        raise InvalidParameter(f"double-level coloring needs 2 <= k <= {settings.MAX_HYPERCUBE_DIM // 2}, got {k}")
    g = hypercube(2 * k)
    high = g.edge_array[:, 1]
    direction = _directions(g)
    first = _popcount(_block_bits(high, 0, k), k)
    last = _popcount(_block_bits(high, k, 2 * k), k)
    red = np.where(direction < k, first % 2 == 1, last % 2 == 1)
    return g, EdgeColoring(g, np.where(red, RED, BLUE))


def level_alternating_coloring(n: int) -> Tuple[Graph, EdgeColoring]:
    "Q_n with the edge between levels i and i+1 red iff i is even."
    g = hypercube(n)
    level = _popcount(g.edge_array[:, 0], n)
    return g, EdgeColoring(g, np.where(level % 2 == 0, RED, BLUE))


def proper_cycle_coloring(m: int) -> Tuple[Graph, EdgeColoring]:
    "C_m with edge {i, i+1} colored i mod 2."
    if m < 4 or m % 2:
        raise InvalidParameter(f"a proper 2-coloring of C_m needs an even m >= 4, got {m}")
    g = cycle(m)
    colors = np.zeros(g.edge_count, dtype=np.uint8)
    for i in range(m):
        colors[g.edge_id(i, (i + 1) % m)] = i % 2
    return g, EdgeColoring(g, colors)


def random_coloring(g: Graph, p: float = 0.5, seed: int = 0, index: int = 0) -> EdgeColoring:
    "Each edge red with probability p, drawn from `rng_for(seed, index)`."
    if not 0.0 <= p <= 1.0:
        raise InvalidParameter(f"p must lie in [0, 1], got {p}")
    draws = rng_for(seed, index).random(g.edge_count)
    return EdgeColoring(g, np.where(draws < p, RED, BLUE))


def antipodal_edge_ids(g: Graph) -> np.ndarray:
    "Edge id of the antipodal image of every edge of a hypercube."
    n = require_hypercube(g)
    full = (1 << n) - 1
    return np.array([g.edge_id(u ^ full, v ^ full) for u, v in g.edges], dtype=np.int64)


def random_antipodal_coloring(n: int, seed: int = 0, index: int = 0) -> EdgeColoring:
    "Random coloring of Q_n in which every antipodal pair of edges gets different colors."
    if n < 2:
        raise InvalidParameter(f"Q_{n} has no antipodal coloring")
    g = hypercube(n)
    partner = antipodal_edge_ids(g)
    draws = rng_for(seed, index).integers(0, 2, size=g.edge_count)
    rep = np.arange(g.edge_count) < partner
    colors = np.where(rep, draws, 1 - draws[partner])
    return EdgeColoring(g, colors)


def longest_cycle_coloring(spec: Union[ProductSpec, Sequence[int]]) -> Tuple[Graph, EdgeColoring]:
    """Alternates colors along the longest factor and paints the rest red.

    Projecting onto that factor shows every u to farthest(u) path needs max(a_i)/2 - 1 changes.
    """
    spec = ProductSpec.of(spec)
    g = product_of_cycles(spec)
    lengths = spec.cycle_lengths
    axis = int(np.argmax(lengths))
    stride = int(np.prod(lengths[:axis], dtype=np.int64))
    a = lengths[axis]
    low, high = g.edge_array[:, 0], g.edge_array[:, 1]
    x_low, x_high = (low // stride) % a, (high // stride) % a
    along = x_low != x_high
    # the wrap-around edge {a-1, 0} has lower coordinate a-1
    start = np.where((x_low == 0) & (x_high == a - 1) & (a > 2), a - 1, np.minimum(x_low, x_high))
    return g, EdgeColoring(g, np.where(along, start % 2, RED).astype(np.uint8))


# =================================
#   Predicates
# =================================


def is_properly_colored_4cycle(g: Graph, c: EdgeColoring, quad: Sequence[int]) -> bool:
    c.check_graph(g)
    if len(quad) != 4 or len(set(quad)) != 4 or not all(g.has_edge(quad[i], quad[(i + 1) % 4]) for i in range(4)):
        raise InvalidParameter(f"{list(quad)} is not a 4-cycle")
    c0, c1, c2, c3 = (c.color(quad[i], quad[(i + 1) % 4]) for i in range(4))
    return c0 == c2 and c1 == c3 and c0 != c1


class SimpleCheck(NamedTuple):
    simple: bool
    witness: Optional[Tuple[int, int, int, int]] = None

    def __bool__(self):
        return self.simple


def four_cycles(qn: Graph):
    "Every 4-cycle of a hypercube, one per direction pair and base vertex."
    n = require_hypercube(qn)
    for i in range(n):
        for j in range(i + 1, n):
            bi, bj = 1 << i, 1 << j
            for u in range(qn.vertex_count):
                if not u & (bi | bj):
                    yield (u, u | bi, u | bi | bj, u | bj)


def is_simple(qn: Graph, c: EdgeColoring) -> SimpleCheck:
    require_hypercube(qn)
    c.check_graph(qn)
    for quad in four_cycles(qn):
        if is_properly_colored_4cycle(qn, c, quad):
            return SimpleCheck(False, quad)
    return SimpleCheck(True)


def is_antipodal_coloring(qn: Graph, c: EdgeColoring) -> bool:
    partner = antipodal_edge_ids(qn)
    c.check_graph(qn)
    return bool(np.all(c.colors != c.colors[partner]))


# =================================
#   Files
# =================================


def coloring_to_json(c: EdgeColoring) -> dict:
    return {"graph": graph_to_spec(c.graph), "colors": c.letters()}


def coloring_from_json(obj: dict, graph: Optional[Graph] = None) -> EdgeColoring:
    if graph is None:
        if "graph" not in obj:
            raise InvalidParameter("coloring file has no graph and none was given")
        graph = graph_from_spec(obj["graph"])
    colors = obj.get("colors")
    if isinstance(colors, str):
        colors = [color_of_letter(ch) for ch in colors]
    elif not isinstance(colors, list):
        raise InvalidParameter("colors must be a letter string or a list of 0/1")
    return EdgeColoring(graph, colors)


def save_coloring(c: EdgeColoring, path: str):
    with open(path, "w") as f:
        json.dump(coloring_to_json(c), f)
        f.write("\n")


def load_coloring(path: str) -> EdgeColoring:
    with open(path) as f:
        try:
            obj = json.load(f)
        except json.JSONDecodeError as e:
            raise InvalidParameter(f"{path} is not a JSON coloring file: {e}") from e
    return coloring_from_json(obj)


# =================================
#   Registry
# =================================


def _as_graph(graph: Union[Graph, str]) -> Graph:
    return parse_graph_spec(graph) if isinstance(graph, str) else graph


class FamilySet:
    "Named coloring generators, each returning `(Graph, EdgeColoring)`."

    def register(self, name, aliases=()):
        def wrap(f):
            assert name not in vars(self)
            setattr(self, name, f)
            for a in aliases:
                setattr(self, a, f)
            return f

        return wrap

    def names(self) -> List[str]:
        return sorted(vars(self))

    def by_name(self, name: str) -> Callable:
        if name not in vars(self):
            raise InvalidParameter(f"unknown family {name!r}, expected one of {self.names()}")
        return vars(self)[name]

    def generate(self, name: str, **params) -> Tuple[Graph, EdgeColoring]:
        f = self.by_name(name)
        sig = inspect.signature(f)
        kwargs = {k: v for k, v in params.items() if k in sig.parameters and v is not None}
        missing = [p.name for p in sig.parameters.values() if p.default is inspect.Parameter.empty and p.name not in kwargs]
        if missing:
            raise InvalidParameter(f"family {name!r} needs {', '.join(missing)}")
        dblog(f"Generating {name} with {kwargs}", enable=settings.LOG_CLI > 1)
        return f(**kwargs)


family_set = FamilySet()


@family_set.register("directional")
def directional_family(k):
    return directional_coloring(k)


@family_set.register("two-cube")
def two_cube_family(m, k):
    return two_cube_coloring(m, k)


@family_set.register("double-level")
def double_level_family(k):
    return double_level_coloring(k)


@family_set.register("level-alternating")
def level_alternating_family(n):
    return level_alternating_coloring(n)


@family_set.register("proper-cycle")
def proper_cycle_family(m):
    return proper_cycle_coloring(m)


@family_set.register("random")
def random_family(graph, p=0.5, seed=0):
    g = _as_graph(graph)
    return g, random_coloring(g, p, seed)


@family_set.register("antipodal")
def antipodal_family(n, seed=0):
    c = random_antipodal_coloring(n, seed)
    return c.graph, c


@family_set.register("longest-cycle")
def longest_cycle_family(graph):
    return longest_cycle_coloring(product_spec_of(_as_graph(graph)))


@family_set.register("mono", aliases=("monochromatic",))
def mono_family(graph, color="R"):
    g = _as_graph(graph)
    return g, monochromatic_coloring(g, color_of_letter(color) if isinstance(color, str) else color)
