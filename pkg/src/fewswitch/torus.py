"""Few-switch pairs on the torus C_{2a} x C_{2b}.

Vertices are written `(x, y)` with `x` taken mod 2a and `y` mod 2b; the vertex id is
`x + 2a * y`, matching `graphs.product_of_cycles([2a, 2b])`.

A j-diagonal is a staircase of j two-edge steps from `(x, y)` to `(x + j, y + j)`
(ascending) or `(x - j, y + j)` (descending); each step turns either horizontally first or
vertically first. The lazy diagonal keeps its color as long as it can. Starting from a row
that holds a non-alternating 4-cycle, the 4a lazy a-diagonals share at most 4a^2 - 1 color
changes, so one of them changes at most a - 1 times; climbing b - a rows from its end reaches
the farthest vertex of its start with at most b - 1 changes.
"""

import itertools
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from fewswitch.colorings import EdgeColoring, monochromatic_coloring, random_coloring
from fewswitch.core import InternalAssertion, InvalidParameter, dblog, settings
from fewswitch.graphs import product_of_cycles, product_spec_of
from fewswitch.switchpaths import SwitchPath, count_switches, make_switch_path, path_to_json

ASCENDING = "ascending"
DESCENDING = "descending"

# =================================
#   Torus colorings
# =================================


class TorusColoring:
    def __init__(self, a: int, b: int, coloring: EdgeColoring):
        if not 1 <= a <= b or (a, b) == (1, 1):
            raise InvalidParameter(f"torus needs 1 <= a <= b and not a = b = 1, got {a=} {b=}")
        graph = product_of_cycles([2 * a, 2 * b])
        coloring.check_graph(graph)
        self.a, self.b = a, b
        self.graph, self.coloring = graph, coloring
        w, h = 2 * a, 2 * b
        self.horizontal = np.zeros((w, h), dtype=np.uint8)
        self.vertical = np.zeros((w, h), dtype=np.uint8)
        for x in range(w):
            for y in range(h):
                self.horizontal[x, y] = coloring.color(self.vertex(x, y), self.vertex(x + 1, y))
                self.vertical[x, y] = coloring.color(self.vertex(x, y), self.vertex(x, y + 1))

    @property
    def width(self) -> int:
        return 2 * self.a

    @property
    def height(self) -> int:
        return 2 * self.b

    def vertex(self, x: int, y: int) -> int:
        return x % self.width + self.width * (y % self.height)

    def coords(self, v: int) -> Tuple[int, int]:
        return v % self.width, v // self.width

    def h(self, x: int, y: int) -> int:
        "Color of (x, y) -- (x + 1, y)."
        return int(self.horizontal[x % self.width, y % self.height])

    def v(self, x: int, y: int) -> int:
        "Color of (x, y) -- (x, y + 1)."
        return int(self.vertical[x % self.width, y % self.height])

    def is_proper_cell(self, x: int, y: int) -> bool:
        "Whether the 4-cycle with lower-left corner (x, y) alternates."
        bottom, top, left, right = self.h(x, y), self.h(x, y + 1), self.v(x, y), self.v(x + 1, y)
        return bottom == top and left == right and bottom != left

    def __repr__(self):
        return f"<TorusColoring: C_{self.width} x C_{self.height}>"


def torus_coloring(a: int, b: int, coloring: Optional[EdgeColoring] = None) -> TorusColoring:
    if coloring is None:
        if not 1 <= a <= b or (a, b) == (1, 1):
            raise InvalidParameter(f"torus needs 1 <= a <= b and not a = b = 1, got {a=} {b=}")
        coloring = monochromatic_coloring(product_of_cycles([2 * a, 2 * b]))
    return TorusColoring(a, b, coloring)


def torus_of(c: EdgeColoring) -> TorusColoring:
    "Reads a and b off a coloring of product:2a x 2b."
    lengths = product_spec_of(c.graph).cycle_lengths
    if len(lengths) != 2 or any(n % 2 for n in lengths):
        raise InvalidParameter(f"{c.graph!r} is not a torus C_2a x C_2b")
    return TorusColoring(lengths[0] // 2, lengths[1] // 2, c)


def random_torus_coloring(a: int, b: int, seed: int = 0, index: int = 0, p: float = 0.5) -> TorusColoring:
    g = product_of_cycles([2 * a, 2 * b])
    return TorusColoring(a, b, random_coloring(g, p, seed, index))


# =================================
#   Diagonals
# =================================


class Diagonal(NamedTuple):
    kind: str
    start: Tuple[int, int]
    length: int
    corners: Tuple[bool, ...]
    switches: int
    vertices: Tuple[int, ...]
    colors: Tuple[int, ...]

    def __repr__(self):
        return f"<Diagonal: {self.kind} from {self.start} j={self.length} switches={self.switches}>"


def _step(tc: TorusColoring, x: int, y: int, dx: int, horizontal_first: bool):
    "Colors and end points of one two-edge step; (x, y) -> (x + dx, y + 1)."
    hx = x if dx > 0 else x - 1
    if horizontal_first:
        return (tc.h(hx, y), tc.v(x + dx, y)), ((x + dx, y), (x + dx, y + 1))
    return (tc.v(x, y), tc.h(hx, y + 1)), ((x, y + 1), (x + dx, y + 1))


def _check_diagonal_args(tc: TorusColoring, kind: str, j: int) -> int:
    if kind not in (ASCENDING, DESCENDING):
        raise InvalidParameter(f"kind must be {ASCENDING!r} or {DESCENDING!r}, got {kind!r}")
    if j < 1:
        raise InvalidParameter(f"diagonal length must be >= 1, got {j}")
    return 1 if kind == ASCENDING else -1


def diagonal_from_corners(tc: TorusColoring, start: Tuple[int, int], kind: str, corners: Sequence[bool]) -> Diagonal:
    dx = _check_diagonal_args(tc, kind, len(corners))
    x, y = start
    points, colors = [(x, y)], []
    for horizontal_first in corners:
        cols, ends = _step(tc, x, y, dx, horizontal_first)
        colors += cols
        points += ends
        x, y = ends[-1]
    return Diagonal(
        kind,
        (start[0] % tc.width, start[1] % tc.height),
        len(corners),
        tuple(corners),
        count_switches(colors),
        tuple(tc.vertex(px, py) for px, py in points),
        tuple(colors),
    )


def _greedy_corners(tc: TorusColoring, x: int, y: int, dx: int, j: int, first: bool) -> List[bool]:
    corners = [first]
    (_, last), ends = _step(tc, x, y, dx, first)
    x, y = ends[-1]
    for _ in range(1, j):
        (h1, h2), _ = _step(tc, x, y, dx, True)
        (v1, v2), _ = _step(tc, x, y, dx, False)
        cost_h = (h1 != last) + (h1 != h2)
        cost_v = (v1 != last) + (v1 != v2)
        choice = cost_h <= cost_v
        corners.append(choice)
        last = h2 if choice else v2
        x, y = x + dx, y + 1
    return corners


def lazy_diagonal(tc: TorusColoring, start: Tuple[int, int], kind: str, j: int) -> Diagonal:
    """Every step after the first takes the corner with fewer changes given the incoming
    color, horizontal first on ties. The first corner is the one with fewer changes inside
    the step; when both tie the one giving the smaller total wins, horizontal first."""
    dx = _check_diagonal_args(tc, kind, j)
    x, y = start
    (h1, h2), _ = _step(tc, x, y, dx, True)
    (v1, v2), _ = _step(tc, x, y, dx, False)
    if (h1 != h2) != (v1 != v2):
        firsts = [h1 == h2]
    else:
        firsts = [True, False]
    candidates = [diagonal_from_corners(tc, start, kind, _greedy_corners(tc, x, y, dx, j, f)) for f in firsts]
    return min(candidates, key=lambda d: d.switches)


def brute_force_diagonal(tc: TorusColoring, start: Tuple[int, int], kind: str, j: int) -> Diagonal:
    "Best of all 2^j corner sequences; the first one found wins ties."
    _check_diagonal_args(tc, kind, j)
    best = None
    for corners in itertools.product((True, False), repeat=j):
        d = diagonal_from_corners(tc, start, kind, corners)
        if best is None or d.switches < best.switches:
            best = d
    return best


def diagonal_table(tc: TorusColoring, row: int) -> List[Diagonal]:
    "The 4a lazy a-diagonals starting on `row`, by column, ascending before descending."
    return [lazy_diagonal(tc, (x, row), kind, tc.a) for x in range(tc.width) for kind in (ASCENDING, DESCENDING)]


def step_cells(tc: TorusColoring, d: Diagonal) -> List[Tuple[int, int]]:
    "Lower-left corner of the 4-cycle each step of `d` runs through."
    x, y = d.start
    if d.kind == ASCENDING:
        return [((x + i) % tc.width, (y + i) % tc.height) for i in range(d.length)]
    return [((x - i - 1) % tc.width, (y + i) % tc.height) for i in range(d.length)]


def charge_table(tc: TorusColoring, diagonals: Sequence[Diagonal]) -> Dict[Tuple[int, int], Tuple[int, int]]:
    """Color changes charged to each 4-cycle as (ascending, descending) totals.

    A step is charged its internal change plus the change where it meets the previous step.
    """
    table: Dict[Tuple[int, int], List[int]] = {}
    for d in diagonals:
        slot = 0 if d.kind == ASCENDING else 1
        for i, cell in enumerate(step_cells(tc, d)):
            charge = int(d.colors[2 * i] != d.colors[2 * i + 1])
            if i:
                charge += int(d.colors[2 * i] != d.colors[2 * i - 1])
            table.setdefault(cell, [0, 0])[slot] += charge
    return {cell: (asc, desc) for cell, (asc, desc) in table.items()}


# =================================
#   Pair finder
# =================================


class TorusPair(NamedTuple):
    u: int
    v: int
    path: SwitchPath
    proper: bool
    row: Optional[int] = None
    diagonal: Optional[Diagonal] = None
    table: Tuple[Diagonal, ...] = ()


def first_improper_cell(tc: TorusColoring) -> Optional[Tuple[int, int]]:
    for y in range(tc.height):
        for x in range(tc.width):
            if not tc.is_proper_cell(x, y):
                return x, y
    return None


def find_pair(tc: TorusColoring) -> TorusPair:
    """u = (x, y) and v = (x + a, y + b) with a path of at most b - 1 changes."""
    cell = first_improper_cell(tc)
    if cell is None:
        # rows share one color and columns the other
        points = [(i, 0) for i in range(tc.a + 1)] + [(tc.a, j) for j in range(1, tc.b + 1)]
        path = make_switch_path(tc.graph, tc.coloring, [tc.vertex(x, y) for x, y in points])
        dblog(f"{tc!r} has only alternating 4-cycles", enable=settings.LOG_TORUS)
        return TorusPair(path.start, path.end, path, True)

    row = cell[1]
    table = diagonal_table(tc, row)
    for d in table:
        dblog(f"  {d.kind:10s} from {d.start} switches={d.switches}", enable=settings.LOG_TORUS)
    best = min(table, key=lambda d: d.switches)
    if best.switches > tc.a - 1:
        raise InternalAssertion(f"no lazy diagonal from row {row} has <= {tc.a - 1} switches", payload=table)
    ex, ey = tc.coords(best.vertices[-1])
    climb = [tc.vertex(ex, ey + j) for j in range(1, tc.b - tc.a + 1)]
    path = make_switch_path(tc.graph, tc.coloring, list(best.vertices) + climb)
    if path.switches > tc.b - 1:
        raise InternalAssertion(f"pair path has {path.switches} > {tc.b - 1} switches", payload=path)
    return TorusPair(path.start, path.end, path, False, row, best, tuple(table))


def report_json(tc: TorusColoring, pair: TorusPair) -> dict:
    return {
        "a": tc.a,
        "b": tc.b,
        "u": list(tc.coords(pair.u)),
        "v": list(tc.coords(pair.v)),
        "switches": pair.path.switches,
        "proper": pair.proper,
        "row": pair.row,
        "diagonals": [{"start": list(d.start), "kind": d.kind, "switches": d.switches} for d in pair.table],
        "path": path_to_json(pair.path),
    }
