import json
import os
import tempfile
import unittest

import numpy as np

from fewswitch.colorings import (
    EdgeColoring,
    coloring_from_json,
    coloring_from_mask,
    coloring_to_json,
    directional_coloring,
    family_set,
    is_antipodal_coloring,
    is_properly_colored_4cycle,
    is_simple,
    level_alternating_coloring,
    load_coloring,
    monochromatic_coloring,
    proper_cycle_coloring,
    random_antipodal_coloring,
    random_coloring,
    save_coloring,
    two_cube_coloring,
)
from fewswitch.compgraph import build, largest_component
from fewswitch.core import BLUE, RED, InvalidParameter
from fewswitch.graphs import cycle, hypercube
from fewswitch.switchpaths import min_switches


class TestColorings(unittest.TestCase):
    def test_edge_coloring(self):
        g = cycle(4)
        c = EdgeColoring(g, [0, 1, 1, 0])
        self.assertEqual(c.letters(), "RBBR")
        self.assertEqual(c.red_count, 2)
        self.assertEqual(c.color(3, 0), c.edge_color(g.edge_id(0, 3)))
        self.assertFalse(c.colors.flags.writeable)
        self.assertEqual(coloring_from_mask(g, c.mask()), c)
        with self.assertRaises(InvalidParameter):
            EdgeColoring(g, [0, 1, 1])
        with self.assertRaises(InvalidParameter):
            EdgeColoring(g, [0, 1, 2, 0])
        with self.assertRaises(InvalidParameter):
            coloring_from_mask(g, 16)
        with self.assertRaises(InvalidParameter):
            monochromatic_coloring(hypercube(2)).check_graph(g)

    def test_directional(self):
        g, c = directional_coloring(1)
        self.assertEqual(c.color(0, 1), RED)
        self.assertEqual(c.color(0, 2), BLUE)
        self.assertTrue(is_properly_colored_4cycle(g, c, (0, 1, 3, 2)))
        g, c = directional_coloring(2)
        self.assertEqual(g, hypercube(4))
        self.assertEqual(c.red_count, 16)
        simple = is_simple(g, c)
        self.assertFalse(simple)
        self.assertTrue(is_properly_colored_4cycle(g, c, simple.witness))

    def test_is_properly_colored_4cycle_needs_a_4cycle(self):
        g = hypercube(2)
        c = monochromatic_coloring(g)
        self.assertFalse(is_properly_colored_4cycle(g, c, (0, 1, 3, 2)))
        with self.assertRaises(InvalidParameter):
            is_properly_colored_4cycle(g, c, (0, 1, 2, 3))
        with self.assertRaises(InvalidParameter):
            is_properly_colored_4cycle(g, c, (0, 1, 3))

    def test_level_alternating(self):
        g, c = level_alternating_coloring(2)
        self.assertEqual([c.color(u, v) for u, v in [(0, 1), (0, 2), (1, 3), (2, 3)]], [RED, RED, BLUE, BLUE])
        self.assertFalse(is_properly_colored_4cycle(g, c, (0, 1, 3, 2)))
        for n in (2, 3, 4):
            g, c = level_alternating_coloring(n)
            self.assertTrue(is_simple(g, c))
        g, c = level_alternating_coloring(3)
        self.assertFalse(is_antipodal_coloring(g, c))

    def test_two_cube_small(self):
        g, c = two_cube_coloring(2, 1)
        self.assertEqual(g, hypercube(3))
        for u, v, color in [(0, 1, RED), (0, 2, RED), (4, 5, BLUE), (4, 6, BLUE), (0, 4, BLUE), (3, 7, BLUE)]:
            self.assertEqual(c.color(u, v), color, (u, v))

    def test_two_cube_clauses(self):
        g, c = two_cube_coloring(4, 2)
        cases = [
            (0, 1, RED),  # first half, tail 00
            (16, 17, RED),  # first half, tail 01
            (48, 49, BLUE),  # first half, tail 11
            (0, 4, RED),  # second half, tail 00
            (16, 20, BLUE),
            (48, 52, BLUE),
            (0, 16, BLUE),  # tail becomes 01
            (32, 48, RED),  # tail becomes 11
        ]
        for u, v, color in cases:
            self.assertEqual(c.color(u, v), color, (u, v))

    def test_two_cube_components(self):
        g, c = two_cube_coloring(4, 2)
        cg = build(g, c)
        red, blue = largest_component(cg, RED), largest_component(cg, BLUE)
        self.assertEqual(red.members, tuple(range(16)))
        self.assertEqual(blue.members, tuple(range(48, 64)))
        self.assertTrue(all(mv.size < 16 for mv in cg.meta_vertices if mv.id not in (red.id, blue.id)))
        for u in red.members:
            self.assertGreaterEqual(min_switches(g, c, u, u ^ 63).switches, 1)

    def test_proper_cycle(self):
        g, c = proper_cycle_coloring(4)
        self.assertEqual([c.color(i, (i + 1) % 4) for i in range(4)], [RED, BLUE, RED, BLUE])
        for m in (3, 5, 2):
            with self.assertRaises(InvalidParameter):
                proper_cycle_coloring(m)

    def test_antipodal(self):
        q2 = hypercube(2)
        c = EdgeColoring(q2, [0, 0, 1, 1])  # (0,1) (0,2) (1,3) (2,3)
        self.assertTrue(is_antipodal_coloring(q2, c))
        self.assertFalse(is_antipodal_coloring(q2, monochromatic_coloring(q2)))
        g, c = directional_coloring(1)
        self.assertFalse(is_antipodal_coloring(g, c))
        for n in (2, 3, 5):
            for i in range(5):
                c = random_antipodal_coloring(n, seed=7, index=i)
                self.assertTrue(is_antipodal_coloring(hypercube(n), c))
        with self.assertRaises(InvalidParameter):
            random_antipodal_coloring(1)

    def test_random_coloring(self):
        g = hypercube(4)
        self.assertEqual(random_coloring(g, 1.0, seed=3).red_count, g.edge_count)
        self.assertEqual(random_coloring(g, 0.0, seed=3).red_count, 0)
        self.assertEqual(random_coloring(g, 0.5, 11, 4), random_coloring(g, 0.5, 11, 4))
        with self.assertRaises(InvalidParameter):
            random_coloring(g, 1.5)

    def test_json_files(self):
        g = hypercube(3)
        c = random_coloring(g, 0.5, seed=1)
        obj = coloring_to_json(c)
        self.assertEqual(obj["graph"], {"kind": "hypercube", "n": 3})
        self.assertEqual(coloring_from_json(obj), c)
        self.assertEqual(coloring_from_json({"colors": c.colors.tolist()}, graph=g), c)
        with self.assertRaises(InvalidParameter):
            coloring_from_json({"graph": obj["graph"], "colors": "RX" * 6})
        with self.assertRaises(InvalidParameter):
            coloring_from_json({"colors": "R" * 12})
        with tempfile.TemporaryDirectory() as d:
            path = os.path.join(d, "c.json")
            save_coloring(c, path)
            self.assertEqual(load_coloring(path), c)
            with open(path) as f:
                self.assertEqual(json.load(f), obj)
            with open(path, "w") as f:
                f.write("{not json")
            with self.assertRaises(InvalidParameter):
                load_coloring(path)

    def test_family_set(self):
        self.assertIn("two-cube", family_set.names())
        g, c = family_set.generate("directional", k=2, m=None, seed=5)
        self.assertEqual(g, hypercube(4))
        g, c = family_set.generate("random", graph="cycle:6", p=0.5, seed=3)
        self.assertEqual(c, random_coloring(cycle(6), 0.5, 3))
        g, c = family_set.generate("monochromatic", graph="hypercube:2", color="B")
        self.assertEqual(c.red_count, 0)
        g, c = family_set.generate("longest-cycle", graph="product:4x6")
        self.assertEqual(g.vertex_count, 24)
        with self.assertRaises(InvalidParameter):
            family_set.generate("no-such-family")
        with self.assertRaises(InvalidParameter):
            family_set.generate("two-cube", m=4)

    def test_coloring_from_mask_bits(self):
        g = cycle(6)
        c = coloring_from_mask(g, 0b100101)
        np.testing.assert_array_equal(c.colors, [1, 0, 1, 0, 0, 1])
        self.assertEqual(c.mask(), 0b100101)


if __name__ == "__main__":
    unittest.main()
