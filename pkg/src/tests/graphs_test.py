import unittest

import fewswitch
from fewswitch.core import InvalidParameter, NotAnAutomorphism, NotUniqueFarthest, is_unreachable
from fewswitch.graphs import (
    antipodal_automorphism,
    bfs_distances,
    coordinates,
    cycle,
    distance,
    explicit_graph,
    farthest_point_automorphism,
    graph_from_spec,
    graph_to_spec,
    hypercube,
    hypercube_automorphism,
    hypercube_dimension,
    identity_automorphism,
    is_connected,
    parse_graph_spec,
    product_of_cycles,
    validate_automorphism,
    vertex_of,
)


class TestGraphs(unittest.TestCase):
    def test_cycle(self):
        g = cycle(2)
        self.assertEqual((g.vertex_count, g.edges), (2, ((0, 1),)))
        g = cycle(6)
        self.assertEqual(g.edge_count, 6)
        self.assertTrue(all(len(g.neighbors(v)) == 2 for v in g.vertices()))
        self.assertEqual(distance(g, 0, 3), 3)
        with self.assertRaises(InvalidParameter):
            cycle(1)

    def test_hypercube(self):
        self.assertEqual(hypercube(1).edges, ((0, 1),))
        q3 = hypercube(3)
        self.assertEqual((q3.vertex_count, q3.edge_count), (8, 12))
        self.assertEqual(q3, product_of_cycles([2, 2, 2]))
        self.assertEqual(hypercube_dimension(q3), 3)
        self.assertIsNone(hypercube_dimension(cycle(6)))
        for n in (0, 25):
            with self.assertRaises(InvalidParameter):
                hypercube(n)

    def test_edge_ids_are_lexicographic(self):
        for g in (hypercube(3), product_of_cycles([4, 6]), cycle(5)):
            self.assertEqual(list(g.edges), sorted(g.edges))
            for i, (u, v) in enumerate(g.edges):
                self.assertLess(u, v)
                self.assertEqual(g.edge_id(u, v), i)
                self.assertEqual(g.edge_id(v, u), i)
                self.assertEqual(g.edge_pair(i), (u, v))
            self.assertEqual(g.edge_array.shape, (g.edge_count, 2))
        with self.assertRaises(InvalidParameter):
            cycle(5).edge_id(0, 2)

    def test_graph_rejects_bad_input(self):
        with self.assertRaises(InvalidParameter):
            explicit_graph(3, [(0, 3)])
        with self.assertRaises(InvalidParameter):
            explicit_graph(3, [(1, 1)])
        g = explicit_graph(3, [(0, 1), (1, 0), (1, 2)])
        self.assertEqual(g.edges, ((0, 1), (1, 2)))
        for bad in (-1, 3, True, 1.0):
            with self.assertRaises(InvalidParameter):
                g.check_vertex(bad)

    def test_product_of_cycles(self):
        g = product_of_cycles([4, 6])
        self.assertEqual((g.vertex_count, g.edge_count), (24, 48))
        self.assertTrue(all(len(g.neighbors(v)) == 4 for v in g.vertices()))
        self.assertEqual(coordinates([4, 6], 5), (1, 1))
        for v in g.vertices():
            self.assertEqual(vertex_of([4, 6], coordinates([4, 6], v)), v)
        g = product_of_cycles([2, 6])
        self.assertEqual(distance(g, vertex_of([2, 6], (0, 0)), vertex_of([2, 6], (1, 3))), 4)
        for spec in ([], [1, 4]):
            with self.assertRaises(InvalidParameter):
                product_of_cycles(spec)

    def test_farthest_point_automorphism(self):
        phi = farthest_point_automorphism([2, 2])
        self.assertEqual(phi(0), 3)
        phi = farthest_point_automorphism([4, 6])
        self.assertEqual(phi(vertex_of([4, 6], (1, 2))), vertex_of([4, 6], (3, 5)))
        self.assertEqual(antipodal_automorphism(3)(0b010), 0b101)
        for spec in ([4, 6], [2, 4, 4], [6], [2, 2, 2, 2]):
            g = product_of_cycles(spec)
            phi = farthest_point_automorphism(spec)
            self.assertTrue(phi.is_involution)
            self.assertEqual(phi.order, 2)
            for u in g.vertices():
                self.assertEqual(distance(g, u, phi(u)), sum(spec) // 2)
                self.assertEqual(max(bfs_distances(g, u)), sum(spec) // 2)
        with self.assertRaises(NotUniqueFarthest):
            farthest_point_automorphism([3, 4])

    def test_validate_automorphism(self):
        q3 = hypercube(3)
        self.assertEqual(validate_automorphism(q3, range(8)).order, 1)
        self.assertEqual(identity_automorphism(q3).perm, tuple(range(8)))
        self.assertEqual(validate_automorphism(q3, [v ^ 7 for v in range(8)]).order, 2)
        self.assertEqual(validate_automorphism(cycle(6), [(v + 1) % 6 for v in range(6)]).order, 6)
        path = explicit_graph(3, [(0, 1), (1, 2)])
        with self.assertRaises(NotAnAutomorphism) as ctx:
            validate_automorphism(path, [1, 0, 2])
        self.assertEqual(ctx.exception.edge, (1, 2))
        with self.assertRaises(InvalidParameter):
            validate_automorphism(path, [0, 0, 1])
        with self.assertRaises(InvalidParameter):
            validate_automorphism(path, [0, 1])

    def test_hypercube_automorphism(self):
        phi = hypercube_automorphism(3, [1, 2, 0], 0b101)
        self.assertEqual(phi(0), 0b101)
        self.assertEqual(phi(0b001), 0b010 ^ 0b101)
        self.assertEqual(hypercube_automorphism(4, range(4), 15).perm, antipodal_automorphism(4).perm)
        with self.assertRaises(InvalidParameter):
            hypercube_automorphism(3, [0, 0, 1])
        with self.assertRaises(InvalidParameter):
            hypercube_automorphism(3, [0, 1, 2], 8)

    def test_distance(self):
        q4 = hypercube(4)
        self.assertEqual(distance(q4, 5, 5), 0)
        self.assertEqual(distance(q4, 0, 15), 4)
        torus = product_of_cycles([4, 6])
        self.assertEqual(distance(torus, 0, vertex_of([4, 6], (2, 3))), 5)
        g = explicit_graph(3, [(0, 1)])
        self.assertTrue(is_unreachable(distance(g, 0, 2)))
        self.assertFalse(is_connected(g))
        self.assertTrue(is_connected(q4))

    def test_graph_specs(self):
        self.assertEqual(parse_graph_spec("product:4x6"), product_of_cycles([4, 6]))
        self.assertEqual(parse_graph_spec(" hypercube:3 "), hypercube(3))
        self.assertEqual(parse_graph_spec("cycle:5"), cycle(5))
        self.assertEqual(parse_graph_spec('{"kind": "explicit", "n": 3, "edges": [[0, 1]]}'), explicit_graph(3, [(0, 1)]))
        for g in (hypercube(2), cycle(7), product_of_cycles([2, 4]), explicit_graph(4, [(0, 3), (1, 2)])):
            self.assertEqual(graph_from_spec(graph_to_spec(g)), g)
        for text in ("bogus:3", "hypercube:x", "product:4xq", "cycle:1"):
            with self.assertRaises(InvalidParameter):
                parse_graph_spec(text)

    def test_package_lookup(self):
        self.assertIs(fewswitch.hypercube, hypercube)
        self.assertTrue(callable(fewswitch.directional))
        with self.assertRaises(AttributeError):
            fewswitch.no_such_thing


if __name__ == "__main__":
    unittest.main()
