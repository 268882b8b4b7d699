import csv
import math
import os
import tempfile
import unittest

from fewswitch import harness
from fewswitch.colorings import level_alternating_coloring, monochromatic_coloring, proper_cycle_coloring
from fewswitch.compgraph import build, longest_induced_cycle
from fewswitch.core import InvalidParameter, rng_for
from fewswitch.graphs import (
    antipodal_automorphism,
    cycle,
    explicit_graph,
    farthest_point_automorphism,
    hypercube,
    is_connected,
    product_of_cycles,
    validate_automorphism,
)
from fewswitch.switchpaths import orbit_objective


class TestExhaustive(unittest.TestCase):
    def test_even_cycles(self):
        for k in range(2, 6):
            result = harness.exhaustive_d(cycle(2 * k), farthest_point_automorphism([2 * k]))
            self.assertEqual(result.d, k - 1)
            self.assertEqual(result.count, 1 << (2 * k))
            self.assertEqual(orbit_objective(result.coloring.graph, result.coloring, farthest_point_automorphism([2 * k])).best_switches, k - 1)

    def test_cube(self):
        self.assertEqual(harness.exhaustive_d(hypercube(3), antipodal_automorphism(3)).d, 1)

    def test_report(self):
        report = harness.exhaustive_report(cycle(6), farthest_point_automorphism([6]))
        self.assertTrue(report.ok)
        self.assertEqual((report.worst_case_switches, report.bound, report.samples), (2, 2, 64))
        self.assertEqual(report.to_json()["mode"], "exhaustive")

    def test_limits(self):
        with self.assertRaises(InvalidParameter):
            harness.exhaustive_d(hypercube(4), antipodal_automorphism(4))
        g = explicit_graph(4, [(0, 1), (2, 3)])
        with self.assertRaises(InvalidParameter):
            harness.exhaustive_d(g, validate_automorphism(g, [2, 3, 0, 1]))

    def test_conjectured_bound(self):
        self.assertEqual(harness.conjectured_bound(hypercube(3)), 1)
        self.assertEqual(harness.conjectured_bound(cycle(6)), 2)
        self.assertEqual(harness.conjectured_bound(product_of_cycles([4, 6])), 2)
        self.assertIsNone(harness.conjectured_bound(product_of_cycles([3, 4])))
        self.assertIsNone(harness.conjectured_bound(explicit_graph(3, [(0, 1), (1, 2)])))


class TestSampled(unittest.TestCase):
    def test_hypercube(self):
        report = harness.sampled_d(hypercube(4), antipodal_automorphism(4), 100, seed=0, workers=1)
        self.assertTrue(report.ok)
        self.assertLessEqual(report.worst_case_switches, 1)
        self.assertEqual(report.samples, 100)

    def test_torus(self):
        g = product_of_cycles([4, 8])
        report = harness.sampled_d(g, farthest_point_automorphism([4, 8]), 60, seed=3, workers=1)
        self.assertTrue(report.ok)
        self.assertLessEqual(report.worst_case_switches, 3)

    def test_workers_do_not_change_the_report(self):
        g, phi = cycle(8), farthest_point_automorphism([8])
        one = harness.sampled_d(g, phi, 40, seed=5, workers=1)
        two = harness.sampled_d(g, phi, 40, seed=5, workers=2)
        self.assertEqual(one._replace(runtime_ms=0), two._replace(runtime_ms=0))

    def test_bad_samples(self):
        with self.assertRaises(InvalidParameter):
            harness.sampled_d(cycle(6), farthest_point_automorphism([6]), 0)


class TestExperiments(unittest.TestCase):
    def test_tree_fraction_exhaustive(self):
        self.assertEqual(harness.tree_fraction_experiment(1, exhaustive=True), 1.0)
        self.assertEqual(harness.tree_fraction_experiment(2, exhaustive=True), 0.875)
        with self.assertRaises(InvalidParameter):
            harness.tree_fraction_experiment(4, exhaustive=True)

    def test_tree_fraction_trend(self):
        values = [harness.tree_fraction_experiment(n, 1000, seed=0) for n in (6, 8, 10)]
        for lo, hi in zip(values, values[1:]):
            self.assertGreaterEqual(hi, lo - 0.03, values)

    def test_connectivity(self):
        self.assertEqual(harness.connectivity_experiment(3, 1.0, 5), 1.0)
        self.assertEqual(harness.connectivity_experiment(3, 0.0, 5), 0.0)
        value = harness.connectivity_experiment(6, 0.5, 50, seed=1)
        self.assertTrue(0.0 <= value <= 1.0)

    def test_middle_component(self):
        self.assertEqual(harness.middle_component_experiment(3, 5, p=1.0), 0.0)
        self.assertEqual(harness.middle_component_experiment(3, 5, p=0.0), 0.0)
        self.assertTrue(0.0 <= harness.middle_component_experiment(5, 30, seed=2) <= 1.0)

    def test_average_switch(self):
        g = hypercube(4)
        stats = harness.average_switch_experiment(g, monochromatic_coloring(g), antipodal_automorphism(4))
        self.assertEqual((stats.mean, stats.histogram, stats.unreachable), (0.0, {0: 16}, 0))
        for k in (2, 3, 4):
            g, c = proper_cycle_coloring(2 * k)
            stats = harness.average_switch_experiment(g, c, farthest_point_automorphism([2 * k]))
            self.assertEqual(stats.mean, k - 1)
            self.assertEqual(stats.histogram, {k - 1: 2 * k})

    def test_level_alternating_means(self):
        expected = {4: 14 / 16, 6: 76 / 64, 8: 374 / 256, 10: 1748 / 1024}
        for n, mean in expected.items():
            g, c = level_alternating_coloring(n)
            stats = harness.average_switch_experiment(g, c, antipodal_automorphism(n))
            self.assertAlmostEqual(stats.mean, mean)
            self.assertLess(stats.mean / math.sqrt(n), 1.0)

    def test_unreachable_pairs(self):
        g = explicit_graph(4, [(0, 1), (2, 3)])
        stats = harness.average_switch_experiment(g, monochromatic_coloring(g), validate_automorphism(g, [2, 3, 0, 1]))
        self.assertEqual((stats.unreachable, stats.histogram), (4, {}))
        self.assertTrue(math.isnan(stats.mean))

    def test_write_curve_csv(self):
        points = [harness.ExperimentPoint(6, 10, 0.5), harness.ExperimentPoint(8, 10, 0.75)]
        with tempfile.TemporaryDirectory() as d:
            path = os.path.join(d, "curve.csv")
            harness.write_curve_csv(path, points)
            with open(path, newline="") as f:
                rows = list(csv.reader(f))
        self.assertEqual(rows, [["n", "samples", "value"], ["6", "10", "0.5"], ["8", "10", "0.75"]])


class TestSuites(unittest.TestCase):
    def test_simple_colorings(self):
        report = harness.simple_coloring_suite(2)
        self.assertTrue(report.ok)
        self.assertEqual(report.extra["simple"], 14)
        self.assertEqual(report.worst_case_switches, 0)
        self.assertTrue(harness.simple_coloring_suite(3).ok)
        with self.assertRaises(InvalidParameter):
            harness.simple_coloring_suite(4)

    def test_random_symmetric_graph(self):
        for i in range(20):
            g, phi = harness.random_symmetric_graph(rng_for(1, i), 9)
            self.assertTrue(is_connected(g))
            self.assertLessEqual(g.vertex_count, 9)
            self.assertEqual(validate_automorphism(g, phi.perm), phi)
        first, _ = harness.random_symmetric_graph(rng_for(4, 2))
        again, _ = harness.random_symmetric_graph(rng_for(4, 2))
        self.assertEqual(first, again)

    def test_main_theorem(self):
        report = harness.main_theorem_suite(150, seed=0)
        self.assertTrue(report.ok, report.violations[:1])
        self.assertGreater(report.extra["tested"], 0)

    def test_induced_cycles(self):
        report = harness.induced_cycle_suite((4,), 30, seed=0)
        self.assertTrue(report.ok)
        for m in (4, 5, 6):
            g, c = proper_cycle_coloring(2 * m)
            k = orbit_objective(g, c, farthest_point_automorphism([2 * m])).best_switches
            self.assertTrue(longest_induced_cycle(build(g, c), max(4, 2 * k - 2)).found)

    def test_torus(self):
        for a, b, samples in ((1, 2, 20), (2, 3, 30), (3, 4, 10)):
            report = harness.torus_suite(a, b, samples, seed=0)
            self.assertTrue(report.ok, report.violations[:1])
            self.assertLessEqual(report.worst_case_switches, b - 1)

    def test_metric_equivalence(self):
        self.assertTrue(harness.metric_equivalence_suite(30, seed=0).ok)

    def test_antipodal(self):
        report = harness.antipodal_suite(2, 10)
        self.assertTrue(report.ok)
        self.assertLessEqual(report.extra["worst_geodesic"], 1)
        for n in (3, 4):
            self.assertEqual(harness.antipodal_suite(n, 15, seed=1).worst_case_switches, 0)


if __name__ == "__main__":
    unittest.main()
