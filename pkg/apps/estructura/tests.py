import random

from django.test import SimpleTestCase

from apps.formulas.parser import parse_formula
from apps.formulas.systems import partition_selected
from apps.formulas.terms import Add, Func, Var
from apps.formulas.tests import EJEMPLO_1

from .dulmage_mendelsohn import (
    BipartiteSystemGraph, build_graph, dm_decompose, is_overconstrained_free, is_well_constrained, maximum_matching,
)

x, y, z, w = Var('x'), Var('y'), Var('z'), Var('w')


def ejemplo_1_system():
    formula = parse_formula(EJEMPLO_1)
    return partition_selected(formula, [0] * len(formula.clauses))


def brute_force_matching_size(graph_left):
    """Tamano del apareamiento maximo por enumeracion exhaustiva."""
    lefts = list(graph_left)

    def best(index, used):
        if index == len(lefts):
            return 0
        result = best(index + 1, used)
        for right in graph_left[lefts[index]]:
            if right not in used:
                result = max(result, 1 + best(index + 1, used | {right}))
        return result

    return best(0, frozenset())


def random_graph(rng, max_vars=6, max_equations=6):
    variables = [f'x{i}' for i in range(rng.randint(1, max_vars))]
    equations = []
    for _ in range(rng.randint(0, max_equations)):
        names = [n for n in variables if rng.random() < 0.4] or [rng.choice(variables)]
        equations.append(Add(tuple(Var(n) for n in names)) if len(names) > 1 else Var(names[0]))
    return build_graph(equations, variables)


class MatchingTests(SimpleTestCase):

    def test_simple_augmenting_path(self):
        graph = build_graph([Add((x, y)), x], ['x', 'y'])
        self.assertEqual(maximum_matching(graph), {0: 'y', 1: 'x'})

    def test_empty_graph(self):
        self.assertEqual(maximum_matching(build_graph([], ['x'])), {})

    def test_equation_without_free_variable(self):
        graph = build_graph([x, x], ['x', 'y'])
        self.assertEqual(len(maximum_matching(graph)), 1)

    def test_matches_brute_force_on_small_graphs(self):
        rng = random.Random(11)
        for _ in range(150):
            graph = random_graph(rng)
            matching = maximum_matching(graph)
            graph_left = dict(enumerate(graph.adjacency))
            with self.subTest(adjacency=graph.adjacency):
                self.assertEqual(len(matching), brute_force_matching_size(graph_left))
                self.assertEqual(len(set(matching.values())), len(matching))
                for j, name in matching.items():
                    self.assertIn(name, graph.adjacency[j])


class BuildGraphTests(SimpleTestCase):

    def test_example_edges(self):
        system = ejemplo_1_system()
        graph = build_graph(system.equations, system.active_vars)
        self.assertEqual(len(graph.equations), 4)
        self.assertEqual(graph.variables, ('x', 'y', 'z', 'w'))
        self.assertEqual(set(graph.edges), {('x', 0), ('y', 0), ('z', 1), ('w', 2), ('w', 3)})

    def test_empty_system(self):
        graph = build_graph([], ['x', 'y'])
        self.assertEqual(graph.edges, [])
        self.assertEqual(graph.variables, ('x', 'y'))

    def test_occurrence_not_multiplicity(self):
        graph = build_graph([Add((x, x))], ['x'])
        self.assertEqual(graph.edges, [('x', 0)])

    def test_unknown_variable(self):
        with self.assertRaises(ValueError):
            build_graph([Add((x, y))], ['x'])


class DmDecomposeTests(SimpleTestCase):

    def assertPartition(self, dm, m, variables):
        parts = (dm.over, dm.under, dm.well)
        self.assertEqual(sorted(j for p in parts for j in p.equations), list(range(m)))
        self.assertEqual(sorted(n for p in parts for n in p.variables), sorted(variables))
        if dm.over.equations:
            self.assertGreater(len(dm.over.equations), len(dm.over.variables))
        if dm.under.variables:
            self.assertLess(len(dm.under.equations), len(dm.under.variables))
        self.assertEqual(len(dm.well.equations), len(dm.well.variables))

    def test_example_partition(self):
        system = ejemplo_1_system()
        dm = dm_decompose(build_graph(system.equations, system.active_vars))
        self.assertEqual(dm.under.equations, (0,))
        self.assertEqual(dm.under.variables, ('x', 'y'))
        self.assertEqual(dm.well.equations, (1,))
        self.assertEqual(dm.well.variables, ('z',))
        self.assertEqual(dm.over.equations, (2, 3))
        self.assertEqual(dm.over.variables, ('w',))
        self.assertFalse(is_overconstrained_free(system.equations, system.active_vars))

    def test_square_independent_system(self):
        dm = dm_decompose(build_graph([x, y], ['x', 'y']))
        self.assertEqual(dm.well.equations, (0, 1))
        self.assertTrue(dm.is_well_constrained)
        self.assertTrue(is_overconstrained_free([x, y], ['x', 'y']))

    def test_two_sums_all_under(self):
        dm = dm_decompose(build_graph([Add((x, y)), Add((z, w))], ['x', 'y', 'z', 'w']))
        self.assertEqual(dm.under.equations, (0, 1))
        self.assertEqual(dm.under.variables, ('x', 'y', 'z', 'w'))
        self.assertTrue(dm.well.is_empty)
        self.assertTrue(dm.over.is_empty)

    def test_repeated_variable_overconstrained(self):
        self.assertFalse(is_overconstrained_free([w, Func('sin', w)], ['w']))
        self.assertFalse(is_well_constrained([w, Func('sin', w)], ['w']))

    def test_deterministic(self):
        system = ejemplo_1_system()
        first = dm_decompose(build_graph(system.equations, system.active_vars))
        second = dm_decompose(build_graph(system.equations, system.active_vars))
        self.assertEqual(first.matching, second.matching)
        self.assertEqual((first.over, first.under, first.well), (second.over, second.under, second.well))

    def test_random_partitions_and_hall_property(self):
        rng = random.Random(5)
        for _ in range(200):
            graph = random_graph(rng)
            dm = dm_decompose(graph)
            with self.subTest(adjacency=graph.adjacency):
                self.assertPartition(dm, len(graph.equations), list(graph.variables))
                well_graph = BipartiteSystemGraph(
                    dm.terms(dm.well),
                    dm.well.variables,
                    tuple(
                        tuple(n for n in dm.graph.adjacency[j] if n in dm.well.variables)
                        for j in dm.well.equations
                    ),
                )
                self.assertEqual(len(maximum_matching(well_graph)), len(dm.well.equations))
