import math
import random
from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase

from apps.estructura.dulmage_mendelsohn import build_graph, dm_decompose
from apps.formulas.numeric import evaluate
from apps.formulas.terms import Add, Const, Func, Mul, Var, sub

from .exceptions import NonFiniteMatrixError
from .instantiation import instantiation_candidates, kearfott_order
from .jacobian import jacobian_at
from .rank import null_space, rank_with_threshold

x, y, z, w = Var('x'), Var('y'), Var('z'), Var('w')


def random_smooth(rng, names, depth=2):
    """Terminos polinomiales con sin/cos/exp, sin polos."""
    if depth == 0 or rng.random() < 0.3:
        if rng.random() < 0.7:
            return Var(rng.choice(names))
        return Const(Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
    kind = rng.choice(['add', 'mul', 'func'])
    if kind == 'add':
        return Add((random_smooth(rng, names, depth - 1), random_smooth(rng, names, depth - 1)))
    if kind == 'mul':
        return Mul((random_smooth(rng, names, depth - 1), random_smooth(rng, names, depth - 1)))
    return Func(rng.choice(['sin', 'cos', 'exp']), random_smooth(rng, names, depth - 1))


class JacobianTests(SimpleTestCase):

    def test_square_minus_one(self):
        jacobian = jacobian_at([sub(Mul((x, x)), Const(1))], ['x'], {'x': 3.0})
        np.testing.assert_array_equal(jacobian.matrix, [[6.0]])
        self.assertEqual(jacobian.flagged, ())

    def test_linear_sum(self):
        jacobian = jacobian_at([Add((x, y))], ['x', 'y'], {'x': -7.5, 'y': 2.0})
        np.testing.assert_array_equal(jacobian.matrix, [[1.0, 1.0]])

    def test_second_example_system(self):
        f1 = sub(Func('sin', y), Func('exp', x))
        f2 = sub(Func('cos', y), Func('sin', sub(Mul((Const(8), x, x)), Const(Fraction(1, 5)))))
        point = {'x': 0.0, 'y': math.pi / 2}
        jacobian = jacobian_at([f1, f2], ['x', 'y'], point)
        np.testing.assert_allclose(jacobian.matrix[0], [-1.0, 0.0], atol=1e-15)
        np.testing.assert_allclose(jacobian.matrix[1], [0.0, -1.0], atol=1e-15)

    def test_non_finite_row_is_flagged(self):
        jacobian = jacobian_at([Func('exp', Func('exp', x)), x], ['x'], {'x': 1000.0})
        self.assertEqual(jacobian.flagged, (0,))
        self.assertEqual(jacobian.finite_rows.shape, (1, 1))

    def test_matches_central_differences(self):
        rng = random.Random(23)
        names = ['a', 'b', 'c']
        for _ in range(300):
            terms = [random_smooth(rng, names) for _ in range(2)]
            point = {n: rng.uniform(-1, 1) for n in names}
            jacobian = jacobian_at(terms, names, point)
            for j, term in enumerate(terms):
                for i, name in enumerate(names):
                    h = 1e-6 * max(1.0, abs(point[name]))
                    plus = dict(point, **{name: point[name] + h})
                    minus = dict(point, **{name: point[name] - h})
                    numeric = (evaluate(term, plus) - evaluate(term, minus)) / (2 * h)
                    analytic = jacobian.matrix[j, i]
                    with self.subTest(term=term, var=name, point=point):
                        self.assertLessEqual(abs(numeric - analytic), 1e-4 * max(1.0, abs(analytic)))


class RankTests(SimpleTestCase):

    def test_identity(self):
        self.assertEqual(rank_with_threshold(np.eye(2)), (2, True))

    def test_ones(self):
        self.assertEqual(rank_with_threshold([[1.0, 1.0], [1.0, 1.0]]), (1, False))

    def test_tiny_singular_value_below_threshold(self):
        self.assertEqual(rank_with_threshold([[1.0, 0.0], [0.0, 1e-30]]), (1, False))

    def test_empty_matrix(self):
        self.assertEqual(rank_with_threshold(np.zeros((0, 3))), (0, True))

    def test_non_finite_raises(self):
        with self.assertRaises(NonFiniteMatrixError):
            rank_with_threshold([[1.0, math.nan]])

    def test_transpose_invariant(self):
        rng = np.random.default_rng(4)
        for _ in range(200):
            rows, cols = rng.integers(1, 5, size=2)
            matrix = rng.integers(-3, 4, size=(rows, cols)).astype(float)
            if rng.random() < 0.5 and rows > 1:
                matrix[-1] = matrix[0] * 2
            with self.subTest(matrix=matrix.tolist()):
                self.assertEqual(rank_with_threshold(matrix), rank_with_threshold(matrix.T))

    def test_null_space_annihilates(self):
        matrix = np.array([[1.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
        basis = null_space(matrix)
        self.assertEqual(basis.shape, (1, 3))
        np.testing.assert_allclose(matrix @ basis.T, 0.0, atol=1e-14)


class KearfottOrderTests(SimpleTestCase):

    def test_single_free_variable(self):
        jacobian = jacobian_at([x], ['x', 'y'], {'x': 0.0, 'y': 0.0})
        self.assertEqual(kearfott_order(jacobian, ['y']), ['y'])

    def test_ties_follow_global_order(self):
        jacobian = jacobian_at([Add((x, y))], ['x', 'y'], {'x': 1.0, 'y': 2.0})
        self.assertEqual(kearfott_order(jacobian, ['x', 'y']), ['x', 'y'])

    def test_square_full_rank_is_empty(self):
        jacobian = jacobian_at([x, y], ['x', 'y'], {'x': 0.0, 'y': 0.0})
        self.assertEqual(kearfott_order(jacobian, ['x', 'y']), [])


class InstantiationCandidateTests(SimpleTestCase):
    variables = ['x', 'y', 'z', 'w']
    equations = [Add((x, y)), Add((z, w))]

    def setUp(self):
        self.dm = dm_decompose(build_graph(self.equations, self.variables))
        self.jacobian = jacobian_at(self.equations, self.variables, dict.fromkeys(self.variables, 0.5))

    def test_without_filters_lexicographic(self):
        candidates = instantiation_candidates(self.dm)
        self.assertEqual(len(candidates), 6)
        self.assertEqual(candidates[0].variables, ('x', 'y'))

    def test_filter_drops_overconstraining_pairs(self):
        candidates = instantiation_candidates(self.dm, filter_overconstr_v=True)
        chosen = {c.variables for c in candidates}
        self.assertEqual(len(chosen), 4)
        self.assertNotIn(('x', 'y'), chosen)
        self.assertNotIn(('z', 'w'), chosen)

    def test_kearfott_scores_non_increasing(self):
        candidates = instantiation_candidates(
            self.dm, self.jacobian, kearfott_ordering=True, filter_overconstr_v=True,
        )
        self.assertEqual(len(candidates), 4)
        scores = [c.score for c in candidates]
        self.assertEqual(scores, sorted(scores, reverse=True))

    def test_square_system_single_empty_candidate(self):
        dm = dm_decompose(build_graph([x, y], ['x', 'y']))
        jacobian = jacobian_at([x, y], ['x', 'y'], {'x': 0.0, 'y': 0.0})
        for flags in ({}, {'kearfott_ordering': True, 'filter_rank_deficient': True}):
            with self.subTest(flags=flags):
                candidates = instantiation_candidates(dm, jacobian, **flags)
                self.assertEqual([c.variables for c in candidates], [()])

    def test_overconstrained_count_is_empty(self):
        dm = dm_decompose(build_graph([x, Func('sin', x)], ['x']))
        self.assertEqual(instantiation_candidates(dm), [])

    def test_rank_filter_subset_of_structural_filter(self):
        rng = random.Random(8)
        for _ in range(150):
            names = [f'v{i}' for i in range(rng.randint(2, 5))]
            equations = [random_smooth(rng, names) for _ in range(rng.randint(1, len(names) - 1))]
            point = {n: rng.uniform(-1, 1) for n in names}
            dm = dm_decompose(build_graph(equations, [n for n in names]))
            jacobian = jacobian_at(equations, names, point)
            structural = instantiation_candidates(dm, jacobian, filter_overconstr_v=True)
            ranked = instantiation_candidates(dm, jacobian, filter_rank_deficient=True)
            with self.subTest(equations=equations):
                self.assertLessEqual({c.variables for c in ranked}, {c.variables for c in structural})
                for candidate in structural:
                    remaining = dm_decompose(dm.graph.without(candidate.variables))
                    self.assertTrue(remaining.is_well_constrained)
