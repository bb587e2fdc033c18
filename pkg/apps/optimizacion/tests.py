from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase

from apps.formulas.parser import parse_formula
from apps.formulas.terms import EQ, LE, Const, Formula, Literal, Mul, Var, power, sub
from apps.objetivos.objective import build_objective

from .basin_hopping import armijo_descent, basin_hopping, start_bounds

x = Var('x')


class ArmijoDescentTests(SimpleTestCase):

    def test_quadratic_converges(self):
        result = armijo_descent(lambda v: float((v[0] - 3) ** 2), [10.0], jac=lambda v: np.array([2 * (v[0] - 3)]))
        self.assertAlmostEqual(result.x[0], 3.0, places=6)
        self.assertLessEqual(result.nit, 500)

    def test_starts_at_zero(self):
        result = armijo_descent(lambda v: 0.0, [1.0], jac=lambda v: np.zeros(1))
        self.assertEqual(result.nit, 0)
        self.assertEqual(result.message, 'zero')


class BasinHoppingTests(SimpleTestCase):

    def test_absolute_value_minimum(self):
        objective = build_objective(Formula.from_literals([Literal(sub(x, Const(2)), EQ)]))
        result = basin_hopping(objective, k=3, seed=1)
        self.assertGreaterEqual(len(result), 1)
        self.assertLessEqual(len(result), 3)
        best = result.points[0]
        self.assertLess(abs(best.x[0] - 2.0), 1e-6)
        self.assertLessEqual(best.value, 1e-6)

    def test_double_well_hits_both_basins_across_seeds(self):
        objective = build_objective(Literal(power(sub(Mul((x, x)), Const(1)), 2), EQ))
        found = set()
        for seed in range(10):
            for point in basin_hopping(objective, k=10, seed=seed).points:
                if abs(point.x[0] - 1.0) < 1e-3:
                    found.add(1)
                if abs(point.x[0] + 1.0) < 1e-3:
                    found.add(-1)
        self.assertEqual(found, {1, -1})

    def test_constant_zero_objective(self):
        objective = build_objective(Literal(Mul((Const(0), x)), EQ))
        result = basin_hopping(objective, k=1, seed=0)
        self.assertEqual(len(result), 1)
        self.assertEqual(result.points[0].value, 0.0)

    def test_zero_dimensional_objective(self):
        objective = build_objective(Literal(Const(Fraction(-1)), LE))
        result = basin_hopping(objective, k=5)
        self.assertEqual(result.values, [0.0])

    def test_deterministic_for_fixed_seed(self):
        formula = parse_formula(
            '(declare-fun x () Real) (declare-fun y () Real)'
            '(assert (= (sin x) (* y y))) (assert (<= (+ x y) 1))'
        )
        objective = build_objective(formula)
        first = basin_hopping(objective, k=8, seed=42)
        second = basin_hopping(objective, k=8, seed=42)
        self.assertEqual(first.values, second.values)
        for a, b in zip(first.points, second.points):
            np.testing.assert_array_equal(a.x, b.x)

    def test_independent_of_global_random_state(self):
        formula = parse_formula(
            '(declare-fun x () Real) (declare-fun y () Real)'
            '(assert (= (+ (sin (* 5 x)) (cos (* 4 y)) (* 0.1 x x) (* 0.1 y y) 3) 0))'
        )
        objective = build_objective(formula)
        runs = []
        for global_seed in range(1, 5):
            np.random.seed(global_seed)
            runs.append(basin_hopping(objective, k=20, seed=7))
        for other in runs[1:]:
            self.assertEqual(runs[0].values, other.values)
            for a, b in zip(runs[0].points, other.points):
                np.testing.assert_array_equal(a.x, b.x)

    def test_values_ascending_and_descending_from_start(self):
        formula = parse_formula(
            '(declare-fun x () Real) (declare-fun y () Real)'
            '(assert (= (- (* x x) y) 2)) (assert (or (= (cos x) y) (< y 0)))'
        )
        result = basin_hopping(build_objective(formula), k=20, seed=7)
        self.assertEqual(result.values, sorted(result.values))
        for point in result.points:
            self.assertLessEqual(point.value, point.start_value)

    def test_no_duplicates(self):
        objective = build_objective(Literal(sub(x, Const(2)), EQ))
        points = basin_hopping(objective, k=10, seed=3).points
        for i, a in enumerate(points):
            for b in points[i + 1:]:
                self.assertGreater(np.max(np.abs(a.x - b.x)), 1e-9)

    def test_zero_budget_returns_empty(self):
        objective = build_objective(Literal(sub(x, Const(2)), EQ))
        result = basin_hopping(objective, k=5, budget=0)
        self.assertEqual(len(result), 0)
        self.assertTrue(result.exhausted)

    def test_rejects_k_zero(self):
        with self.assertRaises(ValueError):
            basin_hopping(build_objective(Literal(x, EQ)), k=0)


class StartBoundsTests(SimpleTestCase):

    def test_default_box(self):
        formula = Formula.from_literals([Literal(Mul((x, x)), EQ)])
        self.assertEqual(start_bounds(formula), [(-10.0, 10.0)])

    def test_bound_literals(self):
        formula = parse_formula(
            '(declare-fun x () Real) (declare-fun y () Real)'
            '(assert (<= x 3)) (assert (>= x (- 1))) (assert (<= (* 2 y) 1))'
            '(assert (= (* x y) 1))'
        )
        self.assertEqual(start_bounds(formula), [(-1.0, 3.0), (-19.5, 0.5)])
