import math
import random
from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase

from apps.formulas.parser import parse_formula
from apps.formulas.terms import EQ, LE, LT, Add, Const, Formula, Func, Literal, Mul, Var, sub
from apps.formulas.tests import random_formula

from .objective import build_objective, eval_objective, gradient

x, y = Var('x'), Var('y')


def random_polynomial(rng, names, depth=3):
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.7:
            return Var(rng.choice(names))
        return Const(Fraction(rng.randint(-5, 5), rng.randint(1, 3)))
    if rng.random() < 0.5:
        return Add((random_polynomial(rng, names, depth - 1), random_polynomial(rng, names, depth - 1)))
    return Mul((random_polynomial(rng, names, depth - 1), random_polynomial(rng, names, depth - 1)))


class BuildObjectiveTests(SimpleTestCase):

    def test_equation_is_absolute_value(self):
        objective = build_objective(Formula.from_literals([Literal(x, EQ)]))
        self.assertEqual(eval_objective(objective, {'x': 0.0}), 0.0)
        self.assertEqual(eval_objective(objective, {'x': 3.0}), 3.0)
        self.assertEqual(eval_objective(objective, {'x': -3.0}), 3.0)

    def test_inequality_is_positive_part(self):
        objective = build_objective(Formula.from_literals([Literal(sub(x, Const(1)), LE)]))
        self.assertEqual(eval_objective(objective, {'x': 2.0}), 1.0)
        self.assertEqual(eval_objective(objective, {'x': 0.0}), 0.0)

    def test_strict_uses_same_penalty(self):
        objective = build_objective(Literal(x, LT))
        self.assertEqual(eval_objective(objective, [0.0]), 0.0)
        self.assertEqual(eval_objective(objective, [2.5]), 2.5)

    def test_min_over_clause_and_sum_over_clauses(self):
        formula = Formula.from_literals(
            [Literal(x, EQ), Literal(sub(x, Const(2)), EQ)],
            [Literal(sub(x, Const(2)), LE)],
        )
        objective = build_objective(formula)
        self.assertEqual(eval_objective(objective, {'x': 2.0}), 0.0)
        self.assertEqual(eval_objective(objective, {'x': 3.0}), 1.0 + 1.0)
        self.assertEqual(eval_objective(objective, {'x': 0.5}), 0.5)

    def test_literal_objective(self):
        objective = build_objective(Literal(Add((x, y)), EQ))
        self.assertEqual(objective.arity, 2)
        self.assertEqual(eval_objective(objective, {'x': 1.0, 'y': 1.0}), 2.0)

    def test_tangent_pole_maps_to_infinity(self):
        objective = build_objective(Literal(Func('tan', x), EQ))
        self.assertEqual(eval_objective(objective, {'x': math.inf}), math.inf)

    def test_exponential_overflow_is_infinite(self):
        objective = build_objective(Literal(Func('exp', x), LE))
        self.assertEqual(eval_objective(objective, {'x': 1000.0}), math.inf)

    def test_cached_per_formula(self):
        formula = Formula.from_literals([Literal(x, EQ)])
        self.assertIs(build_objective(formula), build_objective(formula))

    def test_non_negative_on_random_formulas(self):
        rng = random.Random(17)
        for _ in range(200):
            objective = build_objective(random_formula(rng, normalized=True))
            for _ in range(50):
                point = [rng.uniform(-10, 10) for _ in objective.variables]
                value = eval_objective(objective, point)
                with self.subTest(formula=objective.source, point=point):
                    self.assertFalse(math.isnan(value))
                    self.assertGreaterEqual(value, 0.0)

    def test_known_rational_model_is_zero(self):
        formula = parse_formula(
            '(declare-fun x () Real) (declare-fun y () Real)'
            '(assert (= (* (- x 0.5) (+ y 3)) 0))'
            '(assert (or (<= x 1) (= y 7)))'
            '(assert (< (- y x) 0))'
        )
        objective = build_objective(formula)
        self.assertEqual(eval_objective(objective, {'x': 0.5, 'y': -2.0}), 0.0)


class GradientTests(SimpleTestCase):

    def test_absolute_value_branch(self):
        objective = build_objective(Literal(x, EQ))
        np.testing.assert_array_equal(gradient(objective, [3.0]), [1.0])
        np.testing.assert_array_equal(gradient(objective, [-3.0]), [-1.0])

    def test_positive_part_branch(self):
        objective = build_objective(Literal(x, LE))
        np.testing.assert_array_equal(gradient(objective, [-1.0]), [0.0])
        np.testing.assert_array_equal(gradient(objective, [2.0]), [1.0])

    def test_ties_take_first_branch(self):
        objective = build_objective(Literal(x, EQ))
        np.testing.assert_array_equal(gradient(objective, [0.0]), [1.0])
        clause = build_objective(Formula.from_literals([Literal(x, EQ), Literal(y, EQ)]))
        np.testing.assert_array_equal(gradient(clause, [1.0, 1.0]), [1.0, 0.0])

    def test_matches_central_differences(self):
        rng = random.Random(3)
        names = ['a', 'b', 'c']
        checked = 0
        while checked < 300:
            literals = [Literal(random_polynomial(rng, names), rng.choice([EQ, LE])) for _ in range(2)]
            formula = Formula.from_literals([literals[0]], [literals[1]], declared=names)
            objective = build_objective(formula)
            if objective.arity == 0:
                continue
            point = np.array([rng.uniform(-2, 2) for _ in objective.variables])
            raw = [abs(l.compiled.value(point)) for clause in objective.clauses for l in clause]
            if min(raw) < 1e-2:
                continue
            value, grad = objective.value_and_gradient(point)
            numeric = np.zeros_like(grad)
            for i in range(objective.arity):
                h = 1e-6 * max(1.0, abs(point[i]))
                step = np.zeros_like(point)
                step[i] = h
                numeric[i] = (objective.value(point + step) - objective.value(point - step)) / (2 * h)
            tolerance = max(1e-5, 1e-3 * float(np.max(np.abs(grad))))
            with self.subTest(formula=formula, point=point.tolist()):
                self.assertTrue(np.all(np.abs(numeric - grad) <= tolerance))
            checked += 1
