import random
from fractions import Fraction
from unittest import mock

import numpy as np
from django.test import SimpleTestCase

from apps.formulas.parser import parse_formula
from apps.formulas.systems import partition_selected
from apps.formulas.terms import Add, Const, Func, Mul, Var, neg, power, sub
from apps.formulas.tests import EJEMPLO_2
from apps.intervalos.boxes import NamedBox
from apps.intervalos.interval import Interval

from .degree import DegreeStatus, _Undetermined, degree, verify_boundary_nonzero

x, y, z = Var('x'), Var('y'), Var('z')


def box(**bounds):
    return NamedBox(tuple((name, Interval(lo, hi)) for name, (lo, hi) in bounds.items()))


def linear(coefficients, names):
    terms = [Mul((Const(Fraction(c)), Var(n))) for c, n in zip(coefficients, names) if c]
    if not terms:
        return Const(Fraction(0))
    return terms[0] if len(terms) == 1 else Add(tuple(terms))


class BoundaryTests(SimpleTestCase):

    def test_identity_endpoints(self):
        self.assertTrue(verify_boundary_nonzero([x], box(x=(-1, 1))))

    def test_square_endpoints(self):
        self.assertTrue(verify_boundary_nonzero([Mul((x, x))], box(x=(-1, 1))))

    def test_zero_on_boundary(self):
        self.assertFalse(verify_boundary_nonzero([sub(x, Const(1))], box(x=(0, 1))))

    def test_zero_on_two_dimensional_face(self):
        self.assertFalse(verify_boundary_nonzero([sub(x, Const(1)), y], box(x=(0, 1), y=(-1, 1))))

    def test_budget_zero_is_failure(self):
        self.assertFalse(verify_boundary_nonzero([x], box(x=(-1, 1)), budget=0))


class DegreeGroundTruthTests(SimpleTestCase):

    def assertDegree(self, terms, b, expected):
        result = degree(terms, b)
        self.assertEqual(result.status, DegreeStatus.DEGREE, result)
        self.assertEqual(result.value, expected)

    def test_square_has_degree_zero(self):
        self.assertDegree([Mul((x, x))], box(x=(-1, 1)), 0)

    def test_square_minus_one(self):
        f = sub(Mul((x, x)), Const(1))
        self.assertDegree([f], box(x=(-10, 10)), 0)
        self.assertDegree([f], box(x=(-10, 0)), -1)
        self.assertDegree([f], box(x=(0, 10)), 1)

    def test_cube(self):
        self.assertDegree([power(x, 3)], box(x=(-1, 1)), 1)

    def test_identity(self):
        self.assertDegree([x], box(x=(-1, 1)), 1)
        self.assertDegree([x, y], box(x=(-1, 1), y=(-1, 1)), 1)
        self.assertDegree([x, y, z], box(x=(-1, 1), y=(-1, 1), z=(-1, 1)), 1)

    def test_reflection(self):
        self.assertDegree([neg(x), y], box(x=(-1, 1), y=(-1, 1)), -1)
        self.assertDegree([y, x], box(x=(-1, 1), y=(-1, 1)), -1)

    def test_reduced_component_vanishing_at_corners(self):
        self.assertDegree([sub(x, y), Add((x, y))], box(x=(-1, 1), y=(-1, 1)), 1)

    def test_complex_square(self):
        # z -> z^2 en el plano: dos vueltas alrededor del origen
        re = sub(Mul((x, x)), Mul((y, y)))
        im = Mul((Const(2), x, y))
        self.assertDegree([re, im], box(x=(-1, 1), y=(-1, 1)), 2)

    def test_excision(self):
        self.assertDegree([Add((Mul((x, x)), Const(1)))], box(x=(-3, 2)), 0)
        self.assertDegree([sub(x, Const(5)), y], box(x=(-1, 1), y=(-1, 1)), 0)

    def test_zero_dimensional(self):
        self.assertDegree([], NamedBox(()), 1)

    def test_boundary_zero(self):
        result = degree([sub(x, Const(1))], box(x=(0, 1)))
        self.assertEqual(result.status, DegreeStatus.BOUNDARY_ZERO_UNVERIFIED)

    def test_budget_zero(self):
        result = degree([x], box(x=(-1, 1)), budget=0)
        self.assertEqual(result.status, DegreeStatus.BUDGET_EXCEEDED)

    def test_not_square(self):
        with self.assertRaises(ValueError):
            degree([x], box(x=(-1, 1), y=(-1, 1)))

    def test_example_system_has_nonzero_degree(self):
        formula = parse_formula(EJEMPLO_2)
        system = partition_selected(formula, [1, 1, 0, 0], {'z': 0.2})
        b = box(x=(-0.1, 0.05), y=(1.4, 1.9))
        result = degree(system.equations, b)
        self.assertTrue(result.is_nonzero, result)

    def test_additivity_on_split(self):
        f = sub(Mul((x, x)), Const(1))
        whole = degree([f], box(x=(-10, 10))).value
        parts = degree([f], box(x=(-10, 0))).value + degree([f], box(x=(0, 10))).value
        self.assertEqual(whole, parts)

    def test_planted_root_inside(self):
        f1 = sub(Func('sin', x), Mul((Const(Fraction(1, 2)), y)))
        f2 = sub(y, Const(Fraction(1, 4)))
        # raiz en y = 1/4, x = asin(1/8)
        result = degree([f1, f2], box(x=(-0.5, 0.5), y=(-1, 1)))
        self.assertTrue(result.is_nonzero)
        self.assertFalse(degree([f1, f2], box(x=(0.5, 1), y=(-1, 1))).is_nonzero)


class DegreeOracleTests(SimpleTestCase):

    def test_univariate_matches_endpoint_signs(self):
        rng = random.Random(31)
        checked = 0
        while checked < 300:
            coefficients = [rng.randint(-5, 5) for _ in range(rng.randint(1, 5))]
            a = rng.randint(-4, 3)
            b = rng.randint(a + 1, 4)

            def value(t):
                return sum(c * Fraction(t) ** i for i, c in enumerate(coefficients))

            if value(a) == 0 or value(b) == 0:
                continue
            terms = [Const(Fraction(coefficients[0]))]
            terms.extend(Mul((Const(Fraction(c)), power(x, i))) for i, c in enumerate(coefficients) if i and c)
            polynomial = terms[0] if len(terms) == 1 else Add(tuple(terms))
            expected = ((value(b) > 0) - (value(b) < 0) - ((value(a) > 0) - (value(a) < 0))) // 2
            result = degree([polynomial], box(x=(a, b)))
            with self.subTest(coefficients=coefficients, box=(a, b)):
                self.assertEqual(result.status, DegreeStatus.DEGREE)
                self.assertEqual(result.value, expected)
            checked += 1

    def test_linear_maps_match_determinant_sign(self):
        rng = random.Random(2)
        checked = 0
        while checked < 150:
            a = [[rng.randint(-4, 4) for _ in range(2)] for _ in range(2)]
            det = a[0][0] * a[1][1] - a[0][1] * a[1][0]
            if det == 0:
                continue
            terms = [linear(row, ['x', 'y']) for row in a]
            result = degree(terms, box(x=(-1, 1), y=(-1, 1)))
            with self.subTest(matrix=a):
                self.assertEqual(result.status, DegreeStatus.DEGREE)
                self.assertEqual(result.value, 1 if det > 0 else -1)
            checked += 1

    def test_reduced_zero_on_cube_edges(self):
        # para todo k el cero del sistema reducido toca una arista o un vertice
        a = [[-3, 0, 3], [1, 1, 0], [1, 2, -2]]
        terms = [linear(row, ['x', 'y', 'z']) for row in a]
        result = degree(terms, box(x=(-1, 1), y=(-1, 1), z=(-1, 1)))
        self.assertEqual(result.status, DegreeStatus.DEGREE, result)
        self.assertEqual(result.value, 1)

    def test_three_dimensional_linear_maps_match_determinant_sign(self):
        rng = random.Random(17)
        checked = 0
        while checked < 40:
            a = [[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)]
            det = round(np.linalg.det(np.array(a, dtype=float)))
            if det == 0:
                continue
            terms = [linear(row, ['x', 'y', 'z']) for row in a]
            result = degree(terms, box(x=(-1, 1), y=(-1, 1), z=(-1, 1)))
            with self.subTest(matrix=a):
                self.assertEqual(result.status, DegreeStatus.DEGREE)
                self.assertEqual(result.value, 1 if det > 0 else -1)
            checked += 1

    def test_unresolved_reduction_keeps_verified_boundary(self):
        with mock.patch('apps.grado.degree._degree', side_effect=_Undetermined()):
            result = degree([x, y], box(x=(-1, 1), y=(-1, 1)))
        self.assertEqual(result.status, DegreeStatus.UNRESOLVED)
        self.assertTrue(result.boundary_verified)
        self.assertIsNone(result.value)
