import math
import random
from fractions import Fraction

import mpmath
from django.test import SimpleTestCase

from apps.formulas.parser import parse_formula
from apps.formulas.terms import Add, Const, Func, Mul, Neg, Var, term_vars
from apps.formulas.tests import EJEMPLO_2, random_term

from .boxes import NamedBox, boundary_faces, union_is_box
from .evaluation import eval_interval
from .exceptions import MixedDomainError
from .interval import Interval, icos, iexp, isin, itan

x, y, z = Var('x'), Var('y'), Var('z')

mpmath.mp.dps = 50

_MP_FUNCTIONS = {'sin': mpmath.sin, 'cos': mpmath.cos, 'tan': mpmath.tan, 'exp': mpmath.exp}


def mp_eval(term, point):
    """Evaluacion de referencia con 50 digitos."""
    if isinstance(term, Var):
        return mpmath.mpf(point[term.name])
    if isinstance(term, Const):
        return mpmath.mpf(term.value.numerator) / term.value.denominator
    if isinstance(term, Neg):
        return -mp_eval(term.arg, point)
    if isinstance(term, Add):
        return mpmath.fsum(mp_eval(a, point) for a in term.args)
    if isinstance(term, Mul):
        result = mpmath.mpf(1)
        for a in term.args:
            result *= mp_eval(a, point)
        return result
    return _MP_FUNCTIONS[term.name](mp_eval(term.arg, point))


def box(**intervals):
    return NamedBox.from_mapping({k: Interval(*v) for k, v in intervals.items()})


def random_box(rng, names):
    items = {}
    for name in names:
        lo = rng.uniform(-3, 3)
        items[name] = Interval(lo, lo + rng.uniform(0, 2))
    return NamedBox.from_mapping(items, names)


def sample(rng, named_box):
    return {name: rng.uniform(interval.lo, interval.hi) for name, interval in named_box}


def encloses(interval, value):
    return mpmath.mpf(interval.lo) <= value <= mpmath.mpf(interval.hi)


class IntervalOperationTests(SimpleTestCase):

    def test_rejects_nan_and_empty(self):
        with self.assertRaises(ValueError):
            Interval(math.nan, 1.0)
        with self.assertRaises(ValueError):
            Interval(2.0, 1.0)

    def test_exact_integer_operations(self):
        a = Interval(-1.0, 1.0)
        self.assertEqual(a * a, Interval(-1.0, 1.0))
        self.assertEqual(a ** 2, Interval(0.0, 1.0))
        self.assertEqual(Interval(1.0, 2.0) + Interval(3.0, 4.0), Interval(4.0, 6.0))

    def test_scalar_operations_contain_exact_result(self):
        rng = random.Random(11)
        for _ in range(1000):
            a, b = rng.uniform(-1e3, 1e3), rng.uniform(-1e3, 1e3)
            ia, ib = Interval.point(a), Interval.point(b)
            exact_sum = Fraction(a) + Fraction(b)
            exact_product = Fraction(a) * Fraction(b)
            total, product = ia + ib, ia * ib
            self.assertTrue(Fraction(total.lo) <= exact_sum <= Fraction(total.hi))
            self.assertTrue(Fraction(product.lo) <= exact_product <= Fraction(product.hi))
            cube = ia ** 3
            self.assertTrue(Fraction(cube.lo) <= Fraction(a) ** 3 <= Fraction(cube.hi))

    def test_zero_times_infinity(self):
        result = Interval(0.0, 0.0) * Interval(-math.inf, math.inf)
        self.assertEqual(result.lo, 0.0)
        self.assertEqual(result.hi, 0.0)

    def test_from_rational(self):
        self.assertTrue(Interval.from_rational(Fraction(1, 2)).is_point)
        fifth = Interval.from_rational(Fraction(1, 5))
        self.assertFalse(fifth.is_point)
        self.assertTrue(Fraction(fifth.lo) < Fraction(1, 5) < Fraction(fifth.hi))

    def test_hex_serialization_is_bit_exact(self):
        interval = Interval(-0.1, 1 / 3)
        self.assertEqual(Interval.from_hex(*interval.to_hex()), interval)
        self.assertEqual(interval.to_hex()[0], '-0x1.999999999999ap-4')


class TranscendentalTests(SimpleTestCase):

    def test_sine_on_zero_to_pi(self):
        result = isin(Interval(0.0, math.pi))
        self.assertLessEqual(result.lo, 0.0)
        self.assertGreaterEqual(result.hi, 1.0)

    def test_wide_intervals_give_unit_range(self):
        self.assertEqual(isin(Interval(0.0, 7.0)), Interval(-1.0, 1.0))
        self.assertEqual(icos(Interval(-math.inf, 0.0)), Interval(-1.0, 1.0))

    def test_cosine_extremes(self):
        self.assertEqual(icos(Interval(-0.1, 0.1)).hi, 1.0)
        self.assertEqual(icos(Interval(3.0, 3.2)).lo, -1.0)
        monotone = icos(Interval(0.5, 1.0))
        self.assertLess(monotone.hi, 1.0)
        self.assertGreater(monotone.lo, 0.5)

    def test_tangent_pole_gives_entire_line(self):
        self.assertEqual(itan(Interval(1.5, 1.6)), Interval.entire())
        self.assertEqual(itan(Interval(-4.0, 0.0)), Interval.entire())
        bounded = itan(Interval(-1.0, 1.0))
        self.assertTrue(math.isfinite(bounded.lo) and math.isfinite(bounded.hi))

    def test_exponential_overflow(self):
        result = iexp(Interval(0.0, 1000.0))
        self.assertEqual(result.hi, math.inf)
        self.assertLessEqual(result.lo, 1.0)
        self.assertGreaterEqual(iexp(Interval(-1000.0, -999.0)).lo, 0.0)

    def test_enclosures_against_high_precision(self):
        rng = random.Random(5)
        functions = [(isin, mpmath.sin), (icos, mpmath.cos), (itan, mpmath.tan), (iexp, mpmath.exp)]
        for _ in range(300):
            lo = rng.uniform(-20, 20)
            interval = Interval(lo, lo + rng.uniform(0, 1))
            for _ in range(4):
                point = rng.uniform(interval.lo, interval.hi)
                for ifn, mpfn in functions:
                    with self.subTest(fn=mpfn.__name__, lo=interval.lo, hi=interval.hi, point=point):
                        self.assertTrue(encloses(ifn(interval), mpfn(mpmath.mpf(point))))


class EvalIntervalTests(SimpleTestCase):

    def test_square_on_symmetric_interval(self):
        result = eval_interval(Mul((x, x)), box(x=(-1.0, 1.0)))
        self.assertTrue(result.contains(Interval(0.0, 1.0)))
        self.assertTrue(Interval(-1.0, 1.0).contains(result))

    def test_sine_range(self):
        result = eval_interval(Func('sin', x), box(x=(0.0, math.pi)))
        self.assertGreaterEqual(result.hi, 1.0)

    def test_inequalities_of_example_hold_on_box(self):
        formula = parse_formula(EJEMPLO_2)
        certificate_box = box(x=(-0.1, 0.05), y=(1.4, 1.9), z=(0.2, 0.2))
        for clause in formula.clauses[2:]:
            literal = clause.literals[0]
            with self.subTest(literal=literal):
                self.assertLess(eval_interval(literal.lhs, certificate_box).hi, 0.0)

    def test_missing_variable(self):
        with self.assertRaises(KeyError):
            eval_interval(Add((x, y)), box(x=(0.0, 1.0)))

    def test_containment_on_random_terms(self):
        rng = random.Random(2024)
        names = ['a', 'b', 'c']
        checked = 0
        for _ in range(60):
            term = random_term(rng, names)
            named_box = random_box(rng, names)
            result = eval_interval(term, named_box)
            for _ in range(20):
                point = sample(rng, named_box)
                value = mp_eval(term, point)
                with self.subTest(term=term, point=point):
                    self.assertTrue(encloses(result, value))
                checked += 1
        self.assertEqual(checked, 1200)

    def test_inclusion_monotonicity(self):
        rng = random.Random(99)
        names = ['a', 'b']
        for _ in range(200):
            term = random_term(rng, names)
            outer = random_box(rng, names)
            inner_items = {}
            for name, interval in outer:
                lo = rng.uniform(interval.lo, interval.hi)
                inner_items[name] = Interval(lo, rng.uniform(lo, interval.hi))
            inner = NamedBox.from_mapping(inner_items, names)
            with self.subTest(term=term):
                self.assertTrue(eval_interval(term, outer).contains(eval_interval(term, inner)))

    def test_constant_terms_use_empty_box(self):
        result = eval_interval(Add((Const(1), Const(Fraction(1, 2)))), NamedBox(()))
        self.assertEqual(result, Interval(1.5, 1.5))
        self.assertEqual(term_vars(Const(3)), ())


class BoxGeometryTests(SimpleTestCase):

    def test_faces_one_dimension(self):
        faces = boundary_faces(box(x=(0.0, 2.0)))
        self.assertEqual(len(faces), 2)
        self.assertEqual([face.box['x'] for face in faces], [Interval(0.0, 0.0), Interval(2.0, 2.0)])

    def test_faces_count(self):
        for n in range(1, 6):
            named = NamedBox.from_mapping({f'v{i}': Interval(0.0, 1.0) for i in range(n)})
            with self.subTest(n=n):
                self.assertEqual(len(boundary_faces(named)), 2 * n)

    def test_face_orientation(self):
        faces = boundary_faces(box(x=(0.0, 1.0), y=(0.0, 1.0)))
        self.assertEqual([f.orientation for f in faces], [-1, 1, 1, -1])

    def test_union_singleton(self):
        single = box(x=(0.0, 1.0))
        self.assertEqual(union_is_box([single]), single)

    def test_union_adjacent_slabs(self):
        union = union_is_box([box(x=(0.0, 1.0), y=(0.0, 1.0)), box(x=(1.0, 2.0), y=(0.0, 1.0))])
        self.assertEqual(union, box(x=(0.0, 2.0), y=(0.0, 1.0)))

    def test_union_diagonal_is_not_box(self):
        self.assertIsNone(union_is_box([box(x=(0.0, 1.0), y=(0.0, 1.0)), box(x=(1.0, 2.0), y=(1.0, 2.0))]))

    def test_union_with_gap(self):
        self.assertIsNone(union_is_box([box(x=(0.0, 1.0)), box(x=(1.5, 2.0))]))

    def test_union_of_grid_quarters(self):
        quarters = [
            box(x=(a, a + 0.5), y=(b, b + 0.5))
            for a in (0.0, 0.5) for b in (0.0, 0.5)
        ]
        self.assertEqual(union_is_box(quarters), box(x=(0.0, 1.0), y=(0.0, 1.0)))
        self.assertIsNone(union_is_box(quarters[:3]))

    def test_mixed_domains(self):
        with self.assertRaises(MixedDomainError):
            union_is_box([box(x=(0.0, 1.0)), box(y=(0.0, 1.0))])
