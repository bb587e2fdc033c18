import math
import random
from fractions import Fraction

from django.test import SimpleTestCase

from .exceptions import CnfSizeError, FormulaSyntaxError, SelectorError, UnsupportedConstructError
from .linear import linear_form
from .normalize import normalize
from .numeric import compile_term, evaluate
from .parser import parse_formula
from .printer import formula_digest, print_formula
from .systems import dnf_expand, partition_selected
from .terms import (
    EQ, GE, GT, LE, LT, Add, Clause, Const, Formula, Func, Literal, Mul, Neg, Var,
    const, neg, term_vars,
)

x, y, z, w = Var('x'), Var('y'), Var('z'), Var('w')

EJEMPLO_2 = """
(declare-fun x () Real)
(declare-fun y () Real)
(declare-fun z () Real)
(assert (or (= (cos y) 0) (= (sin y) (exp x))))
(assert (or (= (sin y) 0) (= (cos y) (sin (- (* 8 x x) z)))))
(assert (<= (- x y) (cos z)))
(assert (>= (+ x y) (sin z)))
"""

EJEMPLO_1 = """
(declare-fun x () Real)
(declare-fun y () Real)
(declare-fun z () Real)
(declare-fun w () Real)
(assert (and (= (- x (tan y)) 0) (= (^ z 2) 0) (= w 0) (= (sin w) 0)))
"""


def random_term(rng, names, depth=3):
    if depth == 0 or rng.random() < 0.3:
        if rng.random() < 0.6:
            return Var(rng.choice(names))
        return Const(Fraction(rng.randint(-9, 9), rng.randint(1, 4)))
    kind = rng.choice(['add', 'mul', 'neg', 'func'])
    if kind == 'add':
        return Add(tuple(random_term(rng, names, depth - 1) for _ in range(rng.randint(2, 3))))
    if kind == 'mul':
        return Mul(tuple(random_term(rng, names, depth - 1) for _ in range(2)))
    if kind == 'neg':
        return neg(random_term(rng, names, depth - 1))
    return Func(rng.choice(['sin', 'cos', 'tan', 'exp']), random_term(rng, names, depth - 1))


def random_formula(rng, names=('a', 'b', 'c'), normalized=False):
    clauses = []
    for _ in range(rng.randint(1, 4)):
        literals = []
        for _ in range(rng.randint(1, 3)):
            lhs = random_term(rng, list(names))
            if normalized:
                literals.append(Literal(lhs, rng.choice([EQ, LE, LT])))
            else:
                rhs = random_term(rng, list(names), depth=1)
                literals.append(Literal(lhs, rng.choice([EQ, LE, LT, GE, GT]), rhs, rng.random() < 0.3))
        clauses.append(Clause(tuple(literals)))
    return Formula.build(clauses)


class ParseFormulaTests(SimpleTestCase):

    def test_single_equation(self):
        formula = parse_formula('(declare-fun x () Real) (assert (= (* x x) 0))')
        self.assertEqual(formula.vars, ('x',))
        self.assertEqual(len(formula.clauses), 1)
        self.assertEqual(formula.clauses[0].literals, (Literal(Mul((x, x)), EQ),))

    def test_example_with_four_clauses(self):
        formula = parse_formula(EJEMPLO_1)
        self.assertEqual(len(formula.clauses), 4)
        self.assertEqual(formula.vars, ('x', 'y', 'z', 'w'))

    def test_negated_equation_becomes_two_strict_literals(self):
        formula = parse_formula('(declare-fun x () Real) (assert (not (= x 0)))')
        self.assertEqual(formula.clauses[0].literals, (Literal(x, LT), Literal(Neg(x), LT)))

    def test_decimal_is_exact(self):
        formula = parse_formula('(declare-fun x () Real) (assert (= x 0.2))')
        self.assertEqual(formula.clauses[0].literals[0].lhs, Add((x, Const(Fraction(-1, 5)))))

    def test_division_by_constant_is_folded(self):
        formula = parse_formula('(declare-fun x () Real) (assert (<= (/ x 4) (/ 1 2)))', normalize=False)
        literal = formula.clauses[0].literals[0]
        self.assertEqual(literal.lhs, Mul((Const(Fraction(1, 4)), x)))
        self.assertEqual(literal.rhs, Const(Fraction(1, 2)))

    def test_division_by_term_is_rejected(self):
        with self.assertRaises(UnsupportedConstructError):
            parse_formula('(declare-fun x () Real) (assert (= (/ 1 x) 2))')

    def test_power_is_repeated_product(self):
        formula = parse_formula('(declare-fun x () Real) (assert (= (^ x 3) 0))')
        self.assertEqual(formula.clauses[0].literals[0].lhs, Mul((x, x, x)))

    def test_unary_minus_of_numeral_is_constant(self):
        formula = parse_formula('(declare-fun x () Real) (assert (= x (- 3)))', normalize=False)
        self.assertEqual(formula.clauses[0].literals[0].rhs, Const(-3))

    def test_non_cnf_assert_is_distributed(self):
        text = """
        (declare-fun a () Real) (declare-fun b () Real) (declare-fun c () Real)
        (assert (or (and (= a 0) (= b 0)) (= c 0)))
        """
        formula = parse_formula(text)
        self.assertEqual(len(formula.clauses), 2)
        self.assertEqual([len(c) for c in formula.clauses], [2, 2])

    def test_cnf_cap(self):
        disjuncts = ' '.join(f'(and (= x {i}) (= x {i + 1}))' for i in range(12))
        text = f'(declare-fun x () Real) (assert (or {disjuncts}))'
        with self.assertRaises(CnfSizeError):
            parse_formula(text, cnf_cap=1000)

    def test_syntax_error_reports_position(self):
        with self.assertRaises(FormulaSyntaxError) as ctx:
            parse_formula('(declare-fun x () Real)\n(assert (= x 0)')
        self.assertEqual(ctx.exception.line, 2)
        self.assertEqual(ctx.exception.column, 1)

    def test_undeclared_symbol(self):
        with self.assertRaises(FormulaSyntaxError) as ctx:
            parse_formula('(declare-fun x () Real) (assert (= y 0))')
        self.assertIn('y', ctx.exception.message)

    def test_unsupported_constructs_are_named(self):
        cases = {
            '(declare-fun x () Real) (assert (forall ((y Real)) (= x y)))': 'forall',
            '(declare-fun n () Int)': 'Int',
            '(declare-fun b () Bool)': 'Bool',
            '(declare-fun x () Real) (assert (let ((y x)) (= y 0)))': 'let',
            '(declare-fun x () Real) (assert (= (ite (= x 0) 1 2) 0))': 'ite',
        }
        for text, name in cases.items():
            with self.subTest(name=name):
                with self.assertRaises(UnsupportedConstructError) as ctx:
                    parse_formula(text)
                self.assertIn(name, ctx.exception.construct)


class NormalizeTests(SimpleTestCase):

    def test_not_equal(self):
        formula = Formula.from_literals([Literal(x, EQ, negated=True)])
        self.assertEqual(normalize(formula).clauses[0].literals, (Literal(x, LT), Literal(Neg(x), LT)))

    def test_move_constant_left(self):
        formula = Formula.from_literals([Literal(x, LE, const(3))])
        self.assertEqual(normalize(formula).clauses[0].literals, (Literal(Add((x, Const(-3))), LE),))

    def test_negated_inequality_and_equation(self):
        formula = Formula.from_literals([Literal(x, LE, negated=True)], [Literal(y, EQ)])
        result = normalize(formula)
        self.assertEqual(result.clauses[0].literals, (Literal(Neg(x), LT),))
        self.assertEqual(result.clauses[1].literals, (Literal(y, EQ),))

    def test_negated_strict(self):
        formula = Formula.from_literals([Literal(x, LT, negated=True)])
        self.assertEqual(normalize(formula).clauses[0].literals, (Literal(Neg(x), LE),))

    def test_greater_equal_is_flipped(self):
        formula = Formula.from_literals([Literal(Add((x, y)), GE, const(Fraction(1, 1000)))])
        literal = normalize(formula).clauses[0].literals[0]
        self.assertEqual(literal.relation, LE)
        self.assertEqual(literal.lhs, Neg(Add((Add((x, y)), Const(Fraction(-1, 1000))))))

    def test_idempotent(self):
        rng = random.Random(11)
        for case in range(200):
            formula = random_formula(rng)
            with self.subTest(case=case):
                once = normalize(formula)
                self.assertEqual(normalize(once), once)
                self.assertTrue(all(l.is_normal for c in once.clauses for l in c.literals))


class PrinterTests(SimpleTestCase):

    def test_round_trip_raw(self):
        rng = random.Random(3)
        for case in range(200):
            formula = random_formula(rng)
            with self.subTest(case=case):
                self.assertEqual(parse_formula(print_formula(formula), normalize=False), formula)

    def test_round_trip_normalized(self):
        rng = random.Random(5)
        for case in range(200):
            formula = random_formula(rng, normalized=True)
            with self.subTest(case=case):
                self.assertEqual(parse_formula(print_formula(formula)), formula)

    def test_printer_format(self):
        formula = Formula.from_literals([Literal(x, LT), Literal(Neg(x), LT)], [Literal(Add((y, Const(Fraction(-1, 2)))), LE)])
        text = print_formula(formula)
        self.assertIn('(assert (or (< x 0) (< (- x) 0)))', text)
        self.assertIn('(assert (<= (+ y (- (/ 1 2))) 0))', text)
        self.assertTrue(text.startswith('(set-logic QF_NRA)\n(declare-fun x () Real)\n(declare-fun y () Real)'))

    def test_digest_depends_on_content_not_layout(self):
        compact = parse_formula('(declare-fun x () Real)(assert (= x 1))')
        spaced = parse_formula('; comentario\n(declare-fun x () Real)\n\n(assert\n  (= x 1))\n')
        self.assertEqual(formula_digest(compact), formula_digest(spaced))


class PartitionSelectedTests(SimpleTestCase):

    def setUp(self):
        self.formula = parse_formula(EJEMPLO_2)

    def test_example_two(self):
        system = partition_selected(self.formula, (1, 1, 0, 0), {'z': 0.2})
        self.assertEqual(len(system.equations), 2)
        self.assertEqual(len(system.inequalities), 2)
        self.assertEqual(system.domain_vars, ('x', 'y'))
        self.assertEqual(system.active_vars, ('x', 'y'))
        self.assertTrue(system.is_square)
        point = {'x': 0.3, 'y': 1.1}
        self.assertAlmostEqual(evaluate(system.equations[0], point), math.sin(1.1) - math.exp(0.3))
        self.assertAlmostEqual(
            evaluate(system.equations[1], point), math.cos(1.1) - math.sin(8 * 0.09 - 0.2)
        )

    def test_vars_of_output_exclude_instantiated(self):
        rng = random.Random(17)
        for case in range(100):
            formula = normalize(random_formula(rng))
            selector = tuple(rng.randrange(len(c)) for c in formula.clauses)
            chosen = formula.selected_vars(selector)
            assignment = {v: rng.uniform(-1, 1) for v in chosen if rng.random() < 0.5}
            system = partition_selected(formula, selector, assignment)
            with self.subTest(case=case):
                for term in system.equations + system.all_inequalities:
                    self.assertTrue(set(term_vars(term)) <= set(system.domain_vars))
                    self.assertFalse(set(term_vars(term)) & set(assignment))

    def test_no_equations(self):
        formula = parse_formula('(declare-fun x () Real) (assert (<= x 1)) (assert (< (- x) 0))')
        system = partition_selected(formula, (0, 0))
        self.assertEqual(system.equations, ())
        self.assertEqual(len(system.inequalities), 1)
        self.assertEqual(len(system.strict), 1)

    def test_full_assignment_gives_empty_domain(self):
        system = partition_selected(self.formula, (1, 1, 0, 0), {'x': 0.0, 'y': 1.5, 'z': 0.2})
        self.assertEqual(system.domain_vars, ())
        for term in system.equations + system.inequalities:
            self.assertEqual(term_vars(term), ())

    def test_selector_missing_clause(self):
        with self.assertRaises(SelectorError):
            partition_selected(self.formula, (1, 1, 0))
        with self.assertRaises(SelectorError):
            partition_selected(self.formula, {0: 1, 1: 1, 2: 0})

    def test_assignment_outside_selection_is_flagged(self):
        formula = parse_formula('(declare-fun x () Real) (declare-fun y () Real) (assert (or (= x 0) (= y 0)))')
        system = partition_selected(formula, (0,), {'y': 1.0})
        self.assertEqual(len(system.warnings), 1)
        self.assertEqual(system.domain_vars, ('x', 'y'))
        self.assertEqual(system.active_vars, ('x',))


class DnfExpandTests(SimpleTestCase):

    def test_two_clauses(self):
        a, b, c = (Literal(Add((x, const(i))), EQ) for i in (1, 2, 3))
        formula = Formula.from_literals([a, b], [c])
        conjunctions = list(dnf_expand(formula))
        self.assertEqual(conjunctions, [Formula.from_literals([a], [c]), Formula.from_literals([b], [c])])

    def test_unit_formula_is_identity(self):
        formula = parse_formula('(declare-fun x () Real) (assert (= x 1)) (assert (<= x 2))')
        self.assertEqual(list(dnf_expand(formula)), [formula])

    def test_count_matches_product(self):
        rng = random.Random(23)
        for case in range(30):
            sizes = [rng.randint(1, 3) for _ in range(rng.randint(1, 8))]
            clauses = [[Literal(Add((x, const(j))), EQ) for j in range(size)] for size in sizes]
            formula = Formula.from_literals(*clauses)
            expansion = dnf_expand(formula, cap=10 ** 6)
            with self.subTest(case=case):
                self.assertEqual(sum(1 for _ in expansion), math.prod(sizes))
                self.assertFalse(expansion.truncated)

    def test_truncated_at_cap(self):
        clauses = [[Literal(Add((x, const(i))), EQ), Literal(Add((y, const(i))), EQ)] for i in range(14)]
        expansion = dnf_expand(Formula.from_literals(*clauses))
        self.assertTrue(expansion.truncated)
        self.assertEqual(expansion.total, 2 ** 14)
        self.assertEqual(sum(1 for _ in expansion), 10_000)


class NumericTests(SimpleTestCase):

    def test_gradient_matches_central_differences(self):
        rng = random.Random(29)
        names = ['a', 'b', 'c']
        checked = 0
        while checked < 200:
            term = random_term(rng, names, depth=3)
            point = [rng.uniform(-1.2, 1.2) for _ in names]
            compiled = compile_term(term, names)
            value, grad = compiled.value_and_gradient(point)
            if not math.isfinite(value) or abs(value) > 100 or not all(abs(g) <= 100 for g in grad):
                continue
            for i in range(len(names)):
                h = 1e-6 * max(1.0, abs(point[i]))
                up = list(point)
                down = list(point)
                up[i] += h
                down[i] -= h
                numeric = (compiled.value(up) - compiled.value(down)) / (2 * h)
                self.assertLessEqual(abs(numeric - grad[i]), max(1e-4, 1e-4 * abs(grad[i])))
            checked += 1

    def test_exp_overflow_is_infinite(self):
        self.assertEqual(evaluate(Func('exp', x), {'x': 1000.0}), math.inf)


class LinearFormTests(SimpleTestCase):

    def test_linear_combination(self):
        term = Add((Mul((const(2), x)), Neg(y), const(3)))
        form = linear_form(term)
        self.assertEqual(form.coeffs, {x: 2, y: -1})
        self.assertEqual(form.constant, 3)

    def test_nonlinear_subterms_are_atoms(self):
        term = Add((Mul((x, y)), Func('sin', x)))
        form = linear_form(term)
        self.assertEqual(set(form.coeffs), {Mul((x, y)), Func('sin', x)})

    def test_single_variable(self):
        self.assertEqual(linear_form(Add((x, const(-3)))).single_variable(), ('x', 1))
        self.assertIsNone(linear_form(Add((x, y))).single_variable())
