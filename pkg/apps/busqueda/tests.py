from fractions import Fraction
from unittest import mock

from django.test import SimpleTestCase, override_settings, tag

from apps.certificados.certificate import Verdict
from apps.certificados.checker import check_certificate
from apps.formulas.parser import parse_formula
from apps.formulas.terms import Const, Mul, Var, power, sub
from apps.formulas.tests import EJEMPLO_1, EJEMPLO_2
from apps.intervalos.boxes import NamedBox
from apps.intervalos.evaluation import eval_interval
from apps.intervalos.interval import Interval
from apps.objetivos.objective import build_objective

from .boxes import box_search_eps_inflation, box_search_gridding
from .config import PRESETS, BoxStrategy, SearchConfig
from .engine import SearchResult, _Deadline, _Search, children_instantiations, children_points, solve
from .forced import ForcedCheck, forced_literal_consistency
from .literals import children_literals
from .statistics import SearchStatistics

x, y = Var('x'), Var('y')

EJEMPLO_FORZADO = """
(declare-fun x () Real)
(declare-fun y () Real)
(assert (or (= (+ x y) 0) (= x (exp (* 1000000 y)))))
(assert (or (>= (+ x y) 0.001) (= x (tan (+ y 0.001)))))
"""


def literals_of(text):
    return [clause.literals[0] for clause in parse_formula(text).clauses]


def box(**bounds):
    return NamedBox(tuple((name, Interval(float(lo), float(hi))) for name, (lo, hi) in bounds.items()))


def quick(config_id='7b', **changes):
    values = {'k': 5, 'timeout_ms': 30_000}
    values.update(changes)
    return SearchConfig.preset(config_id, **values)


class SearchConfigTests(SimpleTestCase):

    def test_preset_table(self):
        self.assertEqual(len(PRESETS), 15)
        self.assertEqual(list(PRESETS)[:3], ['1a', '1b', '1c'])
        self.assertEqual(PRESETS['1a']['boxes'], BoxStrategy.GRID)

    def test_best_configuration_enables_every_heuristic(self):
        cfg = SearchConfig.preset('7b')
        self.assertTrue(all(cfg.flags.values()))
        self.assertEqual(cfg.boxes, BoxStrategy.EPS)
        self.assertEqual(cfg.config_id, '7b')

    def test_rows_add_heuristics(self):
        previous = set()
        for row in '1234567':
            enabled = {name for name, on in SearchConfig.preset(f'{row}c').flags.items() if on}
            self.assertLessEqual(previous, enabled)
            previous = enabled

    def test_explicit_values_win_over_preset(self):
        cfg = SearchConfig.preset('7c', sort_literals=False, boxes='grid')
        self.assertFalse(cfg.sort_literals)
        self.assertEqual(cfg.boxes, BoxStrategy.GRID)

    def test_unknown_preset(self):
        with self.assertRaises(ValueError):
            SearchConfig.preset('9z')

    def test_thresholds_must_be_positive(self):
        with self.assertRaises(ValueError):
            SearchConfig(eps_lit=0.0)
        with self.assertRaises(ValueError):
            SearchConfig(grid_limit=0)

    @override_settings(NTACERT_SEED=11, NTACERT_K=7, NTACERT_DEFAULT_CONFIG='3b')
    def test_settings_are_defaults(self):
        cfg = SearchConfig.preset()
        self.assertEqual((cfg.seed, cfg.k, cfg.config_id), (11, 7, '3b'))
        self.assertEqual(SearchConfig.from_settings(seed=2).seed, 2)


class ForcedLiteralTests(SimpleTestCase):

    def test_example_branch_is_inconsistent(self):
        forced = literals_of(
            '(declare-fun x () Real) (declare-fun y () Real) '
            '(assert (= (+ x y) 0)) (assert (>= (+ x y) 0.001))'
        )
        self.assertEqual(forced_literal_consistency(forced), ForcedCheck.INCONSISTENT)

    def test_single_equation(self):
        self.assertEqual(
            forced_literal_consistency(literals_of('(declare-fun x () Real) (assert (= x 0))')),
            ForcedCheck.CONSISTENT_UNKNOWN,
        )

    def test_substitution_clash(self):
        forced = literals_of('(declare-fun x () Real) (assert (= x 1)) (assert (= x 2))')
        self.assertEqual(forced_literal_consistency(forced), ForcedCheck.INCONSISTENT)

    def test_strict_constant(self):
        forced = literals_of('(declare-fun x () Real) (assert (= x 0)) (assert (< x 0))')
        self.assertEqual(forced_literal_consistency(forced), ForcedCheck.INCONSISTENT)

    def test_opposed_bounds(self):
        forced = literals_of('(declare-fun x () Real) (assert (<= x 0)) (assert (>= x 1))')
        self.assertEqual(forced_literal_consistency(forced), ForcedCheck.INCONSISTENT)

    def test_nonlinear_subterms_are_opaque(self):
        clash = literals_of('(declare-fun x () Real) (assert (= (sin x) 1)) (assert (>= (sin x) 2))')
        self.assertEqual(forced_literal_consistency(clash), ForcedCheck.INCONSISTENT)
        fine = literals_of('(declare-fun x () Real) (declare-fun y () Real) (assert (= (* x y) 1)) (assert (= x 2))')
        self.assertEqual(forced_literal_consistency(fine), ForcedCheck.CONSISTENT_UNKNOWN)

    def test_chain_of_substitutions(self):
        forced = literals_of(
            '(declare-fun a () Real) (declare-fun b () Real) (declare-fun c () Real) '
            '(assert (= (- a b) 0)) (assert (= (- b c) 0)) (assert (< (- a c) 0))'
        )
        self.assertEqual(forced_literal_consistency(forced), ForcedCheck.INCONSISTENT)


class ChildrenLiteralsTests(SimpleTestCase):

    def test_single_literal(self):
        formula = parse_formula('(declare-fun x () Real) (assert (= x 0))')
        self.assertEqual(children_literals(formula, {'x': 0.0}, SearchConfig()), [(0,)])

    def test_empty_set_gives_no_selectors(self):
        formula = parse_formula('(declare-fun x () Real) (assert (= x 0))')
        self.assertEqual(children_literals(formula, {'x': 3.0}, SearchConfig()), [])

    def test_forced_literals_prune_point(self):
        formula = parse_formula(EJEMPLO_FORZADO)
        point = {'x': 1.0, 'y': -1.0}
        stats = SearchStatistics()
        checked = SearchConfig(eps_lit=0.01, check_forced_literals=True)
        self.assertEqual(children_literals(formula, point, checked, stats), [])
        self.assertEqual(stats.pruned_forced, 1)
        self.assertEqual(children_literals(formula, point, SearchConfig(eps_lit=0.01)), [(0, 0)])

    def test_overconstrained_selection_is_dropped(self):
        formula = parse_formula(EJEMPLO_1)
        point = dict.fromkeys(formula.vars, 0.0)
        self.assertEqual(children_literals(formula, point, SearchConfig()), [(0, 0, 0, 0)])
        self.assertEqual(children_literals(formula, point, SearchConfig(filter_overconstr=True)), [])

    def test_sorting_changes_order_not_set(self):
        formula = parse_formula(
            '(declare-fun x () Real) (declare-fun y () Real) '
            '(assert (or (= x 0) (<= x 1) (= (* x x) 0))) (assert (or (<= y 5) (= y 0)))'
        )
        point = {'x': 1e-8, 'y': 0.0}
        plain = children_literals(formula, point, SearchConfig())
        ordered = children_literals(formula, point, SearchConfig(sort_literals=True))
        self.assertEqual(set(plain), set(ordered))
        self.assertEqual(len(plain), 6)
        self.assertEqual(plain[0], (0, 0))
        self.assertEqual(ordered[0], (1, 0))

    def test_selector_cap(self):
        formula = parse_formula(
            '(declare-fun x () Real) (assert (or (<= x 1) (<= x 2) (<= x 3))) (assert (or (<= x 4) (<= x 5)))'
        )
        selectors = children_literals(formula, {'x': 0.0}, SearchConfig(selector_cap=4))
        self.assertEqual(selectors, [(0, 0), (0, 1), (1, 0), (1, 1)])


class EpsInflationTests(SimpleTestCase):

    def test_identity_succeeds_first_iteration(self):
        result = box_search_eps_inflation([x], [], [], {'x': 0.0}, SearchConfig())
        self.assertEqual(result.degree, 1)
        self.assertEqual(result.iterations, 1)

    def test_square_never_succeeds(self):
        stats = SearchStatistics()
        self.assertIsNone(box_search_eps_inflation([Mul((x, x))], [], [], {'x': 0.0}, SearchConfig(), stats))
        self.assertLessEqual(stats.boxes, 67)

    def test_two_roots_outside_every_box(self):
        f = sub(Mul((x, x)), Const(1))
        self.assertIsNone(box_search_eps_inflation([f], [], [], {'x': 0.0}, SearchConfig()))

    def test_failed_inequality_stops(self):
        stats = SearchStatistics()
        g = sub(x, Const(-1))
        self.assertIsNone(box_search_eps_inflation([x], [g], [], {'x': 0.0}, SearchConfig(), stats))
        self.assertEqual(stats.boxes, 1)

    def test_strict_inequality(self):
        result = box_search_eps_inflation([x], [], [sub(x, Const(1))], {'x': 0.0}, SearchConfig())
        self.assertEqual(result.degree, 1)

    def test_off_center_root(self):
        f = sub(x, Const(Fraction(1, 1000)))
        result = box_search_eps_inflation([f], [], [], {'x': 0.0}, SearchConfig())
        self.assertEqual(result.degree, 1)
        self.assertIn(0.001, result.beta[0]['x'])

    def test_zero_dimensional(self):
        result = box_search_eps_inflation([], [Const(Fraction(-1))], [], {}, SearchConfig())
        self.assertEqual(result.degree, 1)
        self.assertEqual(result.beta[0].dimension, 0)


class GriddingTests(SimpleTestCase):

    def test_two_roots_are_separated(self):
        f = sub(Mul((x, x)), Const(1))
        result = box_search_gridding([f], [], [], box(x=(-10, 10)), SearchConfig())
        self.assertEqual(abs(result.degree), 1)
        interval = result.beta[0]['x']
        self.assertTrue(1.0 in interval or -1.0 in interval)

    def test_identity_immediate(self):
        result = box_search_gridding([x], [], [], box(x=(-1, 1)), SearchConfig())
        self.assertEqual(result.iterations, 1)
        self.assertEqual(result.degree, 1)

    def test_no_real_root_empties_grid(self):
        stats = SearchStatistics()
        result = box_search_gridding([sub(Mul((x, x)), Const(-1))], [], [], box(x=(-1, 1)), SearchConfig(), stats)
        self.assertIsNone(result)
        self.assertEqual(stats.boxes, 1)

    def test_grid_limit(self):
        f = sub(Mul((x, x)), Const(1))
        self.assertIsNone(box_search_gridding([f], [], [], box(x=(-10, 10)), SearchConfig(grid_limit=1)))

    def test_inequalities_split_the_box(self):
        g = sub(Mul((x, sub(Const(1), x))), Const(Fraction(3, 5)))
        result = box_search_gridding([x], [g], [], box(x=(-1, 1)), SearchConfig())
        self.assertEqual(result.degree, 1)
        self.assertGreater(len(result.beta), 1)
        for piece in result.beta:
            self.assertLessEqual(eval_interval(g, piece).hi, 0.0)

    def test_two_dimensional(self):
        f1 = sub(power(x, 2), y)
        f2 = sub(y, Const(Fraction(1, 4)))
        result = box_search_gridding([f1, f2], [], [], box(x=(0.1, 2), y=(-1, 1)), SearchConfig())
        self.assertIsNotNone(result)
        self.assertIn(0.5, result.beta[0]['x'])


class ChildrenTests(SimpleTestCase):

    def test_points_ascending_with_near_zero_first(self):
        formula = parse_formula('(declare-fun x () Real) (assert (= x 2))')
        points = children_points(formula, SearchConfig(k=3))
        objective = build_objective(formula)
        values = [objective.value(p) for p in points]
        self.assertLessEqual(values[0], 1e-6)
        self.assertEqual(values, sorted(values))

    def test_points_of_infeasible_formula(self):
        formula = parse_formula('(declare-fun x () Real) (assert (= (+ (* x x) 1) 0))')
        points = children_points(formula, SearchConfig(k=3))
        self.assertTrue(points)
        objective = build_objective(formula)
        self.assertTrue(all(objective.value(p) >= 1.0 for p in points))

    def test_square_system_needs_no_instantiation(self):
        formula = parse_formula('(declare-fun x () Real) (assert (= x 0))')
        self.assertEqual(children_instantiations(formula, {'x': 0.0}, (0,), SearchConfig()), [{}])

    def test_example_instantiates_one_variable(self):
        formula = parse_formula(EJEMPLO_2)
        point = {'x': 0.0, 'y': 1.6, 'z': 0.2}
        assignments = children_instantiations(formula, point, (1, 1, 0, 0), SearchConfig())
        self.assertIn({'z': 0.2}, assignments)
        self.assertTrue(all(len(a) == 1 for a in assignments))

    def test_structural_filter(self):
        formula = parse_formula(
            '(declare-fun x () Real) (declare-fun y () Real) (declare-fun z () Real) (declare-fun w () Real) '
            '(assert (= (+ x y) 0)) (assert (= (+ z w) 0))'
        )
        point = {'x': 0.1, 'y': -0.1, 'z': 0.3, 'w': -0.3}
        chosen = [set(a) for a in children_instantiations(formula, point, (0, 0), SearchConfig(filter_overconstr_v=True))]
        self.assertEqual(len(chosen), 4)
        self.assertNotIn({'x', 'y'}, chosen)
        self.assertNotIn({'z', 'w'}, chosen)


class SolveTests(SimpleTestCase):

    def assertCertified(self, formula, outcome):
        self.assertEqual(outcome.result, SearchResult.SAT, outcome.statistics)
        report = check_certificate(formula, outcome.certificate)
        self.assertEqual(report.verdict, Verdict.VALID, report.as_dict())

    def test_no_real_root_is_unknown(self):
        formula = parse_formula('(declare-fun x () Real) (assert (= (+ (* x x) 1) 0))')
        outcome = solve(formula, quick())
        self.assertEqual(outcome.result, SearchResult.UNKNOWN)
        self.assertIsNone(outcome.certificate)
        self.assertEqual(outcome.statistics.selectors, 0)

    def test_simple_root_with_inequality(self):
        formula = parse_formula('(declare-fun x () Real) (assert (= x 1)) (assert (<= x 2))')
        self.assertCertified(formula, solve(formula, quick()))

    def test_root_on_inequality_boundary_is_not_certified(self):
        # cualquier caja con grado no nulo contiene puntos con x > 1
        formula = parse_formula('(declare-fun x () Real) (assert (= x 1)) (assert (<= x 1))')
        outcome = solve(formula, quick(timeout_ms=10_000))
        self.assertEqual(outcome.result, SearchResult.UNKNOWN)

    def test_unselected_variable_gets_point_interval(self):
        formula = parse_formula(
            '(declare-fun x () Real) (declare-fun y () Real) (assert (or (= x 1) (= (* y y) -1)))'
        )
        outcome = solve(formula, quick())
        self.assertCertified(formula, outcome)
        self.assertTrue(outcome.certificate.beta[0]['y'].is_point)

    def test_gridding_configuration(self):
        formula = parse_formula('(declare-fun x () Real) (assert (= (- (* x x) 2) 0)) (assert (< 0 x))')
        outcome = solve(formula, quick('1a'))
        self.assertCertified(formula, outcome)

    def test_deterministic(self):
        formula = parse_formula('(declare-fun x () Real) (assert (= (sin x) 0.5)) (assert (<= x 1))')
        first = solve(formula, quick(seed=3))
        second = solve(formula, quick(seed=3))
        self.assertEqual(first.result, second.result)
        self.assertEqual(first.certificate, second.certificate)

    def test_dnf_restart_maps_selector_back(self):
        formula = parse_formula('(declare-fun x () Real) (assert (or (= x 3) (= (+ x 1) 0)))')
        stats = SearchStatistics()
        search = _Search(formula, quick(), stats, _Deadline(30_000))
        certificate = search.restart_on_dnf()
        self.assertEqual(stats.restarts, 1)
        self.assertEqual(certificate.sigma, (0,))
        self.assertEqual(check_certificate(formula, certificate).verdict, Verdict.VALID)

    def test_timeout_is_unknown(self):
        formula = parse_formula(EJEMPLO_2)
        outcome = solve(formula, quick(timeout_ms=1))
        self.assertEqual(outcome.result, SearchResult.UNKNOWN)
        self.assertTrue(outcome.timed_out)

    def test_forced_literals_prune_proposed_point(self):
        formula = parse_formula(EJEMPLO_FORZADO)
        proposals = [{'x': 1.0, 'y': -1.0}]
        with mock.patch('apps.busqueda.engine.children_points', return_value=proposals):
            checked = solve(formula, quick('4b', eps_lit=0.01))
            unchecked = solve(formula, quick('3b', eps_lit=0.01))
        self.assertEqual(checked.result, SearchResult.UNKNOWN)
        self.assertEqual(checked.statistics.pruned_forced, 1)
        self.assertEqual(checked.statistics.selectors, 0)
        self.assertEqual(unchecked.statistics.pruned_forced, 0)
        self.assertGreater(unchecked.statistics.selectors, 0)

    def test_internal_failure_is_logged_and_unknown(self):
        formula = parse_formula('(declare-fun x () Real) (assert (= x 1))')
        with mock.patch.object(_Search, 'run', side_effect=RuntimeError('fallo de prueba')):
            with self.assertLogs('apps.busqueda.engine', level='ERROR'):
                outcome = solve(formula, quick())
        self.assertEqual(outcome.result, SearchResult.UNKNOWN)
        self.assertEqual(outcome.error, 'RuntimeError: fallo de prueba')
        self.assertFalse(outcome.timed_out)

    @tag('slow')
    def test_example_end_to_end(self):
        formula = parse_formula(EJEMPLO_2)
        outcome = solve(formula, SearchConfig.preset('7b'))
        self.assertCertified(formula, outcome)

    @tag('slow')
    def test_forced_literal_example_is_certified(self):
        formula = parse_formula(EJEMPLO_FORZADO)
        outcome = solve(formula, SearchConfig.preset('4b', timeout_ms=60_000))
        self.assertCertified(formula, outcome)
        outcome = solve(formula, SearchConfig.preset('3b', timeout_ms=60_000))
        if outcome.is_sat:
            self.assertCertified(formula, outcome)

