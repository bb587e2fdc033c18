import ast
import json
from pathlib import Path

from django.test import SimpleTestCase, TestCase
from rest_framework.test import APIClient

from apps.formulas.parser import parse_formula
from apps.formulas.printer import formula_digest
from apps.formulas.tests import EJEMPLO_2
from apps.intervalos.boxes import EMPTY_BOX, NamedBox
from apps.intervalos.interval import Interval

from .certificate import Certificate, ConditionStatus, Verdict
from .checker import check_certificate
from .exceptions import CertificateFormatError
from .serialization import deserialize, from_document, serialize, to_document


def box(**bounds):
    return NamedBox(tuple((name, Interval(lo, hi)) for name, (lo, hi) in bounds.items()))


def ejemplo_2_certificate(formula, **changes):
    fields = {
        'sigma': (1, 1, 0, 0),
        'nu': {'z': 0.2},
        'beta': [box(x=(-0.1, 0.05), y=(1.4, 1.9))],
        'formula_digest': formula_digest(formula),
    }
    fields.update(changes)
    return Certificate.build(fields['sigma'], fields['nu'], fields['beta'], fields['formula_digest'])


class CheckCertificateTests(SimpleTestCase):

    def setUp(self):
        self.formula = parse_formula(EJEMPLO_2)

    def assertVerdict(self, report, verdict):
        self.assertEqual(report.verdict, verdict, report.as_dict())

    def test_example_certificate_is_valid(self):
        report = check_certificate(self.formula, ejemplo_2_certificate(self.formula))
        self.assertVerdict(report, Verdict.VALID)
        self.assertNotEqual(report.degree, 0)
        self.assertTrue(all(c.status is ConditionStatus.OK for c in report.conditions))
        self.assertIn('total', report.timings)

    def test_tampered_box_is_invalid(self):
        cert = ejemplo_2_certificate(self.formula, beta=[box(x=(-0.1, 0.05), y=(0.0, 0.5))])
        report = check_certificate(self.formula, cert)
        self.assertVerdict(report, Verdict.INVALID)
        self.assertEqual(report.condition('e').status, ConditionStatus.FAILED)

    def test_digest_mismatch(self):
        cert = ejemplo_2_certificate(self.formula, formula_digest='0' * 64)
        report = check_certificate(self.formula, cert)
        self.assertVerdict(report, Verdict.INVALID)
        self.assertIn('digest', report.reason)

    def test_selector_out_of_range(self):
        report = check_certificate(self.formula, ejemplo_2_certificate(self.formula, sigma=(2, 1, 0, 0)))
        self.assertVerdict(report, Verdict.INVALID)
        self.assertEqual(report.condition('a').status, ConditionStatus.FAILED)

    def test_count_mismatch(self):
        cert = ejemplo_2_certificate(self.formula, nu={}, beta=[box(x=(-0.1, 0.05), y=(1.4, 1.9), z=(0.2, 0.2))])
        report = check_certificate(self.formula, cert)
        self.assertVerdict(report, Verdict.INVALID)
        self.assertEqual(report.condition('b').status, ConditionStatus.FAILED)

    def test_assignment_outside_selected_literals(self):
        formula = parse_formula('(declare-fun x () Real) (declare-fun y () Real) (assert (or (= x 0) (= y 0)))')
        cert = Certificate.build((0,), {'y': 1.0}, [box(x=(-1, 1))], formula_digest(formula))
        report = check_certificate(formula, cert)
        self.assertEqual(report.condition('b').status, ConditionStatus.FAILED)

    def test_zero_dimensional_certificate(self):
        formula = parse_formula('(declare-fun x () Real) (assert (<= x 1)) (assert (< 0 x))')
        cert = Certificate.build((0, 0), {'x': 0.5}, [EMPTY_BOX], formula_digest(formula))
        report = check_certificate(formula, cert)
        self.assertVerdict(report, Verdict.VALID)
        self.assertEqual(report.degree, 1)

    def test_budget_zero_is_undetermined(self):
        report = check_certificate(self.formula, ejemplo_2_certificate(self.formula), budget=0)
        self.assertVerdict(report, Verdict.UNDETERMINED)
        self.assertEqual(report.condition('d').status, ConditionStatus.UNDETERMINED)

    def test_box_over_wrong_domain(self):
        cert = ejemplo_2_certificate(self.formula, beta=[box(x=(-0.1, 0.05), y=(1.4, 1.9)), box(x=(0.05, 0.1))])
        report = check_certificate(self.formula, cert)
        self.assertVerdict(report, Verdict.INVALID)
        self.assertEqual(report.condition('c').status, ConditionStatus.FAILED)

    def test_union_not_a_box(self):
        cert = ejemplo_2_certificate(self.formula, beta=[
            box(x=(-0.1, 0.0), y=(1.4, 1.6)),
            box(x=(0.0, 0.05), y=(1.6, 1.9)),
        ])
        report = check_certificate(self.formula, cert)
        self.assertVerdict(report, Verdict.INVALID)
        self.assertEqual(report.condition('c').status, ConditionStatus.FAILED)

    def test_split_beta_is_valid(self):
        cert = ejemplo_2_certificate(self.formula, beta=[
            box(x=(-0.1, 0.0), y=(1.4, 1.9)),
            box(x=(0.0, 0.05), y=(1.4, 1.9)),
        ])
        self.assertVerdict(check_certificate(self.formula, cert), Verdict.VALID)

    def test_strict_inequality_is_checked_strictly(self):
        formula = parse_formula('(declare-fun x () Real) (assert (= x 0)) (assert (< x 1))')
        digest = formula_digest(formula)
        inside = Certificate.build((0, 0), {}, [box(x=(-0.5, 0.5))], digest)
        touching = Certificate.build((0, 0), {}, [box(x=(-1.0, 1.0))], digest)
        self.assertVerdict(check_certificate(formula, inside), Verdict.VALID)
        report = check_certificate(formula, touching)
        self.assertVerdict(report, Verdict.INVALID)
        self.assertEqual(report.condition('f').status, ConditionStatus.FAILED)

    def test_planted_roots(self):
        text = (
            '(declare-fun a () Real) (declare-fun b () Real) '
            '(assert (= (- (sin a) (* 0.5 b)) 0)) (assert (= (- b 0.25) 0)) (assert (<= a 1))'
        )
        formula = parse_formula(text)
        cert = Certificate.build((0, 0, 0), {}, [box(a=(-0.5, 0.5), b=(-1, 1))], formula_digest(formula))
        self.assertVerdict(check_certificate(formula, cert), Verdict.VALID)


class SerializationTests(SimpleTestCase):

    def setUp(self):
        self.formula = parse_formula(EJEMPLO_2)
        self.cert = ejemplo_2_certificate(self.formula)

    def test_round_trip_is_bit_exact(self):
        restored = deserialize(serialize(self.cert))
        self.assertEqual(restored, self.cert)
        self.assertEqual(restored.assignment['z'].hex(), (0.2).hex())

    def test_document_layout(self):
        document = json.loads(serialize(self.cert))
        self.assertEqual(list(document), ['version', 'formula_digest', 'sigma', 'nu', 'beta'])
        self.assertEqual(document['version'], 'ntacert/1')
        self.assertEqual(document['nu'], {'z': (0.2).hex()})
        self.assertEqual(document['beta'][0]['y'], [(1.4).hex(), (1.9).hex()])

    def test_empty_beta(self):
        document = to_document(self.cert)
        document['beta'] = []
        with self.assertRaises(CertificateFormatError):
            from_document(document)

    def test_unknown_version(self):
        document = to_document(self.cert)
        document['version'] = 'ntacert/2'
        with self.assertRaises(CertificateFormatError) as context:
            from_document(document)
        self.assertEqual(context.exception.field, 'version')

    def test_invalid_json(self):
        with self.assertRaises(CertificateFormatError):
            deserialize('{"version": ')

    def test_bad_float(self):
        document = to_document(self.cert)
        document['nu']['z'] = 'cero'
        with self.assertRaises(CertificateFormatError):
            from_document(document)

    def test_reversed_interval(self):
        document = to_document(self.cert)
        document['beta'][0]['x'] = [(1.0).hex(), (0.0).hex()]
        with self.assertRaises(CertificateFormatError):
            from_document(document)


class CheckerIndependenceTests(SimpleTestCase):
    allowed = ('apps.formulas', 'apps.intervalos', 'apps.grado', 'apps.certificados')

    def test_checker_imports(self):
        source = Path(__file__).with_name('checker.py').read_text(encoding='utf-8')
        modules = []
        for node in ast.walk(ast.parse(source)):
            if isinstance(node, ast.ImportFrom) and node.level == 0:
                modules.append(node.module)
            elif isinstance(node, ast.Import):
                modules.extend(alias.name for alias in node.names)
        for module in modules:
            if module.startswith('apps.'):
                with self.subTest(module=module):
                    self.assertTrue(module.startswith(self.allowed), module)


class VerificarApiTests(TestCase):

    def setUp(self):
        self.client = APIClient()
        self.formula = parse_formula(EJEMPLO_2)

    def test_valid_certificate(self):
        document = to_document(ejemplo_2_certificate(self.formula))
        response = self.client.post(
            '/api/certificados/verificar/', {'formula': EJEMPLO_2, 'certificate': document}, format='json',
        )
        self.assertEqual(response.status_code, 200)
        self.assertEqual(response.data['verdict'], 'valid')
        self.assertEqual(len(response.data['conditions']), 6)

    def test_budget_zero(self):
        document = to_document(ejemplo_2_certificate(self.formula))
        response = self.client.post(
            '/api/certificados/verificar/',
            {'formula': EJEMPLO_2, 'certificate': document, 'budget': 0}, format='json',
        )
        self.assertEqual(response.data['verdict'], 'undetermined')

    def test_formula_syntax_error(self):
        document = to_document(ejemplo_2_certificate(self.formula))
        response = self.client.post(
            '/api/certificados/verificar/', {'formula': '(assert (= x', 'certificate': document}, format='json',
        )
        self.assertEqual(response.status_code, 400)
        self.assertIn('formula', response.data)

    def test_unknown_version(self):
        document = to_document(ejemplo_2_certificate(self.formula))
        document['version'] = 'otra'
        response = self.client.post(
            '/api/certificados/verificar/', {'formula': EJEMPLO_2, 'certificate': document}, format='json',
        )
        self.assertEqual(response.status_code, 400)
