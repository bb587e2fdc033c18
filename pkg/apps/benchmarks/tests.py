import json
import shutil
import tempfile
from io import StringIO
from pathlib import Path
from unittest import mock

from django.conf import settings
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase
from rest_framework.test import APIClient

from apps.busqueda.config import BoxStrategy
from apps.busqueda.engine import SearchOutcome, SearchResult
from apps.certificados.serialization import write_certificate
from apps.certificados.tests import box, ejemplo_2_certificate
from apps.formulas.parser import parse_formula
from apps.formulas.tests import EJEMPLO_2

from .models import BenchmarkRun, RunRecord
from .services import (
    FileResult, certificate_path_for, config_from_options, corpus_files, read_formula, run_file, summarize,
)

CORPUS = Path(settings.NTACERT_CORPUS_DIR)
RAPIDO = ['--k', '5', '--timeout-ms', '20000']


class TemporaryDirectoryMixin:

    def setUp(self):
        super().setUp()
        self.tmp = Path(tempfile.mkdtemp(prefix='ntacert-test-'))
        self.addCleanup(shutil.rmtree, self.tmp, ignore_errors=True)

    def copy_corpus(self, *names):
        for name in names:
            shutil.copy(CORPUS / name, self.tmp / name)
        return self.tmp

    def write(self, name, text):
        path = self.tmp / name
        path.write_text(text, encoding='utf-8')
        return path


class ServicesTests(TemporaryDirectoryMixin, SimpleTestCase):

    def test_preset_with_explicit_flags(self):
        cfg = config_from_options('1a', sort_literals=True, k=None, seed=4)
        self.assertEqual(cfg.boxes, BoxStrategy.GRID)
        self.assertTrue(cfg.sort_literals)
        self.assertEqual(cfg.seed, 4)
        self.assertEqual(cfg.k, settings.NTACERT_K)

    def test_flags_can_disable_preset_heuristics(self):
        cfg = config_from_options('7b', filter_rank_deficient=False, boxes='eps+grid')
        self.assertFalse(cfg.filter_rank_deficient)
        self.assertTrue(cfg.kearfott_ordering)
        self.assertEqual(cfg.boxes, BoxStrategy.EPS_GRID)

    def test_certificate_path(self):
        self.assertEqual(certificate_path_for('a/ejemplo.smt2'), Path('a/ejemplo.cert.json'))
        self.assertEqual(certificate_path_for('a/ejemplo.smt2', 'b.json'), Path('b.json'))

    def test_unreadable_file_is_error(self):
        result = run_file(self.tmp / 'no-existe.smt2', config_from_options('7b'))
        self.assertEqual(result.verdict, RunRecord.Verdict.ERROR)
        self.assertTrue(result.error)

    def test_parse_error_is_error(self):
        path = self.write('roto.smt2', '(declare-fun x () Real) (assert (= x')
        result = run_file(path, config_from_options('7b'))
        self.assertEqual(result.verdict, RunRecord.Verdict.ERROR)

    def test_sat_is_revalidated(self):
        path = self.copy_corpus('raiz_simple.smt2') / 'raiz_simple.smt2'
        result = run_file(path, config_from_options('7b', k=5, timeout_ms=20_000), self.tmp)
        self.assertEqual(result.verdict, RunRecord.Verdict.SAT)
        self.assertEqual(result.check_verdict, 'valid')
        self.assertTrue(Path(result.certificate_path).exists())
        self.assertTrue(result.revalidated)
        self.assertIsNotNone(result.check_time)

    def test_search_failure_is_error(self):
        path = self.copy_corpus('raiz_simple.smt2') / 'raiz_simple.smt2'
        failed = SearchOutcome(SearchResult.UNKNOWN, error='RuntimeError: fallo de prueba')
        with mock.patch('apps.benchmarks.services.solve', return_value=failed):
            result = run_file(path, config_from_options('7b'), self.tmp)
        self.assertEqual(result.verdict, RunRecord.Verdict.ERROR)
        self.assertEqual(result.error, 'RuntimeError: fallo de prueba')
        self.assertEqual(result.certificate_path, '')

    def test_corpus_parses_and_marks_expected_unknowns(self):
        files = corpus_files(CORPUS)
        self.assertEqual(len(files), 12)
        for path in files:
            with self.subTest(benchmark=path.name):
                self.assertTrue(read_formula(path).clauses)
        header = (CORPUS / 'coseno_recta.smt2').read_text(encoding='utf-8').splitlines()[0]
        self.assertTrue(header.startswith('; Esperado: unknown'))

    def test_summary(self):
        results = [
            FileResult('a.smt2', '1a', RunRecord.Verdict.SAT, 2.0, 0.02, 'valid'),
            FileResult('a.smt2', '7b', RunRecord.Verdict.SAT, 1.0, 0.04, 'valid'),
            FileResult('b.smt2', '1a', RunRecord.Verdict.UNKNOWN, 3.0),
            FileResult('b.smt2', '7b', RunRecord.Verdict.SAT, 1.0, 0.03, 'valid'),
            FileResult('c.smt2', '1a', RunRecord.Verdict.TIMEOUT, 9.0),
            FileResult('c.smt2', '7b', RunRecord.Verdict.ERROR, 0.0, error='sintaxis'),
        ]
        summary = summarize(results, ['1a', '7b'])
        rows = {row['config']: row for row in summary['configs']}
        self.assertEqual(rows['1a']['sat'], 1)
        self.assertEqual(rows['1a']['timeout'], 1)
        self.assertEqual(rows['7b']['sat'], 2)
        self.assertEqual(rows['7b']['error'], 1)
        self.assertEqual(summary['virtual_best'], 2)
        self.assertEqual(summary['benchmarks'], 3)
        self.assertAlmostEqual(summary['check_ratio']['median'], 0.03)
        self.assertAlmostEqual(summary['check_ratio']['mean'], 0.08 / 3)
        self.assertTrue(summary['passed'])

    def test_summary_reports_failed_revalidation(self):
        results = [FileResult('a.smt2', '7b', RunRecord.Verdict.SAT, 1.0, 0.1, 'invalid', error='(e) grado 0')]
        summary = summarize(results, ['7b'])
        self.assertFalse(summary['passed'])
        self.assertEqual(summary['revalidation_failures'][0]['benchmark'], 'a.smt2')

    def test_empty_corpus(self):
        summary = summarize([], ['1a', '7b'])
        self.assertEqual(summary['benchmarks'], 0)
        self.assertEqual([row['sat'] for row in summary['configs']], [0, 0])
        self.assertIsNone(summary['check_ratio']['median'])


class SolveCommandTests(TemporaryDirectoryMixin, SimpleTestCase):

    def call(self, *args):
        out, err = StringIO(), StringIO()
        call_command('solve', *args, stdout=out, stderr=err)
        return out.getvalue()

    def test_sat_writes_certificate(self):
        path = self.copy_corpus('raiz_simple.smt2') / 'raiz_simple.smt2'
        out = self.tmp / 'cert.json'
        self.assertEqual(self.call(str(path), '--out', str(out), *RAPIDO).strip(), 'sat')
        self.assertTrue(out.exists())

    def test_default_certificate_beside_input(self):
        path = self.copy_corpus('raiz_cuadrada.smt2') / 'raiz_cuadrada.smt2'
        self.call(str(path), *RAPIDO)
        self.assertTrue((self.tmp / 'raiz_cuadrada.cert.json').exists())

    def test_unknown_exits_with_one(self):
        with self.assertRaises(SystemExit) as exit_info:
            self.call(str(CORPUS / 'sin_raiz_real.smt2'), *RAPIDO)
        self.assertEqual(exit_info.exception.code, 1)

    def test_missing_file_exits_with_two(self):
        with self.assertRaises(CommandError) as error:
            self.call(str(self.tmp / 'no-existe.smt2'))
        self.assertEqual(error.exception.returncode, 2)

    def test_syntax_error_exits_with_two(self):
        path = self.write('roto.smt2', '(declare-fun x () Real) (assert (= y 0))')
        with self.assertRaises(CommandError) as error:
            self.call(str(path))
        self.assertEqual(error.exception.returncode, 2)
        self.assertIn('no declarado', str(error.exception))


class CheckCertificateCommandTests(TemporaryDirectoryMixin, SimpleTestCase):

    def setUp(self):
        super().setUp()
        self.formula = parse_formula(EJEMPLO_2)
        self.formula_path = self.copy_corpus('ejemplo2.smt2') / 'ejemplo2.smt2'

    def call(self, *args):
        out = StringIO()
        call_command('check_certificate', *args, stdout=out)
        return out.getvalue()

    def test_example_pair_is_valid(self):
        cert_path = write_certificate(ejemplo_2_certificate(self.formula), self.tmp / 'ejemplo2.cert.json')
        output = self.call(str(self.formula_path), str(cert_path))
        self.assertEqual(output.splitlines()[0], 'valid')
        self.assertIn('(e)', output)

    def test_tampered_box_exits_with_one(self):
        cert = ejemplo_2_certificate(self.formula, beta=[box(x=(-0.1, 0.05), y=(0.0, 0.5))])
        cert_path = write_certificate(cert, self.tmp / 'alterado.cert.json')
        with self.assertRaises(SystemExit) as exit_info:
            self.call(str(self.formula_path), str(cert_path))
        self.assertEqual(exit_info.exception.code, 1)

    def test_budget_zero_is_undetermined(self):
        cert_path = write_certificate(ejemplo_2_certificate(self.formula), self.tmp / 'ejemplo2.cert.json')
        out = StringIO()
        with self.assertRaises(SystemExit):
            call_command('check_certificate', str(self.formula_path), str(cert_path), '--budget', '0', stdout=out)
        self.assertEqual(out.getvalue().splitlines()[0], 'undetermined')

    def test_other_formula_is_invalid(self):
        cert_path = write_certificate(ejemplo_2_certificate(self.formula), self.tmp / 'ejemplo2.cert.json')
        out = StringIO()
        with self.assertRaises(SystemExit):
            call_command('check_certificate', str(CORPUS / 'raiz_simple.smt2'), str(cert_path), stdout=out)
        self.assertEqual(out.getvalue().splitlines()[0], 'invalid')

    def test_malformed_certificate_exits_with_two(self):
        cert_path = self.write('malo.cert.json', json.dumps({'version': 'otra/9'}))
        with self.assertRaises(CommandError) as error:
            self.call(str(self.formula_path), str(cert_path))
        self.assertEqual(error.exception.returncode, 2)


class BenchCommandTests(TemporaryDirectoryMixin, TestCase):

    def call(self, *args):
        out = StringIO()
        call_command('bench', *args, stdout=out)
        return out.getvalue()

    def test_small_corpus(self):
        corpus = self.copy_corpus('raiz_simple.smt2', 'sin_raiz_real.smt2')
        self.write('roto.smt2', '(assert')
        summary_path = self.tmp / 'resumen.json'
        csv_path = self.tmp / 'tabla.csv'
        output = self.call(
            str(corpus), '--configs', '7b', '--k', '5', '--timeout-ms', '20000',
            '--json', str(summary_path), '--csv', str(csv_path), '--cert-dir', str(self.tmp / 'certs'),
        )
        self.assertIn('Mejor virtual: 1 de 3', output)

        summary = json.loads(summary_path.read_text(encoding='utf-8'))
        self.assertTrue(summary['passed'])
        self.assertEqual(summary['configs'][0]['sat'], 1)
        self.assertEqual(summary['configs'][0]['unknown'], 1)
        self.assertEqual(summary['configs'][0]['error'], 1)
        self.assertEqual(len(csv_path.read_text(encoding='utf-8').splitlines()), 4)

        run = BenchmarkRun.objects.get()
        self.assertTrue(run.passed)
        self.assertIsNotNone(run.finished_at)
        self.assertEqual(run.records.count(), 3)
        self.assertEqual(run.tabla()['mejor_virtual'], 1)

    def test_empty_directory(self):
        output = self.call(str(self.tmp), '--configs', '1a,7b')
        self.assertIn('Mejor virtual: 0 de 0', output)
        self.assertEqual(RunRecord.objects.count(), 0)

    def test_no_persist(self):
        self.call(str(self.tmp), '--no-persist')
        self.assertFalse(BenchmarkRun.objects.exists())

    def test_unknown_config(self):
        with self.assertRaises(CommandError) as error:
            self.call(str(self.tmp), '--configs', '9z')
        self.assertEqual(error.exception.returncode, 2)

    def test_failed_revalidation_fails_run(self):
        failed = FileResult(str(self.tmp / 'a.smt2'), '7b', RunRecord.Verdict.SAT, 1.0, 0.1, 'invalid')
        with mock.patch('apps.benchmarks.management.commands.bench.run_corpus', return_value=[failed]):
            with self.assertRaises(CommandError) as error:
                self.call(str(self.tmp), '--configs', '7b')
        self.assertEqual(error.exception.returncode, 2)
        self.assertFalse(BenchmarkRun.objects.get().passed)


class BenchmarksApiTests(TestCase):

    def setUp(self):
        self.client = APIClient()
        self.run = BenchmarkRun.objects.create(configs=['1a', '7b'], corpus_dir='corpus', timeout_ms=1000)
        RunRecord.objects.bulk_create([
            RunRecord(run=self.run, benchmark='corpus/ejemplo2.smt2', config_id='1a',
                      verdict=RunRecord.Verdict.UNKNOWN, wall_time=3.0),
            RunRecord(run=self.run, benchmark='corpus/ejemplo2.smt2', config_id='7b',
                      verdict=RunRecord.Verdict.SAT, wall_time=2.0, check_time=0.01, check_verdict='valid'),
            RunRecord(run=self.run, benchmark='corpus/raiz_simple.smt2', config_id='1a',
                      verdict=RunRecord.Verdict.SAT, wall_time=0.5, check_time=0.001, check_verdict='valid'),
            RunRecord(run=self.run, benchmark='corpus/raiz_simple.smt2', config_id='7b',
                      verdict=RunRecord.Verdict.SAT, wall_time=0.4, check_time=0.001, check_verdict='invalid'),
        ])

    def test_runs_list(self):
        response = self.client.get('/api/benchmarks/runs/')
        self.assertEqual(response.status_code, 200)
        self.assertEqual(response.data[0]['records_count'], 4)

    def test_resumen(self):
        response = self.client.get(f'/api/benchmarks/runs/{self.run.pk}/resumen/')
        self.assertEqual(response.status_code, 200)
        rows = {row['config_id']: row for row in response.data['configuraciones']}
        self.assertEqual(rows['1a']['sat'], 1)
        self.assertEqual(rows['7b']['sat'], 2)
        self.assertEqual(response.data['mejor_virtual'], 2)

    def test_records_filters(self):
        response = self.client.get('/api/benchmarks/records/', {'verdict': 'sat', 'config': '7b'})
        self.assertEqual(len(response.data), 2)
        response = self.client.get('/api/benchmarks/records/', {'benchmark': 'EJEMPLO'})
        self.assertEqual(len(response.data), 2)
        response = self.client.get('/api/benchmarks/records/', {'revalidacion_fallida': 'true'})
        self.assertEqual(len(response.data), 1)

    def test_record_ratio(self):
        record = RunRecord.objects.get(config_id='7b', benchmark__endswith='ejemplo2.smt2')
        response = self.client.get(f'/api/benchmarks/records/{record.pk}/')
        self.assertAlmostEqual(response.data['check_ratio'], 0.005)
