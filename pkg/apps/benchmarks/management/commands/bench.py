"""
Harness de benchmarks: resuelve cada .smt2 de un directorio con cada
configuracion, revalida cada sat con el verificador y reporta la tabla de
resueltos por configuracion.

Uso:
    python manage.py bench apps/benchmarks/corpus
    python manage.py bench corpus/ --configs 1a,4b,7b --workers 4 --csv tabla.csv --json resumen.json
    python manage.py bench corpus/ --timeout-ms 20000 --no-persist

Sale con codigo 2 si algun sat no pasa la revalidacion.
"""
import csv
import json
import tempfile
from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from apps.busqueda.config import PRESETS
from apps.benchmarks.models import BenchmarkRun, RunRecord
from apps.benchmarks.services import config_from_options, corpus_files, run_corpus, summarize

CSV_COLUMNS = ['benchmark', 'config_id', 'verdict', 'wall_time', 'check_time', 'check_verdict',
               'certificate_path', 'error']


class Command(BaseCommand):
    help = 'Corre el corpus de benchmarks con una lista de configuraciones'

    def add_arguments(self, parser):
        parser.add_argument(
            'directory',
            nargs='?',
            default=None,
            help='Directorio con archivos .smt2 (por defecto NTACERT_CORPUS_DIR)'
        )
        parser.add_argument(
            '--configs',
            type=str,
            default='1a,7b',
            help='Configuraciones separadas por coma, o "all"'
        )
        parser.add_argument('--workers', type=int, default=1, help='Procesos en paralelo')
        parser.add_argument('--timeout-ms', dest='timeout_ms', type=int, default=None)
        parser.add_argument('--k', type=int, default=None, help='Cantidad de minimos locales')
        parser.add_argument('--seed', type=int, default=None)
        parser.add_argument('--csv', type=str, default=None, help='Tabla por archivo (CSV)')
        parser.add_argument('--json', type=str, default=None, help='Resumen (JSON)')
        parser.add_argument(
            '--cert-dir',
            type=str,
            default=None,
            help='Directorio para los certificados (por defecto uno temporal)'
        )
        parser.add_argument(
            '--no-persist',
            action='store_true',
            help='No guardar la corrida en la base de datos'
        )

    def _parse_configs(self, raw):
        if raw.strip() == 'all':
            return list(PRESETS)
        config_ids = [item.strip() for item in raw.split(',') if item.strip()]
        unknown = [config_id for config_id in config_ids if config_id not in PRESETS]
        if unknown or not config_ids:
            raise CommandError(
                f'Configuraciones desconocidas: {", ".join(unknown) or raw!r}. Opciones: {", ".join(PRESETS)}',
                returncode=2,
            )
        return config_ids

    def handle(self, *args, **options):
        directory = Path(options['directory'] or settings.NTACERT_CORPUS_DIR)
        if not directory.is_dir():
            raise CommandError(f'Directorio no encontrado: {directory}', returncode=2)
        config_ids = self._parse_configs(options['configs'])
        configs = [
            config_from_options(config_id, timeout_ms=options['timeout_ms'], seed=options['seed'], k=options['k'])
            for config_id in config_ids
        ]
        files = corpus_files(directory)
        cert_dir = Path(options['cert_dir'] or tempfile.mkdtemp(prefix='ntacert-'))
        cert_dir.mkdir(parents=True, exist_ok=True)

        self.stdout.write('=' * 60)
        self.stdout.write(f'Corpus: {directory} ({len(files)} archivos)')
        self.stdout.write(f'Configuraciones: {", ".join(config_ids)}')
        self.stdout.write(f'Certificados en: {cert_dir}')
        self.stdout.write('=' * 60)

        run = None
        if not options['no_persist']:
            run = BenchmarkRun.objects.create(
                configs=config_ids,
                corpus_dir=str(directory),
                timeout_ms=configs[0].timeout_ms,
                workers=max(options['workers'], 1),
            )

        results = run_corpus(files, configs, cert_dir, workers=options['workers'])
        for result in results:
            line = f'  [{result.config_id}] {Path(result.benchmark).name}: {result.verdict} ({result.wall_time:.2f}s)'
            if result.verdict == RunRecord.Verdict.SAT and not result.revalidated:
                self.stdout.write(self.style.ERROR(f'{line} revalidacion: {result.check_verdict}'))
            elif result.verdict == RunRecord.Verdict.ERROR:
                self.stdout.write(self.style.WARNING(f'{line} {result.error}'))
            else:
                self.stdout.write(line)

        summary = summarize(results, config_ids)
        if run is not None:
            RunRecord.objects.bulk_create([result.as_record(run) for result in results])
            run.finalizar(summary)
            summary['run'] = run.pk

        self._write_table(summary)
        if options['csv']:
            self._write_csv(options['csv'], results)
        if options['json']:
            Path(options['json']).write_text(json.dumps(summary, indent=2) + '\n', encoding='utf-8')

        if not summary['passed']:
            raise CommandError(
                f'{len(summary["revalidation_failures"])} certificado(s) no pasaron la revalidacion',
                returncode=2,
            )

    def _write_table(self, summary):
        self.stdout.write('')
        self.stdout.write(f'{"config":<8}{"sat":>6}{"unknown":>9}{"timeout":>9}{"error":>7}')
        for row in summary['configs']:
            self.stdout.write(
                f'{row["config"]:<8}{row["sat"]:>6}{row["unknown"]:>9}{row["timeout"]:>9}{row["error"]:>7}'
            )
        self.stdout.write(f'Mejor virtual: {summary["virtual_best"]} de {summary["benchmarks"]}')
        ratio = summary['check_ratio']
        if ratio['samples']:
            self.stdout.write(
                f'Verificacion/resolucion: mediana {ratio["median"]:.2%}, media {ratio["mean"]:.2%}'
            )
        if summary['passed']:
            self.stdout.write(self.style.SUCCESS('Todos los sat fueron revalidados'))

    def _write_csv(self, path, results):
        with open(path, 'w', newline='', encoding='utf-8') as handle:
            writer = csv.DictWriter(handle, fieldnames=CSV_COLUMNS, extrasaction='ignore')
            writer.writeheader()
            for result in results:
                writer.writerow({column: getattr(result, column) for column in CSV_COLUMNS})
