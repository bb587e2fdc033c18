"""
Verifica un certificado contra una formula con el verificador independiente.

Uso:
    python manage.py check_certificate ejemplo.smt2 ejemplo.cert.json
    python manage.py check_certificate ejemplo.smt2 ejemplo.cert.json --budget 1000

Imprime valid/invalid/undetermined y una linea por condicion.
Codigos de salida: 0 solo si es valid, 1 invalid/undetermined, 2 error de lectura.
"""
from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from apps.certificados.certificate import ConditionStatus, Verdict
from apps.certificados.exceptions import CertificateFormatError
from apps.formulas.exceptions import FormulaError
from apps.benchmarks.services import check_files

STATUS_STYLES = {
    ConditionStatus.OK: 'SUCCESS',
    ConditionStatus.FAILED: 'ERROR',
    ConditionStatus.UNDETERMINED: 'WARNING',
    ConditionStatus.SKIPPED: 'NOTICE',
}


class Command(BaseCommand):
    help = 'Verifica un certificado (sigma, nu, beta) para una formula .smt2'

    def add_arguments(self, parser):
        parser.add_argument('formula', type=str, help='Archivo .smt2')
        parser.add_argument('certificate', type=str, help='Archivo de certificado (JSON)')
        parser.add_argument(
            '--budget',
            type=int,
            default=None,
            help='Tope de subdivisiones del calculo de grado (por defecto NTACERT_DEGREE_BUDGET)'
        )

    def handle(self, *args, **options):
        budget = options['budget']
        if budget is None:
            budget = settings.NTACERT_DEGREE_BUDGET
        if budget < 0:
            raise CommandError('--budget debe ser >= 0', returncode=2)

        try:
            report, elapsed = check_files(options['formula'], options['certificate'], budget)
        except (FormulaError, CertificateFormatError) as error:
            raise CommandError(error.message, returncode=2)
        except OSError as error:
            raise CommandError(f'No se pudo leer {error.filename}: {error.strerror or error}', returncode=2)

        self.stdout.write(report.verdict.value)
        for condition in report.conditions:
            style = getattr(self.style, STATUS_STYLES[condition.status])
            line = f'  ({condition.key}) {condition.name}: {condition.status.value}'
            if condition.detail:
                line += f' - {condition.detail}'
            self.stdout.write(style(line))
        if report.reason:
            self.stdout.write(f'Motivo: {report.reason}')
        if report.degree is not None:
            self.stdout.write(f'Grado: {report.degree}')
        self.stdout.write(f'Tiempo de verificacion: {elapsed:.4f}s')

        if report.verdict is not Verdict.VALID:
            raise SystemExit(1)
