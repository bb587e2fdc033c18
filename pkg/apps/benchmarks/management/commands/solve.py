"""
Resuelve una formula .smt2 y escribe el certificado si el resultado es sat.

Uso:
    python manage.py solve ejemplo.smt2
    python manage.py solve ejemplo.smt2 --config 7b --out ejemplo.cert.json
    python manage.py solve ejemplo.smt2 --no-sort-literals --boxes eps+grid --seed 3

Codigos de salida: 0 sat, 1 unknown, 2 error (lectura o formato).
"""
import argparse
import logging
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from apps.busqueda.config import HEURISTIC_FLAGS, PRESETS, BoxStrategy
from apps.busqueda.engine import solve
from apps.certificados.serialization import write_certificate
from apps.formulas.exceptions import FormulaError
from apps.benchmarks.services import certificate_path_for, config_from_options, read_formula

logger = logging.getLogger(__name__)


def add_search_arguments(parser):
    """Opciones de busqueda comunes a `solve` y `bench`."""
    for flag in HEURISTIC_FLAGS:
        parser.add_argument(
            f"--{flag.replace('_', '-')}",
            dest=flag,
            action=argparse.BooleanOptionalAction,
            default=None,
        )
    parser.add_argument('--boxes', choices=[strategy.value for strategy in BoxStrategy], default=None)
    parser.add_argument('--eps-lit', dest='eps_lit', type=float, default=None)
    parser.add_argument('--k', type=int, default=None, help='Cantidad de minimos locales')
    parser.add_argument('--seed', type=int, default=None, help='Semilla (por defecto NTACERT_SEED)')
    parser.add_argument('--timeout-ms', dest='timeout_ms', type=int, default=None)


class Command(BaseCommand):
    help = 'Busca un certificado de satisfacibilidad para una formula .smt2'

    def add_arguments(self, parser):
        parser.add_argument('input', type=str, help='Archivo .smt2')
        parser.add_argument(
            '--out',
            type=str,
            default=None,
            help='Ruta del certificado (por defecto INPUT.cert.json)'
        )
        parser.add_argument(
            '--config',
            choices=list(PRESETS),
            default=None,
            help='Configuracion de heuristicas (1a..7c)'
        )
        add_search_arguments(parser)

    def handle(self, *args, **options):
        input_path = Path(options['input'])
        try:
            cfg = config_from_options(options.pop('config'), **options)
        except ValueError as error:
            raise CommandError(str(error), returncode=2)

        try:
            formula = read_formula(input_path)
        except FormulaError as error:
            raise CommandError(f'{input_path}: {error.message}', returncode=2)
        except OSError as error:
            raise CommandError(f'No se pudo leer {input_path}: {error.strerror or error}', returncode=2)

        outcome = solve(formula, cfg)
        stats = outcome.statistics
        self.stderr.write(
            f'[{cfg.config_id}] puntos={stats.points} selectores={stats.selectors} '
            f'instanciaciones={stats.instantiations} cajas={stats.boxes} '
            f'tiempo={stats.elapsed:.3f}s'
        )

        if not outcome.is_sat:
            self.stdout.write('unknown')
            raise SystemExit(1)

        target = certificate_path_for(input_path, options.get('out'))
        try:
            write_certificate(outcome.certificate, target)
        except OSError as error:
            raise CommandError(f'No se pudo escribir {target}: {error.strerror or error}', returncode=2)
        logger.info('Certificado escrito en %s', target)
        self.stdout.write('sat')
        self.stderr.write(f'Certificado: {target}')
