"""
Ejecucion de benchmarks: resolver un archivo, escribir el certificado y
revalidarlo leyendolo de disco, igual que lo haria `check_certificate`.
"""
import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from time import perf_counter
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np
from django.conf import settings

from apps.busqueda.config import HEURISTIC_FLAGS, SearchConfig
from apps.busqueda.engine import solve
from apps.certificados.certificate import Verdict
from apps.certificados.checker import check_certificate
from apps.certificados.exceptions import CertificateFormatError
from apps.certificados.serialization import read_certificate, write_certificate
from apps.formulas.exceptions import FormulaError
from apps.formulas.parser import DEFAULT_CNF_CAP, parse_file

from .models import RunRecord

logger = logging.getLogger(__name__)

CERTIFICATE_SUFFIX = '.cert.json'

# Opciones de la linea de comandos que se copian tal cual a SearchConfig
TUNABLE_OPTIONS = HEURISTIC_FLAGS + ('boxes', 'eps_lit', 'k', 'seed', 'timeout_ms')


def certificate_path_for(input_path, out=None) -> Path:
    """`out` si se indica; si no, INPUT.cert.json junto a la entrada."""
    if out:
        return Path(out)
    return Path(input_path).with_suffix(CERTIFICATE_SUFFIX)


def config_from_options(config_id: Optional[str] = None, **options) -> SearchConfig:
    """
    Preset `config_id` (o NTACERT_DEFAULT_CONFIG) con las opciones
    explicitas encima; las que valen None no se indicaron.
    """
    overrides = {name: options[name] for name in TUNABLE_OPTIONS if options.get(name) is not None}
    return SearchConfig.preset(config_id, **overrides)


def read_formula(path):
    return parse_file(path, cnf_cap=getattr(settings, 'NTACERT_CNF_CAP', DEFAULT_CNF_CAP))


@dataclass
class FileResult:
    benchmark: str
    config_id: str
    verdict: str
    wall_time: float = 0.0
    check_time: Optional[float] = None
    check_verdict: str = ''
    certificate_path: str = ''
    error: str = ''
    statistics: Dict = field(default_factory=dict)

    @property
    def revalidated(self) -> bool:
        return self.verdict != RunRecord.Verdict.SAT or self.check_verdict == Verdict.VALID.value

    def as_record(self, run) -> RunRecord:
        return RunRecord(run=run, **asdict(self))


def check_files(formula_path, certificate_path, budget: int):
    """Verifica leyendo ambos archivos; devuelve (reporte, segundos)."""
    started = perf_counter()
    report = check_certificate(read_formula(formula_path), read_certificate(certificate_path), budget)
    return report, perf_counter() - started


def run_file(path, cfg: SearchConfig, certificate_dir=None) -> FileResult:
    """Resuelve un archivo con una configuracion. Nunca lanza: los errores quedan en el resultado."""
    path = Path(path)
    result = FileResult(str(path), cfg.config_id, RunRecord.Verdict.ERROR)
    started = perf_counter()
    try:
        formula = read_formula(path)
    except (FormulaError, OSError) as error:
        result.error = getattr(error, 'message', None) or str(error)
        result.wall_time = perf_counter() - started
        logger.warning('No se pudo leer %s: %s', path, result.error)
        return result

    outcome = solve(formula, cfg)
    result.wall_time = perf_counter() - started
    result.statistics = outcome.statistics.as_dict()
    if outcome.error is not None:
        result.error = outcome.error
    elif outcome.timed_out:
        result.verdict = RunRecord.Verdict.TIMEOUT
    elif not outcome.is_sat:
        result.verdict = RunRecord.Verdict.UNKNOWN
    else:
        result.verdict = RunRecord.Verdict.SAT
        if certificate_dir is not None:
            target = Path(certificate_dir) / f'{path.stem}.{cfg.config_id}{CERTIFICATE_SUFFIX}'
        else:
            target = certificate_path_for(path)
        write_certificate(outcome.certificate, target)
        result.certificate_path = str(target)
        try:
            report, result.check_time = check_files(path, target, cfg.degree_budget)
            result.check_verdict = report.verdict.value
            if not report.is_valid:
                result.error = report.reason
        except (FormulaError, CertificateFormatError, OSError) as error:
            result.check_verdict = Verdict.INVALID.value
            result.error = getattr(error, 'message', None) or str(error)
    return result


def _run_job(job):
    path, cfg, certificate_dir = job
    return run_file(path, cfg, certificate_dir)


def corpus_files(directory) -> List[Path]:
    return sorted(Path(directory).glob('*.smt2'))


def run_corpus(files: Sequence[Path], configs: Sequence[SearchConfig], certificate_dir=None,
               workers: int = 1) -> List[FileResult]:
    """Todos los archivos con todas las configuraciones, en orden (archivo, configuracion)."""
    jobs = [(path, cfg, certificate_dir) for path in files for cfg in configs]
    if workers <= 1 or len(jobs) <= 1:
        return [_run_job(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_job, jobs))


def summarize(results: Iterable[FileResult], config_ids: Sequence[str]) -> Dict:
    """
    Tabla de resueltos por configuracion, mejor virtual y razon
    verificacion/resolucion sobre los sat.
    """
    results = list(results)
    counts = {config_id: Counter() for config_id in config_ids}
    solved_by_any = set()
    ratios = []
    failures = []
    for result in results:
        counts.setdefault(result.config_id, Counter())[result.verdict] += 1
        if result.verdict != RunRecord.Verdict.SAT:
            continue
        solved_by_any.add(result.benchmark)
        if not result.revalidated:
            failures.append({'benchmark': result.benchmark, 'config': result.config_id,
                             'check_verdict': result.check_verdict, 'reason': result.error})
        if result.check_time is not None and result.wall_time > 0:
            ratios.append(result.check_time / result.wall_time)

    rows = []
    for config_id, counter in counts.items():
        rows.append({
            'config': config_id,
            'sat': counter[RunRecord.Verdict.SAT],
            'unknown': counter[RunRecord.Verdict.UNKNOWN],
            'timeout': counter[RunRecord.Verdict.TIMEOUT],
            'error': counter[RunRecord.Verdict.ERROR],
        })
    return {
        'benchmarks': len({result.benchmark for result in results}),
        'configs': rows,
        'virtual_best': len(solved_by_any),
        'check_ratio': {
            'median': float(np.median(ratios)) if ratios else None,
            'mean': float(np.mean(ratios)) if ratios else None,
            'samples': len(ratios),
        },
        'revalidation_failures': failures,
        'passed': not failures,
    }
