"""
Verificador independiente de certificados (σ, ν, β).

Solo depende de formulas, intervalos y grado: nada de la busqueda ni de
la optimizacion numerica entra en la decision.
"""
import logging
import math
from time import perf_counter

from apps.formulas.exceptions import SelectorError
from apps.formulas.printer import formula_digest
from apps.formulas.systems import as_selector, partition_selected
from apps.formulas.terms import Formula
from apps.grado.degree import DEFAULT_BUDGET, DegreeStatus, degree
from apps.intervalos.boxes import union_is_box
from apps.intervalos.evaluation import eval_interval
from apps.intervalos.exceptions import MixedDomainError

from .certificate import Certificate, CheckReport, ConditionStatus

logger = logging.getLogger(__name__)

OK = ConditionStatus.OK
FAILED = ConditionStatus.FAILED
UNDETERMINED = ConditionStatus.UNDETERMINED


def check_certificate(formula: Formula, cert: Certificate, budget: int = DEFAULT_BUDGET) -> CheckReport:
    """
    Decide W(φ, sat, (σ, ν, β)). El veredicto es valid solo si las seis
    condiciones quedan verificadas; agotar el presupuesto del grado da
    undetermined.
    """
    report = CheckReport()
    started = perf_counter()
    try:
        _check(formula, cert, budget, report)
    finally:
        report.timings['total'] = perf_counter() - started
    logger.info('Certificado %s: %s', cert.formula_digest[:12], report.verdict.value)
    return report


def _check(formula: Formula, cert: Certificate, budget: int, report: CheckReport):
    if cert.formula_digest != formula_digest(formula):
        report.reject('El digest del certificado no corresponde a la formula')
        return

    # (a)
    try:
        selector = as_selector(formula, cert.sigma)
    except SelectorError as error:
        report.mark('a', FAILED, error.message)
        return
    report.mark('a', OK)

    # (b)
    selected_vars = formula.selected_vars(selector)
    outside = [name for name in cert.instantiated if name not in selected_vars]
    if outside:
        report.mark('b', FAILED, f'nu instancia variables fuera de Vars(σ(φ)): {outside}')
        return
    if len(set(cert.instantiated)) != len(cert.nu):
        report.mark('b', FAILED, 'nu repite variables')
        return
    if not all(math.isfinite(value) for _, value in cert.nu):
        report.mark('b', FAILED, 'nu contiene valores no finitos')
        return
    system = partition_selected(formula, selector, cert.assignment)
    if not system.is_square:
        report.mark('b', FAILED, f'{len(system.equations)} ecuaciones para '
                                 f'{len(system.active_vars)} variables no instanciadas')
        return
    report.mark('b', OK)

    # (c)
    if not cert.beta:
        report.mark('c', FAILED, 'beta esta vacio')
        return
    for box in cert.beta:
        if set(box.vars) != set(system.domain_vars):
            report.mark('c', FAILED, f'Caja sobre {list(box.vars)}, se esperaba {list(system.domain_vars)}')
            return
    try:
        envelope = union_is_box(cert.beta)
    except MixedDomainError as error:
        report.mark('c', FAILED, error.message)
        return
    if envelope is None:
        report.mark('c', FAILED, 'La union de beta no es una caja')
        return
    report.mark('c', OK)

    # (d) y (e)
    started = perf_counter()
    result = degree(system.equations, envelope.project(system.active_vars), budget)
    report.timings['degree'] = perf_counter() - started
    if result.status is DegreeStatus.DEGREE:
        report.mark('d', OK)
        report.degree = result.value
        if result.value == 0:
            report.mark('e', FAILED, 'El grado es 0')
            return
        report.mark('e', OK, f'grado {result.value}')
    elif not result.boundary_verified:
        status = UNDETERMINED if result.status is DegreeStatus.BUDGET_EXCEEDED else FAILED
        report.mark('d', status, f'No se pudo excluir el 0 de F en el borde ({result.subdivisions} sub-cajas)')
        return
    else:
        report.mark('d', OK)
        report.mark('e', UNDETERMINED, f'Grado no resuelto: {result.status.value}')

    # (f)
    started = perf_counter()
    for index, box in enumerate(cert.beta):
        for term in system.inequalities:
            if not eval_interval(term, box).hi <= 0.0:
                report.mark('f', FAILED, f'Una inecuacion no se verifica en la caja {index}')
                return
        for term in system.strict:
            if not eval_interval(term, box).hi < 0.0:
                report.mark('f', FAILED, f'Una inecuacion estricta no se verifica en la caja {index}')
                return
    report.timings['inequalities'] = perf_counter() - started
    report.mark('f', OK)
