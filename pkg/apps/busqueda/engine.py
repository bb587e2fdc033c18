"""
Busqueda en profundidad de certificados sobre el arbol (p, σ, ν, β).

Cada nivel tiene su funcion de hijos; el primer (p, σ, ν, β) cuya etapa
de cajas tiene exito se arma como certificado y se verifica con el
verificador independiente antes de devolver sat.
"""
import enum
import logging
from dataclasses import dataclass, field
from time import perf_counter
from typing import Dict, List, Mapping, Optional

from apps.algebra.instantiation import instantiation_candidates
from apps.algebra.jacobian import jacobian_at
from apps.certificados.certificate import Certificate, Verdict
from apps.certificados.checker import check_certificate
from apps.estructura.dulmage_mendelsohn import build_graph, dm_decompose
from apps.formulas.printer import formula_digest
from apps.formulas.systems import Selector, dnf_expand, partition_selected
from apps.formulas.terms import Formula, SystemPair
from apps.intervalos.boxes import NamedBox
from apps.intervalos.interval import Interval
from apps.objetivos.objective import build_objective
from apps.optimizacion.basin_hopping import basin_hopping, start_bounds

from .boxes import BoxSearchResult, box_search_eps_inflation, box_search_gridding
from .config import SearchConfig
from .literals import children_literals
from .statistics import SearchStatistics

logger = logging.getLogger(__name__)


class SearchResult(enum.Enum):
    SAT = 'sat'
    UNKNOWN = 'unknown'


@dataclass
class SearchOutcome:
    result: SearchResult
    certificate: Optional[Certificate] = None
    statistics: SearchStatistics = field(default_factory=SearchStatistics)
    config_id: str = ''
    timed_out: bool = False
    error: Optional[str] = None

    @property
    def is_sat(self) -> bool:
        return self.result is SearchResult.SAT


class _Timeout(Exception):
    pass


class _Deadline:
    def __init__(self, timeout_ms: int):
        self.expires = perf_counter() + timeout_ms / 1000.0

    def check(self):
        if perf_counter() > self.expires:
            raise _Timeout()


# ----------------------------------------------------------------------
# hijos por nivel
# ----------------------------------------------------------------------

def children_points(formula: Formula, cfg: SearchConfig) -> List[Dict[str, float]]:
    """k minimos locales de L2O(φ), ascendentes por valor del objetivo."""
    objective = build_objective(formula)
    result = basin_hopping(
        objective, cfg.k, seed=cfg.seed, budget=cfg.optimizer_budget, bounds=start_bounds(formula),
    )
    return result.as_points()


def children_instantiations(formula: Formula, point: Mapping[str, float], selector: Selector,
                            cfg: SearchConfig) -> List[Dict[str, float]]:
    """ν_i = proyeccion de p sobre cada conjunto V_i candidato."""
    selected = formula.selected(selector)
    equations = [literal.lhs for literal in selected if literal.is_equation]
    variables = formula.selected_vars(selector)
    dm = dm_decompose(build_graph(equations, variables))
    jacobian = None
    if cfg.kearfott_ordering or cfg.filter_rank_deficient:
        jacobian = jacobian_at(equations, variables, point)
    candidates = instantiation_candidates(
        dm, jacobian,
        kearfott_ordering=cfg.kearfott_ordering,
        filter_overconstr_v=cfg.filter_overconstr_v,
        filter_rank_deficient=cfg.filter_rank_deficient,
        cap=cfg.instantiation_cap,
    )
    return [{name: float(point[name]) for name in candidate.variables} for candidate in candidates]


def children_boxes(system: SystemPair, point: Mapping[str, float], cfg: SearchConfig,
                   stats: SearchStatistics = None) -> Optional[BoxSearchResult]:
    center = {name: float(point[name]) for name in system.active_vars}
    args = (system.equations, system.inequalities, system.strict)
    found = None
    if cfg.boxes.uses_inflation:
        found = box_search_eps_inflation(*args, center, cfg, stats)
    if found is None and cfg.boxes.uses_gridding:
        start = NamedBox.around(center, cfg.grid_side / 2, system.active_vars)
        found = box_search_gridding(*args, start, cfg, stats)
    return found


def _over_domain(box: NamedBox, system: SystemPair, point: Mapping[str, float]) -> NamedBox:
    """Extiende la caja a Vars(φ) \\ V con intervalos puntuales en las variables no seleccionadas."""
    mapping = box.as_dict()
    for name in system.domain_vars:
        if name not in mapping:
            mapping[name] = Interval.point(float(point[name]))
    return NamedBox.from_mapping(mapping, system.domain_vars)


# ----------------------------------------------------------------------
# busqueda
# ----------------------------------------------------------------------

class _Search:

    def __init__(self, formula: Formula, cfg: SearchConfig, stats: SearchStatistics, deadline: _Deadline):
        self.formula = formula
        self.digest = formula_digest(formula)
        self.cfg = cfg
        self.stats = stats
        self.deadline = deadline

    def run(self, target: Formula, remap: Optional[Selector] = None) -> Optional[Certificate]:
        """DFS sobre `target`; `remap` traduce el selector de una conjuncion DNF al de φ."""
        for point in children_points(target, self.cfg):
            self.deadline.check()
            self.stats.points += 1
            for selector in children_literals(target, point, self.cfg, self.stats):
                self.stats.selectors += 1
                for assignment in children_instantiations(target, point, selector, self.cfg):
                    self.deadline.check()
                    self.stats.instantiations += 1
                    certificate = self._leaf(target, point, selector, assignment, remap)
                    if certificate is not None:
                        return certificate
        return None

    def _leaf(self, target, point, selector, assignment, remap) -> Optional[Certificate]:
        system = partition_selected(target, selector, assignment)
        if not system.is_square:
            return None
        found = children_boxes(system, point, self.cfg, self.stats)
        if found is None:
            return None
        beta = [_over_domain(box, system, point) for box in found.beta]
        certificate = Certificate.build(remap or selector, assignment, beta, self.digest)
        report = check_certificate(self.formula, certificate, self.cfg.degree_budget)
        if report.verdict is not Verdict.VALID:
            self.stats.self_check_failures += 1
            logger.warning('Certificado descartado por la verificacion: %s', report.reason or report.verdict.value)
            return None
        logger.info('Certificado encontrado: grado %d, %d caja(s)', found.degree, len(beta))
        return certificate

    def restart_on_dnf(self) -> Optional[Certificate]:
        expansion = dnf_expand(self.formula, self.cfg.dnf_cap)
        for selector, conjunct in expansion.items():
            self.deadline.check()
            self.stats.restarts += 1
            certificate = self.run(conjunct, remap=selector)
            if certificate is not None:
                return certificate
        return None


def solve(formula: Formula, cfg: SearchConfig = None) -> SearchOutcome:
    """
    sat con certificado verificado, o unknown. Nunca lanza por fallas
    internas de la busqueda: quedan registradas y el resultado es unknown.
    """
    cfg = cfg or SearchConfig.preset()
    stats = SearchStatistics()
    started = perf_counter()
    outcome = SearchOutcome(SearchResult.UNKNOWN, statistics=stats, config_id=cfg.config_id)
    try:
        search = _Search(formula, cfg, stats, _Deadline(cfg.timeout_ms))
        certificate = search.run(formula)
        has_disjunctions = any(len(clause.literals) > 1 for clause in formula.clauses)
        if certificate is None and stats.covered_points == 0 and has_disjunctions:
            logger.info('Ningun minimo cubre todas las clausulas: reinicio sobre la DNF')
            certificate = search.restart_on_dnf()
        if certificate is not None:
            outcome.result = SearchResult.SAT
            outcome.certificate = certificate
    except _Timeout:
        outcome.timed_out = True
        logger.info('Busqueda interrumpida por tiempo (%d ms)', cfg.timeout_ms)
    except Exception as error:
        outcome.error = f'{type(error).__name__}: {error}'
        logger.exception('Falla interna de la busqueda [%s]; el resultado es unknown', cfg.config_id)
    stats.elapsed = perf_counter() - started
    logger.info('solve [%s]: %s en %.3f s', cfg.config_id, outcome.result.value, stats.elapsed)
    return outcome
