"""
Segundo nivel del arbol: selectores de literales aproximadamente
satisfechos en un punto.
"""
import logging
from itertools import islice, product
from typing import List, Mapping, Optional, Tuple

from apps.estructura.dulmage_mendelsohn import is_overconstrained_free
from apps.formulas.systems import Selector
from apps.formulas.terms import Formula, Literal
from apps.objetivos.objective import build_objective

from .config import SearchConfig
from .forced import ForcedCheck, forced_literal_consistency
from .statistics import SearchStatistics

logger = logging.getLogger(__name__)

EXAMINED_PER_SELECTOR = 64

# (indice del literal en la clausula, valor del objetivo del literal)
ScoredLiteral = Tuple[int, float]


def approximately_satisfied(formula: Formula, point: Mapping[str, float], eps_lit: float,
                            sort: bool = False) -> List[List[ScoredLiteral]]:
    """L_C = {l ∈ C | L2O(l)(p) <= ε} por clausula, en orden de clausula o por valor."""
    sets = []
    for clause in formula.clauses:
        scored = []
        for index, literal in enumerate(clause.literals):
            value = build_objective(literal).value(point)
            if value <= eps_lit:
                scored.append((index, value))
        if sort:
            scored.sort(key=lambda item: (item[1], item[0]))
        sets.append(scored)
    return sets


def forced_literals(formula: Formula, sets: List[List[ScoredLiteral]]) -> List[Literal]:
    return [formula.literal(c, scored[0][0]) for c, scored in enumerate(sets) if len(scored) == 1]


def _has_no_overconstrained_part(formula: Formula, selector: Selector) -> bool:
    selected = formula.selected(selector)
    equations = [literal.lhs for literal in selected if literal.is_equation]
    return is_overconstrained_free(equations, formula.selected_vars(selector))


def children_literals(formula: Formula, point: Mapping[str, float], cfg: SearchConfig,
                      stats: Optional[SearchStatistics] = None) -> List[Selector]:
    """
    Producto cartesiano de los L_C (lexicografico). Vacio si algun L_C
    es vacio o si los literales forzados son simbolicamente inconsistentes.
    """
    sets = approximately_satisfied(formula, point, cfg.eps_lit, sort=cfg.sort_literals)
    if any(not scored for scored in sets):
        return []
    if stats is not None:
        stats.covered_points += 1

    if cfg.check_forced_literals:
        forced = forced_literals(formula, sets)
        if forced and forced_literal_consistency(forced) is ForcedCheck.INCONSISTENT:
            logger.debug('Punto descartado por literales forzados inconsistentes')
            if stats is not None:
                stats.pruned_forced += 1
            return []

    candidates = product(*[[index for index, _ in scored] for scored in sets])
    selectors: List[Selector] = []
    for selector in islice(candidates, cfg.selector_cap * EXAMINED_PER_SELECTOR):
        if cfg.filter_overconstr and not _has_no_overconstrained_part(formula, selector):
            continue
        selectors.append(tuple(selector))
        if len(selectors) >= cfg.selector_cap:
            break
    return selectors
