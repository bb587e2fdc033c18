"""
Cuarto nivel del arbol: cajas alrededor de p_¬V con grado no nulo e
inecuaciones verificadas por intervalos.

Las inecuaciones estrictas g < 0 se buscan como g <= -ε_strict.
"""
import logging
from collections import deque
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Tuple

from apps.formulas.terms import Term
from apps.grado.degree import degree
from apps.intervalos.boxes import EMPTY_BOX, NamedBox
from apps.intervalos.evaluation import eval_interval, refutes_equation

from .config import SearchConfig
from .statistics import SearchStatistics

logger = logging.getLogger(__name__)

INEQUALITY_SPLIT_LIMIT = 256


@dataclass(frozen=True)
class BoxSearchResult:
    beta: Tuple[NamedBox, ...]
    degree: int
    iterations: int = 0


class _Inequalities:
    """G <= 0 y G < 0 (esta ultima como G <= -ε)."""

    def __init__(self, inequalities: Sequence[Term], strict: Sequence[Term], eps_strict: float):
        self.bounds = [(term, 0.0) for term in inequalities] + [(term, -eps_strict) for term in strict]

    def verified(self, box: NamedBox) -> bool:
        return all(eval_interval(term, box).hi <= bound for term, bound in self.bounds)

    def refuted(self, box: NamedBox) -> bool:
        return any(eval_interval(term, box).lo > bound for term, bound in self.bounds)


def _nonzero_degree(equations: Sequence[Term], box: NamedBox, cfg: SearchConfig,
                    stats: Optional[SearchStatistics]) -> Optional[int]:
    if stats is not None:
        stats.degree_queries += 1
    result = degree(equations, box, cfg.degree_budget)
    return result.value if result.is_nonzero else None


def _zero_dimensional(inequalities: _Inequalities) -> Optional[BoxSearchResult]:
    if inequalities.verified(EMPTY_BOX):
        return BoxSearchResult((EMPTY_BOX,), 1)
    return None


def box_search_eps_inflation(equations: Sequence[Term], inequalities: Sequence[Term], strict: Sequence[Term],
                             center: Mapping[str, float], cfg: SearchConfig,
                             stats: Optional[SearchStatistics] = None) -> Optional[BoxSearchResult]:
    """
    Cajas centradas en `center` de lado 2^i·ε, i = 0, 1, ... hasta que el
    lado supera el limite. Como las cajas crecen, la primera inecuacion
    que no se verifica corta la iteracion.
    """
    checks = _Inequalities(inequalities, strict, cfg.eps_strict)
    if not center:
        return _zero_dimensional(checks)
    order = list(center)
    i = 0
    side = cfg.eps_box
    while side <= cfg.inflation_limit:
        box = NamedBox.around(center, side / 2, order)
        if stats is not None:
            stats.boxes += 1
        if not checks.verified(box):
            logger.debug('eps-inflation: inecuacion no verificada en la iteracion %d', i)
            return None
        value = _nonzero_degree(equations, box, cfg, stats)
        if value is not None:
            logger.debug('eps-inflation: grado %d con lado %g', value, side)
            return BoxSearchResult((box,), value, i + 1)
        i += 1
        side = cfg.eps_box * 2.0 ** i
    return None


def _split_for_inequalities(box: NamedBox, checks: _Inequalities) -> Optional[Tuple[NamedBox, ...]]:
    """Particion de `box` en sub-cajas donde G se verifica, o None."""
    pieces = []
    pending = [box]
    while pending:
        current = pending.pop()
        if checks.verified(current):
            pieces.append(current)
            continue
        if checks.refuted(current) or len(pieces) + len(pending) >= INEQUALITY_SPLIT_LIMIT:
            return None
        name = current.widest()
        if name is None or current[name].is_point:
            return None
        try:
            left, right = current.bisect(name)
        except ValueError:
            return None
        pending.extend((right, left))
    return tuple(pieces)


def box_search_gridding(equations: Sequence[Term], inequalities: Sequence[Term], strict: Sequence[Term],
                        start: NamedBox, cfg: SearchConfig,
                        stats: Optional[SearchStatistics] = None) -> Optional[BoxSearchResult]:
    """
    Refinamiento de la grilla que parte de `start`: se descartan las
    sub-cajas refutadas por intervalos y se busca una con grado no nulo
    en la que las inecuaciones se puedan verificar. Grilla vacia o mas de
    cfg.grid_limit cajas examinadas terminan sin exito.
    """
    checks = _Inequalities(inequalities, strict, cfg.eps_strict)
    if start.dimension == 0:
        return _zero_dimensional(checks)
    grid = deque([start])
    examined = 0
    while grid:
        if examined >= cfg.grid_limit:
            logger.debug('box-gridding: limite de %d cajas alcanzado', cfg.grid_limit)
            return None
        box = grid.popleft()
        examined += 1
        if stats is not None:
            stats.boxes += 1
        if any(refutes_equation(term, box) for term in equations) or checks.refuted(box):
            continue
        value = _nonzero_degree(equations, box, cfg, stats)
        if value is not None:
            beta = _split_for_inequalities(box, checks)
            if beta is not None:
                logger.debug('box-gridding: grado %d tras %d cajas', value, examined)
                return BoxSearchResult(beta, value, examined)
        name = box.widest()
        if box[name].is_point:
            continue
        try:
            grid.extend(box.bisect(name))
        except ValueError:
            continue
    logger.debug('box-gridding: grilla vacia tras %d cajas', examined)
    return None
