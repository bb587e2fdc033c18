"""
Orden de Kearfott y candidatos de instanciacion.

Para volver cuadrado un sistema sub-restringido se instancian
s = |variables| - |ecuaciones| variables, elegidas siempre entre las de la
parte sub-restringida de la descomposicion DM.
"""
import heapq
import logging
from dataclasses import dataclass
from itertools import combinations, islice
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from apps.estructura.dulmage_mendelsohn import DMDecomposition, dm_decompose

from .jacobian import JacobianAt
from .rank import null_space, rank_with_threshold

logger = logging.getLogger(__name__)

DEFAULT_CANDIDATE_CAP = 64
EXAMINED_PER_CANDIDATE = 64
WEIGHT_DIGITS = 12


@dataclass(frozen=True)
class InstantiationCandidate:
    variables: Tuple[str, ...]
    score: float = 0.0


def null_space_weights(jacobian: JacobianAt) -> np.ndarray:
    """Suma de valores absolutos de cada componente sobre la base del nucleo."""
    basis = null_space(jacobian.finite_rows)
    if basis.size == 0:
        return np.zeros(len(jacobian.variables))
    return np.round(np.abs(basis).sum(axis=0), WEIGHT_DIGITS)


def kearfott_order(jacobian: JacobianAt, pool: Sequence[str]) -> List[str]:
    """
    Variables de `pool` por peso decreciente en el nucleo del jacobiano;
    empates por orden global. Vacio si el nucleo es trivial.
    """
    if null_space(jacobian.finite_rows).shape[0] == 0:
        return []
    weights = null_space_weights(jacobian)
    position = {name: i for i, name in enumerate(jacobian.variables)}
    members = [name for name in jacobian.variables if name in set(pool)]
    return sorted(members, key=lambda name: (-weights[position[name]], position[name]))


def _by_cumulative_weight(ordered: Sequence[str], weights: Sequence[float], size: int) -> Iterator[Tuple[Tuple[str, ...], float]]:
    """
    Subconjuntos de tamano `size` en orden de peso acumulado no creciente.
    `ordered` viene ordenado por peso decreciente.
    """
    n = len(ordered)
    if size > n:
        return
    start = tuple(range(size))
    heap = [(-round(sum(weights[i] for i in start), WEIGHT_DIGITS), start)]
    seen = {start}
    while heap:
        negative, indices = heapq.heappop(heap)
        yield tuple(ordered[i] for i in indices), -negative
        for position in range(size - 1, -1, -1):
            bumped = indices[position] + 1
            limit = indices[position + 1] if position + 1 < size else n
            if bumped >= limit:
                continue
            successor = indices[:position] + (bumped,) + indices[position + 1:]
            if successor in seen:
                continue
            seen.add(successor)
            total = round(sum(weights[i] for i in successor), WEIGHT_DIGITS)
            heapq.heappush(heap, (-total, successor))


def _post_instantiation_well_constrained(dm: DMDecomposition, chosen: Sequence[str]) -> bool:
    return dm_decompose(dm.graph.without(chosen)).is_well_constrained


def _post_instantiation_full_rank(dm: DMDecomposition, jacobian: JacobianAt, chosen: Sequence[str]) -> bool:
    if jacobian.flagged:
        return False
    remaining = [name for name in dm.graph.variables if name not in chosen]
    square = jacobian.columns(remaining)
    if square.shape[0] != square.shape[1]:
        return False
    _, robust = rank_with_threshold(square)
    return robust


def instantiation_candidates(dm: DMDecomposition, jacobian: Optional[JacobianAt] = None, *,
                             kearfott_ordering: bool = False, filter_overconstr_v: bool = False,
                             filter_rank_deficient: bool = False,
                             cap: int = DEFAULT_CANDIDATE_CAP) -> List[InstantiationCandidate]:
    """
    Conjuntos de variables a instanciar, en el orden en que se prueban.

    El punto de instanciacion es el del jacobiano; se necesita jacobiano
    cuando se pide orden de Kearfott o filtro de rango.
    """
    size = len(dm.graph.variables) - len(dm.graph.equations)
    if size < 0:
        return []
    if (kearfott_ordering or filter_rank_deficient) and jacobian is None:
        raise ValueError('El orden de Kearfott y el filtro de rango necesitan el jacobiano')
    pool = list(dm.under.variables)

    if kearfott_ordering and size > 0:
        ordered = kearfott_order(jacobian, pool) or pool
        weights_by_name = dict(zip(jacobian.variables, null_space_weights(jacobian)))
        weights = [float(weights_by_name[name]) for name in ordered]
        source = _by_cumulative_weight(ordered, weights, size)
    else:
        source = ((chosen, 0.0) for chosen in combinations(pool, size))

    position = {name: i for i, name in enumerate(dm.graph.variables)}
    candidates: List[InstantiationCandidate] = []
    examined = 0
    for chosen, score in islice(source, cap * EXAMINED_PER_CANDIDATE):
        examined += 1
        # el filtro de rango incluye al estructural
        if (filter_overconstr_v or filter_rank_deficient) and not _post_instantiation_well_constrained(dm, chosen):
            continue
        if filter_rank_deficient and not _post_instantiation_full_rank(dm, jacobian, chosen):
            continue
        candidates.append(InstantiationCandidate(tuple(sorted(chosen, key=position.__getitem__)), score))
        if len(candidates) >= cap:
            break
    logger.debug('%d candidatos de instanciacion (s=%d, %d examinados)', len(candidates), size, examined)
    return candidates
