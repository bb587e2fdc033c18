"""
Jacobiano numerico de un sistema de ecuaciones en un punto, por
diferenciacion automatica hacia adelante sobre los terminos.
"""
import logging
from dataclasses import dataclass
from typing import Mapping, Sequence, Tuple

import numpy as np

from apps.formulas.numeric import compile_term
from apps.formulas.terms import Term

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class JacobianAt:
    """
    Matriz n x m (ecuaciones x variables, columnas en el orden global).
    Las filas con derivadas no finitas quedan marcadas en `flagged` y no
    participan de las decisiones de rango.
    """
    matrix: np.ndarray
    variables: Tuple[str, ...]
    point: Mapping[str, float]
    flagged: Tuple[int, ...] = ()

    @property
    def shape(self) -> Tuple[int, int]:
        return self.matrix.shape

    @property
    def finite_rows(self) -> np.ndarray:
        keep = [j for j in range(self.matrix.shape[0]) if j not in self.flagged]
        return self.matrix[keep, :]

    def columns(self, names: Sequence[str]) -> np.ndarray:
        index = [self.variables.index(n) for n in names]
        return self.finite_rows[:, index]


def jacobian_at(equations: Sequence[Term], variables: Sequence[str], point: Mapping[str, float]) -> JacobianAt:
    variables = tuple(variables)
    x = np.array([float(point[name]) for name in variables], dtype=float)
    matrix = np.zeros((len(equations), len(variables)), dtype=float)
    flagged = []
    for j, term in enumerate(equations):
        _, grad = compile_term(term, variables).value_and_gradient(x)
        row = np.asarray(grad, dtype=float)
        if row.size == 0:
            row = np.zeros(len(variables))
        if not np.all(np.isfinite(row)):
            flagged.append(j)
            logger.debug('Fila %d del jacobiano no finita en %s', j, dict(point))
        matrix[j, :] = row
    return JacobianAt(matrix, variables, dict(point), tuple(flagged))
