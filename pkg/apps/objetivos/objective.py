"""
Traduccion logica -> optimizacion.

Una formula normalizada se convierte en una funcion no negativa
H(p) = Σ_C min_{l ∈ C} h_l(p) con h_{f=0} = |f| y h_{f<=0} = h_{f<0} = max(f, 0).
Todo modelo de la formula es un cero de H.
"""
import math
from functools import lru_cache
from typing import Mapping, Sequence, Tuple, Union

import numpy as np

from apps.formulas.exceptions import FormulaError
from apps.formulas.numeric import CompiledTerm
from apps.formulas.terms import EQ, Clause, Formula, Literal

Point = Union[Mapping[str, float], Sequence[float], np.ndarray]


def _penalty(relation: str, value: float) -> float:
    if math.isnan(value):
        return math.inf
    if relation == EQ:
        return abs(value)
    return max(value, 0.0)


def _penalty_gradient(relation: str, value: float, grad: np.ndarray) -> np.ndarray:
    # ramas en orden: |f| = max(f, -f), max(f, 0); ante empate gana la primera
    if relation == EQ:
        return grad if value >= 0.0 else -grad
    return grad if value >= 0.0 else np.zeros_like(grad)


class LiteralPenalty:
    """h_l compilado sobre el orden de variables del objetivo."""

    def __init__(self, literal: Literal, variables: Sequence[str]):
        if not literal.is_normal:
            raise FormulaError(f'El objetivo requiere literales normalizados: {literal}')
        self.literal = literal
        self.relation = literal.relation
        self.compiled = CompiledTerm(literal.lhs, variables)

    def value(self, x) -> float:
        return _penalty(self.relation, self.compiled.value(x))

    def value_and_gradient(self, x) -> Tuple[float, np.ndarray]:
        raw, grad = self.compiled.value_and_gradient(x)
        penalty = _penalty(self.relation, raw)
        if not math.isfinite(penalty) or not np.all(np.isfinite(grad)):
            return penalty, np.zeros_like(grad)
        return penalty, _penalty_gradient(self.relation, raw, grad)


class Objective:
    """
    Funcion objetivo de una formula (o de un literal suelto).

    Los puntos se aceptan como vector en el orden de `variables` o como
    mapa nombre -> valor.
    """

    def __init__(self, source: Union[Formula, Literal]):
        self.source = source
        if isinstance(source, Literal):
            clauses = (Clause((source,)),)
            self.variables = source.vars
        else:
            clauses = source.clauses
            self.variables = source.vars
        self.clauses = tuple(
            tuple(LiteralPenalty(literal, self.variables) for literal in clause.literals)
            for clause in clauses
        )

    @property
    def arity(self) -> int:
        return len(self.variables)

    def vector(self, point: Point) -> np.ndarray:
        if isinstance(point, Mapping):
            return np.array([float(point[name]) for name in self.variables], dtype=float)
        vector = np.asarray(point, dtype=float)
        if vector.shape != (self.arity,):
            raise ValueError(f'Se esperaban {self.arity} coordenadas y llegaron {vector.shape}')
        return vector

    def value(self, point: Point) -> float:
        x = self.vector(point)
        total = 0.0
        for penalties in self.clauses:
            total += min(p.value(x) for p in penalties)
        return math.inf if math.isnan(total) else total

    def value_and_gradient(self, point: Point) -> Tuple[float, np.ndarray]:
        x = self.vector(point)
        total = 0.0
        grad = np.zeros(self.arity)
        for penalties in self.clauses:
            best_value, best_grad = None, None
            for penalty in penalties:
                value, g = penalty.value_and_gradient(x)
                if best_value is None or value < best_value:
                    best_value, best_grad = value, g
            total += best_value
            grad += best_grad
        if math.isnan(total):
            total = math.inf
        return total, grad

    def gradient(self, point: Point) -> np.ndarray:
        return self.value_and_gradient(point)[1]

    def __call__(self, point: Point) -> float:
        return self.value(point)


@lru_cache(maxsize=256)
def build_objective(source: Union[Formula, Literal]) -> Objective:
    return Objective(source)


def eval_objective(objective: Objective, point: Point) -> float:
    return objective.value(point)


def gradient(objective: Objective, point: Point) -> np.ndarray:
    return objective.gradient(point)
