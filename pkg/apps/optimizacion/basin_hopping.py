"""
Minimos locales del objetivo por basin hopping.

Cada ronda parte de un punto uniforme en la caja inicial y corre
scipy.optimize.basinhopping con paso gaussiano propio, aceptacion de
Metropolis (con el generador de la ronda) y descenso por gradiente
con busqueda de Armijo como minimizador local. Todos los minimos locales encontrados se juntan,
se deduplican y se ordenan por valor.
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.optimize as spo

from apps.formulas.linear import linear_form
from apps.formulas.terms import EQ
from apps.objetivos.objective import Objective

logger = logging.getLogger(__name__)

DEFAULT_START_BOX = (-10.0, 10.0)
DEFAULT_BUDGET = 10_000
DEFAULT_HOPS = 4
DEFAULT_TEMPERATURE = 1.0
DEFAULT_SIGMA = 0.5

ARMIJO_C = 1e-4
MAX_DESCENT_STEPS = 500
MIN_STEP = 1e-12
MIN_GRADIENT = 1e-9
DUPLICATE_DISTANCE = 1e-9

Bounds = Sequence[Tuple[float, float]]


@dataclass(eq=False)
class LocalMinimum:
    x: np.ndarray
    value: float
    round: int
    index: int
    start_value: float

    def as_point(self, variables: Sequence[str]) -> Dict[str, float]:
        return {name: float(v) for name, v in zip(variables, self.x)}


@dataclass(eq=False)
class MinimizerResult:
    points: Tuple[LocalMinimum, ...]
    variables: Tuple[str, ...]
    iterations: int
    seed: int
    exhausted: bool = False
    rounds: int = 0

    @property
    def values(self) -> List[float]:
        return [m.value for m in self.points]

    def as_points(self) -> List[Dict[str, float]]:
        return [m.as_point(self.variables) for m in self.points]

    def __len__(self):
        return len(self.points)


@dataclass
class _Budget:
    limit: int
    used: int = 0

    def spend(self, steps: int = 1):
        self.used += steps

    @property
    def left(self) -> int:
        return max(0, self.limit - self.used)


def armijo_descent(fun, x0, args=(), jac=None, budget: _Budget = None, maxiter=MAX_DESCENT_STEPS, **unknown):
    """
    Descenso por gradiente con busqueda lineal de Armijo (c = 1e-4,
    reduccion a la mitad). Se usa como `method` de scipy.optimize.minimize.
    """
    x = np.asarray(x0, dtype=float).copy()
    value = float(fun(x, *args))
    nfev = 1
    nit = 0
    message = 'maxiter'
    while nit < maxiter:
        if value == 0.0:
            message = 'zero'
            break
        if not math.isfinite(value):
            message = 'non-finite'
            break
        grad = np.asarray(jac(x, *args), dtype=float)
        if not np.all(np.isfinite(grad)):
            message = 'non-finite gradient'
            break
        norm = float(np.max(np.abs(grad))) if grad.size else 0.0
        if norm < MIN_GRADIENT:
            message = 'gradient'
            break
        if budget is not None:
            if budget.left == 0:
                message = 'budget'
                break
            budget.spend()
        direction = -grad
        slope = float(grad @ grad)
        t = min(1.0, 10.0 / norm)
        accepted = False
        while t * norm >= MIN_STEP:
            candidate = x + t * direction
            candidate_value = float(fun(candidate, *args))
            nfev += 1
            if candidate_value <= value - ARMIJO_C * t * slope:
                accepted = True
                break
            t /= 2
        nit += 1
        if not accepted:
            message = 'step'
            break
        x, value = candidate, candidate_value
    return spo.OptimizeResult(x=x, fun=value, nit=nit, nfev=nfev, njev=nit, success=True, message=message)


class GaussianStep:
    """Perturbacion gaussiana con σ adaptado desde el callback."""

    def __init__(self, rng: np.random.Generator, sigma: float = DEFAULT_SIGMA):
        self.rng = rng
        self.sigma = sigma

    def __call__(self, x):
        return x + self.rng.normal(0.0, self.sigma, size=np.shape(x))

    def adapt(self, accepted: bool):
        self.sigma *= 0.9 if accepted else 1.1


def reject_non_finite(f_new=None, x_new=None, f_old=None, x_old=None, **kwargs):
    """Descarta saltos a valores no finitos; Metropolis lo aplica scipy."""
    return math.isfinite(f_new)


def _deduplicate(minima: List[LocalMinimum]) -> List[LocalMinimum]:
    kept: List[LocalMinimum] = []
    for candidate in sorted(minima, key=lambda m: (m.value, m.round, m.index)):
        if any(np.max(np.abs(candidate.x - other.x), initial=0.0) <= DUPLICATE_DISTANCE for other in kept):
            continue
        kept.append(candidate)
    return kept


def basin_hopping(objective: Objective, k: int, seed: int = 0, budget: int = DEFAULT_BUDGET,
                  bounds: Optional[Bounds] = None, hops: int = DEFAULT_HOPS,
                  temperature: float = DEFAULT_TEMPERATURE) -> MinimizerResult:
    """
    Hasta k minimos locales de `objective`, ascendentes por valor.

    `budget` limita la cantidad total de pasos de descenso; al agotarse
    se devuelve lo encontrado hasta ese momento.
    """
    if k < 1:
        raise ValueError('k debe ser al menos 1')
    variables = tuple(objective.variables)
    n = len(variables)
    if n == 0:
        value = objective.value(np.zeros(0))
        point = LocalMinimum(np.zeros(0), value, 0, 0, value)
        return MinimizerResult((point,), variables, 0, seed, False, 1)

    bounds = list(bounds) if bounds is not None else [DEFAULT_START_BOX] * n
    lower = np.array([b[0] for b in bounds], dtype=float)
    upper = np.array([b[1] for b in bounds], dtype=float)

    spent = _Budget(budget)
    minima: List[LocalMinimum] = []
    exhausted = False
    rounds = 0

    def fun(x):
        return objective.value_and_gradient(x)

    for round_index in range(k):
        if spent.left == 0:
            exhausted = True
            break
        rng = np.random.default_rng([seed, round_index])
        x0 = lower + (upper - lower) * rng.random(n)
        step = GaussianStep(rng)
        found: List[LocalMinimum] = []

        def local_method(f, x_start, args=(), jac=None, **kwargs):
            start_value = float(f(np.asarray(x_start, dtype=float), *args))
            result = armijo_descent(f, x_start, args=args, jac=jac, budget=spent)
            found.append(LocalMinimum(
                np.array(result.x, dtype=float), float(result.fun), round_index, len(found), start_value,
            ))
            return result

        def callback(x, f, accepted):
            step.adapt(bool(accepted))
            return spent.left == 0

        rounds += 1
        spo.basinhopping(
            fun, x0, niter=hops, T=temperature,
            minimizer_kwargs={'method': local_method, 'jac': True},
            take_step=step, accept_test=reject_non_finite, callback=callback, seed=rng,
        )
        minima.extend(found)
        if spent.left == 0:
            exhausted = True
            break
        if len(_deduplicate(minima)) >= k:
            break

    points = tuple(_deduplicate(minima)[:k])
    logger.debug('basin hopping: %d minimos (%d rondas, %d pasos)', len(points), rounds, spent.used)
    return MinimizerResult(points, variables, spent.used, seed, exhausted, rounds)


def start_bounds(formula, variables: Sequence[str] = None,
                 default: Tuple[float, float] = DEFAULT_START_BOX) -> List[Tuple[float, float]]:
    """
    Caja inicial de las rondas: [-10, 10] por variable, salvo que la
    formula tenga clausulas unitarias de cota (a·x + c ⋈ 0 sobre una sola
    variable), que se usan cuando existen.
    """
    variables = list(variables if variables is not None else formula.vars)
    lower: Dict[str, float] = {}
    upper: Dict[str, float] = {}
    for clause in formula.clauses:
        if len(clause.literals) != 1:
            continue
        literal = clause.literals[0]
        if not literal.is_normal:
            continue
        form = linear_form(literal.lhs)
        single = form.single_variable()
        if single is None:
            continue
        name, coeff = single
        bound = float(-form.constant / coeff)
        if literal.relation == EQ or coeff > 0:
            upper[name] = min(upper.get(name, math.inf), bound)
        if literal.relation == EQ or coeff < 0:
            lower[name] = max(lower.get(name, -math.inf), bound)

    width = default[1] - default[0]
    bounds = []
    for name in variables:
        lo, hi = lower.get(name), upper.get(name)
        if lo is None and hi is None:
            lo, hi = default
        elif lo is None:
            lo = min(default[0], hi - width)
        elif hi is None:
            hi = max(default[1], lo + width)
        if lo > hi:
            lo, hi = hi, lo
        bounds.append((lo, hi))
    return bounds
