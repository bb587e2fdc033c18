"""
Evaluacion numerica (binary64) de terminos y derivadas en modo directo.

Los terminos se compilan una vez a clausuras sobre un vector de
variables en orden fijo; los desbordes de exp dan inf y los argumentos
no finitos de sin/cos/tan dan nan.
"""
import math
from typing import Callable, Dict, Mapping, Sequence, Tuple

import numpy as np

from .terms import Add, Const, Func, Mul, Neg, Term, Var


def _safe(fn: Callable[[float], float]) -> Callable[[float], float]:
    def wrapped(value: float) -> float:
        try:
            return fn(value)
        except OverflowError:
            return math.inf
        except ValueError:
            return math.nan
    return wrapped


SIN = _safe(math.sin)
COS = _safe(math.cos)
TAN = _safe(math.tan)
EXP = _safe(math.exp)

_FUNCTIONS = {'sin': SIN, 'cos': COS, 'tan': TAN, 'exp': EXP}

ValueFn = Callable[[Sequence[float]], float]
DualFn = Callable[[Sequence[float]], Tuple[float, np.ndarray]]


def _value_closure(term: Term, index: Dict[str, int]) -> ValueFn:
    if isinstance(term, Var):
        i = index[term.name]
        return lambda x: x[i]
    if isinstance(term, Const):
        c = float(term.value)
        return lambda x: c
    if isinstance(term, Neg):
        inner = _value_closure(term.arg, index)
        return lambda x: -inner(x)
    if isinstance(term, Add):
        parts = [_value_closure(a, index) for a in term.args]
        return lambda x: sum(p(x) for p in parts)
    if isinstance(term, Mul):
        parts = [_value_closure(a, index) for a in term.args]

        def product(x):
            result = 1.0
            for p in parts:
                result *= p(x)
            return result
        return product
    if isinstance(term, Func):
        fn = _FUNCTIONS[term.name]
        inner = _value_closure(term.arg, index)
        return lambda x: fn(inner(x))
    raise TypeError(f'Termino desconocido: {term!r}')


def _dual_closure(term: Term, index: Dict[str, int], n: int) -> DualFn:
    if isinstance(term, Var):
        i = index[term.name]
        unit = np.zeros(n)
        unit[i] = 1.0
        return lambda x: (x[i], unit.copy())
    if isinstance(term, Const):
        c = float(term.value)
        return lambda x: (c, np.zeros(n))
    if isinstance(term, Neg):
        inner = _dual_closure(term.arg, index, n)

        def negated(x):
            v, g = inner(x)
            return -v, -g
        return negated
    if isinstance(term, Add):
        parts = [_dual_closure(a, index, n) for a in term.args]

        def summed(x):
            value, grad = 0.0, np.zeros(n)
            for p in parts:
                v, g = p(x)
                value += v
                grad += g
            return value, grad
        return summed
    if isinstance(term, Mul):
        parts = [_dual_closure(a, index, n) for a in term.args]

        def product(x):
            evaluated = [p(x) for p in parts]
            values = [v for v, _ in evaluated]
            # productos prefijo/sufijo para la regla del producto
            prefix = [1.0]
            for v in values:
                prefix.append(prefix[-1] * v)
            suffix = [1.0]
            for v in reversed(values):
                suffix.append(suffix[-1] * v)
            suffix.reverse()
            grad = np.zeros(n)
            for k, (_, g) in enumerate(evaluated):
                others = prefix[k] * suffix[k + 1]
                if others != 0.0:
                    grad += others * g
            return prefix[-1], grad
        return product
    if isinstance(term, Func):
        inner = _dual_closure(term.arg, index, n)
        name = term.name

        def function(x):
            v, g = inner(x)
            if name == 'sin':
                return SIN(v), COS(v) * g
            if name == 'cos':
                return COS(v), -SIN(v) * g
            if name == 'tan':
                t = TAN(v)
                return t, (1.0 + t * t) * g
            e = EXP(v)
            return e, e * g
        return function
    raise TypeError(f'Termino desconocido: {term!r}')


class CompiledTerm:
    """Termino compilado sobre un orden fijo de variables."""

    def __init__(self, term: Term, variables: Sequence[str]):
        self.term = term
        self.variables = tuple(variables)
        index = {name: i for i, name in enumerate(self.variables)}
        self._value = _value_closure(term, index)
        self._dual = _dual_closure(term, index, len(self.variables))

    def value(self, x: Sequence[float]) -> float:
        return self._value(x)

    def value_and_gradient(self, x: Sequence[float]) -> Tuple[float, np.ndarray]:
        return self._dual(x)

    def __call__(self, x: Sequence[float]) -> float:
        return self._value(x)


def compile_term(term: Term, variables: Sequence[str]) -> CompiledTerm:
    return CompiledTerm(term, variables)


def evaluate(term: Term, point: Mapping[str, float]) -> float:
    names = tuple(point)
    return CompiledTerm(term, names).value([float(point[n]) for n in names])
