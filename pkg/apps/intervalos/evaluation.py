"""
Evaluacion de terminos sobre cajas con aritmetica de intervalos.
"""
from collections import Counter
from functools import lru_cache
from typing import Callable, Mapping, Union

from apps.formulas.terms import Add, Const, Func, Mul, Neg, Term, Var, term_vars

from .boxes import NamedBox
from .interval import FUNCTIONS, Interval

IntervalFn = Callable[[Mapping[str, Interval]], Interval]


def _product(factors):
    result = factors[0]
    for factor in factors[1:]:
        result = result * factor
    return result


@lru_cache(maxsize=4096)
def compile_interval(term: Term) -> IntervalFn:
    """Compila el termino a una funcion sobre mapas nombre -> intervalo."""
    if isinstance(term, Var):
        name = term.name
        return lambda box: box[name]
    if isinstance(term, Const):
        value = Interval.from_rational(term.value)
        return lambda box: value
    if isinstance(term, Neg):
        inner = compile_interval(term.arg)
        return lambda box: -inner(box)
    if isinstance(term, Add):
        parts = [compile_interval(a) for a in term.args]

        def summed(box):
            result = parts[0](box)
            for part in parts[1:]:
                result = result + part(box)
            return result
        return summed
    if isinstance(term, Mul):
        # factores repetidos como potencia: x*x da [0, ..] y no [-1, 1]
        counts = Counter(term.args)
        groups = [(compile_interval(factor), exponent) for factor, exponent in counts.items()]

        def multiplied(box):
            return _product([fn(box) ** exponent for fn, exponent in groups])
        return multiplied
    if isinstance(term, Func):
        fn = FUNCTIONS[term.name]
        inner = compile_interval(term.arg)
        return lambda box: fn(inner(box))
    raise TypeError(f'Termino desconocido: {term!r}')


def eval_interval(term: Term, box: Union[NamedBox, Mapping[str, Interval]]) -> Interval:
    """
    Encierra el rango de `term` sobre la caja. Las variables del termino
    deben estar en el dominio de la caja.
    """
    mapping = box.as_dict() if isinstance(box, NamedBox) else box
    missing = [name for name in term_vars(term) if name not in mapping]
    if missing:
        raise KeyError(f'Variables sin intervalo en la caja: {missing}')
    return compile_interval(term)(mapping)


def refutes_equation(term: Term, box) -> bool:
    """La caja no contiene ceros de term = 0."""
    return not eval_interval(term, box).contains_zero()


def verifies_inequality(term: Term, box, strict: bool = False) -> bool:
    """term <= 0 (o < 0) vale en toda la caja."""
    upper = eval_interval(term, box).hi
    return upper < 0.0 if strict else upper <= 0.0


def refutes_inequality(term: Term, box, strict: bool = False) -> bool:
    """term <= 0 (o < 0) no vale en ningun punto de la caja."""
    lower = eval_interval(term, box).lo
    return lower >= 0.0 if strict else lower > 0.0
