"""
Extraccion de sistemas de ecuaciones/inecuaciones a partir de literales
seleccionados, y expansion DNF perezosa.
"""
import logging
import math
from fractions import Fraction
from itertools import islice, product
from typing import Iterator, Mapping, Sequence, Tuple, Union

from .exceptions import FormulaError, SelectorError
from .terms import EQ, LE, LT, Clause, Const, Formula, SystemPair, substitute

logger = logging.getLogger(__name__)

DEFAULT_DNF_CAP = 10_000

Selector = Tuple[int, ...]
PartialAssignment = Mapping[str, float]


def as_selector(formula: Formula, selector: Union[Sequence[int], Mapping[int, int]]) -> Selector:
    """Valida un selector (secuencia o mapa clausula -> literal) y lo devuelve como tupla."""
    if isinstance(selector, Mapping):
        missing = [i for i in range(len(formula.clauses)) if i not in selector]
        if missing:
            raise SelectorError(f'El selector no cubre las clausulas {missing}')
        extra = [i for i in selector if not (isinstance(i, int) and 0 <= i < len(formula.clauses))]
        if extra:
            raise SelectorError(f'El selector referencia clausulas inexistentes {extra}')
        selector = [selector[i] for i in range(len(formula.clauses))]
    selector = tuple(selector)
    if len(selector) != len(formula.clauses):
        raise SelectorError(
            f'El selector tiene {len(selector)} entradas y la formula {len(formula.clauses)} clausulas'
        )
    for index, (clause, choice) in enumerate(zip(formula.clauses, selector)):
        if not isinstance(choice, int) or not 0 <= choice < len(clause.literals):
            raise SelectorError(f'Literal {choice} fuera de rango en la clausula {index}')
    return selector


def partition_selected(formula: Formula, selector, assignment: PartialAssignment = None) -> SystemPair:
    """
    Arma F = eq(ν(σ(φ))) y G = ineq(ν(σ(φ))).

    Las variables de ν fuera de Vars(σ(φ)) se ignoran y se informan en
    warnings.
    """
    selector = as_selector(formula, selector)
    assignment = dict(assignment or {})
    selected = formula.selected(selector)
    selected_vars = formula.selected_vars(selector)

    warnings = []
    values = {}
    for name, value in assignment.items():
        if name not in selected_vars:
            warnings.append(f'La variable {name} no aparece en los literales seleccionados; se ignora')
            continue
        value = float(value)
        if not math.isfinite(value):
            raise SelectorError(f'Valor no finito para {name}')
        values[name] = Const(Fraction(value))
    for message in warnings:
        logger.warning(message)

    equations, inequalities, strict = [], [], []
    for literal in selected:
        if not literal.is_normal:
            raise FormulaError('partition_selected requiere una formula normalizada')
        term = substitute(literal.lhs, values)
        if literal.relation == EQ:
            equations.append(term)
        elif literal.relation == LE:
            inequalities.append(term)
        elif literal.relation == LT:
            strict.append(term)

    return SystemPair(
        equations=tuple(equations),
        inequalities=tuple(inequalities),
        strict=tuple(strict),
        domain_vars=tuple(v for v in formula.vars if v not in values),
        active_vars=tuple(v for v in selected_vars if v not in values),
        warnings=tuple(warnings),
    )


class DnfExpansion:
    """
    Secuencia perezosa de conjunciones de literales unitarios, una por
    elemento del producto cartesiano de las clausulas, en orden
    lexicografico. Si el producto supera el tope se trunca y se marca.
    """

    def __init__(self, formula: Formula, cap: int = DEFAULT_DNF_CAP):
        self.formula = formula
        self.cap = cap
        self.total = math.prod(len(c.literals) for c in formula.clauses)
        self.truncated = self.total > cap

    def __len__(self):
        return min(self.total, self.cap)

    def selectors(self) -> Iterator[Selector]:
        ranges = [range(len(c.literals)) for c in self.formula.clauses]
        return islice(product(*ranges), self.cap)

    def items(self) -> Iterator[Tuple[Selector, Formula]]:
        for selector in self.selectors():
            clauses = [Clause((literal,)) for literal in self.formula.selected(selector)]
            yield selector, Formula.build(clauses, self.formula.vars)

    def __iter__(self) -> Iterator[Formula]:
        for _, conjunction in self.items():
            yield conjunction


def dnf_expand(formula: Formula, cap: int = DEFAULT_DNF_CAP) -> DnfExpansion:
    expansion = DnfExpansion(formula, cap)
    if expansion.truncated:
        logger.info('Expansion DNF truncada: %d conjunciones, tope %d', expansion.total, cap)
    return expansion
