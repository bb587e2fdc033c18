"""
Analisis simbolico de literales forzados.

Los subterminos no lineales se tratan como incognitas independientes,
asi que cualquier contradiccion encontrada sobre esa relajacion lineal
es una contradiccion de los literales originales. La respuesta inversa
(consistente) no se afirma nunca.
"""
import enum
import logging
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from apps.formulas.linear import LinearForm, linear_form
from apps.formulas.terms import EQ, LT, Literal, Term

logger = logging.getLogger(__name__)


class ForcedCheck(enum.Enum):
    CONSISTENT_UNKNOWN = 'consistent-unknown'
    INCONSISTENT = 'inconsistent'


class _Contradiction(Exception):
    pass


def _constant_clash(relation: str, value: Fraction) -> bool:
    if relation == EQ:
        return value != 0
    if relation == LT:
        return value >= 0
    return value > 0


def _eliminate(equations: List[LinearForm], order: Dict[Term, int]) -> List[Tuple[Term, LinearForm]]:
    """
    Eliminacion gaussiana sobre los racionales. Devuelve pares
    (pivote, forma) con coeficiente 1 en el pivote y sin los demas
    pivotes; lanza _Contradiction si aparece 0 = c con c != 0.
    """
    pivots: List[Tuple[Term, LinearForm]] = []
    for form in equations:
        for atom, row in pivots:
            coeff = form.coeffs.get(atom)
            if coeff:
                form = form.plus(row, -coeff)
        if form.is_constant:
            if form.constant != 0:
                raise _Contradiction()
            continue
        atom = min(form.coeffs, key=order.__getitem__)
        form = form.scaled(1 / form.coeffs[atom])
        reduced = []
        for other_atom, row in pivots:
            coeff = row.coeffs.get(atom)
            reduced.append((other_atom, row.plus(form, -coeff) if coeff else row))
        pivots = reduced + [(atom, form)]
    return pivots


def _reduce(form: LinearForm, pivots: List[Tuple[Term, LinearForm]]) -> LinearForm:
    for atom, row in pivots:
        coeff = form.coeffs.get(atom)
        if coeff:
            form = form.plus(row, -coeff)
    return form


def _ratio(a: LinearForm, b: LinearForm) -> Optional[Fraction]:
    """λ con b.coeffs = λ·a.coeffs, si existe."""
    if set(a.coeffs) != set(b.coeffs) or not a.coeffs:
        return None
    atom = next(iter(a.coeffs))
    ratio = b.coeffs[atom] / a.coeffs[atom]
    if all(b.coeffs[k] == ratio * v for k, v in a.coeffs.items()):
        return ratio
    return None


def _opposed_clash(bounds: List[Tuple[str, LinearForm]]):
    """
    Dos cotas a <= 0 y b <= 0 con b = -λ·a + c (λ > 0): sumando
    λ·a + b queda una constante que debe ser <= 0.
    """
    for i, (rel_a, a) in enumerate(bounds):
        for rel_b, b in bounds[i + 1:]:
            ratio = _ratio(a, b)
            if ratio is None or ratio >= 0:
                continue
            total = -ratio * a.constant + b.constant
            strict = rel_a == LT or rel_b == LT
            if total > 0 or (strict and total >= 0):
                raise _Contradiction()


def forced_literal_consistency(literals: Iterable[Literal]) -> ForcedCheck:
    """
    Plegado de constantes, sustitucion de las variables definidas por
    ecuaciones lineales y deteccion de choques entre cotas.
    """
    literals = [literal for literal in literals]
    order: Dict[Term, int] = {}
    equations: List[LinearForm] = []
    bounds: List[Tuple[str, LinearForm]] = []
    for literal in literals:
        form = linear_form(literal.lhs)
        for atom in form.coeffs:
            order.setdefault(atom, len(order))
        if literal.relation == EQ:
            equations.append(form)
        else:
            bounds.append((literal.relation, form))

    try:
        for relation, form in [(EQ, f) for f in equations] + bounds:
            if form.is_constant and _constant_clash(relation, form.constant):
                raise _Contradiction()
        pivots = _eliminate(equations, order)
        reduced = []
        for relation, form in bounds:
            form = _reduce(form, pivots)
            if form.is_constant:
                if _constant_clash(relation, form.constant):
                    raise _Contradiction()
                continue
            reduced.append((relation, form))
        _opposed_clash(reduced)
    except _Contradiction:
        logger.debug('Literales forzados inconsistentes: %s', literals)
        return ForcedCheck.INCONSISTENT
    return ForcedCheck.CONSISTENT_UNKNOWN
