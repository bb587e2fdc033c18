"""
Forma lineal de un termino sobre atomos: variables y subterminos no
lineales opacos (productos de no constantes, funciones).
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Tuple

from .terms import Add, Const, Func, Mul, Neg, Term, Var


@dataclass
class LinearForm:
    coeffs: Dict[Term, Fraction] = field(default_factory=dict)
    constant: Fraction = Fraction(0)

    @property
    def is_constant(self) -> bool:
        return not self.coeffs

    def copy(self) -> 'LinearForm':
        return LinearForm(dict(self.coeffs), self.constant)

    def scaled(self, factor: Fraction) -> 'LinearForm':
        if factor == 0:
            return LinearForm()
        return LinearForm({k: v * factor for k, v in self.coeffs.items()}, self.constant * factor)

    def plus(self, other: 'LinearForm', factor: Fraction = Fraction(1)) -> 'LinearForm':
        coeffs = dict(self.coeffs)
        for atom, value in other.coeffs.items():
            total = coeffs.get(atom, Fraction(0)) + factor * value
            if total:
                coeffs[atom] = total
            else:
                coeffs.pop(atom, None)
        return LinearForm(coeffs, self.constant + factor * other.constant)

    def single_variable(self) -> Optional[Tuple[str, Fraction]]:
        """(nombre, coeficiente) si la forma es a·x + c sobre una variable."""
        if len(self.coeffs) != 1:
            return None
        (atom, coeff), = self.coeffs.items()
        if isinstance(atom, Var):
            return atom.name, coeff
        return None


def _atom(term: Term) -> LinearForm:
    return LinearForm({term: Fraction(1)})


def linear_form(term: Term) -> LinearForm:
    if isinstance(term, Const):
        return LinearForm(constant=term.value)
    if isinstance(term, Var):
        return _atom(term)
    if isinstance(term, Neg):
        return linear_form(term.arg).scaled(Fraction(-1))
    if isinstance(term, Add):
        result = LinearForm()
        for arg in term.args:
            result = result.plus(linear_form(arg))
        return result
    if isinstance(term, Mul):
        forms = [linear_form(a) for a in term.args]
        variable = [f for f in forms if not f.is_constant]
        if len(variable) > 1:
            return _atom(term)
        factor = Fraction(1)
        for form in forms:
            if form.is_constant:
                factor *= form.constant
        if not variable:
            return LinearForm(constant=factor)
        return variable[0].scaled(factor)
    if isinstance(term, Func):
        return _atom(term)
    raise TypeError(f'Termino desconocido: {term!r}')
