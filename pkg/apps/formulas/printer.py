"""
Impresion determinista de formulas en el subconjunto .smt2 aceptado.

La salida es la forma canonica usada para el digest de certificados:
parse_formula(print_formula(f), normalize=False) == f.
"""
import hashlib
from fractions import Fraction

from .terms import Add, Const, Formula, Func, Literal, Mul, Neg, Term, Var


def _quote(name: str) -> str:
    simple = name and all(ch.isalnum() or ch in '~!@$%^&*_-+=<>.?/' for ch in name)
    if simple and not name[0].isdigit():
        return name
    return f'|{name}|'


def format_rational(value: Fraction) -> str:
    magnitude = abs(value)
    if magnitude.denominator == 1:
        text = str(magnitude.numerator)
    else:
        text = f'(/ {magnitude.numerator} {magnitude.denominator})'
    return f'(- {text})' if value < 0 else text


def format_term(term: Term) -> str:
    if isinstance(term, Var):
        return _quote(term.name)
    if isinstance(term, Const):
        return format_rational(term.value)
    if isinstance(term, Add):
        return '(+ ' + ' '.join(format_term(a) for a in term.args) + ')'
    if isinstance(term, Mul):
        return '(* ' + ' '.join(format_term(a) for a in term.args) + ')'
    if isinstance(term, Neg):
        return f'(- {format_term(term.arg)})'
    if isinstance(term, Func):
        return f'({term.name} {format_term(term.arg)})'
    raise TypeError(f'Termino desconocido: {term!r}')


def format_literal(literal: Literal) -> str:
    atom = f'({literal.relation} {format_term(literal.lhs)} {format_term(literal.rhs)})'
    return f'(not {atom})' if literal.negated else atom


def print_formula(formula: Formula) -> str:
    lines = ['(set-logic QF_NRA)']
    lines.extend(f'(declare-fun {_quote(name)} () Real)' for name in formula.vars)
    for clause in formula.clauses:
        if len(clause.literals) == 1:
            lines.append(f'(assert {format_literal(clause.literals[0])})')
        else:
            body = ' '.join(format_literal(l) for l in clause.literals)
            lines.append(f'(assert (or {body}))')
    lines.append('(check-sat)')
    return '\n'.join(lines) + '\n'


def formula_digest(formula: Formula) -> str:
    """sha256 de la impresion canonica (la formula ya debe estar normalizada)."""
    return hashlib.sha256(print_formula(formula).encode('utf-8')).hexdigest()
