"""
Normalizacion de literales a la forma f ⋈ 0 con ⋈ en {=, <=, <}.

Todo se mueve al lado izquierdo; >= y > se invierten negando el
termino y la negacion sobre atomos se elimina:

    ¬(f = 0)  ->  f < 0  ∨  -f < 0
    ¬(f <= 0) ->  -f < 0
    ¬(f < 0)  ->  -f <= 0
"""
from typing import List

from .terms import EQ, GE, GT, LE, LT, Clause, Formula, Literal, neg, sub


def normalize_literal(literal: Literal) -> List[Literal]:
    """Devuelve los literales (uno o dos) equivalentes en forma normal."""
    if literal.is_normal:
        return [literal]

    base = sub(literal.lhs, literal.rhs)
    relation = literal.relation
    if relation == GE:
        base, relation = neg(base), LE
    elif relation == GT:
        base, relation = neg(base), LT

    if not literal.negated:
        return [Literal(base, relation)]
    if relation == EQ:
        return [Literal(base, LT), Literal(neg(base), LT)]
    if relation == LE:
        return [Literal(neg(base), LT)]
    return [Literal(neg(base), LE)]


def normalize_clause(clause: Clause) -> Clause:
    literals = []
    for literal in clause.literals:
        literals.extend(normalize_literal(literal))
    return Clause(tuple(literals))


def normalize(formula: Formula) -> Formula:
    """Forma normal sin negaciones; idempotente."""
    clauses = tuple(normalize_clause(c) for c in formula.clauses)
    return Formula.build(clauses, formula.vars)


def is_normalized(formula: Formula) -> bool:
    return all(l.is_normal for c in formula.clauses for l in c.literals)
