"""
AST de formulas: terminos, literales, clausulas y formulas en CNF.

Todos los valores son inmutables (dataclasses congeladas) y se pueden
compartir entre hilos y procesos.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union


FUNCTION_NAMES = ('sin', 'cos', 'tan', 'exp')

EQ = '='
LE = '<='
LT = '<'
GE = '>='
GT = '>'

RELATIONS = (EQ, LE, LT, GE, GT)
NORMAL_RELATIONS = (EQ, LE, LT)


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    value: Fraction

    def __post_init__(self):
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, 'value', Fraction(self.value))

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class Add:
    args: Tuple['Term', ...]

    def __post_init__(self):
        if len(self.args) < 2:
            raise ValueError('Add necesita al menos dos argumentos')


@dataclass(frozen=True)
class Mul:
    args: Tuple['Term', ...]

    def __post_init__(self):
        if len(self.args) < 2:
            raise ValueError('Mul necesita al menos dos argumentos')


@dataclass(frozen=True)
class Neg:
    arg: 'Term'

    def __post_init__(self):
        # Las constantes negativas se guardan como Const
        if isinstance(self.arg, (Const, Neg)):
            raise ValueError('Neg no puede envolver una constante ni otra negacion, usar neg()')


@dataclass(frozen=True)
class Func:
    name: str
    arg: 'Term'

    def __post_init__(self):
        if self.name not in FUNCTION_NAMES:
            raise ValueError(f'Funcion no soportada: {self.name}')


Term = Union[Var, Const, Add, Mul, Neg, Func]

ZERO = Const(Fraction(0))
ONE = Const(Fraction(1))


def const(value) -> Const:
    return Const(Fraction(value))


def neg(term: Term) -> Term:
    """Negacion que pliega constantes y dobles negaciones."""
    if isinstance(term, Const):
        return Const(-term.value)
    if isinstance(term, Neg):
        return term.arg
    return Neg(term)


def add(*terms: Term) -> Term:
    terms = tuple(terms)
    if len(terms) == 1:
        return terms[0]
    return Add(terms)


def mul(*terms: Term) -> Term:
    terms = tuple(terms)
    if len(terms) == 1:
        return terms[0]
    return Mul(terms)


def sub(lhs: Term, rhs: Term) -> Term:
    """lhs - rhs; si rhs es cero devuelve lhs sin tocar."""
    if rhs == ZERO:
        return lhs
    if lhs == ZERO:
        return neg(rhs)
    return Add((lhs, neg(rhs)))


def power(base: Term, exponent: int) -> Term:
    if exponent < 0:
        raise ValueError('El exponente debe ser no negativo')
    if exponent == 0:
        return ONE
    return mul(*([base] * exponent))


def children(term: Term) -> Tuple[Term, ...]:
    if isinstance(term, (Add, Mul)):
        return term.args
    if isinstance(term, (Neg, Func)):
        return (term.arg,)
    return ()


@lru_cache(maxsize=4096)
def term_vars(term: Term) -> Tuple[str, ...]:
    """Variables del termino en orden de primera aparicion."""
    if isinstance(term, Var):
        return (term.name,)
    seen: Dict[str, None] = {}
    for child in children(term):
        for name in term_vars(child):
            seen.setdefault(name, None)
    return tuple(seen)


def substitute(term: Term, values: Dict[str, Term]) -> Term:
    """Reemplaza variables por terminos (tipicamente constantes)."""
    if not values:
        return term
    if isinstance(term, Var):
        return values.get(term.name, term)
    if isinstance(term, Const):
        return term
    if isinstance(term, Add):
        return Add(tuple(substitute(a, values) for a in term.args))
    if isinstance(term, Mul):
        return Mul(tuple(substitute(a, values) for a in term.args))
    if isinstance(term, Neg):
        return neg(substitute(term.arg, values))
    return Func(term.name, substitute(term.arg, values))


def is_constant(term: Term) -> bool:
    return not term_vars(term)


@dataclass(frozen=True)
class Literal:
    """
    Atomo lhs ⋈ rhs, opcionalmente negado.

    Un literal normalizado tiene rhs = 0, negated = False y relacion
    en {=, <=, <}.
    """
    lhs: Term
    relation: str
    rhs: Term = ZERO
    negated: bool = False

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise ValueError(f'Relacion desconocida: {self.relation}')

    @property
    def is_normal(self) -> bool:
        return (
            not self.negated
            and self.rhs == ZERO
            and self.relation in NORMAL_RELATIONS
        )

    @property
    def is_equation(self) -> bool:
        return self.is_normal and self.relation == EQ

    @property
    def is_strict(self) -> bool:
        return self.is_normal and self.relation == LT

    @property
    def vars(self) -> Tuple[str, ...]:
        seen = dict.fromkeys(term_vars(self.lhs))
        seen.update(dict.fromkeys(term_vars(self.rhs)))
        return tuple(seen)


@dataclass(frozen=True)
class Clause:
    literals: Tuple[Literal, ...]

    def __post_init__(self):
        if not self.literals:
            raise ValueError('Una clausula no puede ser vacia')

    def __len__(self):
        return len(self.literals)

    def __iter__(self):
        return iter(self.literals)

    def __getitem__(self, index):
        return self.literals[index]

    @property
    def vars(self) -> Tuple[str, ...]:
        seen: Dict[str, None] = {}
        for literal in self.literals:
            seen.update(dict.fromkeys(literal.vars))
        return tuple(seen)


def ordered_vars(clauses: Iterable[Clause], declared: Optional[Sequence[str]] = None) -> Tuple[str, ...]:
    used: Dict[str, None] = {}
    for clause in clauses:
        used.update(dict.fromkeys(clause.vars))
    if declared is None:
        return tuple(used)
    declared_set = set(declared)
    ordered = [name for name in declared if name in used]
    # variables usadas pero no declaradas (formulas armadas a mano)
    ordered.extend(name for name in used if name not in declared_set)
    return tuple(ordered)


@dataclass(frozen=True)
class Formula:
    """Conjuncion de clausulas; vars en orden de declaracion."""
    clauses: Tuple[Clause, ...]
    vars: Tuple[str, ...]

    @classmethod
    def build(cls, clauses: Iterable[Clause], declared: Optional[Sequence[str]] = None) -> 'Formula':
        clauses = tuple(clauses)
        return cls(clauses=clauses, vars=ordered_vars(clauses, declared))

    @classmethod
    def from_literals(cls, *clauses: Sequence[Literal], declared=None) -> 'Formula':
        """Atajo: cada argumento es la lista de literales de una clausula."""
        return cls.build((Clause(tuple(c)) for c in clauses), declared)

    def __len__(self):
        return len(self.clauses)

    def literal(self, clause_index: int, literal_index: int) -> Literal:
        return self.clauses[clause_index].literals[literal_index]

    def selected(self, selector: Sequence[int]) -> List[Literal]:
        return [self.clauses[i].literals[j] for i, j in enumerate(selector)]

    def selected_vars(self, selector: Sequence[int]) -> Tuple[str, ...]:
        """Vars(σ(φ)) en el orden global de la formula."""
        used: Dict[str, None] = {}
        for literal in self.selected(selector):
            used.update(dict.fromkeys(literal.vars))
        return tuple(name for name in self.vars if name in used)


@dataclass(frozen=True)
class SystemPair:
    """
    Sistema extraido de los literales seleccionados.

    equations se interpreta como F = 0, inequalities como G <= 0 y
    strict como G < 0. active_vars son las variables de σ(φ) no
    instanciadas: sobre ellas F es cuadrado.
    """
    equations: Tuple[Term, ...]
    inequalities: Tuple[Term, ...]
    strict: Tuple[Term, ...]
    domain_vars: Tuple[str, ...]
    active_vars: Tuple[str, ...]
    warnings: Tuple[str, ...] = field(default=(), compare=False)

    @property
    def is_square(self) -> bool:
        return len(self.equations) == len(self.active_vars)

    @property
    def all_inequalities(self) -> Tuple[Term, ...]:
        return self.inequalities + self.strict
