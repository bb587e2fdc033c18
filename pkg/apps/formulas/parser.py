"""
Lector del subconjunto SMT-LIB 2 aceptado.

Uso:
    formula = parse_formula(texto)
    formula = parse_formula(texto, normalize=False)

Acepta declare-fun/declare-const de sort Real, assert y los comandos
informativos (set-logic, set-info, set-option, check-sat, get-model,
exit). Los asserts que no estan en CNF se distribuyen con un tope de
clausulas.
"""
import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .exceptions import CnfSizeError, FormulaSyntaxError, UnsupportedConstructError
from .normalize import normalize as normalize_formula
from .terms import (
    EQ, FUNCTION_NAMES, GE, GT, LE, LT, ONE, ZERO,
    Add, Clause, Const, Formula, Func, Literal, Mul, Neg, Term, Var, neg, power,
)

logger = logging.getLogger(__name__)

DEFAULT_CNF_CAP = 1000

_TOKEN_RE = re.compile(
    r'''
    (?P<ws>\s+)
  | (?P<comment>;[^\n]*)
  | (?P<lpar>\()
  | (?P<rpar>\))
  | (?P<string>"(?:[^"]|"")*")
  | (?P<quoted>\|[^|]*\|)
  | (?P<atom>[^\s()";|]+)
    ''',
    re.VERBOSE,
)

_NUMBER_RE = re.compile(r'^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$')

_IGNORED_COMMANDS = {'set-logic', 'set-info', 'set-option', 'check-sat', 'get-model', 'exit', 'get-info'}
_UNSUPPORTED_COMMANDS = {
    'push': 'push', 'pop': 'pop', 'define-fun': 'define-fun',
    'define-sort': 'define-sort', 'declare-sort': 'declare-sort',
    'check-sat-assuming': 'check-sat-assuming',
}
_UNSUPPORTED_OPERATORS = {
    'forall': 'cuantificador forall', 'exists': 'cuantificador exists',
    'let': 'let', 'ite': 'ite', 'xor': 'xor', '!': 'anotaciones (!)',
    'div': 'division entera', 'mod': 'mod', 'abs': 'abs', 'to_int': 'to_int',
    'is_int': 'is_int',
}
_RELATION_SYMBOLS = {'=': EQ, '<=': LE, '<': LT, '>=': GE, '>': GT}
_SORT_NAMES = {'Int': 'sort Int', 'Bool': 'variables Bool'}


@dataclass
class Token:
    text: str
    position: int
    quoted: bool = False


SExpr = Union[Token, List['SExpr']]


class _Node:
    """Nodo booleano intermedio: atom, and, or, not."""
    __slots__ = ('kind', 'children', 'literal')

    def __init__(self, kind: str, children=(), literal: Literal = None):
        self.kind = kind
        self.children = list(children)
        self.literal = literal


class SmtParser:
    """Parser recursivo sobre s-expresiones."""

    def __init__(self, text: str, cnf_cap: int = DEFAULT_CNF_CAP):
        self.text = text
        self.cnf_cap = cnf_cap
        self.declared: Dict[str, None] = {}

    # ------------------------------------------------------------------
    # errores con posicion
    # ------------------------------------------------------------------

    def _location(self, position: int) -> Tuple[int, int]:
        line = self.text.count('\n', 0, position) + 1
        column = position - (self.text.rfind('\n', 0, position) + 1) + 1
        return line, column

    def error(self, message: str, position: int) -> FormulaSyntaxError:
        line, column = self._location(position)
        return FormulaSyntaxError(message, position, line, column)

    @staticmethod
    def _position(expr: SExpr) -> int:
        while isinstance(expr, list):
            if not expr:
                return 0
            expr = expr[0]
        return expr.position

    # ------------------------------------------------------------------
    # lectura de s-expresiones
    # ------------------------------------------------------------------

    def tokenize(self) -> List[Tuple[str, Token]]:
        tokens = []
        position = 0
        while position < len(self.text):
            match = _TOKEN_RE.match(self.text, position)
            if match is None:
                raise self.error('Caracter inesperado', position)
            kind = match.lastgroup
            value = match.group(kind)
            if kind == 'quoted':
                tokens.append(('atom', Token(value[1:-1], position, quoted=True)))
            elif kind not in ('ws', 'comment'):
                tokens.append((kind, Token(value, position)))
            position = match.end()
        return tokens

    def read_sexprs(self) -> List[SExpr]:
        stack: List[List[SExpr]] = [[]]
        opened: List[int] = []
        for kind, token in self.tokenize():
            if kind == 'lpar':
                stack.append([])
                opened.append(token.position)
            elif kind == 'rpar':
                if len(stack) == 1:
                    raise self.error('Parentesis de cierre sin apertura', token.position)
                finished = stack.pop()
                opened.pop()
                stack[-1].append(finished)
            else:
                stack[-1].append(token)
        if len(stack) > 1:
            raise self.error('Parentesis sin cerrar', opened[-1])
        return stack[0]

    # ------------------------------------------------------------------
    # comandos
    # ------------------------------------------------------------------

    def parse(self, normalize: bool = True) -> Formula:
        clauses: List[Clause] = []
        for command in self.read_sexprs():
            if not isinstance(command, list) or not command or not isinstance(command[0], Token):
                raise self.error('Se esperaba un comando entre parentesis', self._position(command))
            head = command[0].text
            if head in _IGNORED_COMMANDS:
                continue
            if head in _UNSUPPORTED_COMMANDS:
                raise UnsupportedConstructError(_UNSUPPORTED_COMMANDS[head], command[0].position)
            if head == 'declare-fun':
                self._declare_fun(command)
            elif head == 'declare-const':
                self._declare_const(command)
            elif head == 'assert':
                if len(command) != 2:
                    raise self.error('assert espera un unico argumento', command[0].position)
                node = self._nnf(self._boolean(command[1]), negate=False)
                clauses.extend(self._cnf(node))
                if len(clauses) > self.cnf_cap:
                    raise CnfSizeError(len(clauses), self.cnf_cap)
            else:
                raise self.error(f'Comando desconocido: {head}', command[0].position)

        formula = Formula.build(clauses, tuple(self.declared))
        logger.debug('Formula leida: %d clausulas, %d variables', len(formula.clauses), len(formula.vars))
        if normalize:
            return normalize_formula(formula)
        return formula

    def _check_sort(self, sort: SExpr, position: int):
        if isinstance(sort, list):
            raise UnsupportedConstructError('sorts parametricos', position)
        if sort.text in _SORT_NAMES:
            raise UnsupportedConstructError(_SORT_NAMES[sort.text], sort.position)
        if sort.text != 'Real':
            raise UnsupportedConstructError(f'sort {sort.text}', sort.position)

    def _register(self, name: Token):
        if not isinstance(name, Token):
            raise self.error('Nombre de variable invalido', self._position(name))
        if name.text in self.declared:
            raise self.error(f'Variable declarada dos veces: {name.text}', name.position)
        self.declared[name.text] = None

    def _declare_fun(self, command: List[SExpr]):
        if len(command) != 4:
            raise self.error('declare-fun espera nombre, parametros y sort', command[0].position)
        _, name, params, sort = command
        if not isinstance(params, list):
            raise self.error('declare-fun espera una lista de parametros', self._position(params))
        if params:
            raise UnsupportedConstructError('funciones no constantes', command[0].position)
        self._check_sort(sort, command[0].position)
        self._register(name)

    def _declare_const(self, command: List[SExpr]):
        if len(command) != 3:
            raise self.error('declare-const espera nombre y sort', command[0].position)
        _, name, sort = command
        self._check_sort(sort, command[0].position)
        self._register(name)

    # ------------------------------------------------------------------
    # parte booleana
    # ------------------------------------------------------------------

    def _boolean(self, expr: SExpr) -> _Node:
        if isinstance(expr, Token):
            if expr.text == 'true':
                return _Node('atom', literal=Literal(ZERO, LE))
            if expr.text == 'false':
                return _Node('atom', literal=Literal(ONE, LE))
            if expr.text in self.declared:
                raise self.error(f'Se esperaba una formula y se encontro la variable {expr.text}', expr.position)
            raise self.error(f'Simbolo booleano desconocido: {expr.text}', expr.position)
        if not expr:
            raise self.error('Expresion vacia', 0)
        head = expr[0]
        if isinstance(head, list):
            raise self.error('Operador invalido', self._position(head))
        op = head.text
        args = expr[1:]
        if op in _UNSUPPORTED_OPERATORS:
            raise UnsupportedConstructError(_UNSUPPORTED_OPERATORS[op], head.position)
        if op == 'and':
            return _Node('and', [self._boolean(a) for a in args])
        if op == 'or':
            return _Node('or', [self._boolean(a) for a in args])
        if op == 'not':
            if len(args) != 1:
                raise self.error('not espera un argumento', head.position)
            return _Node('not', [self._boolean(args[0])])
        if op == '=>':
            if len(args) < 2:
                raise self.error('=> espera al menos dos argumentos', head.position)
            parts = [_Node('not', [self._boolean(a)]) for a in args[:-1]]
            return _Node('or', parts + [self._boolean(args[-1])])
        if op == 'distinct':
            if len(args) < 2:
                raise self.error('distinct espera al menos dos argumentos', head.position)
            terms = [self._term(a) for a in args]
            pairs = [
                _Node('atom', literal=Literal(terms[i], EQ, terms[j], negated=True))
                for i in range(len(terms)) for j in range(i + 1, len(terms))
            ]
            return _Node('and', pairs)
        if op in _RELATION_SYMBOLS:
            if len(args) < 2:
                raise self.error(f'{op} espera al menos dos argumentos', head.position)
            terms = [self._term(a) for a in args]
            relation = _RELATION_SYMBOLS[op]
            atoms = [
                _Node('atom', literal=Literal(terms[i], relation, terms[i + 1]))
                for i in range(len(terms) - 1)
            ]
            return atoms[0] if len(atoms) == 1 else _Node('and', atoms)
        raise self.error(f'Operador booleano desconocido: {op}', head.position)

    def _nnf(self, node: _Node, negate: bool) -> _Node:
        if node.kind == 'not':
            return self._nnf(node.children[0], not negate)
        if node.kind == 'atom':
            if not negate:
                return node
            literal = node.literal
            return _Node('atom', literal=Literal(literal.lhs, literal.relation, literal.rhs, not literal.negated))
        kind = node.kind
        if negate:
            kind = 'or' if kind == 'and' else 'and'
        return _Node(kind, [self._nnf(c, negate) for c in node.children])

    def _cnf(self, node: _Node) -> List[Clause]:
        clauses = []
        for literals in self._cnf_lists(node):
            # una disyuncion vacia es falsa
            clauses.append(Clause(tuple(literals) if literals else (Literal(ONE, LE),)))
        return clauses

    def _cnf_lists(self, node: _Node) -> List[List[Literal]]:
        if node.kind == 'atom':
            return [[node.literal]]
        if node.kind == 'and':
            result: List[List[Literal]] = []
            for child in node.children:
                result.extend(self._cnf_lists(child))
                if len(result) > self.cnf_cap:
                    raise CnfSizeError(len(result), self.cnf_cap)
            return result
        # or: distribucion
        result = [[]]
        for child in node.children:
            child_clauses = self._cnf_lists(child)
            size = len(result) * len(child_clauses)
            if size > self.cnf_cap:
                raise CnfSizeError(size, self.cnf_cap)
            result = [left + right for left in result for right in child_clauses]
        return result

    # ------------------------------------------------------------------
    # terminos aritmeticos
    # ------------------------------------------------------------------

    def _term(self, expr: SExpr) -> Term:
        if isinstance(expr, Token):
            if not expr.quoted and _NUMBER_RE.match(expr.text):
                return Const(Fraction(expr.text))
            if expr.text in self.declared:
                return Var(expr.text)
            if expr.text in ('true', 'false'):
                raise UnsupportedConstructError('terminos Bool', expr.position)
            raise self.error(f'Simbolo no declarado: {expr.text}', expr.position)
        if not expr:
            raise self.error('Expresion vacia', 0)
        head = expr[0]
        if isinstance(head, list):
            raise self.error('Operador invalido', self._position(head))
        op = head.text
        args = expr[1:]
        if op in _UNSUPPORTED_OPERATORS:
            raise UnsupportedConstructError(_UNSUPPORTED_OPERATORS[op], head.position)
        if not args:
            raise self.error(f'{op} sin argumentos', head.position)

        if op == '+':
            terms = [self._term(a) for a in args]
            return terms[0] if len(terms) == 1 else Add(tuple(terms))
        if op == '-':
            terms = [self._term(a) for a in args]
            if len(terms) == 1:
                return neg(terms[0])
            return Add((terms[0],) + tuple(neg(t) for t in terms[1:]))
        if op == '*':
            terms = [self._term(a) for a in args]
            return terms[0] if len(terms) == 1 else Mul(tuple(terms))
        if op == '/':
            return self._division(head, args)
        if op in ('^', 'pow'):
            return self._power(head, args)
        if op in FUNCTION_NAMES:
            if len(args) != 1:
                raise self.error(f'{op} espera un argumento', head.position)
            return Func(op, self._term(args[0]))
        if op == 'to_real':
            if len(args) != 1:
                raise self.error('to_real espera un argumento', head.position)
            return self._term(args[0])
        if op in _RELATION_SYMBOLS or op in ('and', 'or', 'not'):
            raise UnsupportedConstructError('terminos Bool', head.position)
        raise self.error(f'Operador desconocido: {op}', head.position)

    def _division(self, head: Token, args: Sequence[SExpr]) -> Term:
        if len(args) < 2:
            raise self.error('/ espera al menos dos argumentos', head.position)
        numerator = self._term(args[0])
        divisor = Fraction(1)
        for arg in args[1:]:
            value = fold_constant(self._term(arg))
            if value is None:
                raise UnsupportedConstructError('division por un termino no constante', self._position(arg))
            if value == 0:
                raise self.error('Division por cero', self._position(arg))
            divisor *= value
        if isinstance(numerator, Const):
            return Const(numerator.value / divisor)
        return Mul((Const(1 / divisor), numerator))

    def _power(self, head: Token, args: Sequence[SExpr]) -> Term:
        if len(args) != 2:
            raise self.error('^ espera base y exponente', head.position)
        exponent = fold_constant(self._term(args[1]))
        if exponent is None or exponent.denominator != 1 or exponent < 0:
            raise UnsupportedConstructError('exponentes no enteros o negativos', self._position(args[1]))
        return power(self._term(args[0]), int(exponent))


def fold_constant(term: Term) -> Optional[Fraction]:
    """Valor racional exacto de un termino constante sin funciones."""
    if isinstance(term, Const):
        return term.value
    if isinstance(term, Neg):
        value = fold_constant(term.arg)
        return None if value is None else -value
    if isinstance(term, (Add, Mul)):
        values = [fold_constant(a) for a in term.args]
        if any(v is None for v in values):
            return None
        result = Fraction(0) if isinstance(term, Add) else Fraction(1)
        for value in values:
            result = result + value if isinstance(term, Add) else result * value
        return result
    return None


def parse_formula(text: str, normalize: bool = True, cnf_cap: int = DEFAULT_CNF_CAP) -> Formula:
    """Lee un documento .smt2 y devuelve la formula en CNF (normalizada por defecto)."""
    return SmtParser(text, cnf_cap=cnf_cap).parse(normalize=normalize)


def parse_file(path, normalize: bool = True, cnf_cap: int = DEFAULT_CNF_CAP) -> Formula:
    with open(path, encoding='utf-8') as handle:
        return parse_formula(handle.read(), normalize=normalize, cnf_cap=cnf_cap)
