"""
Grado topologico deg(F, B, 0) verificado con aritmetica de intervalos.

Reduccion recursiva por el borde: se elige una componente f_k y un signo
s, se cubre cada cara de B con sub-caras en las que s·f_k < 0, alguna
otra componente no se anula, o s·f_k > 0; solo estas ultimas aportan, con
el grado del sistema reducido (sin f_k) sobre la sub-cara:

    deg(F, B) = s · (-1)^k · Σ orientacion(cara) · deg(F sin f_k, sub-cara)

En dimension 1 el grado es (sign F(hi) - sign F(lo)) / 2.
Si ninguna eleccion (k, s) resuelve, se repite sobre F con cada f_j
(j != k) reemplazada por f_j + c·f_k.
"""
import enum
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from apps.formulas.terms import Add, Const, Mul, Term
from apps.intervalos.boxes import NamedBox, boundary_faces
from apps.intervalos.evaluation import eval_interval
from apps.intervalos.interval import Interval

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 100_000
SPLIT_RATIO = 0.4921875
SHEAR_COEFFICIENTS = (Fraction(1, 8), Fraction(-2, 7))


class DegreeStatus(enum.Enum):
    DEGREE = 'degree'
    BOUNDARY_ZERO_UNVERIFIED = 'boundary_zero_unverified'
    UNRESOLVED = 'unresolved'
    BUDGET_EXCEEDED = 'budget_exceeded'


@dataclass(frozen=True)
class DegreeResult:
    status: DegreeStatus
    value: Optional[int] = None
    subdivisions: int = 0
    boundary_verified: bool = False

    @property
    def is_degree(self) -> bool:
        return self.status is DegreeStatus.DEGREE

    @property
    def is_nonzero(self) -> bool:
        return self.is_degree and self.value != 0


class _Undetermined(Exception):
    """Una sub-cara no se pudo resolver: posible cero de F en su borde."""


class _Exhausted(Exception):
    pass


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self):
        if self.used >= self.limit:
            raise _Exhausted()
        self.used += 1


def _split(cell: NamedBox, free: Sequence[str]) -> Tuple[NamedBox, NamedBox]:
    name, width = None, 0.0
    for candidate in free:
        if cell[candidate].width > width:
            name, width = candidate, cell[candidate].width
    if name is None:
        raise _Undetermined()
    try:
        left, right = cell[name].split(SPLIT_RATIO)
    except ValueError:
        raise _Undetermined() from None
    return cell.replace(name, left), cell.replace(name, right)


def _somewhere_nonzero(terms: Sequence[Term], cell: NamedBox) -> bool:
    return any(eval_interval(term, cell).sign() != 0 for term in terms)


def _cover(terms: Sequence[Term], cell: NamedBox, free: Sequence[str], budget: _Budget):
    """Subdivide hasta que en cada sub-caja alguna componente excluya el 0."""
    stack = [cell]
    while stack:
        current = stack.pop()
        budget.spend()
        if _somewhere_nonzero(terms, current):
            continue
        stack.extend(reversed(_split(current, free)))


def _check_boundary(terms: Sequence[Term], box: NamedBox, budget: _Budget):
    for face in boundary_faces(box):
        _cover(terms, face.box, face.free_vars, budget)


def verify_boundary_nonzero(terms: Sequence[Term], box: NamedBox, budget: int = DEFAULT_BUDGET) -> bool:
    """0 ∉ F(∂B) probado por intervalos; agotar el presupuesto cuenta como fallo."""
    _check_square(terms, box)
    if box.dimension == 0:
        return True
    try:
        _check_boundary(terms, box, _Budget(budget))
    except (_Undetermined, _Exhausted):
        return False
    return True


def _elimination_order(enclosures: List[Interval]) -> List[Tuple[int, int]]:
    """
    Pares (k, s) a probar: primero la componente mas alejada del 0
    relativo a su ancho, con el signo de su centro.
    """
    def distance(interval: Interval) -> float:
        width = interval.width
        if not width < float('inf'):
            return 0.0
        return abs(interval.midpoint) / (width + 1e-300)

    ranked = sorted(range(len(enclosures)), key=lambda k: (-distance(enclosures[k]), k))
    order = []
    for k in ranked:
        s = 1 if enclosures[k].midpoint >= 0 else -1
        order.extend([(k, s), (k, -s)])
    return order


def _twice_degree_1d(term: Term, cell: NamedBox, name: str) -> Tuple[int, Dict[Tuple[Term, NamedBox], int]]:
    """
    2·deg de un termino escalar sobre un segmento. Los extremos de signo
    indeciso aportan 0 y se devuelven con su coeficiente (+1 hi, -1 lo).
    """
    interval = cell[name]
    twice = 0
    unknown: Dict[Tuple[Term, NamedBox], int] = {}
    for value, coefficient in ((interval.hi, 1), (interval.lo, -1)):
        point = cell.replace(name, Interval.point(value))
        sign = eval_interval(term, point).sign()
        if sign == 0:
            key = (term, point)
            unknown[key] = unknown.get(key, 0) + coefficient
        twice += coefficient * sign
    return twice, unknown


def _face_cells(eliminated: Term, others: Sequence[Term], s: int, cell: NamedBox,
                free: Sequence[str], budget: _Budget) -> Iterator[NamedBox]:
    """Sub-caras de la cara donde s·f_k > 0 y el resto de F puede anularse."""
    stack = [cell]
    while stack:
        current = stack.pop()
        budget.spend()
        if _somewhere_nonzero(others, current):
            continue
        sign = eval_interval(eliminated, current).sign()
        if sign == -s:
            continue
        if sign == s:
            yield current
            continue
        stack.extend(reversed(_split(current, free)))


def _planar_degree(terms: Sequence[Term], box: NamedBox, free: Sequence[str], k: int, s: int,
                   budget: _Budget) -> int:
    """
    Caso de dimension 2: los segmentos aportados forman una cadena y los
    extremos compartidos se cancelan, asi que un extremo de signo
    indeciso solo invalida el resultado si no se cancela.
    """
    remaining = terms[1 - k]
    twice = 0
    pending: Dict[Tuple[Term, NamedBox], int] = {}
    for face in boundary_faces(box, free):
        for cell in _face_cells(terms[k], (remaining,), s, face.box, face.free_vars, budget):
            value, unknown = _twice_degree_1d(remaining, cell, face.free_vars[0])
            twice += face.orientation * value
            for key, coefficient in unknown.items():
                pending[key] = pending.get(key, 0) + face.orientation * coefficient
    if any(pending.values()) or twice % 2:
        raise _Undetermined()
    return s * (-1) ** k * (twice // 2)


def _sheared(terms: Sequence[Term], k: int, c: Fraction) -> Tuple[Term, ...]:
    """(f_1 + c·f_k, ..., f_k, ..., f_n + c·f_k): determinante 1, mismo grado."""
    scaled = Mul((Const(c), terms[k]))
    return tuple(term if j == k else Add((term, scaled)) for j, term in enumerate(terms))


def _reduce(terms: Sequence[Term], box: NamedBox, free: Sequence[str], k: int, s: int,
            budget: _Budget) -> int:
    if len(free) == 2:
        return _planar_degree(terms, box, free, k, s, budget)
    others = tuple(terms[:k]) + tuple(terms[k + 1:])
    total = 0
    for face in boundary_faces(box, free):
        for cell in _face_cells(terms[k], others, s, face.box, face.free_vars, budget):
            total += face.orientation * _degree(others, cell, face.free_vars, budget)
    return s * (-1) ** k * total


def _degree(terms: Sequence[Term], box: NamedBox, free: Sequence[str], budget: _Budget) -> int:
    enclosures = [eval_interval(term, box) for term in terms]
    # exclusion: F no se anula en la caja
    if any(e.sign() != 0 for e in enclosures):
        return 0
    if len(free) == 1:
        twice, unknown = _twice_degree_1d(terms[0], box, free[0])
        if unknown:
            raise _Undetermined()
        return twice // 2

    # los ceros del sistema reducido pueden caer en aristas o vertices de
    # B para todo (k, s); el corte lineal los mueve sin cambiar el grado
    failure = None
    for shear in (None,) + SHEAR_COEFFICIENTS:
        for k, s in _elimination_order(enclosures):
            system = terms if shear is None else _sheared(terms, k, shear)
            try:
                return _reduce(system, box, free, k, s, budget)
            except _Undetermined as error:
                failure = error
    raise failure


def _check_square(terms: Sequence[Term], box: NamedBox):
    if len(terms) != box.dimension:
        raise ValueError(f'Sistema no cuadrado: {len(terms)} ecuaciones y caja de dimension {box.dimension}')


def degree(terms: Sequence[Term], box: NamedBox, budget: int = DEFAULT_BUDGET) -> DegreeResult:
    """
    deg(F, B, 0) para F con tantas componentes como variables tiene la
    caja (en el orden de la caja). En dimension 0 el grado es 1.
    """
    terms = tuple(terms)
    _check_square(terms, box)
    if box.dimension == 0:
        return DegreeResult(DegreeStatus.DEGREE, 1, boundary_verified=True)
    spent = _Budget(budget)
    boundary = False
    try:
        _check_boundary(terms, box, spent)
        boundary = True
        value = _degree(terms, box, box.vars, spent)
    except _Exhausted:
        logger.debug('Grado: presupuesto agotado (%d sub-caras)', spent.used)
        return DegreeResult(DegreeStatus.BUDGET_EXCEEDED, None, spent.used, boundary)
    except _Undetermined:
        if boundary:
            logger.debug('Grado: borde sin ceros pero ninguna reduccion resolvio %r', box)
            return DegreeResult(DegreeStatus.UNRESOLVED, None, spent.used, True)
        logger.debug('Grado: no se pudo excluir un cero en el borde de %r', box)
        return DegreeResult(DegreeStatus.BOUNDARY_ZERO_UNVERIFIED, None, spent.used, False)
    return DegreeResult(DegreeStatus.DEGREE, value, spent.used, True)
