"""
Cajas con nombre (asignacion variable -> intervalo), caras del borde y
union de conjuntos de cajas.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .exceptions import MixedDomainError
from .interval import Interval

LO = 'lo'
HI = 'hi'


@dataclass(frozen=True)
class NamedBox:
    """
    Caja B = I1 x ... x In indexada por nombre de variable.

    El orden de las variables es el de construccion; la caja vacia (sin
    variables) representa el espacio de dimension 0.
    """
    items: Tuple[Tuple[str, Interval], ...]

    def __post_init__(self):
        names = [name for name, _ in self.items]
        if len(set(names)) != len(names):
            raise ValueError(f'Variables repetidas en la caja: {names}')

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, Interval], order: Sequence[str] = None) -> 'NamedBox':
        order = list(order) if order is not None else list(mapping)
        return cls(tuple((name, mapping[name]) for name in order))

    @classmethod
    def around(cls, center: Mapping[str, float], radius: float, order: Sequence[str] = None) -> 'NamedBox':
        """Caja [c - r, c + r] en cada coordenada, redondeada hacia afuera."""
        order = list(order) if order is not None else list(center)
        r = Interval.point(radius)
        items = []
        for name in order:
            c = Interval.point(center[name])
            items.append((name, Interval((c - r).lo, (c + r).hi)))
        return cls(tuple(items))

    @property
    def vars(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.items)

    @property
    def dimension(self) -> int:
        return len(self.items)

    def as_dict(self) -> Dict[str, Interval]:
        return dict(self.items)

    def __getitem__(self, name: str) -> Interval:
        for key, interval in self.items:
            if key == name:
                return interval
        raise KeyError(name)

    def __iter__(self) -> Iterator[Tuple[str, Interval]]:
        return iter(self.items)

    def __len__(self):
        return len(self.items)

    def replace(self, name: str, interval: Interval) -> 'NamedBox':
        if name not in self.vars:
            raise KeyError(name)
        return NamedBox(tuple((k, interval if k == name else v) for k, v in self.items))

    def without(self, name: str) -> 'NamedBox':
        return NamedBox(tuple((k, v) for k, v in self.items if k != name))

    def project(self, names: Iterable[str]) -> 'NamedBox':
        names = list(names)
        return NamedBox(tuple((k, self[k]) for k in names))

    def contains(self, other) -> bool:
        """Contencion de otra caja o de un punto (mapa nombre -> valor)."""
        if isinstance(other, NamedBox):
            return set(other.vars) == set(self.vars) and all(
                self[name].contains(interval) for name, interval in other.items
            )
        return all(interval.contains(other[name]) for name, interval in self.items)

    def midpoint(self) -> Dict[str, float]:
        return {name: interval.midpoint for name, interval in self.items}

    def widest(self) -> Optional[str]:
        """Variable de mayor ancho (la primera ante empate)."""
        best, width = None, -1.0
        for name, interval in self.items:
            if interval.width > width:
                best, width = name, interval.width
        return best

    @property
    def max_width(self) -> float:
        return max((interval.width for _, interval in self.items), default=0.0)

    def bisect(self, name: str = None) -> Tuple['NamedBox', 'NamedBox']:
        name = name or self.widest()
        left, right = self[name].split()
        return self.replace(name, left), self.replace(name, right)

    def __repr__(self):
        inner = ', '.join(f'{k}: [{v.lo!r}, {v.hi!r}]' for k, v in self.items)
        return f'NamedBox({{{inner}}})'


EMPTY_BOX = NamedBox(())


@dataclass(frozen=True)
class Face:
    """
    Cara de una caja: la coordenada `var` fijada en su extremo `side`.

    `free` son las coordenadas libres de la caja padre (todas si se
    omite); el eje de la cara se cuenta dentro de ellas.
    """
    parent: NamedBox
    var: str
    side: str
    free: Tuple[str, ...] = ()

    @property
    def value(self) -> float:
        interval = self.parent[self.var]
        return interval.lo if self.side == LO else interval.hi

    @property
    def box(self) -> NamedBox:
        """La caja de la cara: la del padre con la coordenada colapsada a un punto."""
        return self.parent.replace(self.var, Interval.point(self.value))

    @property
    def axis(self) -> int:
        return (self.free or self.parent.vars).index(self.var)

    @property
    def free_vars(self) -> Tuple[str, ...]:
        """Coordenadas libres de la cara."""
        return tuple(n for n in (self.free or self.parent.vars) if n != self.var)

    @property
    def orientation(self) -> int:
        """Signo de la orientacion inducida por la normal exterior."""
        side = 1 if self.side == HI else -1
        return side * (-1) ** self.axis


def boundary_faces(box: NamedBox, free: Sequence[str] = None) -> List[Face]:
    """Las 2n caras de la caja (sobre las coordenadas libres), lo y luego hi por variable."""
    free = tuple(free) if free is not None else box.vars
    if not free:
        raise ValueError('Una caja de dimension 0 no tiene borde')
    faces = []
    for name in free:
        faces.append(Face(box, name, LO, free))
        faces.append(Face(box, name, HI, free))
    return faces


def _check_domains(boxes: Sequence[NamedBox]) -> Tuple[str, ...]:
    if not boxes:
        raise ValueError('El conjunto de cajas esta vacio')
    domain = boxes[0].vars
    for box in boxes[1:]:
        if set(box.vars) != set(domain):
            raise MixedDomainError(domain, box.vars)
    return domain


def hull(boxes: Sequence[NamedBox]) -> NamedBox:
    domain = _check_domains(boxes)
    return NamedBox(tuple(
        (name, Interval.hull_of(box[name] for box in boxes)) for name in domain
    ))


def union_is_box(boxes: Iterable[NamedBox]) -> Optional[NamedBox]:
    """
    Devuelve la envolvente si la union de las cajas es exactamente esa
    caja, None si no lo es.

    La prueba es exacta: se arma la grilla inducida por todos los
    extremos y se verifica que el punto medio (racional) de cada celda
    de dimension completa este cubierto. Las celdas degeneradas no
    aportan volumen y quedan cubiertas por clausura cuando las de
    dimension completa lo estan; las coordenadas de ancho cero se tratan
    aparte.
    """
    boxes = list(boxes)
    domain = _check_domains(boxes)
    envelope = hull(boxes)
    if not domain:
        return envelope
    for box in boxes:
        for _, interval in box.items:
            if not (math.isfinite(interval.lo) and math.isfinite(interval.hi)):
                return envelope if len(boxes) == 1 else None

    # coordenadas de ancho cero en la envolvente: todas las cajas son
    # degeneradas alli y coinciden
    cuts: Dict[str, List[Fraction]] = {}
    for name in domain:
        points = sorted({Fraction(b[name].lo) for b in boxes} | {Fraction(b[name].hi) for b in boxes})
        cuts[name] = points

    cells: List[List[Fraction]] = [[]]
    for name in domain:
        points = cuts[name]
        if len(points) == 1:
            mids = [points[0]]
        else:
            mids = [(a + b) / 2 for a, b in zip(points, points[1:])]
        cells = [cell + [m] for cell in cells for m in mids]
        if len(cells) > 1_000_000:
            raise ValueError('Demasiadas celdas para decidir la union de cajas')

    exact = [
        [(Fraction(b[name].lo), Fraction(b[name].hi)) for name in domain]
        for b in boxes
    ]
    for cell in cells:
        if not any(all(lo <= c <= hi for c, (lo, hi) in zip(cell, bounds)) for bounds in exact):
            return None
    return envelope
