"""
Intervalos binary64 con redondeo hacia afuera.

Suma y producto se redondean en forma dirigida y exacta: el error de la
operacion en punto flotante se recupera con transformaciones libres de
error (TwoSum, division de Veltkamp) y el extremo se mueve al flotante
siguiente (math.nextafter) solo si el resultado quedo del lado
equivocado. No se cambia el modo de redondeo global.
"""
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Tuple

INF = math.inf
_MAX = sys.float_info.max

# math.pi < π < nextafter(math.pi, inf)
PI_LO = math.pi
PI_HI = math.nextafter(math.pi, INF)

# mas alla de este modulo no vale la pena reducir el argumento
_TRIG_LIMIT = 1e8

_SPLITTER = 134217729.0  # 2**27 + 1
_SPLIT_LIMIT = 1e290
_TINY = 1e-290


def down(value: float) -> float:
    if value == -INF:
        return value
    return math.nextafter(value, -INF)


def up(value: float) -> float:
    if value == INF:
        return value
    return math.nextafter(value, INF)


def _directed(value: float, error: float) -> Tuple[float, float]:
    """(cota inferior, cota superior) de value + error, con error exacto."""
    return (value if error >= 0.0 else down(value)), (value if error <= 0.0 else up(value))


def sum_bounds(a: float, b: float) -> Tuple[float, float]:
    s = a + b
    if math.isinf(a) or math.isinf(b):
        return s, s
    if not math.isfinite(s):
        return down(s), up(s)
    bb = s - a
    error = (a - (s - bb)) + (b - bb)
    return _directed(s, error)


def _split(value: float) -> Tuple[float, float]:
    c = _SPLITTER * value
    high = c - (c - value)
    return high, value - high


def product_bounds(a: float, b: float) -> Tuple[float, float]:
    # 0·∞ = 0: los extremos infinitos representan cotas, no valores
    if a == 0.0 or b == 0.0:
        return 0.0, 0.0
    p = a * b
    if math.isinf(a) or math.isinf(b):
        return p, p
    if not math.isfinite(p) or abs(a) > _SPLIT_LIMIT or abs(b) > _SPLIT_LIMIT or abs(p) < _TINY:
        return down(p), up(p)
    a_hi, a_lo = _split(a)
    b_hi, b_lo = _split(b)
    error = ((a_hi * b_hi - p) + a_hi * b_lo + a_lo * b_hi) + a_lo * b_lo
    return _directed(p, error)


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if math.isnan(lo) or math.isnan(hi):
            raise ValueError('Un intervalo no puede tener extremos NaN')
        if lo > hi:
            raise ValueError(f'Intervalo vacio [{lo}, {hi}]')
        object.__setattr__(self, 'lo', lo)
        object.__setattr__(self, 'hi', hi)

    # ------------------------------------------------------------------
    # construccion
    # ------------------------------------------------------------------

    @classmethod
    def point(cls, value: float) -> 'Interval':
        return cls(value, value)

    @classmethod
    def from_rational(cls, value: Fraction) -> 'Interval':
        """Intervalo puntual si el racional es representable, si no el menor que lo encierra."""
        value = Fraction(value)
        try:
            nearest = float(value)
        except OverflowError:
            nearest = INF if value > 0 else -INF
        if math.isinf(nearest):
            return cls(-INF, -_MAX) if value < 0 else cls(_MAX, INF)
        if Fraction(nearest) == value:
            return cls(nearest, nearest)
        if Fraction(nearest) < value:
            return cls(nearest, up(nearest))
        return cls(down(nearest), nearest)

    @classmethod
    def entire(cls) -> 'Interval':
        return cls(-INF, INF)

    @classmethod
    def hull_of(cls, intervals: Iterable['Interval']) -> 'Interval':
        intervals = list(intervals)
        return cls(min(i.lo for i in intervals), max(i.hi for i in intervals))

    # ------------------------------------------------------------------
    # consultas
    # ------------------------------------------------------------------

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        if math.isinf(self.lo) or math.isinf(self.hi):
            if math.isinf(self.lo) and math.isinf(self.hi):
                return 0.0
            return self.hi if math.isinf(self.lo) else self.lo
        return self.lo + (self.hi - self.lo) / 2

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, value) -> bool:
        if isinstance(value, Interval):
            return self.lo <= value.lo and value.hi <= self.hi
        return self.lo <= value <= self.hi

    def __contains__(self, value) -> bool:
        return self.contains(value)

    def contains_zero(self) -> bool:
        return self.lo <= 0.0 <= self.hi

    def sign(self) -> int:
        """+1 / -1 si el intervalo excluye el cero, 0 si no se puede decidir."""
        if self.lo > 0.0:
            return 1
        if self.hi < 0.0:
            return -1
        return 0

    def split(self, ratio: float = 0.5) -> Tuple['Interval', 'Interval']:
        cut = self.lo + ratio * (self.hi - self.lo)
        if not (self.lo < cut < self.hi):
            raise ValueError('El intervalo no se puede dividir')
        return Interval(self.lo, cut), Interval(cut, self.hi)

    # ------------------------------------------------------------------
    # aritmetica
    # ------------------------------------------------------------------

    def __neg__(self) -> 'Interval':
        return Interval(-self.hi, -self.lo)

    def __add__(self, other: 'Interval') -> 'Interval':
        return Interval(sum_bounds(self.lo, other.lo)[0], sum_bounds(self.hi, other.hi)[1])

    def __sub__(self, other: 'Interval') -> 'Interval':
        return self + (-other)

    def __mul__(self, other: 'Interval') -> 'Interval':
        bounds = [
            product_bounds(self.lo, other.lo), product_bounds(self.lo, other.hi),
            product_bounds(self.hi, other.lo), product_bounds(self.hi, other.hi),
        ]
        return Interval(min(lo for lo, _ in bounds), max(hi for _, hi in bounds))

    def scale(self, factor: float) -> 'Interval':
        return self * Interval.point(factor)

    def __pow__(self, exponent: int) -> 'Interval':
        if exponent < 0:
            raise ValueError('Solo exponentes enteros no negativos')
        if exponent == 0:
            return Interval(1.0, 1.0)
        if exponent == 1:
            return self
        if exponent % 2 == 1:
            return Interval(_signed_pow_down(self.lo, exponent), _signed_pow_up(self.hi, exponent))
        # exponente par
        if self.lo >= 0.0:
            return Interval(_pow_down(self.lo, exponent), _pow_up(self.hi, exponent))
        if self.hi <= 0.0:
            return Interval(_pow_down(-self.hi, exponent), _pow_up(-self.lo, exponent))
        return Interval(0.0, _pow_up(max(-self.lo, self.hi), exponent))

    def __repr__(self):
        return f'Interval({self.lo!r}, {self.hi!r})'

    # ------------------------------------------------------------------
    # serializacion bit a bit
    # ------------------------------------------------------------------

    def to_hex(self) -> Tuple[str, str]:
        return float.hex(self.lo), float.hex(self.hi)

    @classmethod
    def from_hex(cls, lo: str, hi: str) -> 'Interval':
        return cls(float.fromhex(lo), float.fromhex(hi))


def _pow_up(base: float, exponent: int) -> float:
    """Cota superior de base**exponent para base >= 0."""
    result = 1.0
    for _ in range(exponent):
        result = product_bounds(result, base)[1]
    return result


def _pow_down(base: float, exponent: int) -> float:
    result = 1.0
    for _ in range(exponent):
        result = max(0.0, product_bounds(result, base)[0])
    return result


def _signed_pow_down(value: float, exponent: int) -> float:
    if value >= 0.0:
        return _pow_down(value, exponent)
    return -_pow_up(-value, exponent)


def _signed_pow_up(value: float, exponent: int) -> float:
    if value >= 0.0:
        return _pow_up(value, exponent)
    return -_pow_down(-value, exponent)


# ----------------------------------------------------------------------
# funciones trascendentes
# ----------------------------------------------------------------------

def _widen_down(value: float) -> float:
    return down(down(value))


def _widen_up(value: float) -> float:
    return up(up(value))


def _pi_multiple(factor: float) -> Interval:
    """Encierra factor·π para factor exacto."""
    return Interval(PI_LO, PI_HI) * Interval.point(factor)


def _may_contain(a: float, b: float, offset: float, period: float) -> bool:
    """
    ¿Puede [a, b] contener algun punto offset·π + k·period·π?

    Ante la duda devuelve True.
    """
    span = period * math.pi
    first = math.floor((a - offset * math.pi) / span) - 1
    last = math.ceil((b - offset * math.pi) / span) + 1
    for k in range(first, last + 1):
        critical = _pi_multiple(offset + k * period)
        if critical.hi >= a and critical.lo <= b:
            return True
    return False


def _periodic(x: Interval, fn, max_offset: float, min_offset: float) -> Interval:
    a, b = x.lo, x.hi
    if not (math.isfinite(a) and math.isfinite(b)) or b - a >= 2 * PI_LO:
        return Interval(-1.0, 1.0)
    if max(abs(a), abs(b)) > _TRIG_LIMIT:
        return Interval(-1.0, 1.0)
    fa, fb = fn(a), fn(b)
    lo = _widen_down(min(fa, fb))
    hi = _widen_up(max(fa, fb))
    if _may_contain(a, b, max_offset, 2.0):
        hi = 1.0
    if _may_contain(a, b, min_offset, 2.0):
        lo = -1.0
    return Interval(max(-1.0, lo), min(1.0, hi))


def isin(x: Interval) -> Interval:
    return _periodic(x, math.sin, 0.5, 1.5)


def icos(x: Interval) -> Interval:
    return _periodic(x, math.cos, 0.0, 1.0)


def itan(x: Interval) -> Interval:
    a, b = x.lo, x.hi
    if not (math.isfinite(a) and math.isfinite(b)) or b - a >= PI_LO:
        return Interval.entire()
    if max(abs(a), abs(b)) > _TRIG_LIMIT or _may_contain(a, b, 0.5, 1.0):
        return Interval.entire()
    return Interval(_widen_down(math.tan(a)), _widen_up(math.tan(b)))


def _exp(value: float) -> float:
    try:
        return math.exp(value)
    except OverflowError:
        return INF


def iexp(x: Interval) -> Interval:
    lo = max(0.0, _widen_down(_exp(x.lo)))
    hi = _widen_up(_exp(x.hi))
    return Interval(lo, hi)


FUNCTIONS = {'sin': isin, 'cos': icos, 'tan': itan, 'exp': iexp}
