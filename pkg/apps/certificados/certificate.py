"""
Certificado (σ, ν, β) y reporte de verificacion.
"""
import enum
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from apps.intervalos.boxes import NamedBox

FORMAT_VERSION = 'ntacert/1'


@dataclass(frozen=True)
class Certificate:
    """
    sigma: literal elegido por clausula (por indice de clausula).
    nu: variables instanciadas con su valor binary64, en orden.
    beta: cajas sobre Vars(φ) \\ V cuya union es una caja.
    """
    sigma: Tuple[int, ...]
    nu: Tuple[Tuple[str, float], ...]
    beta: Tuple[NamedBox, ...]
    formula_digest: str

    @classmethod
    def build(cls, sigma: Sequence[int], nu: Mapping[str, float], beta: Sequence[NamedBox],
              formula_digest: str) -> 'Certificate':
        return cls(
            sigma=tuple(int(i) for i in sigma),
            nu=tuple((name, float(value)) for name, value in nu.items()),
            beta=tuple(beta),
            formula_digest=formula_digest,
        )

    @property
    def assignment(self) -> Dict[str, float]:
        return dict(self.nu)

    @property
    def instantiated(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.nu)


class Verdict(enum.Enum):
    VALID = 'valid'
    INVALID = 'invalid'
    UNDETERMINED = 'undetermined'


class ConditionStatus(enum.Enum):
    OK = 'ok'
    FAILED = 'failed'
    UNDETERMINED = 'undetermined'
    SKIPPED = 'skipped'


CONDITIONS = (
    ('a', 'sigma elige un literal por clausula'),
    ('b', 'tantas ecuaciones como variables no instanciadas'),
    ('c', 'la union de beta es una caja'),
    ('d', '0 no pertenece a F(borde de B)'),
    ('e', 'deg(F, B, 0) distinto de 0'),
    ('f', 'G <= 0 en cada caja de beta'),
)


@dataclass
class ConditionResult:
    key: str
    name: str
    status: ConditionStatus = ConditionStatus.SKIPPED
    detail: str = ''


@dataclass
class CheckReport:
    conditions: List[ConditionResult] = field(
        default_factory=lambda: [ConditionResult(key, name) for key, name in CONDITIONS]
    )
    reason: str = ''
    rejected: bool = False
    degree: Optional[int] = None
    timings: Dict[str, float] = field(default_factory=dict)

    def reject(self, reason: str):
        """Rechazo previo a las condiciones (digest, formato)."""
        self.rejected = True
        self.reason = reason

    def condition(self, key: str) -> ConditionResult:
        for result in self.conditions:
            if result.key == key:
                return result
        raise KeyError(key)

    def mark(self, key: str, status: ConditionStatus, detail: str = ''):
        result = self.condition(key)
        result.status = status
        result.detail = detail
        if status is ConditionStatus.FAILED and not self.reason:
            self.reason = f'({key}) {detail or result.name}'

    @property
    def verdict(self) -> Verdict:
        statuses = [c.status for c in self.conditions]
        if self.rejected or ConditionStatus.FAILED in statuses:
            return Verdict.INVALID
        if all(s is ConditionStatus.OK for s in statuses):
            return Verdict.VALID
        return Verdict.UNDETERMINED

    @property
    def is_valid(self) -> bool:
        return self.verdict is Verdict.VALID

    def as_dict(self) -> dict:
        return {
            'verdict': self.verdict.value,
            'reason': self.reason,
            'degree': self.degree,
            'conditions': [
                {'key': c.key, 'name': c.name, 'status': c.status.value, 'detail': c.detail}
                for c in self.conditions
            ],
            'timings': dict(self.timings),
        }
