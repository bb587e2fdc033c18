"""
Configuracion de la busqueda de certificados.

Los valores por defecto salen de los settings NTACERT_*; las
configuraciones 1a..7c activan las heuristicas de a una, por nivel.
"""
import enum
from dataclasses import dataclass, fields, replace
from typing import Dict

from django.conf import settings

DEFAULT_CONFIG_ID = '7b'


class BoxStrategy(enum.Enum):
    EPS = 'eps'
    GRID = 'grid'
    EPS_GRID = 'eps+grid'

    @property
    def uses_inflation(self) -> bool:
        return self in (BoxStrategy.EPS, BoxStrategy.EPS_GRID)

    @property
    def uses_gridding(self) -> bool:
        return self in (BoxStrategy.GRID, BoxStrategy.EPS_GRID)


@dataclass(frozen=True)
class SearchConfig:
    config_id: str = 'custom'

    # literales
    sort_literals: bool = False
    check_forced_literals: bool = False
    filter_overconstr: bool = False
    # instanciaciones
    kearfott_ordering: bool = False
    filter_overconstr_v: bool = False
    filter_rank_deficient: bool = False
    # cajas
    boxes: BoxStrategy = BoxStrategy.EPS

    eps_lit: float = 1e-6
    eps_box: float = 1e-20
    eps_strict: float = 1e-20
    inflation_limit: float = 1.0
    grid_side: float = 1.0
    grid_limit: int = 10_000
    degree_budget: int = 100_000

    k: int = 100
    optimizer_budget: int = 10_000
    selector_cap: int = 64
    instantiation_cap: int = 64
    dnf_cap: int = 10_000

    timeout_ms: int = 120_000
    seed: int = 0

    def __post_init__(self):
        if isinstance(self.boxes, str):
            object.__setattr__(self, 'boxes', BoxStrategy(self.boxes))
        for name in ('eps_lit', 'eps_box', 'eps_strict', 'inflation_limit', 'grid_side'):
            if not getattr(self, name) > 0:
                raise ValueError(f'{name} debe ser positivo')
        for name in ('grid_limit', 'k', 'selector_cap', 'instantiation_cap', 'dnf_cap', 'timeout_ms'):
            if getattr(self, name) < 1:
                raise ValueError(f'{name} debe ser al menos 1')
        if self.degree_budget < 0 or self.optimizer_budget < 0:
            raise ValueError('Los presupuestos no pueden ser negativos')

    @property
    def flags(self) -> Dict[str, bool]:
        return {name: getattr(self, name) for name in HEURISTIC_FLAGS}

    def with_changes(self, **changes) -> 'SearchConfig':
        return replace(self, **changes)

    @classmethod
    def from_settings(cls, **overrides) -> 'SearchConfig':
        """Valores de settings.NTACERT_*; `overrides` tiene prioridad."""
        values = {
            'seed': getattr(settings, 'NTACERT_SEED', 0),
            'timeout_ms': getattr(settings, 'NTACERT_TIMEOUT_MS', 120_000),
            'eps_lit': getattr(settings, 'NTACERT_EPS_LIT', 1e-6),
            'k': getattr(settings, 'NTACERT_K', 100),
            'degree_budget': getattr(settings, 'NTACERT_DEGREE_BUDGET', 100_000),
            'grid_limit': getattr(settings, 'NTACERT_GRID_LIMIT', 10_000),
            'dnf_cap': getattr(settings, 'NTACERT_DNF_CAP', 10_000),
        }
        values.update(overrides)
        return cls(**values)

    @classmethod
    def preset(cls, config_id: str = None, **overrides) -> 'SearchConfig':
        """Configuracion 1a..7c sobre los settings; `overrides` gana sobre el preset."""
        config_id = config_id or getattr(settings, 'NTACERT_DEFAULT_CONFIG', DEFAULT_CONFIG_ID)
        if config_id not in PRESETS:
            raise ValueError(f'Configuracion desconocida {config_id!r}; opciones: {", ".join(PRESETS)}')
        values = dict(PRESETS[config_id], config_id=config_id)
        values.update(overrides)
        return cls.from_settings(**values)


HEURISTIC_FLAGS = (
    'sort_literals',
    'check_forced_literals',
    'filter_overconstr',
    'kearfott_ordering',
    'filter_overconstr_v',
    'filter_rank_deficient',
)

CONFIG_FIELDS = tuple(f.name for f in fields(SearchConfig))

# Cada fila agrega una heuristica a la anterior.
_ROWS = {
    '1': {},
    '2': {'sort_literals': True},
    '3': {'sort_literals': True, 'filter_overconstr': True},
    '4': {'sort_literals': True, 'filter_overconstr': True, 'check_forced_literals': True},
    '5': {'sort_literals': True, 'filter_overconstr': True, 'check_forced_literals': True,
          'kearfott_ordering': True},
    '6': {'sort_literals': True, 'filter_overconstr': True, 'check_forced_literals': True,
          'kearfott_ordering': True, 'filter_overconstr_v': True},
    '7': {'sort_literals': True, 'filter_overconstr': True, 'check_forced_literals': True,
          'kearfott_ordering': True, 'filter_overconstr_v': True, 'filter_rank_deficient': True},
}

PRESETS: Dict[str, dict] = {'1a': {'boxes': BoxStrategy.GRID}}
for _row, _flags in _ROWS.items():
    PRESETS[f'{_row}b'] = dict(_flags, boxes=BoxStrategy.EPS)
    PRESETS[f'{_row}c'] = dict(_flags, boxes=BoxStrategy.EPS_GRID)
