from dataclasses import asdict, dataclass


@dataclass
class SearchStatistics:
    """Contadores de una llamada a solve (nodos visitados por nivel)."""
    points: int = 0
    covered_points: int = 0
    selectors: int = 0
    instantiations: int = 0
    boxes: int = 0
    degree_queries: int = 0
    pruned_forced: int = 0
    restarts: int = 0
    self_check_failures: int = 0
    elapsed: float = 0.0

    def as_dict(self) -> dict:
        return asdict(self)
