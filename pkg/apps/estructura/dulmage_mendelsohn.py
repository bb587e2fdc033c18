"""
Grafo bipartito ecuaciones-variables, apareamiento maximo (scipy.sparse.csgraph)
y descomposicion de Dulmage-Mendelsohn gruesa (sobre-, sub- y
bien-restringida).
"""
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from apps.formulas.terms import Term, term_vars


@dataclass(frozen=True)
class BipartiteSystemGraph:
    """
    Un vertice por ecuacion (indice en `equations`) y uno por variable;
    arista (x, f) sii x aparece en f.
    """
    equations: Tuple[Term, ...]
    variables: Tuple[str, ...]
    adjacency: Tuple[Tuple[str, ...], ...]

    @property
    def edges(self) -> List[Tuple[str, int]]:
        return [(name, j) for j, names in enumerate(self.adjacency) for name in names]

    def equations_of(self, name: str) -> List[int]:
        return [j for j, names in enumerate(self.adjacency) if name in names]

    def without(self, names: Sequence[str]) -> 'BipartiteSystemGraph':
        """Grafo tras instanciar `names`: se borran esos vertices y sus aristas."""
        removed = set(names)
        return BipartiteSystemGraph(
            self.equations,
            tuple(n for n in self.variables if n not in removed),
            tuple(tuple(n for n in adj if n not in removed) for adj in self.adjacency),
        )


def build_graph(equations: Sequence[Term], variables: Sequence[str]) -> BipartiteSystemGraph:
    variables = tuple(variables)
    order = {name: i for i, name in enumerate(variables)}
    adjacency = []
    for term in equations:
        names = term_vars(term)
        unknown = [n for n in names if n not in order]
        if unknown:
            raise ValueError(f'Variables fuera del dominio del sistema: {unknown}')
        adjacency.append(tuple(sorted(names, key=order.__getitem__)))
    return BipartiteSystemGraph(tuple(equations), variables, tuple(adjacency))


def maximum_matching(graph: BipartiteSystemGraph) -> Dict[int, str]:
    """Apareamiento maximo ecuacion -> variable sobre la matriz de incidencia."""
    if not graph.equations or not graph.variables:
        return {}
    column = {name: i for i, name in enumerate(graph.variables)}
    rows = [j for j, names in enumerate(graph.adjacency) for _ in names]
    cols = [column[name] for names in graph.adjacency for name in names]
    incidence = csr_matrix(
        (np.ones(len(rows), dtype=np.int8), (rows, cols)),
        shape=(len(graph.equations), len(graph.variables)),
    )
    matched = maximum_bipartite_matching(incidence, perm_type='column')
    return {j: graph.variables[i] for j, i in enumerate(matched) if i >= 0}


@dataclass(frozen=True)
class DMPart:
    equations: Tuple[int, ...]
    variables: Tuple[str, ...]

    @property
    def is_empty(self) -> bool:
        return not self.equations and not self.variables


@dataclass(frozen=True)
class DMDecomposition:
    graph: BipartiteSystemGraph
    over: DMPart
    under: DMPart
    well: DMPart
    matching: Tuple[Tuple[int, str], ...]

    def terms(self, part: DMPart) -> Tuple[Term, ...]:
        return tuple(self.graph.equations[j] for j in part.equations)

    @property
    def is_well_constrained(self) -> bool:
        return self.over.is_empty and self.under.is_empty


def dm_decompose(graph: BipartiteSystemGraph) -> DMDecomposition:
    """
    Descomposicion a partir de un apareamiento maximo: la parte
    sobre-restringida es lo alcanzable por caminos alternantes desde
    ecuaciones libres, la sub-restringida lo alcanzable desde variables
    libres y el resto es la parte bien restringida.
    """
    m = len(graph.equations)
    matching = maximum_matching(graph)
    var_match = {name: j for j, name in matching.items()}

    # sobre-restringida: ecuacion -(cualquier arista)-> variable -(apareada)-> ecuacion
    over_eqs: Dict[int, None] = {}
    over_vars: Dict[str, None] = {}
    queue = deque(j for j in range(m) if j not in matching)
    for j in queue:
        over_eqs[j] = None
    while queue:
        j = queue.popleft()
        for name in graph.adjacency[j]:
            if name in over_vars:
                continue
            over_vars[name] = None
            partner = var_match.get(name)
            if partner is not None and partner not in over_eqs:
                over_eqs[partner] = None
                queue.append(partner)

    # sub-restringida: variable -(cualquier arista)-> ecuacion -(apareada)-> variable
    incidence: Dict[str, List[int]] = {name: [] for name in graph.variables}
    for j, names in enumerate(graph.adjacency):
        for name in names:
            incidence[name].append(j)
    under_vars: Dict[str, None] = {}
    under_eqs: Dict[int, None] = {}
    queue = deque(name for name in graph.variables if name not in var_match)
    for name in queue:
        under_vars[name] = None
    while queue:
        name = queue.popleft()
        for j in incidence[name]:
            if j in under_eqs:
                continue
            under_eqs[j] = None
            partner = matching.get(j)
            if partner is not None and partner not in under_vars:
                under_vars[partner] = None
                queue.append(partner)

    def ordered_eqs(selected):
        return tuple(j for j in range(m) if j in selected)

    def ordered_vars(selected):
        return tuple(name for name in graph.variables if name in selected)

    well_eqs = {j: None for j in range(m) if j not in over_eqs and j not in under_eqs}
    well_vars = {n: None for n in graph.variables if n not in over_vars and n not in under_vars}
    return DMDecomposition(
        graph=graph,
        over=DMPart(ordered_eqs(over_eqs), ordered_vars(over_vars)),
        under=DMPart(ordered_eqs(under_eqs), ordered_vars(under_vars)),
        well=DMPart(ordered_eqs(well_eqs), ordered_vars(well_vars)),
        matching=tuple(sorted(matching.items())),
    )


def is_overconstrained_free(equations: Sequence[Term], variables: Sequence[str]) -> bool:
    return not dm_decompose(build_graph(equations, variables)).over.equations


def is_well_constrained(equations: Sequence[Term], variables: Sequence[str]) -> bool:
    return dm_decompose(build_graph(equations, variables)).is_well_constrained
