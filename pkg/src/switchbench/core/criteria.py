"""
Structural controllability criteria for switched systems.

The decision combines two graph conditions on the colored union graph:
every state is reachable from an input, and there are n S-disjoint edges
(edges with distinct end states where edges sharing a begin vertex carry
distinct colors). The second condition is a maximum matching between
(begin vertex, color) pairs and states, which is also the generic rank of
[A_1, ..., A_m, B_1, ..., B_m].
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from types import MappingProxyType
from typing import ClassVar, Mapping, Union

from switchbench.contracts.enums import CertificateKind
from .errors import StructureError, TooLarge
from .graphs import (
    AccessReport,
    ColoredDigraph,
    Vertex,
    accessibility,
    colored_union_graph,
    subsystem_graph,
    union_graph,
)
from .matching import BipartiteGraph, hall_violator, max_matching
from .structured import (
    StructuredMatrix,
    SwitchedSystem,
    pair_pattern,
    stacked_pattern,
    sum_pattern,
)

import logging

LOGGER = logging.getLogger(__name__)

# largest state dimension accepted by the exhaustive subset searches
BRUTE_FORCE_LIMIT = 12


@dataclass(frozen=True)
class SDisjointEdge:
    begin: Vertex
    end: Vertex
    color: int

    @property
    def sort_key(self) -> tuple[int, Vertex, Vertex]:
        return self.color, self.begin, self.end

    def __str__(self) -> str:
        return f"{self.begin}->{self.end}[{self.color}]"


@dataclass(frozen=True)
class SDisjointEdgeSet:
    edges: tuple[SDisjointEdge, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", tuple(sorted(self.edges, key=lambda e: e.sort_key)))

    def __len__(self) -> int:
        return len(self.edges)

    def problems(self, graph: ColoredDigraph) -> list[str]:
        """Reasons the set is not S-disjoint in ``graph`` (empty when it is)."""
        found = []
        ends = [e.end for e in self.edges]
        if len(set(ends)) != len(ends):
            found.append("two edges share an end vertex")
        begin_colors = [(e.begin, e.color) for e in self.edges]
        if len(set(begin_colors)) != len(begin_colors):
            found.append("two edges share a begin vertex and a color")
        for edge in self.edges:
            if edge.color not in graph.edges.get((edge.begin, edge.end), frozenset()):
                found.append(f"{edge} is not an edge of subsystem {edge.color}")
        return found


@dataclass(frozen=True)
class DilationWitness:
    """
    State set S with |T(S)| = sum_i |T_i(S)| < |S|, where T_i(S) holds the
    begin vertices of color-i edges ending in S.
    """
    kind: ClassVar[CertificateKind] = CertificateKind.DILATION

    s_set: frozenset[Vertex]
    t_size: int
    per_color_t: Mapping[int, frozenset[Vertex]]

    def __post_init__(self) -> None:
        per_color = {c: frozenset(vs) for c, vs in sorted(self.per_color_t.items()) if vs}
        object.__setattr__(self, "per_color_t", MappingProxyType(per_color))
        if self.t_size != sum(len(vs) for vs in per_color.values()):
            raise StructureError("t_size does not match the per-color in-neighbourhoods")
        if self.t_size >= len(self.s_set):
            raise StructureError(f"|T(S)|={self.t_size} is not smaller than |S|={len(self.s_set)}")


@dataclass(frozen=True)
class NonaccessibleSet:
    kind: ClassVar[CertificateKind] = CertificateKind.NONACCESSIBLE

    states: frozenset[Vertex]
    access: AccessReport


@dataclass(frozen=True)
class ControllabilityCertificate:
    """n S-disjoint edges plus one stem per state."""
    kind: ClassVar[CertificateKind] = CertificateKind.S_DISJOINT

    edges: SDisjointEdgeSet
    access: AccessReport


Certificate = Union[NonaccessibleSet, DilationWitness, ControllabilityCertificate]


@dataclass(frozen=True)
class Verdict:
    controllable: bool
    accessibility_ok: bool
    rank_ok: bool
    certificate: Certificate
    theorem1_sufficient: bool
    s_disjoint_count: int = 0
    subsystem_lin: tuple[bool, ...] = ()

    def __post_init__(self) -> None:
        if self.controllable != (self.accessibility_ok and self.rank_ok):
            raise StructureError("controllable must equal accessibility_ok and rank_ok")
        if self.theorem1_sufficient and not self.controllable:
            raise StructureError("union-graph test passed on an uncontrollable system")

    @property
    def certificate_kind(self) -> CertificateKind:
        return self.certificate.kind


def g_rank(pattern: StructuredMatrix) -> int:
    """Generic rank: largest set of free entries with no two in a row or column."""
    rows = {}
    for row, col in pattern.entries:
        rows.setdefault(row, []).append(col)
    graph = BipartiteGraph(
        tuple(range(pattern.rows)),
        tuple(range(pattern.cols)),
        tuple(tuple(rows.get(row, ())) for row in range(pattern.rows)),
    )
    return len(max_matching(graph))


def theorem1_check(system: SwitchedSystem) -> tuple[bool, bool]:
    """
    Union-graph sufficient test: (no nonaccessible state, no dilation).
    Dilation-freeness is checked as g-rank of the sum pattern equal to n.
    """
    accessible = accessibility(union_graph(system)).complete
    dilation_free = g_rank(sum_pattern(system)) == system.n
    LOGGER.debug(f"{system}: union graph accessible={accessible}, dilation_free={dilation_free}")
    return accessible, dilation_free


def colored_bipartite(system: SwitchedSystem) -> BipartiteGraph:
    """
    Left nodes are (begin vertex, color) pairs having at least one outgoing
    edge of that color, i.e. nonzero columns of the stacked pattern; right
    nodes are the states. Left nodes are ordered by (color, begin).
    """
    graph = colored_union_graph(system)
    targets: dict[tuple[int, Vertex], list[int]] = {}
    for (begin, end), colors in graph.edges.items():
        for color in colors:
            targets.setdefault((color, begin), []).append(end.index - 1)
    keys = sorted(targets, key=lambda key: (key[0], key[1].is_state, key[1].index))
    return BipartiteGraph(
        tuple((begin, color) for color, begin in keys),
        tuple(graph.states()),
        tuple(tuple(targets[key]) for key in keys),
    )


def max_s_disjoint(system: SwitchedSystem) -> tuple[int, SDisjointEdgeSet]:
    """Largest S-disjoint edge set of the colored union graph."""
    graph = colored_bipartite(system)
    matching = max_matching(graph)
    edges = SDisjointEdgeSet(tuple(
        SDisjointEdge(begin, end, color) for (begin, color), end in matching.labeled(graph)
    ))
    return len(edges), edges


def find_s_dilation(system: SwitchedSystem) -> DilationWitness | None:
    """S-dilation read off the Hall violator of the colored bipartite graph."""
    graph = colored_bipartite(system)
    violator = hall_violator(graph, max_matching(graph))
    if violator is None:
        return None
    per_color: dict[int, set[Vertex]] = {}
    for i in violator.neighborhood:
        begin, color = graph.left[i]
        per_color.setdefault(color, set()).add(begin)
    return DilationWitness(
        s_set=frozenset(graph.right[j] for j in violator.right_set),
        t_size=len(violator.neighborhood),
        per_color_t={c: frozenset(vs) for c, vs in per_color.items()},
    )


def lin_criteria(system: SwitchedSystem, i: int) -> bool:
    """Single-system test on (A_i, B_i): accessible and g-rank [A_i, B_i] = n."""
    accessible = accessibility(subsystem_graph(system, i)).complete
    return accessible and g_rank(pair_pattern(system, i)) == system.n


def decide(system: SwitchedSystem) -> Verdict:
    """
    Structurally controllable iff the colored union graph has no
    nonaccessible state and n S-disjoint edges.
    """
    access = accessibility(colored_union_graph(system))
    count, edges = max_s_disjoint(system)
    accessibility_ok = access.complete
    rank_ok = count == system.n

    if not accessibility_ok:
        certificate: Certificate = NonaccessibleSet(access.nonaccessible, access)
    elif not rank_ok:
        certificate = find_s_dilation(system)
    else:
        certificate = ControllabilityCertificate(edges, access)

    union_accessible, dilation_free = theorem1_check(system)
    verdict = Verdict(
        controllable=accessibility_ok and rank_ok,
        accessibility_ok=accessibility_ok,
        rank_ok=rank_ok,
        certificate=certificate,
        theorem1_sufficient=union_accessible and dilation_free,
        s_disjoint_count=count,
        subsystem_lin=tuple(lin_criteria(system, i) for i in range(1, system.m + 1)),
    )
    LOGGER.info(
        f"{system}: controllable={verdict.controllable} "
        f"(accessible={accessibility_ok}, s-disjoint={count}/{system.n}, "
        f"union test={verdict.theorem1_sufficient})"
    )
    return verdict


# --- exhaustive oracles ---

def _require_small(system: SwitchedSystem, what: str) -> None:
    if system.n > BRUTE_FORCE_LIMIT:
        LOGGER.error(f"{what} refused for n={system.n}")
        raise TooLarge(what, system.n, BRUTE_FORCE_LIMIT)


def _row_bits(pattern: StructuredMatrix) -> list[int]:
    bits = [0] * pattern.rows
    for row, col in pattern.entries:
        bits[row] |= 1 << col
    return bits


def is_form_I_bruteforce(system: SwitchedSystem) -> bool:
    """
    True iff a nonempty state set K gets no free entry of the sum pattern from
    states outside K nor from any input.
    """
    _require_small(system, "Form I search")
    n = system.n
    rows = _row_bits(sum_pattern(system))
    state_mask = (1 << n) - 1
    for k in range(1, 1 << n):
        outside = state_mask & ~k
        if all(
            not (rows[j] >> n) and not (rows[j] & outside)
            for j in range(n) if k >> j & 1
        ):
            LOGGER.debug(f"Form I block: {[f'x{j + 1}' for j in range(n) if k >> j & 1]}")
            return True
    return False


def is_form_II_bruteforce(system: SwitchedSystem) -> bool:
    """True iff some k rows of the sum pattern have at most k-1 nonzero columns."""
    _require_small(system, "Form II search")
    rows = _row_bits(sum_pattern(system))
    for k in range(1, 1 << system.n):
        columns = 0
        for j in range(system.n):
            if k >> j & 1:
                columns |= rows[j]
        if columns.bit_count() < k.bit_count():
            return True
    return False


def find_s_dilation_bruteforce(system: SwitchedSystem) -> DilationWitness | None:
    """First S (by size, then lexicographically) with sum_i |T_i(S)| < |S|."""
    _require_small(system, "S-dilation search")
    graph = colored_union_graph(system)
    incoming = {state: set() for state in graph.states()}
    for (begin, end), colors in graph.edges.items():
        incoming[end].update((color, begin) for color in colors)

    states = graph.states()
    for size in range(1, system.n + 1):
        for subset in combinations(states, size):
            t_pairs = set().union(*(incoming[s] for s in subset))
            if len(t_pairs) < size:
                per_color: dict[int, set[Vertex]] = {}
                for color, begin in t_pairs:
                    per_color.setdefault(color, set()).add(begin)
                return DilationWitness(frozenset(subset), len(t_pairs), per_color)
    return None


def verify_certificate(system: SwitchedSystem, verdict: Verdict) -> list[str]:
    """Recheck a verdict's certificate from scratch; returns the problems found."""
    graph = colored_union_graph(system)
    access = accessibility(graph)
    certificate = verdict.certificate
    problems = []
    if isinstance(certificate, NonaccessibleSet):
        if not certificate.states or certificate.states != access.nonaccessible:
            problems.append("nonaccessible set does not match a fresh traversal")
    elif isinstance(certificate, DilationWitness):
        per_color = {}
        for color in range(1, system.m + 1):
            begins = frozenset(begin for (begin, end), colors in graph.edges.items()
                               if color in colors and end in certificate.s_set)
            if begins:
                per_color[color] = begins
        t_size = sum(len(vs) for vs in per_color.values())
        if dict(certificate.per_color_t) != per_color:
            problems.append("per-color in-neighbourhoods do not match the graph")
        if certificate.t_size != t_size:
            problems.append(f"recorded |T(S)|={certificate.t_size}, recomputed {t_size}")
        if t_size >= len(certificate.s_set):
            problems.append(f"|T(S)|={t_size} is not smaller than |S|={len(certificate.s_set)}")
    else:
        problems.extend(certificate.edges.problems(graph))
        if len(certificate.edges) != system.n:
            problems.append(f"{len(certificate.edges)} S-disjoint edges for n={system.n}")
        for state in graph.states():
            stem = certificate.access.stem(state) if state in certificate.access.forest else []
            if not stem or stem[0].is_state or len(set(stem)) != len(stem):
                problems.append(f"no valid stem reaches {state}")
                continue
            for begin, end in zip(stem, stem[1:]):
                if (begin, end) not in graph.edges:
                    problems.append(f"stem to {state} uses missing edge {begin}->{end}")
    return problems
