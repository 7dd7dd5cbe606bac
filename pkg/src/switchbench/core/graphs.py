from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

from switchbench.contracts.enums import GraphKind, VertexKind
from .errors import IndexOutOfRange, StructureError
from .helpers.registry import register_graph
from .structured import SwitchedSystem

import logging

LOGGER = logging.getLogger(__name__)

# single color carried by every edge of the color-blind union graph
UNION_COLOR = 0

# edge colors in DOT output, cycled by subsystem index
DOT_PALETTE = (
    "black", "blue", "red", "darkgreen", "orange", "purple", "brown", "deeppink",
)


@dataclass(frozen=True, order=True)
class Vertex:
    """State x_index or input u_index (1-based). Inputs sort before states."""
    kind: VertexKind
    index: int

    @classmethod
    def state(cls, index: int) -> Vertex:
        return cls(VertexKind.STATE, index)

    @classmethod
    def input(cls, index: int) -> Vertex:
        return cls(VertexKind.INPUT, index)

    @classmethod
    def parse(cls, label: str) -> Vertex:
        prefix, digits = label[:1], label[1:]
        if prefix not in ("x", "u") or not digits.isdigit() or int(digits) < 1:
            raise ValueError(f"Invalid vertex label '{label}'")
        kind = VertexKind.STATE if prefix == "x" else VertexKind.INPUT
        return cls(kind, int(digits))

    @property
    def is_state(self) -> bool:
        return self.kind == VertexKind.STATE

    @property
    def label(self) -> str:
        return f"{'x' if self.is_state else 'u'}{self.index}"

    def __str__(self) -> str:
        return self.label


Edge = tuple[Vertex, Vertex]


def _edge_key(item) -> tuple[bool, int, int]:
    # same order as comparing the (begin, end) Vertex pairs
    (begin, end), _ = item
    return begin.is_state, begin.index, end.index


@dataclass(frozen=True)
class ColoredDigraph:
    """
    Digraph on x1..xn, u1..ur whose edges carry the set of subsystems
    (colors) they come from. Edges always end at a state.
    """
    n: int
    r: int
    edges: Mapping[Edge, frozenset[int]] = field(default_factory=dict)
    kind: GraphKind = GraphKind.COLORED

    def __post_init__(self) -> None:
        for (begin, end), colors in self.edges.items():
            if not end.is_state:
                raise StructureError(f"Edge {begin}->{end} ends at an input vertex")
            for vertex in (begin, end):
                bound = self.n if vertex.is_state else self.r
                if not 1 <= vertex.index <= bound:
                    raise IndexOutOfRange(f"Vertex {vertex} is outside the graph")
            if not colors:
                raise StructureError(f"Edge {begin}->{end} has no color")
        ordered = {edge: frozenset(colors) for edge, colors in sorted(self.edges.items(), key=_edge_key)}
        object.__setattr__(self, "edges", MappingProxyType(ordered))

    def states(self) -> list[Vertex]:
        return [Vertex.state(i) for i in range(1, self.n + 1)]

    def inputs(self) -> list[Vertex]:
        return [Vertex.input(i) for i in range(1, self.r + 1)]

    def vertices(self) -> list[Vertex]:
        return self.inputs() + self.states()

    def pairs(self) -> frozenset[Edge]:
        """Edge set with colors dropped."""
        return frozenset(self.edges)

    def colors(self) -> list[int]:
        return sorted({c for colors in self.edges.values() for c in colors})

    def successors(self) -> dict[Vertex, list[Vertex]]:
        succ: dict[Vertex, list[Vertex]] = {v: [] for v in self.vertices()}
        for begin, end in self.edges:
            succ[begin].append(end)
        for targets in succ.values():
            targets.sort(key=lambda v: v.index)
        return succ

    def predecessors(self, color: int | None = None) -> dict[Vertex, list[Vertex]]:
        """In-neighbours of each state, restricted to one color if given."""
        pred: dict[Vertex, list[Vertex]] = {v: [] for v in self.states()}
        for (begin, end), colors in self.edges.items():
            if color is None or color in colors:
                pred[end].append(begin)
        return pred


def _subsystem_edges(system: SwitchedSystem, i: int) -> list[Edge]:
    a, b = system.subsystems[i - 1]
    # A(j, k) free <=> x_k -> x_j, B(j, k) free <=> u_k -> x_j
    edges = [(Vertex.state(col + 1), Vertex.state(row + 1)) for row, col in a.entries]
    edges += [(Vertex.input(col + 1), Vertex.state(row + 1)) for row, col in b.entries]
    return edges


@register_graph(GraphKind.SUBSYSTEM)
def subsystem_graph(system: SwitchedSystem, i: int) -> ColoredDigraph:
    """Digraph of (A_i, B_i), every edge colored {i}."""
    if not 1 <= i <= system.m:
        LOGGER.error(f"Subsystem {i} requested, system has {system.m}")
        raise IndexOutOfRange(f"Subsystem index {i} is outside 1..{system.m}")
    edges = {edge: frozenset({i}) for edge in _subsystem_edges(system, i)}
    return ColoredDigraph(system.n, system.r, edges, GraphKind.SUBSYSTEM)


@register_graph(GraphKind.UNION)
def union_graph(system: SwitchedSystem) -> ColoredDigraph:
    """Color-blind superposition of all subsystem graphs."""
    edges = {
        edge: frozenset({UNION_COLOR})
        for i in range(1, system.m + 1)
        for edge in _subsystem_edges(system, i)
    }
    return ColoredDigraph(system.n, system.r, edges, GraphKind.UNION)


@register_graph(GraphKind.COLORED)
def colored_union_graph(system: SwitchedSystem) -> ColoredDigraph:
    """Superposition keeping, for each edge, the subsystems that carry it."""
    colors: dict[Edge, set[int]] = {}
    for i in range(1, system.m + 1):
        for edge in _subsystem_edges(system, i):
            colors.setdefault(edge, set()).add(i)
    edges = {edge: frozenset(c) for edge, c in colors.items()}
    return ColoredDigraph(system.n, system.r, edges, GraphKind.COLORED)


@dataclass(frozen=True)
class AccessReport:
    """
    Reachability from the inputs. ``forest`` maps every accessible state to
    its parent on one witness stem.
    """
    accessible: frozenset[Vertex]
    forest: Mapping[Vertex, Vertex]
    nonaccessible: frozenset[Vertex]

    def __post_init__(self) -> None:
        ordered = sorted(self.forest.items(), key=lambda item: item[0].index)
        object.__setattr__(self, "forest", MappingProxyType(dict(ordered)))

    @property
    def complete(self) -> bool:
        return not self.nonaccessible

    def stem(self, state: Vertex) -> list[Vertex]:
        """Witness stem from an input to ``state``, input first."""
        if state not in self.forest:
            raise KeyError(f"{state} is not accessible")
        chain = [state]
        while chain[-1] in self.forest:
            chain.append(self.forest[chain[-1]])
        return chain[::-1]


def accessibility(graph: ColoredDigraph) -> AccessReport:
    """
    Breadth-first search from all inputs at once, colors ignored. Sources and
    successors are visited in ascending order, so the forest is deterministic.
    """
    succ = graph.successors()
    parent: dict[Vertex, Vertex] = {}
    queue: deque[Vertex] = deque(graph.inputs())
    seen = set(queue)
    while queue:
        vertex = queue.popleft()
        for nxt in succ[vertex]:
            if nxt not in seen:
                seen.add(nxt)
                parent[nxt] = vertex
                queue.append(nxt)

    accessible = frozenset(parent)
    nonaccessible = frozenset(graph.states()) - accessible
    if nonaccessible:
        LOGGER.debug(f"Nonaccessible states: {sorted(v.label for v in nonaccessible)}")
    return AccessReport(accessible, parent, nonaccessible)


def export_dot(graph: ColoredDigraph, name: str | None = None) -> str:
    """Graphviz DOT text; identical graphs give identical bytes."""
    name = name or f"{graph.kind.value}_graph"
    lines = [f'digraph "{name}" {{', "  rankdir=LR;", "  node [shape=circle];"]
    for vertex in graph.inputs():
        lines.append(f'  "{vertex.label}" [shape=box];')
    for vertex in graph.states():
        lines.append(f'  "{vertex.label}";')
    for (begin, end), colors in graph.edges.items():
        if graph.kind == GraphKind.UNION:
            lines.append(f'  "{begin.label}" -> "{end.label}";')
            continue
        ordered = sorted(colors)
        label = ",".join(str(c) for c in ordered)
        palette = ":".join(DOT_PALETTE[(c - 1) % len(DOT_PALETTE)] for c in ordered)
        style = ', style=bold' if len(ordered) > 1 else ""
        lines.append(
            f'  "{begin.label}" -> "{end.label}" [label="{label}", color="{palette}"{style}];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
