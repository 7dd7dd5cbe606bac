"""
Maximum bipartite matching (Hopcroft-Karp) and Hall-violator extraction.

Nodes are addressed by position in ``BipartiteGraph.left`` / ``.right``; the
labels themselves are opaque to this module. Every loop runs in index order so
results are identical for identical inputs.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from .errors import InvalidMatching, NotMaximum

import logging

LOGGER = logging.getLogger(__name__)

UNMATCHED = -1
INFINITY = float("inf")


@dataclass(frozen=True)
class BipartiteGraph:
    """``adj[i]`` lists, in ascending order, the right indices adjacent to left node ``i``."""
    left: tuple[Hashable, ...]
    right: tuple[Hashable, ...]
    adj: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "left", tuple(self.left))
        object.__setattr__(self, "right", tuple(self.right))
        adj = tuple(tuple(sorted(row)) for row in self.adj)
        if len(adj) != len(self.left):
            raise ValueError(f"{len(adj)} adjacency rows for {len(self.left)} left nodes")
        for i, row in enumerate(adj):
            if len(set(row)) != len(row):
                raise ValueError(f"Parallel edges at left node {self.left[i]!r}")
            if row and not (0 <= row[0] and row[-1] < len(self.right)):
                raise ValueError(f"Left node {self.left[i]!r} references a missing right node")
        object.__setattr__(self, "adj", adj)

    @classmethod
    def from_edges(cls, left: Sequence[Hashable], right: Sequence[Hashable],
                   edges: Iterable[tuple[int, int]]) -> BipartiteGraph:
        rows: list[set[int]] = [set() for _ in left]
        for i, j in edges:
            rows[i].add(j)
        return cls(tuple(left), tuple(right), tuple(tuple(row) for row in rows))

    def num_edges(self) -> int:
        return sum(len(row) for row in self.adj)

    def has_edge(self, i: int, j: int) -> bool:
        return j in self.adj[i]

    def right_adjacency(self) -> list[list[int]]:
        radj: list[list[int]] = [[] for _ in self.right]
        for i, row in enumerate(self.adj):
            for j in row:
                radj[j].append(i)
        return radj


@dataclass(frozen=True)
class Matching:
    """Set of (left index, right index) pairs."""
    pairs: frozenset[tuple[int, int]]

    def __len__(self) -> int:
        return len(self.pairs)

    def left_to_right(self) -> dict[int, int]:
        return dict(self.pairs)

    def right_to_left(self) -> dict[int, int]:
        return {j: i for i, j in self.pairs}

    def labeled(self, graph: BipartiteGraph) -> list[tuple[Hashable, Hashable]]:
        return [(graph.left[i], graph.right[j]) for i, j in sorted(self.pairs)]


@dataclass(frozen=True)
class HallViolator:
    """A right-side set whose left neighbourhood is strictly smaller than itself."""
    right_set: frozenset[int]
    neighborhood: frozenset[int]

    @property
    def deficiency(self) -> int:
        return len(self.right_set) - len(self.neighborhood)


class _HopcroftKarp:
    def __init__(self, graph: BipartiteGraph) -> None:
        self._adj = graph.adj
        self._pair_left = [UNMATCHED] * len(graph.left)
        self._pair_right = [UNMATCHED] * len(graph.right)
        self._dist = [INFINITY] * len(graph.left)
        self._shortest = INFINITY
        self._ptr = [0] * len(graph.left)

    def run(self) -> list[int]:
        phases = 0
        size = 0
        while self._bfs():
            phases += 1
            self._ptr = [0] * len(self._adj)
            for root in range(len(self._adj)):
                if self._pair_left[root] == UNMATCHED and self._augment(root):
                    size += 1
        LOGGER.debug(f"Hopcroft-Karp: matching of size {size} after {phases} phases")
        return self._pair_left

    def _bfs(self) -> bool:
        queue: deque[int] = deque()
        for i, partner in enumerate(self._pair_left):
            if partner == UNMATCHED:
                self._dist[i] = 0
                queue.append(i)
            else:
                self._dist[i] = INFINITY
        self._shortest = INFINITY
        while queue:
            i = queue.popleft()
            if self._dist[i] >= self._shortest:
                continue
            for j in self._adj[i]:
                other = self._pair_right[j]
                if other == UNMATCHED:
                    self._shortest = min(self._shortest, self._dist[i] + 1)
                elif self._dist[other] == INFINITY:
                    self._dist[other] = self._dist[i] + 1
                    queue.append(other)
        return self._shortest != INFINITY

    def _augment(self, root: int) -> bool:
        # iterative layered DFS; via[k] is the right node taken out of stack[k]
        stack = [root]
        via: list[int] = []
        while stack:
            i = stack[-1]
            advanced = False
            while self._ptr[i] < len(self._adj[i]):
                j = self._adj[i][self._ptr[i]]
                self._ptr[i] += 1
                other = self._pair_right[j]
                if other == UNMATCHED:
                    if self._dist[i] + 1 == self._shortest:
                        via.append(j)
                        for left, right in zip(stack, via):
                            self._pair_left[left] = right
                            self._pair_right[right] = left
                        return True
                elif self._dist[other] == self._dist[i] + 1:
                    via.append(j)
                    stack.append(other)
                    advanced = True
                    break
            if not advanced:
                self._dist[i] = INFINITY
                stack.pop()
                if via:
                    via.pop()
        return False


def max_matching(graph: BipartiteGraph) -> Matching:
    """Maximum-cardinality matching, deterministic for a fixed node order."""
    pair_left = _HopcroftKarp(graph).run()
    return Matching(frozenset((i, j) for i, j in enumerate(pair_left) if j != UNMATCHED))


def _check_matching(graph: BipartiteGraph, matching: Matching) -> None:
    lefts = [i for i, _ in matching.pairs]
    rights = [j for _, j in matching.pairs]
    if len(set(lefts)) != len(lefts) or len(set(rights)) != len(rights):
        raise InvalidMatching("A node is matched twice")
    for i, j in matching.pairs:
        if not (0 <= i < len(graph.left) and 0 <= j < len(graph.right)) or not graph.has_edge(i, j):
            raise InvalidMatching(f"Pair ({i}, {j}) is not an edge of the graph")


def hall_violator(graph: BipartiteGraph, matching: Matching) -> HallViolator | None:
    """
    Right-side set S with |N(S)| < |S|, or None when ``matching`` saturates the
    right side. S is everything reachable from unmatched right nodes along
    alternating paths, which makes it unique for a given maximum matching.

    Raises NotMaximum if an augmenting path shows up during the search.
    """
    _check_matching(graph, matching)
    if len(matching) == len(graph.right):
        return None

    match_left = matching.left_to_right()
    match_right = matching.right_to_left()
    radj = graph.right_adjacency()

    reached_right: dict[int, int | None] = {}  # right -> left it was reached from
    reached_left: dict[int, int] = {}  # left -> right it was reached from
    queue: deque[int] = deque()
    for j in range(len(graph.right)):
        if j not in match_right:
            reached_right[j] = None
            queue.append(j)

    while queue:
        j = queue.popleft()
        for i in radj[j]:
            if i in reached_left:
                continue
            reached_left[i] = j
            partner = match_left.get(i)
            if partner is None:
                path = [graph.left[i]]
                node = j
                while node is not None:
                    path.append(graph.right[node])
                    previous = reached_right[node]
                    if previous is None:
                        break
                    path.append(graph.left[previous])
                    node = reached_left[previous]
                raise NotMaximum(path)
            if partner not in reached_right:
                reached_right[partner] = i
                queue.append(partner)

    violator = HallViolator(frozenset(reached_right), frozenset(reached_left))
    LOGGER.debug(
        f"Hall violator: |S|={len(violator.right_set)}, |N(S)|={len(violator.neighborhood)}"
    )
    return violator
