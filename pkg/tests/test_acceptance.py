"""Larger sweeps over exhaustive and random corpora."""
from itertools import product
from time import perf_counter

import numpy as np
import pytest

from switchbench.contracts.enums import MatrixRole
from switchbench.core.analyzer import Analyzer
from switchbench.core.criteria import (
    decide,
    find_s_dilation,
    find_s_dilation_bruteforce,
    g_rank,
    is_form_I_bruteforce,
    lin_criteria,
    max_s_disjoint,
)
from switchbench.core.graphs import accessibility, colored_union_graph, union_graph
from switchbench.core.matching import BipartiteGraph, hall_violator, max_matching
from switchbench.core.oracle import controllable_subspace, oracle_dimensions, realize, switched_ctrb_rank
from switchbench.core.structured import SwitchedSystem, stacked_pattern
from switchbench.io.documents import gen_random

pytestmark = pytest.mark.slow

# (subsystem, matrix, row, col) positions switched on and off by the sweep
TEMPLATE = (
    (0, MatrixRole.B, 0, 0), (0, MatrixRole.A, 1, 0), (0, MatrixRole.A, 2, 1), (0, MatrixRole.A, 0, 2),
    (0, MatrixRole.A, 1, 1), (0, MatrixRole.B, 2, 0),
    (1, MatrixRole.B, 1, 0), (1, MatrixRole.A, 2, 0), (1, MatrixRole.A, 0, 1), (1, MatrixRole.A, 2, 2),
    (1, MatrixRole.A, 1, 2), (1, MatrixRole.B, 0, 0),
)


def template_system(bits):
    a = [np.zeros((3, 3), dtype=bool) for _ in range(2)]
    b = [np.zeros((3, 1), dtype=bool) for _ in range(2)]
    for on, (i, role, row, col) in zip(bits, TEMPLATE):
        if on:
            (a if role == MatrixRole.A else b)[i][row, col] = True
    return SwitchedSystem.from_masks(a, b)


def test_two_mode_is_fast(two_mode_system):
    best = float("inf")
    for _ in range(5):
        start = perf_counter()
        verdict = decide(two_mode_system)
        best = min(best, perf_counter() - start)
    assert verdict.controllable and not verdict.theorem1_sufficient
    assert best < 0.01


def test_exhaustive_template_sweep():
    for bits in product((False, True), repeat=len(TEMPLATE)):
        system = template_system(bits)
        count, _ = max_s_disjoint(system)
        no_dilation = find_s_dilation(system) is None
        assert no_dilation == (count == 3) == (g_rank(stacked_pattern(system)) == 3), bits
        assert no_dilation == (find_s_dilation_bruteforce(system) is None), bits


def random_cases(count, seed):
    rng = np.random.Generator(np.random.PCG64(seed))
    for k in range(count):
        n = int(rng.integers(2, 6))
        m = int(rng.integers(1, 4))
        r = int(rng.integers(1, 3))
        density = float(rng.choice([0.2, 0.5, 0.8]))
        yield gen_random(n, r, m, density, seed=seed * 10_000 + k)


def test_graph_verdict_matches_the_oracle():
    mismatches, rank_deficient = [], []
    for system in random_cases(500, 1):
        dims = oracle_dimensions(system, trials=20, seed=7)
        controllable = decide(system).controllable
        if controllable != (system.n in dims):
            mismatches.append(system)
        # a generic realization of a controllable pattern reaches full dimension
        if controllable and dims != [system.n] * 20:
            rank_deficient.append((system, dims))
    assert not mismatches
    assert not rank_deficient


def test_controllability_matrix_matches_subspace():
    for k, system in enumerate(random_cases(100, 2)):
        real = realize(system, k)
        assert switched_ctrb_rank(real) == controllable_subspace(real).dim


def test_single_subsystem_degeneracy():
    rng = np.random.Generator(np.random.PCG64(3))
    for k in range(200):
        n = int(rng.integers(1, 6))
        system = gen_random(n, int(rng.integers(1, 3)), 1, float(rng.choice([0.2, 0.5, 0.8])), seed=k)
        assert decide(system).controllable == lin_criteria(system, 1)
        assert accessibility(union_graph(system)).complete == (not is_form_I_bruteforce(system))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_form_I_over_every_single_input_support(n):
    cells = n * n + n
    for bits in product((False, True), repeat=cells):
        flags = np.array(bits, dtype=bool)
        system = SwitchedSystem.from_masks([flags[:n * n].reshape(n, n)], [flags[n * n:].reshape(n, 1)])
        accessible = accessibility(colored_union_graph(system)).complete
        assert accessible == (not is_form_I_bruteforce(system)), bits


def test_form_I_on_larger_switched_systems():
    rng = np.random.Generator(np.random.PCG64(5))
    for k in range(300):
        n = int(rng.choice([5, 6]))
        m = int(rng.integers(1, 4))
        density = float(rng.choice([0.1, 0.2, 0.35]))
        system = gen_random(n, int(rng.integers(1, 3)), m, density, seed=50_000 + k)
        accessible = accessibility(colored_union_graph(system)).complete
        assert accessible == (not is_form_I_bruteforce(system)), k


def test_matching_corpus():
    rng = np.random.Generator(np.random.PCG64(4))
    for _ in range(1000):
        left, right = int(rng.integers(0, 6)), int(rng.integers(0, 6))
        mask = rng.random((left, right)) < rng.random()
        graph = BipartiteGraph.from_edges(range(left), range(right), zip(*np.nonzero(mask)))
        matching = max_matching(graph)
        best = max(
            (len(perm) for perm in _matchings(mask)),
            default=0,
        )
        assert len(matching) == best
        violator = hall_violator(graph, matching)
        if violator is not None:
            neighbourhood = {i for i in range(left) if any(mask[i, j] for j in violator.right_set)}
            assert len(neighbourhood) < len(violator.right_set)


def _matchings(mask):
    """Every matching of a small 0/1 mask, as lists of pairs."""
    left, right = mask.shape

    def extend(i, used, pairs):
        if i == left:
            yield pairs
            return
        yield from extend(i + 1, used, pairs)
        for j in range(right):
            if mask[i, j] and j not in used:
                yield from extend(i + 1, used | {j}, pairs + [(i, j)])

    return extend(0, frozenset(), [])


def test_large_random_system_is_fast():
    system = gen_random(200, 5, 3, 0.05, seed=0)
    start = perf_counter()
    report = Analyzer().analyze(system)
    assert perf_counter() - start < 1.0
    assert report.verdict.s_disjoint_count <= 200
