"""
Numerical cross-check of structural controllability.

Free parameters are replaced by random nonzero elements of F_p and the
controllable subspace of the resulting switched system is computed exactly.
One full-dimensional realization proves structural controllability; a
structurally controllable system gives full dimension for all but a
vanishing fraction of realizations.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from types import MappingProxyType
from typing import Callable, Mapping

import numpy as np

from switchbench.contracts.enums import MatrixRole
from . import field as ff
from .errors import BudgetExceeded
from .structured import SwitchedSystem

import logging

LOGGER = logging.getLogger(__name__)

DEFAULT_CTRB_BUDGET = 1_000_000
BUDGET_ENV = "SWITCHBENCH_CTRB_BUDGET"
DEFAULT_TRIALS = 3


def resolve_ctrb_budget(budget: int | None = None) -> int:
    """Explicit budget, else the environment override, else the default."""
    if budget is not None:
        return budget
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_CTRB_BUDGET
    try:
        value = int(raw)
    except ValueError:
        value = 0
    if value <= 0:
        LOGGER.warning(f"Ignoring {BUDGET_ENV}={raw!r}; using {DEFAULT_CTRB_BUDGET}")
        return DEFAULT_CTRB_BUDGET
    LOGGER.debug(f"Column budget overridden by {BUDGET_ENV}: {value}")
    return value


def _readonly(matrix: np.ndarray) -> np.ndarray:
    matrix.setflags(write=False)
    return matrix


@dataclass(frozen=True, eq=False)
class Realization:
    """Admissible numerical realization over F_p."""
    prime: int
    assignment: Mapping[str, int]
    a_matrices: tuple[np.ndarray, ...]
    b_matrices: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "assignment", MappingProxyType(dict(self.assignment)))
        object.__setattr__(self, "a_matrices", tuple(_readonly(a) for a in self.a_matrices))
        object.__setattr__(self, "b_matrices", tuple(_readonly(b) for b in self.b_matrices))

    @property
    def n(self) -> int:
        return self.a_matrices[0].shape[0]

    @property
    def r(self) -> int:
        return self.b_matrices[0].shape[1]

    @property
    def m(self) -> int:
        return len(self.a_matrices)

    def input_columns(self) -> np.ndarray:
        """[B_1, ..., B_m]."""
        return np.hstack(self.b_matrices)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Realization):
            return NotImplemented
        return (
            self.prime == other.prime
            and dict(self.assignment) == dict(other.assignment)
            and len(self.a_matrices) == len(other.a_matrices)
            and all(np.array_equal(x, y) for x, y in zip(self.a_matrices, other.a_matrices))
            and all(np.array_equal(x, y) for x, y in zip(self.b_matrices, other.b_matrices))
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """Row-reduced basis; ``history`` holds the dimension after each round."""
    vectors: np.ndarray
    pivots: tuple[int, ...] = ()
    history: tuple[int, ...] = ()

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]


def realize(system: SwitchedSystem, seed: int, prime: int = ff.PRIME) -> Realization:
    """
    Assign each parameter a uniform element of {1, ..., p-1}. Values are drawn
    in one PCG64 vector over the parameters in (subsystem, A then B, row, col)
    order.
    """
    params = system.parameters()
    rng = np.random.Generator(np.random.PCG64(seed))
    values = rng.integers(1, prime, size=len(params), dtype=np.int64)

    a_matrices = [np.zeros((system.n, system.n), dtype=np.int64) for _ in range(system.m)]
    b_matrices = [np.zeros((system.n, system.r), dtype=np.int64) for _ in range(system.m)]
    assignment = {}
    for param, value in zip(params, values):
        target = a_matrices if param.matrix == MatrixRole.A else b_matrices
        target[param.subsystem - 1][param.row, param.col] = value
        assignment[param.name] = int(value)
    return Realization(prime, assignment, tuple(a_matrices), tuple(b_matrices))


def controllable_subspace(real: Realization) -> SubspaceBasis:
    """
    Smallest subspace containing every Im B_i and invariant under every A_i:
    V_0 = span of the B columns, V_{k+1} = V_k + sum_i A_i V_k, until the
    dimension stops growing.
    """
    p = real.prime
    # basis vectors are stored as rows, so A v becomes v @ A.T
    vectors, pivots = ff.row_reduce(real.input_columns().T, p)
    history = [len(pivots)]
    while 0 < len(pivots) < real.n:
        images = [ff.matmul(vectors, a.T, p) for a in real.a_matrices]
        vectors, new_pivots = ff.row_reduce(np.vstack([vectors, *images]), p)
        grew = len(new_pivots) > len(pivots)
        pivots = new_pivots
        history.append(len(pivots))
        if not grew:
            break
    LOGGER.debug(f"Controllable subspace dimensions per round: {history}")
    return SubspaceBasis(vectors, tuple(pivots), tuple(history))


def ctrb_column_count(n: int, m: int, r: int) -> int:
    """Columns of W B_i e_j over all words W of length 0..n-1."""
    return sum(m ** k for k in range(n)) * m * r


def switched_ctrb_rank(real: Realization, budget: int | None = None) -> int:
    """
    Rank of the switched controllability matrix: every product of A matrices
    of length 0..n-1 applied to every column of every B_i, words enumerated
    by length then lexicographically.
    """
    budget = resolve_ctrb_budget(budget)
    columns = ctrb_column_count(real.n, real.m, real.r)
    if columns > budget:
        LOGGER.error(f"Controllability matrix needs {columns} columns, budget {budget}")
        raise BudgetExceeded(columns, budget)

    level = real.input_columns()
    blocks = [level]
    for _ in range(1, real.n):
        level = np.hstack([ff.matmul(a, level, real.prime) for a in real.a_matrices])
        blocks.append(level)
    # row rank equals column rank; eliminating on the transpose loops over n columns only
    return ff.rank(np.hstack(blocks).T, real.prime)


def _trial(system: SwitchedSystem, seed: int) -> int:
    return controllable_subspace(realize(system, seed)).dim


def oracle_dimensions(system: SwitchedSystem, trials: int, seed: int, workers: int = 1,
                      on_trial: Callable[[int, int, int], None] | None = None) -> list[int]:
    """
    Controllable-subspace dimension of ``trials`` realizations; trial k uses
    seed ``seed + k``. Results come back in trial order.
    """
    if trials < 1:
        raise ValueError(f"At least one trial is required, got {trials}")
    seeds = [seed + k for k in range(trials)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="oracle") as pool:
            dims = list(pool.map(lambda s: _trial(system, s), seeds))
    else:
        dims = [_trial(system, s) for s in seeds]
    if on_trial is not None:
        for k, (trial_seed, dim) in enumerate(zip(seeds, dims)):
            on_trial(k, trial_seed, dim)
    LOGGER.debug(f"{system}: oracle dimensions {dims}")
    return dims


def oracle_verdict(system: SwitchedSystem, trials: int = DEFAULT_TRIALS, seed: int = 0,
                   workers: int = 1) -> bool:
    """True iff some realization is controllable (one-sided Monte Carlo)."""
    return any(dim == system.n for dim in oracle_dimensions(system, trials, seed, workers))
