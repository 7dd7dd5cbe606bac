from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, field

from blinker import Signal

from switchbench.contracts.enums import GraphKind
from switchbench.utils.performance_monitor import PerformanceMonitorService
from .criteria import Verdict, decide, g_rank
from .graphs import ColoredDigraph
from .helpers.registry import GRAPH_BUILDERS
from .oracle import (
    ctrb_column_count,
    oracle_dimensions,
    realize,
    resolve_ctrb_budget,
    switched_ctrb_rank,
)
from .structured import SwitchedSystem, stacked_pattern, sum_pattern, validate

import logging

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class OracleSection:
    trials: int
    seed: int
    dimensions: tuple[int, ...]
    controllable: bool
    agreement: bool
    # rank of the word-expanded controllability matrix for the first trial, when within budget
    ctrb_rank: int | None = None


@dataclass(frozen=True)
class AnalysisReport:
    n: int
    r: int
    m: int
    free_parameters: int
    verdict: Verdict
    oracle: OracleSection | None = None
    timing: dict[str, float] = field(default_factory=dict)
    source: str | None = None

    @property
    def consistent(self) -> bool:
        return self.oracle is None or self.oracle.agreement


class Analyzer:
    """
    Runs the graph criteria on a switched system, optionally cross-checks them
    with random realizations, and times each stage.
    """

    def __init__(self, oracle_trials: int = 0, seed: int = 0, ctrb_budget: int | None = None,
                 workers: int = 1) -> None:
        self.property_changed = Signal()
        self.stage_started = Signal()
        self.stage_finished = Signal()
        self.trial_finished = Signal()

        self._oracle_trials = 0
        self._seed = 0
        self._ctrb_budget = resolve_ctrb_budget(ctrb_budget)
        self._workers = 1
        self._monitor = PerformanceMonitorService()

        self.oracle_trials = oracle_trials
        self.seed = seed
        self.workers = workers

    # --- properties ---

    @property
    def oracle_trials(self) -> int:
        """Realizations drawn by the cross-check; 0 disables it."""
        return self._oracle_trials

    @oracle_trials.setter
    def oracle_trials(self, value: int):
        if value < 0:
            LOGGER.error(f"Invalid oracle trial count {value}")
            raise ValueError(f"oracle_trials must be >= 0, got {value}")
        self._oracle_trials = int(value)
        self.on_property_changed("oracle_trials", self._oracle_trials)

    @property
    def seed(self) -> int:
        return self._seed

    @seed.setter
    def seed(self, value: int):
        if value < 0:
            LOGGER.error(f"Invalid seed {value}")
            raise ValueError(f"seed must be >= 0, got {value}")
        self._seed = int(value)
        self.on_property_changed("seed", self._seed)

    @property
    def ctrb_budget(self) -> int:
        return self._ctrb_budget

    @ctrb_budget.setter
    def ctrb_budget(self, value: int | None):
        self._ctrb_budget = resolve_ctrb_budget(value)
        self.on_property_changed("ctrb_budget", self._ctrb_budget)

    @property
    def workers(self) -> int:
        return self._workers

    @workers.setter
    def workers(self, value: int):
        if value < 1:
            LOGGER.error(f"Invalid worker count {value}")
            raise ValueError(f"workers must be >= 1, got {value}")
        self._workers = int(value)
        self.on_property_changed("workers", self._workers)

    def on_property_changed(self, name: str, value):
        LOGGER.debug(f"Analyzer: property {name} changed to {value}")
        self.property_changed.send(self, name=name, value=value)

    # --- stages ---

    @contextmanager
    def _stage(self, name: str, timing: dict[str, float]):
        timer = self._monitor.timer(name)
        self.stage_started.send(self, stage=name)
        with timer.measure():
            yield
        timing[name] = timer.last_duration
        self.stage_finished.send(self, stage=name, elapsed=timing[name])

    def _on_trial(self, index: int, seed: int, dim: int) -> None:
        self.trial_finished.send(self, index=index, seed=seed, dimension=dim)

    def analyze(self, system: SwitchedSystem, source: str | None = None) -> AnalysisReport:
        timing: dict[str, float] = {}
        with self._stage("validate", timing):
            validate(system)
        with self._stage("decide", timing):
            verdict = decide(system)

        oracle = None
        if self._oracle_trials > 0:
            with self._stage("oracle", timing):
                dims = oracle_dimensions(
                    system, self._oracle_trials, self._seed, self._workers, on_trial=self._on_trial
                )
                ctrb_rank = None
                if ctrb_column_count(system.n, system.m, system.r) <= self._ctrb_budget:
                    ctrb_rank = switched_ctrb_rank(realize(system, self._seed), self._ctrb_budget)
                else:
                    LOGGER.debug(f"{system}: skipping the controllability matrix, over budget")
            controllable = any(dim == system.n for dim in dims)
            oracle = OracleSection(
                trials=self._oracle_trials,
                seed=self._seed,
                dimensions=tuple(dims),
                controllable=controllable,
                agreement=controllable == verdict.controllable
                and (ctrb_rank is None or ctrb_rank == dims[0]),
                ctrb_rank=ctrb_rank,
            )
            if not oracle.agreement:
                LOGGER.error(
                    f"{system}: graph verdict {verdict.controllable} disagrees with "
                    f"oracle dimensions {dims}"
                )
            else:
                LOGGER.info(f"{system}: oracle agrees ({sum(d == system.n for d in dims)}/{len(dims)} full rank)")

        return AnalysisReport(
            n=system.n,
            r=system.r,
            m=system.m,
            free_parameters=system.free_count(),
            verdict=verdict,
            oracle=oracle,
            timing=timing,
            source=source,
        )

    def g_ranks(self, system: SwitchedSystem) -> tuple[int, int]:
        """(g-rank of the sum pattern, g-rank of the stacked pattern)."""
        validate(system)
        return g_rank(sum_pattern(system)), g_rank(stacked_pattern(system))

    def graph(self, system: SwitchedSystem, kind: GraphKind, subsystem: int | None = None) -> ColoredDigraph:
        validate(system)
        builder = GRAPH_BUILDERS[kind]
        if kind == GraphKind.SUBSYSTEM:
            if subsystem is None:
                raise ValueError("A subsystem index is required for subsystem graphs")
            return builder(system, subsystem)
        return builder(system)

    def dump_timers(self) -> None:
        self._monitor.dump()

