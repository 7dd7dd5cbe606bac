from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

import numpy as np

from switchbench.contracts.enums import MatrixRole
from .errors import (
    DimensionMismatch,
    DuplicateParameter,
    EmptySystem,
    PatternOutOfBounds,
    StructureError,
)

import logging

LOGGER = logging.getLogger(__name__)

# subsystem index used for parameters minted on aggregate patterns
AGGREGATE = 0

Position = tuple[int, int]


def auto_name(subsystem: int, role: MatrixRole, row: int, col: int, n: int) -> str:
    """
    Name given to an anonymous free entry. Indices are 1-based and ``col``
    counts columns of ``[A_i, B_i]``, so B entries start at column n+1.
    """
    offset = n if role == MatrixRole.B else 0
    return f"p{subsystem}_{row + 1}_{col + offset + 1}"


@dataclass(frozen=True, order=True)
class ParamId:
    """
    An independent free parameter. ``row``/``col`` are 0-based positions inside
    A_i or B_i of subsystem ``subsystem`` (1-based, 0 for aggregates).
    """
    name: str
    subsystem: int
    matrix: MatrixRole
    row: int
    col: int

    @property
    def position(self) -> Position:
        return self.row, self.col

    def __str__(self) -> str:
        return f"{self.name}@{self.matrix.value}{self.subsystem}({self.row + 1},{self.col + 1})"


@dataclass(frozen=True)
class StructuredMatrix:
    """Sparsity pattern: stored entries are free parameters, absent ones are fixed zeros."""
    rows: int
    cols: int
    entries: Mapping[Position, ParamId] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise PatternOutOfBounds(f"Negative pattern shape {self.rows}x{self.cols}")
        for (row, col), param in self.entries.items():
            if not isinstance(param, ParamId):
                raise StructureError(f"Entry at ({row + 1},{col + 1}) is not a free parameter")
            if not (0 <= row < self.rows and 0 <= col < self.cols):
                raise PatternOutOfBounds(
                    f"Entry {param.name} at ({row + 1},{col + 1}) is outside a "
                    f"{self.rows}x{self.cols} pattern"
                )
        ordered = dict(sorted(self.entries.items()))
        object.__setattr__(self, "entries", MappingProxyType(ordered))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> StructuredMatrix:
        return cls(rows, cols, {})

    @classmethod
    def from_mask(cls, mask, subsystem: int, role: MatrixRole, n: int | None = None) -> StructuredMatrix:
        """Pattern with an auto-named parameter at every truthy cell of ``mask``."""
        mask = np.asarray(mask, dtype=bool)
        if mask.ndim != 2:
            raise DimensionMismatch(f"Mask must be 2-D, got shape {mask.shape}")
        rows, cols = mask.shape
        n = rows if n is None else n
        entries = {
            (int(r), int(c)): ParamId(auto_name(subsystem, role, int(r), int(c), n), subsystem, role, int(r), int(c))
            for r, c in zip(*np.nonzero(mask))
        }
        return cls(rows, cols, entries)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def support(self) -> frozenset[Position]:
        return frozenset(self.entries)

    def is_free(self, row: int, col: int) -> bool:
        return (row, col) in self.entries

    def nnz(self) -> int:
        return len(self.entries)

    def mask(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=bool)
        for row, col in self.entries:
            out[row, col] = True
        return out

    def column_support(self) -> dict[int, list[int]]:
        """Rows holding a free entry, per nonzero column."""
        by_col: dict[int, list[int]] = {}
        for row, col in self.entries:
            by_col.setdefault(col, []).append(row)
        return by_col

    def parameters(self) -> Iterator[ParamId]:
        return iter(self.entries.values())

    @staticmethod
    def hstack(patterns: Iterable[StructuredMatrix]) -> StructuredMatrix:
        patterns = list(patterns)
        rows = patterns[0].rows if patterns else 0
        entries: dict[Position, ParamId] = {}
        offset = 0
        for pattern in patterns:
            if pattern.rows != rows:
                raise DimensionMismatch(
                    f"Cannot stack patterns with {pattern.rows} and {rows} rows"
                )
            for (row, col), param in pattern.entries.items():
                entries[(row, col + offset)] = param
            offset += pattern.cols
        return StructuredMatrix(rows, offset, entries)


@dataclass(frozen=True)
class SwitchedSystem:
    """
    Structured switched system x' = A_s x + B_s u with m subsystems sharing
    the state dimension n and the input dimension r.
    """
    n: int
    r: int
    subsystems: tuple[tuple[StructuredMatrix, StructuredMatrix], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "subsystems", tuple((a, b) for a, b in self.subsystems))

    @classmethod
    def from_masks(cls, a_masks, b_masks) -> SwitchedSystem:
        """System with auto-named parameters at the truthy cells of each mask."""
        a_masks = [np.asarray(a, dtype=bool) for a in a_masks]
        b_masks = [np.asarray(b, dtype=bool) for b in b_masks]
        if len(a_masks) != len(b_masks):
            raise DimensionMismatch(f"{len(a_masks)} A masks but {len(b_masks)} B masks")
        if not a_masks:
            raise EmptySystem("A switched system needs at least one subsystem")
        n = a_masks[0].shape[0]
        r = b_masks[0].shape[1] if b_masks[0].ndim == 2 else 0
        subsystems = tuple(
            (
                StructuredMatrix.from_mask(a, i, MatrixRole.A, n),
                StructuredMatrix.from_mask(b, i, MatrixRole.B, n),
            )
            for i, (a, b) in enumerate(zip(a_masks, b_masks), start=1)
        )
        return cls(n, r, subsystems)

    @property
    def m(self) -> int:
        return len(self.subsystems)

    def a(self, i: int) -> StructuredMatrix:
        """A_i, 1-based."""
        return self.subsystems[i - 1][0]

    def b(self, i: int) -> StructuredMatrix:
        """B_i, 1-based."""
        return self.subsystems[i - 1][1]

    def parameters(self) -> list[ParamId]:
        """All parameters, ordered by subsystem, A before B, row, col."""
        params = []
        for a, b in self.subsystems:
            params.extend(a.parameters())
            params.extend(b.parameters())
        return params

    def free_count(self) -> int:
        return sum(a.nnz() + b.nnz() for a, b in self.subsystems)

    def __str__(self) -> str:
        return f"SwitchedSystem(n={self.n}, r={self.r}, m={self.m}, free={self.free_count()})"


def validate(system: SwitchedSystem) -> None:
    """Raise a StructureError if ``system`` breaks any of its invariants."""
    if system.m < 1 or system.n < 1 or system.r < 1:
        LOGGER.error(f"Empty system: n={system.n}, r={system.r}, m={system.m}")
        raise EmptySystem(
            f"A switched system needs n, r, m >= 1 (got n={system.n}, r={system.r}, m={system.m})"
        )

    seen: dict[str, ParamId] = {}
    for i, (a, b) in enumerate(system.subsystems, start=1):
        for role, pattern, expected in (
            (MatrixRole.A, a, (system.n, system.n)),
            (MatrixRole.B, b, (system.n, system.r)),
        ):
            if pattern.shape != expected:
                LOGGER.error(f"{role.value}{i} has shape {pattern.shape}, expected {expected}")
                raise DimensionMismatch(
                    f"{role.value}{i} is {pattern.rows}x{pattern.cols}, expected {expected[0]}x{expected[1]}",
                    subsystem=i, matrix=role.value, expected=expected, actual=pattern.shape,
                )
            for position, param in pattern.entries.items():
                if param.subsystem != i or param.matrix != role or param.position != position:
                    raise StructureError(
                        f"Parameter {param} is stored at {role.value}{i}"
                        f"({position[0] + 1},{position[1] + 1})"
                    )
                if param.name in seen:
                    LOGGER.error(f"Duplicate parameter {param.name}")
                    raise DuplicateParameter(param.name, seen[param.name], param)
                seen[param.name] = param

    if all(b.nnz() == 0 for _, b in system.subsystems):
        LOGGER.warning(f"{system}: every B_i is zero, no state can be reached")
    LOGGER.debug(f"{system} is valid")


def pair_pattern(system: SwitchedSystem, i: int) -> StructuredMatrix:
    """[A_i, B_i] with the original parameters."""
    return StructuredMatrix.hstack([system.a(i), system.b(i)])


def sum_pattern(system: SwitchedSystem) -> StructuredMatrix:
    """
    Pattern of [A_1 + ... + A_m, B_1 + ... + B_m]. An entry is free iff it is
    free in some subsystem; aggregate parameters are named ``s_{row}_{col}``.
    """
    n = system.n
    support: set[Position] = set()
    for a, b in system.subsystems:
        support.update(a.entries)
        support.update((row, col + n) for row, col in b.entries)

    entries = {}
    for row, col in support:
        role = MatrixRole.A if col < n else MatrixRole.B
        local_col = col if col < n else col - n
        entries[(row, col)] = ParamId(f"s_{row + 1}_{col + 1}", AGGREGATE, role, row, local_col)
    return StructuredMatrix(n, n + system.r, entries)


def stacked_pattern(system: SwitchedSystem) -> StructuredMatrix:
    """[A_1, ..., A_m, B_1, ..., B_m] keeping the original parameters."""
    blocks = [a for a, _ in system.subsystems] + [b for _, b in system.subsystems]
    return StructuredMatrix.hstack(blocks)
