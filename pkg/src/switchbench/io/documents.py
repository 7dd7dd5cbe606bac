"""
System documents (JSON) and random system generation.

Document schema::

    {"n": 3, "r": 1, "m": 2,
     "subsystems": [{"A": [[0, 0, 0], ...], "B": [[0], [0], ["lam1"]]}, ...]}

A cell is the integer 0 (fixed zero), "*" (free, auto-named) or any other
non-empty string (free, explicitly named). Names must be unique across the
whole document.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from switchbench.contracts.enums import MatrixRole
from switchbench.core.errors import ParseError
from switchbench.core.structured import (
    ParamId,
    StructuredMatrix,
    SwitchedSystem,
    auto_name,
    validate,
)

import logging

LOGGER = logging.getLogger(__name__)

ANONYMOUS = "*"
HEADER_KEYS = ("n", "r", "m", "subsystems")


def _count(document: dict, key: str) -> int:
    value = document.get(key)
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise ParseError(f"'{key}' must be a non-negative integer, got {value!r}", path=f"/{key}")
    return value


def _pattern(rows, shape: tuple[int, int], subsystem: int, role: MatrixRole, n: int,
             path: str) -> StructuredMatrix:
    n_rows, n_cols = shape
    if not isinstance(rows, list) or len(rows) != n_rows:
        raise ParseError(f"{role.value}{subsystem} must be a list of {n_rows} rows", path=path)
    entries = {}
    for row, cells in enumerate(rows):
        row_path = f"{path}/{row}"
        if not isinstance(cells, list) or len(cells) != n_cols:
            found = len(cells) if isinstance(cells, list) else type(cells).__name__
            raise ParseError(
                f"{role.value}{subsystem} row {row + 1} must have {n_cols} cells, got {found}",
                path=row_path,
            )
        for col, cell in enumerate(cells):
            if isinstance(cell, int) and not isinstance(cell, bool) and cell == 0:
                continue
            if not isinstance(cell, str) or not cell.strip():
                raise ParseError(
                    f"Cell must be 0, \"*\" or a parameter name, got {cell!r}",
                    path=f"{row_path}/{col}",
                )
            name = auto_name(subsystem, role, row, col, n) if cell == ANONYMOUS else cell
            entries[(row, col)] = ParamId(name, subsystem, role, row, col)
    return StructuredMatrix(n_rows, n_cols, entries)


def parse_spec(document) -> SwitchedSystem:
    """Build (without validating) a system from an already-decoded document."""
    if not isinstance(document, dict):
        raise ParseError("Document must be a JSON object", path="/")
    unknown = sorted(set(document) - set(HEADER_KEYS))
    if unknown:
        raise ParseError(f"Unknown keys {unknown}", path="/")
    n, r, m = (_count(document, key) for key in ("n", "r", "m"))
    subsystems = document.get("subsystems")
    if not isinstance(subsystems, list) or len(subsystems) != m:
        raise ParseError(f"'subsystems' must list exactly m={m} subsystems", path="/subsystems")

    pairs = []
    for i, entry in enumerate(subsystems, start=1):
        path = f"/subsystems/{i - 1}"
        if not isinstance(entry, dict) or set(entry) != {"A", "B"}:
            raise ParseError("Each subsystem must be an object with keys 'A' and 'B'", path=path)
        a = _pattern(entry["A"], (n, n), i, MatrixRole.A, n, f"{path}/A")
        b = _pattern(entry["B"], (n, r), i, MatrixRole.B, n, f"{path}/B")
        pairs.append((a, b))
    return SwitchedSystem(n, r, tuple(pairs))


def load_spec(text: str) -> SwitchedSystem:
    """Parse and validate a system document."""
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        LOGGER.error(f"Malformed document: {e.msg} at {e.lineno}:{e.colno}")
        raise ParseError(e.msg, line=e.lineno, column=e.colno) from e
    system = parse_spec(document)
    validate(system)
    LOGGER.debug(f"Loaded {system}")
    return system


def load_spec_file(path: str | Path) -> SwitchedSystem:
    return load_spec(Path(path).read_text(encoding="utf-8"))


def _rows(pattern: StructuredMatrix) -> list[list]:
    rows: list[list] = [[0] * pattern.cols for _ in range(pattern.rows)]
    for (row, col), param in pattern.entries.items():
        rows[row][col] = param.name
    return rows


def render_spec(system: SwitchedSystem) -> str:
    """Document text with one line per pattern row and every parameter named."""
    def block(rows: list[list]) -> str:
        if not rows:
            return "[]"
        inner = ",\n".join(f"        {json.dumps(row)}" for row in rows)
        return f"[\n{inner}\n      ]"

    subsystems = ",\n".join(
        f'    {{\n      "A": {block(_rows(a))},\n      "B": {block(_rows(b))}\n    }}'
        for a, b in system.subsystems
    )
    return (
        f'{{\n  "n": {system.n},\n  "r": {system.r},\n  "m": {system.m},\n'
        f'  "subsystems": [\n{subsystems}\n  ]\n}}\n'
    )


def gen_random(n: int, r: int, m: int, density: float, seed: int) -> SwitchedSystem:
    """
    Random pattern: every entry of every A_i, B_i is free with probability
    ``density``. PCG64 seeded with ``seed``; for each subsystem in turn one
    uniform (n, n) block decides A_i, then one (n, r) block decides B_i.
    """
    if min(n, r, m) < 1:
        raise ValueError(f"Dimensions must be >= 1, got n={n}, r={r}, m={m}")
    if not 0.0 <= density <= 1.0:
        raise ValueError(f"Density must lie in [0, 1], got {density}")
    if seed < 0:
        raise ValueError(f"Seed must be >= 0, got {seed}")
    rng = np.random.Generator(np.random.PCG64(seed))
    a_masks, b_masks = [], []
    for _ in range(m):
        a_masks.append(rng.random((n, n)) < density)
        b_masks.append(rng.random((n, r)) < density)
    system = SwitchedSystem.from_masks(a_masks, b_masks)
    LOGGER.debug(f"Generated {system} (density={density}, seed={seed})")
    return system
