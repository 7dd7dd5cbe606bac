import json

import numpy as np
import pytest

from switchbench.core.structured import SwitchedSystem


def masks(n, r, m):
    return [np.zeros((n, n), dtype=bool) for _ in range(m)], [np.zeros((n, r), dtype=bool) for _ in range(m)]


@pytest.fixture
def two_mode_system():
    """n=3, r=1, m=2: B_1(3,1), A_2(2,3) and B_2(1,1) free."""
    a, b = masks(3, 1, 2)
    b[0][2, 0] = True
    a[1][1, 2] = True
    b[1][0, 0] = True
    return SwitchedSystem.from_masks(a, b)


@pytest.fixture
def two_mode_document():
    return {
        "n": 3, "r": 1, "m": 2,
        "subsystems": [
            {"A": [[0, 0, 0], [0, 0, 0], [0, 0, 0]], "B": [[0], [0], ["lam1"]]},
            {"A": [[0, 0, 0], [0, 0, "lam2"], [0, 0, 0]], "B": [["lam3"], [0], [0]]},
        ],
    }


@pytest.fixture
def two_mode_path(tmp_path, two_mode_document):
    path = tmp_path / "two_mode.json"
    path.write_text(json.dumps(two_mode_document), encoding="utf-8")
    return path


@pytest.fixture
def independent_b_system():
    """n=2, zero A's, both entries of B_1 and B_2 free and independent."""
    a, b = masks(2, 1, 2)
    b[0][:, 0] = True
    b[1][:, 0] = True
    return SwitchedSystem.from_masks(a, b)


@pytest.fixture
def all_zero_system():
    a, b = masks(3, 1, 2)
    return SwitchedSystem.from_masks(a, b)


@pytest.fixture
def chain_system():
    """u1 -> x1 -> x2 -> x3, x4 isolated."""
    a, b = masks(4, 1, 1)
    b[0][0, 0] = True
    a[0][1, 0] = True
    a[0][2, 1] = True
    return SwitchedSystem.from_masks(a, b)


@pytest.fixture
def fan_system():
    """u1 feeds x1 and x2 through a single column: accessible but dilated."""
    a, b = masks(2, 1, 1)
    b[0][:, 0] = True
    return SwitchedSystem.from_masks(a, b)
