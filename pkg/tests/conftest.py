"""Shared fixtures: small hand-checkable instances and their JSON files."""

import json
from pathlib import Path

import pytest

from app.models import BipartiteInstance, MatroidPair
from app.services.matroid import build_gpm, build_pair, from_bipartite


def complete_bipartite(n: int, cap: int = 1) -> BipartiteInstance:
    return BipartiteInstance(
        left_caps=(cap,) * n,
        right_caps=(cap,) * n,
        edges=tuple((left, right) for left in range(n) for right in range(n)),
    )


@pytest.fixture
def e1() -> MatroidPair:
    """Six elements; m1 parts {0,1,2} cap 1 and {3,4,5} cap 2, m2 parts {0,3} {1,4} cap 1, {2,5} cap 2."""
    return build_pair(
        build_gpm(6, [[0, 1, 2], [3, 4, 5]], [1, 2]),
        build_gpm(6, [[0, 3], [1, 4], [2, 5]], [1, 1, 2]),
    )


@pytest.fixture
def dinitz() -> MatroidPair:
    """2x2 grid: element 2*row + col, m1 = rows, m2 = columns, all caps 1."""
    return build_pair(
        build_gpm(4, [[0, 1], [2, 3]], [1, 1]),
        build_gpm(4, [[0, 2], [1, 3]], [1, 1]),
    )


@pytest.fixture
def k22() -> BipartiteInstance:
    return complete_bipartite(2)


@pytest.fixture
def k33() -> BipartiteInstance:
    return complete_bipartite(3)


@pytest.fixture
def k33_pair(k33) -> MatroidPair:
    pair, _ = from_bipartite(k33)
    return pair


@pytest.fixture
def same_part_pair() -> MatroidPair:
    """Two elements sharing a cap-1 P-part, in different Q-parts."""
    return build_pair(
        build_gpm(2, [[0, 1]], [1]),
        build_gpm(2, [[0], [1]], [1, 1]),
    )


E1_JSON = {
    "elements": 6,
    "matroid1": {"parts": [[0, 1, 2], [3, 4, 5]], "caps": [1, 2]},
    "matroid2": {"parts": [[0, 3], [1, 4], [2, 5]], "caps": [1, 1, 2]},
}


def write_json(path: Path, payload) -> Path:
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


@pytest.fixture
def e1_file(tmp_path) -> Path:
    return write_json(tmp_path / "e1.json", E1_JSON)
