from collections.abc import Callable
from pathlib import Path

import numpy as np
import pytest
from fastapi.testclient import TestClient

from app.main import app
from app.schemas.community import Graph
from app.schemas.partition import Labeling
from app.services.partition import labeling_from_codes, make_labeling

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture
def client() -> TestClient:
    return TestClient(app)


@pytest.fixture
def gen() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def random_labeling(gen: np.random.Generator) -> Callable[[int, int], Labeling]:
    def build(n: int, max_clusters: int) -> Labeling:
        return labeling_from_codes(gen.integers(0, max_clusters, size=n))

    return build


@pytest.fixture
def worked_pair() -> tuple[Labeling, Labeling]:
    return make_labeling([0, 0, 1, 1]), make_labeling([0, 1, 0, 1])


def bridged_cliques(size: int = 10, count: int = 2) -> tuple[Graph, Labeling]:
    """``count`` cliques of ``size`` nodes, consecutive cliques joined by one bridge edge."""
    pairs = []
    for block in range(count):
        start = block * size
        pairs.extend((start + i, start + j) for i in range(size) for j in range(i + 1, size))
        if block > 0:
            pairs.append((start - 1, start))
    truth = make_labeling([block for block in range(count) for _ in range(size)])
    return Graph.from_pairs(size * count, pairs), truth


@pytest.fixture
def cliques() -> tuple[Graph, Labeling]:
    return bridged_cliques()


def write_lines(path: Path, lines: list[str]) -> Path:
    path.write_text("".join(f"{line}\n" for line in lines), encoding="utf-8")
    return path
