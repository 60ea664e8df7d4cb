import numpy as np
import pytest

from app.core.exceptions import InvalidParameterError
from app.schemas.experiment import RngSeed
from app.services.kmeans import kmeans


def _cost(points: np.ndarray, labels: np.ndarray, k: int) -> float:
    total = 0.0
    for j in range(k):
        members = points[labels == j]
        if len(members):
            total += float(((members - members.mean(axis=0)) ** 2).sum())
    return total


def test_well_separated_pairs():
    points = np.array([[0.0, 0.0], [0.0, 0.1], [10.0, 10.0], [10.0, 10.1]])
    result = kmeans(points, 2, restarts=5, max_iters=50, seed=RngSeed(seed=1))
    assert result.labels[0] == result.labels[1]
    assert result.labels[2] == result.labels[3]
    assert result.labels[0] != result.labels[2]
    assert result.inertia == pytest.approx(0.01)


def test_k_equals_points_gives_singletons():
    points = np.arange(12, dtype=float).reshape(6, 2)
    result = kmeans(points, 6, restarts=3, max_iters=20, seed=RngSeed())
    assert sorted(result.labels.tolist()) == list(range(6))
    assert result.inertia == pytest.approx(0.0)


def test_identical_points_still_fill_every_cluster():
    points = np.zeros((5, 1))
    result = kmeans(points, 3, restarts=2, max_iters=10, seed=RngSeed())
    assert (np.bincount(result.labels, minlength=3) > 0).all()


def test_cost_never_increases(gen):
    points = gen.normal(size=(300, 3))
    result = kmeans(points, 6, restarts=4, max_iters=100, seed=RngSeed(seed=2))
    history = result.cost_history
    assert all(later <= earlier * (1 + 1e-9) for earlier, later in zip(history, history[1:]))


def test_deterministic_given_seed(gen):
    points = gen.normal(size=(100, 2))
    first = kmeans(points, 4, restarts=3, max_iters=50, seed=RngSeed(seed=11))
    second = kmeans(points, 4, restarts=3, max_iters=50, seed=RngSeed(seed=11))
    assert np.array_equal(first.labels, second.labels)


def test_blobs_beat_random_assignments(gen):
    centers = np.array([[0.0, 0.0], [6.0, 0.0], [0.0, 6.0]])
    points = np.concatenate([gen.normal(loc=c, size=(40, 2)) for c in centers])
    result = kmeans(points, 3, restarts=10, max_iters=100, seed=RngSeed(seed=4))
    random_costs = [_cost(points, gen.integers(0, 3, size=len(points)), 3) for _ in range(1000)]
    assert result.inertia <= min(random_costs)
    assert result.inertia == pytest.approx(_cost(points, result.labels, 3))


def test_too_many_clusters():
    with pytest.raises(InvalidParameterError):
        kmeans(np.zeros((3, 2)), 4, restarts=1, max_iters=10, seed=RngSeed())
