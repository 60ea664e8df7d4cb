"""
Lloyd's k-means with k-means++ seeding and best-of-restarts selection.
"""
import logging
from typing import NamedTuple

import numpy as np

from app.core.exceptions import InvalidParameterError
from app.schemas.experiment import RngSeed
from app.utils.rng import make_rng

logger = logging.getLogger(__name__)

COST_TOL = 1e-9


class KMeansResult(NamedTuple):
    labels: np.ndarray
    centers: np.ndarray
    inertia: float
    n_iter: int
    cost_history: list[float]


def _sq_distances(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    return ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)


def kmeans_plusplus(points: np.ndarray, k: int, gen: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    chosen = [int(gen.integers(n))]
    closest = ((points - points[chosen[0]]) ** 2).sum(axis=1)
    for _ in range(1, k):
        total = closest.sum()
        if total > 0:
            index = int(gen.choice(n, p=closest / total))
        else:
            # every point coincides with a center; take any unused point
            unused = np.setdiff1d(np.arange(n), chosen)
            index = int(gen.choice(unused))
        chosen.append(index)
        closest = np.minimum(closest, ((points - points[index]) ** 2).sum(axis=1))
    return points[chosen].astype(np.float64)


def _repair_empty(points: np.ndarray, labels: np.ndarray, centers: np.ndarray, k: int) -> None:
    """Give every empty cluster the point farthest from its center (in place)."""
    for empty in np.flatnonzero(np.bincount(labels, minlength=k) == 0):
        sizes = np.bincount(labels, minlength=k)
        own = ((points - centers[labels]) ** 2).sum(axis=1)
        own[sizes[labels] < 2] = -1.0
        donor = int(np.argmax(own))
        labels[donor] = empty
        centers[empty] = points[donor]


def _lloyd(points: np.ndarray, centers: np.ndarray, k: int, max_iters: int) -> KMeansResult:
    labels = np.full(points.shape[0], -1, dtype=np.int64)
    history: list[float] = []
    n_iter = 0
    for n_iter in range(1, max_iters + 1):
        new_labels = np.argmin(_sq_distances(points, centers), axis=1)
        _repair_empty(points, new_labels, centers, k)
        cost = float(((points - centers[new_labels]) ** 2).sum())
        if history:
            assert cost <= history[-1] + COST_TOL * max(1.0, history[-1]), "k-means cost increased"
        history.append(cost)
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for j in range(k):
            centers[j] = points[labels == j].mean(axis=0)
    inertia = float(((points - centers[labels]) ** 2).sum())
    return KMeansResult(labels=labels, centers=centers, inertia=inertia, n_iter=n_iter, cost_history=history)


def kmeans(
    points: np.ndarray,
    k: int,
    restarts: int,
    max_iters: int,
    seed: RngSeed,
) -> KMeansResult:
    """Best of ``restarts`` runs by within-cluster sum of squares; exactly k non-empty clusters."""
    points = np.asarray(points, dtype=np.float64)
    if points.ndim == 1:
        points = points[:, None]
    if points.ndim != 2:
        raise InvalidParameterError("points must be a list of equal-length vectors")
    if not 1 <= k <= points.shape[0]:
        raise InvalidParameterError(f"k={k} must lie in [1, {points.shape[0]}]")
    gen = make_rng(seed)
    best: KMeansResult | None = None
    for _ in range(restarts):
        result = _lloyd(points, kmeans_plusplus(points, k, gen), k, max_iters)
        if best is None or result.inertia < best.inertia:
            best = result
    assert best is not None
    logger.debug(f"[kmeans] k={k} restarts={restarts} inertia={best.inertia:.6g} iters={best.n_iter}")
    return best
