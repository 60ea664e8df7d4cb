"""
Ground truths and perturbed clusterings for the four synthetic experiments.

Every generator is a pure function of its inputs and an ``RngSeed``; outputs are
compacted by rank so labels that survive keep their ids.
"""
import logging

import numpy as np

from app.core.exceptions import InvalidParameterError
from app.schemas.experiment import GroundTruthKind, GroundTruthSpec, RngSeed
from app.schemas.partition import Labeling
from app.services.partition import labeling_from_codes
from app.utils.rng import make_rng

logger = logging.getLogger(__name__)

EQUAL_CLUSTERS = 32
ASYMMETRIC_MINOR_CLUSTERS = 5


def _round_half_up(x: float) -> int:
    return int(np.floor(x + 0.5))


def _even_split(total: int, parts: int) -> list[int]:
    base, extra = divmod(total, parts)
    return [base + 1] * extra + [base] * (parts - extra)


def ground_truth_sizes(spec: GroundTruthSpec) -> list[int]:
    if spec.kind is GroundTruthKind.EQUAL_32:
        return [spec.n // EQUAL_CLUSTERS] * EQUAL_CLUSTERS
    main = spec.n // 2
    second = spec.n // 4
    minor = _even_split(spec.n - main - second, ASYMMETRIC_MINOR_CLUSTERS)
    # tiny n leaves some minor clusters empty; they are dropped
    return [main, second, *[size for size in minor if size > 0]]


def ground_truth(spec: GroundTruthSpec) -> Labeling:
    """Clusters laid out in contiguous blocks, largest block first."""
    sizes = ground_truth_sizes(spec)
    codes = np.repeat(np.arange(len(sizes)), sizes)
    return labeling_from_codes(codes)


def _check_cluster_count(n: int, c: int) -> None:
    if c < 1:
        raise InvalidParameterError(f"cluster count must be >= 1, got {c}")
    if c > n:
        raise InvalidParameterError(f"cannot split beyond singletons: c={c} > n={n}")


def random_reassign(n: int, c: int, rng: RngSeed) -> Labeling:
    """Uniform assignment of n objects to exactly c non-empty clusters.

    One randomly chosen anchor object per cluster, every other object uniform.
    """
    _check_cluster_count(n, c)
    gen = make_rng(rng)
    codes = gen.integers(0, c, size=n)
    anchors = gen.choice(n, size=c, replace=False)
    codes[anchors] = np.arange(c)
    return labeling_from_codes(codes)


def merge_split(f: Labeling, c: int, rng: RngSeed) -> Labeling:
    """Merge random cluster pairs or split random clusters until exactly c remain."""
    _check_cluster_count(f.n, c)
    if c == f.M:
        return f
    gen = make_rng(rng)
    codes = f.as_array()
    clusters = [np.flatnonzero(codes == k) for k in range(f.M)]
    while len(clusters) > c:
        i, j = sorted(gen.choice(len(clusters), size=2, replace=False).tolist())
        merged = np.concatenate([clusters[i], clusters[j]])
        del clusters[j]
        clusters[i] = merged
    while len(clusters) < c:
        candidates = [k for k, members in enumerate(clusters) if members.size >= 2]
        k = candidates[int(gen.integers(len(candidates)))]
        members = clusters[k]
        moved = _round_half_up(gen.uniform() * members.size)
        moved = min(max(moved, 1), members.size - 1)
        chosen = np.zeros(members.size, dtype=bool)
        chosen[gen.choice(members.size, size=moved, replace=False)] = True
        clusters[k] = members[~chosen]
        clusters.append(members[chosen])
    out = np.empty(f.n, dtype=np.int64)
    for label, members in enumerate(clusters):
        out[members] = label
    return labeling_from_codes(out)


def shuffle_labels(f: Labeling, p: float, rng: RngSeed) -> Labeling:
    """Permute the labels of a random round(p*n) subset of objects among themselves."""
    if not 0.0 <= p <= 1.0:
        raise InvalidParameterError(f"proportion must lie in [0, 1], got {p}")
    gen = make_rng(rng)
    codes = f.as_array()
    k = _round_half_up(p * f.n)
    if k < 2:
        return f
    selected = gen.choice(f.n, size=k, replace=False)
    codes[selected] = codes[gen.permutation(selected)]
    return labeling_from_codes(codes)


def shuffle_outside_main(f: Labeling, p: float, main_cluster: int, rng: RngSeed) -> Labeling:
    """Give round(p * n_outside) objects outside ``main_cluster`` a uniform label over all clusters."""
    if not 0.0 <= p <= 1.0:
        raise InvalidParameterError(f"proportion must lie in [0, 1], got {p}")
    if not 0 <= main_cluster < f.M:
        raise InvalidParameterError(f"main cluster {main_cluster} does not exist (M={f.M})")
    gen = make_rng(rng)
    codes = f.as_array()
    outside = np.flatnonzero(codes != main_cluster)
    k = _round_half_up(p * outside.size)
    if k == 0:
        return f
    chosen = gen.choice(outside, size=k, replace=False)
    codes[chosen] = gen.integers(0, f.M, size=k)
    result = labeling_from_codes(codes)
    if result.M < f.M and logger.isEnabledFor(logging.DEBUG):
        logger.debug(f"[shuffle_outside_main] {f.M - result.M} clusters emptied at p={p}")
    return result
