"""
Labeling construction, contingency tables and pair statistics.

Pair counts are derived from the contingency table with binomial sums; the
direct enumeration over all object pairs is kept as a verification oracle.
"""
import logging
from collections.abc import Hashable, Sequence
from itertools import combinations

import numpy as np

from app.core.config import settings
from app.core.exceptions import (
    EmptyLabelingError,
    InvalidParameterError,
    LabelingMismatchError,
    TooFewObjectsError,
)
from app.schemas.partition import ContingencyTable, Labeling, PairStats

logger = logging.getLogger(__name__)


def make_labeling(raw_labels: Sequence[Hashable]) -> Labeling:
    """Remap arbitrary label values to 0..M-1 in order of first appearance."""
    if len(raw_labels) == 0:
        raise EmptyLabelingError()
    codes: dict[Hashable, int] = {}
    labels = tuple(codes.setdefault(value, len(codes)) for value in raw_labels)
    return Labeling(n=len(labels), labels=labels, M=len(codes))


def labeling_from_codes(codes: np.ndarray) -> Labeling:
    """Compact integer codes by rank, so already-compact ids keep their value."""
    codes = np.asarray(codes)
    if codes.size == 0:
        raise EmptyLabelingError()
    uniques, inverse = np.unique(codes, return_inverse=True)
    return Labeling(n=int(codes.size), labels=tuple(inverse.tolist()), M=int(uniques.size))


def contingency(f: Labeling, g: Labeling) -> ContingencyTable:
    if f.n != g.n:
        raise LabelingMismatchError(f.n, g.n)
    counts = np.zeros((f.M, g.M), dtype=np.int64)
    np.add.at(counts, (f.as_array(), g.as_array()), 1)
    return ContingencyTable(
        counts=counts,
        row_sums=counts.sum(axis=1),
        col_sums=counts.sum(axis=0),
        n=f.n,
    )


def _pairs(values: np.ndarray) -> int:
    values = values.astype(np.int64)
    return int((values * (values - 1) // 2).sum())


def pair_stats_from_table(table: ContingencyTable) -> PairStats:
    if table.n < 2:
        raise TooFewObjectsError(table.n)
    n11 = _pairs(table.counts)
    same_f = _pairs(table.row_sums)
    same_g = _pairs(table.col_sums)
    total = table.n * (table.n - 1) // 2
    n10 = same_f - n11
    n01 = same_g - n11
    return PairStats.from_counts(table.n, n11, n10, n01, total - n11 - n10 - n01)


def pair_stats(f: Labeling, g: Labeling) -> PairStats:
    if f.n != g.n:
        raise LabelingMismatchError(f.n, g.n)
    if f.n < 2:
        raise TooFewObjectsError(f.n)
    return pair_stats_from_table(contingency(f, g))


def pair_stats_bruteforce(f: Labeling, g: Labeling) -> PairStats:
    """Classify every unordered object pair directly; O(n^2), for verification."""
    if f.n != g.n:
        raise LabelingMismatchError(f.n, g.n)
    if f.n < 2:
        raise TooFewObjectsError(f.n)
    if f.n > settings.BRUTEFORCE_MAX_N:
        raise InvalidParameterError(f"pair enumeration is limited to n <= {settings.BRUTEFORCE_MAX_N}")
    counts = {(True, True): 0, (True, False): 0, (False, True): 0, (False, False): 0}
    for i, j in combinations(range(f.n), 2):
        counts[(f.labels[i] == f.labels[j], g.labels[i] == g.labels[j])] += 1
    return PairStats.from_counts(
        f.n,
        counts[(True, True)],
        counts[(True, False)],
        counts[(False, True)],
        counts[(False, False)],
    )


def marginal_entropy(sums: Sequence[int] | np.ndarray, n: int) -> float:
    """Shannon entropy (nats) of the distribution sums / n, with 0 log 0 = 0."""
    counts = np.asarray(sums, dtype=np.float64)
    if n < 1 or counts.sum() < 1:
        raise InvalidParameterError("entropy of an empty distribution")
    if (counts < 0).any():
        raise InvalidParameterError("negative marginal count")
    p = counts[counts > 0] / n
    return float(-(p * np.log(p)).sum())
