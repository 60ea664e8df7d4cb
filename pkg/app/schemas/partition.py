"""
Labelings, contingency tables and pair statistics.
"""
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class Labeling(BaseModel):
    """An assignment of n objects to compact cluster labels 0..M-1."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1, description="Number of objects")
    labels: tuple[int, ...] = Field(..., description="Cluster index of every object")
    M: int = Field(..., ge=1, description="Number of non-empty clusters")

    @model_validator(mode="after")
    def check_compact(self) -> "Labeling":
        if len(self.labels) != self.n:
            raise ValueError(f"labels has length {len(self.labels)}, expected n={self.n}")
        if self.M > self.n:
            raise ValueError("more clusters than objects")
        present = np.unique(np.asarray(self.labels, dtype=np.int64))
        if present.size != self.M or present[0] != 0 or present[-1] != self.M - 1:
            raise ValueError("labels must use every value in [0, M) and nothing else")
        return self

    def as_array(self) -> np.ndarray:
        return np.asarray(self.labels, dtype=np.int64)

    def cluster_sizes(self) -> np.ndarray:
        return np.bincount(self.as_array(), minlength=self.M)


class ContingencyTable(BaseModel):
    """Joint counts of two labelings with their marginals."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    counts: np.ndarray
    row_sums: np.ndarray
    col_sums: np.ndarray
    n: int

    @model_validator(mode="after")
    def check_marginals(self) -> "ContingencyTable":
        counts = self.counts
        if counts.ndim != 2 or (counts < 0).any():
            raise ValueError("counts must be a non-negative 2-d integer array")
        if int(counts.sum()) != self.n:
            raise ValueError("table entries do not sum to n")
        if not np.array_equal(counts.sum(axis=1), self.row_sums):
            raise ValueError("row_sums do not match the table")
        if not np.array_equal(counts.sum(axis=0), self.col_sums):
            raise ValueError("col_sums do not match the table")
        if (self.row_sums < 1).any() or (self.col_sums < 1).any():
            raise ValueError("empty cluster in contingency table")
        for array in (counts, self.row_sums, self.col_sums):
            array.setflags(write=False)
        return self

    @property
    def shape(self) -> tuple[int, int]:
        return int(self.counts.shape[0]), int(self.counts.shape[1])

    def transpose(self) -> "ContingencyTable":
        return ContingencyTable(
            counts=self.counts.T.copy(),
            row_sums=self.col_sums.copy(),
            col_sums=self.row_sums.copy(),
            n=self.n,
        )

    def is_same_partition(self) -> bool:
        """True when both labelings induce the same partition (up to renaming)."""
        nonzero = int(np.count_nonzero(self.counts))
        return self.shape[0] == self.shape[1] == nonzero


class PairStats(BaseModel):
    """Agreement counts over all unordered object pairs and the derived Bernoulli parameters.

    ``n11`` counts pairs together under both labelings, ``n10`` pairs together under f only,
    ``n01`` pairs together under g only and ``n00`` pairs apart under both.
    """

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=2)
    n11: int = Field(..., ge=0)
    n10: int = Field(..., ge=0)
    n01: int = Field(..., ge=0)
    n00: int = Field(..., ge=0)
    q_f: float = Field(..., ge=0.0, le=1.0)
    q_g: float = Field(..., ge=0.0, le=1.0)
    q_f_given_G: Optional[float] = Field(None, ge=0.0, le=1.0)
    q_f_given_Gc: Optional[float] = Field(None, ge=0.0, le=1.0)

    @model_validator(mode="after")
    def check_total(self) -> "PairStats":
        if self.n11 + self.n10 + self.n01 + self.n00 != self.total_pairs:
            raise ValueError("pair counts do not sum to C(n, 2)")
        return self

    @property
    def total_pairs(self) -> int:
        return self.n * (self.n - 1) // 2

    @property
    def same_f(self) -> int:
        return self.n11 + self.n10

    @property
    def same_g(self) -> int:
        return self.n11 + self.n01

    @classmethod
    def from_counts(cls, n: int, n11: int, n10: int, n01: int, n00: int) -> "PairStats":
        total = n * (n - 1) // 2
        same_g = n11 + n01
        apart_g = n10 + n00
        return cls(
            n=n,
            n11=n11,
            n10=n10,
            n01=n01,
            n00=n00,
            q_f=(n11 + n10) / total,
            q_g=same_g / total,
            q_f_given_G=n11 / same_g if same_g > 0 else None,
            q_f_given_Gc=n10 / apart_g if apart_g > 0 else None,
        )

    def swapped(self) -> "PairStats":
        """Statistics of the exchanged pair (g, f)."""
        return PairStats.from_counts(self.n, self.n11, self.n01, self.n10, self.n00)
