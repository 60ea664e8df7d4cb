"""
Graph and SCORE+ parameter models.
"""
from collections.abc import Iterable
from typing import Optional

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.core.config import settings
from app.schemas.experiment import RngSeed


class Graph(BaseModel):
    """Undirected simple graph on nodes 0..num_nodes-1.

    ``edges`` holds each edge once as ``(i, j)`` with ``i < j``, sorted.
    """

    model_config = ConfigDict(frozen=True)

    num_nodes: int = Field(..., ge=0)
    edges: tuple[tuple[int, int], ...] = ()
    node_ids: Optional[dict[str, int]] = None

    @model_validator(mode="after")
    def check_simple(self) -> "Graph":
        seen: set[tuple[int, int]] = set()
        for i, j in self.edges:
            if not (0 <= i < j < self.num_nodes):
                raise ValueError(f"edge ({i}, {j}) is not a canonical pair of valid nodes")
            if (i, j) in seen:
                raise ValueError(f"duplicate edge ({i}, {j})")
            seen.add((i, j))
        return self

    @classmethod
    def from_pairs(cls, num_nodes: int, pairs: Iterable[tuple[int, int]], node_ids: Optional[dict[str, int]] = None) -> "Graph":
        canonical = {(min(i, j), max(i, j)) for i, j in pairs if i != j}
        return cls(num_nodes=num_nodes, edges=tuple(sorted(canonical)), node_ids=node_ids)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.num_nodes, self.num_nodes), dtype=np.float64)
        if self.edges:
            idx = np.asarray(self.edges, dtype=np.int64)
            a[idx[:, 0], idx[:, 1]] = 1.0
            a[idx[:, 1], idx[:, 0]] = 1.0
        return a

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.num_nodes))
        g.add_edges_from(self.edges)
        return g


class ScorePlusParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    c: int = Field(..., ge=2, description="Target community count")
    ridge_delta: float = Field(default_factory=lambda: settings.SCORE_PLUS_RIDGE_DELTA, ge=0.0)
    eigengap_threshold: float = Field(default_factory=lambda: settings.SCORE_PLUS_EIGENGAP_THRESHOLD, gt=0.0, lt=1.0)
    kmeans_restarts: int = Field(default_factory=lambda: settings.KMEANS_RESTARTS, ge=1)
    kmeans_max_iters: int = Field(default_factory=lambda: settings.KMEANS_MAX_ITERS, ge=1)
    seed: RngSeed = Field(default_factory=RngSeed)
