"""
SCORE+ spectral community detection and the helpers around it.

SCORE+ works on the degree-regularized matrix L = D_d^{-1/2} A D_d^{-1/2} with
D_d = D + delta * mean_degree * I. Rows of the ratio matrix built from its leading
eigenvectors (each divided entrywise by the leading one) are clustered by k-means.
"""
import logging
from collections.abc import Iterable, Sequence
from typing import Optional, TextIO

import networkx as nx
import numpy as np
import scipy.linalg

from app.core.exceptions import (
    DisconnectedGraphError,
    EigensolverError,
    InvalidParameterError,
    LabelingMismatchError,
)
from app.schemas.community import Graph, ScorePlusParams
from app.schemas.experiment import ExperimentKind, ExperimentRecord, RngSeed, RunValue
from app.schemas.measures import EXPERIMENT_MEASURES, MeasureName, OmegaMode, RmiEncoding
from app.schemas.partition import Labeling
from app.services.experiments import aggregate_runs
from app.services.kmeans import kmeans
from app.services.measures import compare_labelings
from app.services.partition import labeling_from_codes
from app.utils.label_files import parse_edge_lines
from app.utils.rng import make_rng, sweep_stream_id

logger = logging.getLogger(__name__)

LEADING_ENTRY_TOL = 1e-12
EIGENVALUE_SLACK = 1e-8


def load_edge_list(stream: TextIO | Iterable[str]) -> Graph:
    """Read an edge list; node tokens are indexed in order of first appearance."""
    parsed = parse_edge_lines(stream)
    node_ids = {name: index for index, name in enumerate(parsed.nodes)}
    if parsed.self_loops:
        logger.warning(f"[load_edge_list] dropped {parsed.self_loops} self-loops")
    graph = Graph.from_pairs(
        len(node_ids),
        ((node_ids[u], node_ids[v]) for u, v in parsed.pairs),
        node_ids=node_ids,
    )
    duplicates = len(parsed.pairs) - graph.num_edges
    logger.info(
        f"[load_edge_list] {graph.num_nodes} nodes, {graph.num_edges} edges "
        f"({duplicates} duplicate lines collapsed)"
    )
    return graph


def largest_component(graph: Graph) -> tuple[Graph, np.ndarray]:
    """Subgraph on the largest connected component and the original index of each kept node."""
    if graph.num_nodes == 0:
        return graph, np.zeros(0, dtype=np.int64)
    components = sorted(nx.connected_components(graph.to_networkx()), key=lambda comp: (-len(comp), min(comp)))
    kept = np.array(sorted(components[0]), dtype=np.int64)
    position = {int(old): new for new, old in enumerate(kept)}
    node_ids = None
    if graph.node_ids is not None:
        node_ids = {name: position[old] for name, old in graph.node_ids.items() if old in position}
    sub = Graph.from_pairs(
        kept.size,
        ((position[i], position[j]) for i, j in graph.edges if i in position and j in position),
        node_ids=node_ids,
    )
    logger.info(
        f"[largest_component] kept {sub.num_nodes}/{graph.num_nodes} nodes "
        f"({100.0 * sub.num_nodes / graph.num_nodes:.1f}% coverage)"
    )
    return sub, kept


def regularized_matrix(graph: Graph, ridge_delta: float) -> np.ndarray:
    a = graph.adjacency()
    degrees = a.sum(axis=1)
    d_delta = degrees + ridge_delta * degrees.mean()
    if (d_delta <= 0).any():
        raise DisconnectedGraphError(f"{int((d_delta <= 0).sum())} nodes have zero regularized degree")
    scale = 1.0 / np.sqrt(d_delta)
    return a * scale[:, None] * scale[None, :]


def score_plus_embedding(graph: Graph, params: ScorePlusParams) -> np.ndarray:
    """Ratio matrix of SCORE+: row i holds eta_k(i) / eta_1(i) for the retained k >= 2."""
    c = params.c
    if c + 1 > graph.num_nodes:
        raise InvalidParameterError(f"c + 1 = {c + 1} exceeds the {graph.num_nodes} nodes")
    components = nx.number_connected_components(graph.to_networkx())
    if components > 1:
        raise DisconnectedGraphError(f"graph has {components} connected components")
    matrix = regularized_matrix(graph, params.ridge_delta)
    try:
        eigenvalues, eigenvectors = scipy.linalg.eigh(matrix)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as e:
        raise EigensolverError(f"symmetric eigensolver did not converge: {e}")
    if eigenvalues.min() < -1.0 - EIGENVALUE_SLACK or eigenvalues.max() > 1.0 + EIGENVALUE_SLACK:
        logger.warning(
            f"[score_plus_embedding] eigenvalues outside [-1, 1]: "
            f"[{eigenvalues.min():.3g}, {eigenvalues.max():.3g}]"
        )
    # largest magnitude first, positive before negative on ties
    order = np.lexsort((-eigenvalues, -np.abs(eigenvalues)))[: c + 1]
    leading_values = eigenvalues[order]
    vectors = eigenvectors[:, order].copy()
    for k in range(vectors.shape[1]):
        pivot = int(np.argmax(np.abs(vectors[:, k])))
        if vectors[pivot, k] < 0:
            vectors[:, k] = -vectors[:, k]

    retained = c
    if abs(leading_values[c - 1]) > 0:
        gap = 1.0 - abs(leading_values[c]) / abs(leading_values[c - 1])
        if gap < params.eigengap_threshold:
            retained = c + 1
    logger.debug(f"[score_plus_embedding] c={c} retained {retained} eigenvectors")

    first = vectors[:, 0]
    zero = np.abs(first) < LEADING_ENTRY_TOL
    if zero.any():
        raise DisconnectedGraphError(f"leading eigenvector has {int(zero.sum())} zero entries")
    return vectors[:, 1:retained] / first[:, None]


def _cluster_embedding(embedding: np.ndarray, params: ScorePlusParams, seed: RngSeed) -> Labeling:
    result = kmeans(
        embedding,
        params.c,
        restarts=params.kmeans_restarts,
        max_iters=params.kmeans_max_iters,
        seed=seed,
    )
    return labeling_from_codes(result.labels)


def score_plus(graph: Graph, params: ScorePlusParams) -> Labeling:
    return _cluster_embedding(score_plus_embedding(graph, params), params, params.seed)


def sample_sbm(
    block_sizes: Sequence[int],
    p_in: float,
    p_out: float,
    seed: RngSeed,
) -> tuple[Graph, Labeling]:
    """Stochastic block model: every pair independently, p_in within blocks, p_out across."""
    if not (0.0 <= p_in <= 1.0 and 0.0 <= p_out <= 1.0):
        raise InvalidParameterError("edge probabilities must lie in [0, 1]")
    if not block_sizes or min(block_sizes) < 1:
        raise InvalidParameterError("block sizes must be positive")
    gen = make_rng(seed)
    blocks = np.repeat(np.arange(len(block_sizes)), block_sizes)
    n = blocks.size
    upper_i, upper_j = np.triu_indices(n, k=1)
    probability = np.where(blocks[upper_i] == blocks[upper_j], p_in, p_out)
    present = gen.random(upper_i.size) < probability
    graph = Graph(
        num_nodes=n,
        edges=tuple(zip(upper_i[present].tolist(), upper_j[present].tolist())),
    )
    return graph, labeling_from_codes(blocks)


def sweep_communities(
    graph: Graph,
    truth: Labeling,
    c_range: Sequence[int],
    params: ScorePlusParams,
    runs: int,
    measures: Sequence[MeasureName] = EXPERIMENT_MEASURES,
    omega_mode: OmegaMode = OmegaMode.AUTO,
    rmi_encoding: Optional[RmiEncoding] = None,
) -> tuple[list[ExperimentRecord], list[RunValue]]:
    """Similarity between ``truth`` and SCORE+ labels for every c, over ``runs`` k-means seeds.

    The spectral step is deterministic, so it is computed once per c; run r at c
    clusters with its own stream ``sweep_stream_id(c, r)``.
    """
    if truth.n != graph.num_nodes:
        raise LabelingMismatchError(truth.n, graph.num_nodes)
    if runs < 1:
        raise InvalidParameterError("runs must be >= 1")
    values: list[RunValue] = []
    for c in c_range:
        c_params = ScorePlusParams(**{**params.model_dump(), "c": int(c)})
        embedding = score_plus_embedding(graph, c_params)
        for run in range(runs):
            seed = params.seed.substream(sweep_stream_id(int(c), run))
            estimate = _cluster_embedding(embedding, c_params, seed)
            for result in compare_labelings(
                truth, estimate, measures, omega_mode=omega_mode, rmi_encoding=rmi_encoding
            ):
                values.append(
                    RunValue(
                        experiment=ExperimentKind.NETWORK,
                        param=float(c),
                        measure=result.measure_name,
                        run=run,
                        value=result.value,
                        defined=result.defined,
                    )
                )
        logger.info(f"[sweep_communities] c={c} done ({runs} runs)")
    return aggregate_runs(values, measures), values
