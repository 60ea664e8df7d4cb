"""
Clustering similarity measures: NMI, AMI, RI/ARI, RMI and resampled mutual
information (ResMI).

All logarithms are natural. Degenerate denominators never produce NaN: the
result carries ``defined=False`` and the conventional value 1 when the two
labelings induce the same partition, 0 otherwise.
"""
import logging
import math
from collections.abc import Sequence
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import gammaln

from app.core.config import settings
from app.core.exceptions import InvalidParameterError, NumericOverflowError
from app.schemas.measures import (
    MeasureName,
    MeasureResult,
    NmiNormalization,
    OmegaMethod,
    OmegaMode,
    RmiEncoding,
)
from app.schemas.partition import ContingencyTable, Labeling, PairStats
from app.services.omega import exact_omega_feasible, log_omega_approx, log_omega_exact
from app.services.partition import (
    contingency,
    marginal_entropy,
    pair_stats_bruteforce,
    pair_stats_from_table,
)

logger = logging.getLogger(__name__)

BINARY_ENTROPY_TOL = 1e-12
DIRICHLET_LOG_ALPHA_BOUNDS = (-10.0, 12.0)
DIRICHLET_GRID_STEP = 0.5


def _degenerate(name: MeasureName, same_partition: bool) -> MeasureResult:
    return MeasureResult(measure_name=name, value=1.0 if same_partition else 0.0, defined=False)


def binary_entropy(q: float) -> float:
    """Entropy in nats of a Bernoulli(q) variable."""
    if q < -BINARY_ENTROPY_TOL or q > 1.0 + BINARY_ENTROPY_TOL or math.isnan(q):
        raise InvalidParameterError(f"binary entropy needs q in [0, 1], got {q!r}")
    if q <= 0.0 or q >= 1.0:
        return 0.0
    return -q * math.log(q) - (1.0 - q) * math.log(1.0 - q)


def mutual_information_from_counts(counts: np.ndarray) -> float:
    """Mutual information (nats) of the empirical joint law given by a count table."""
    counts = np.asarray(counts, dtype=np.float64)
    n = counts.sum()
    if n <= 0:
        return 0.0
    rows = counts.sum(axis=1)
    cols = counts.sum(axis=0)
    i, j = np.nonzero(counts)
    nij = counts[i, j]
    mi = float((nij / n * np.log(nij * n / (rows[i] * cols[j]))).sum())
    return max(mi, 0.0)


def mutual_information(t: ContingencyTable) -> float:
    return mutual_information_from_counts(t.counts)


def _entropies(t: ContingencyTable) -> tuple[float, float]:
    return marginal_entropy(t.row_sums, t.n), marginal_entropy(t.col_sums, t.n)


def nmi(t: ContingencyTable, norm: NmiNormalization = NmiNormalization.AVERAGE) -> MeasureResult:
    h_f, h_g = _entropies(t)
    if norm is NmiNormalization.AVERAGE:
        normalizer = 0.5 * (h_f + h_g)
    elif norm is NmiNormalization.MAX:
        normalizer = max(h_f, h_g)
    else:
        normalizer = min(h_f, h_g)
    if normalizer <= settings.DEGENERATE_TOL:
        return _degenerate(MeasureName.NMI, t.is_same_partition())
    value = mutual_information(t) / normalizer
    return MeasureResult(measure_name=MeasureName.NMI, value=min(max(value, 0.0), 1.0))


@lru_cache(maxsize=64)
def _log_factorials(n: int) -> np.ndarray:
    table = gammaln(np.arange(n + 1, dtype=np.float64) + 1.0)
    table.setflags(write=False)
    return table


def expected_mi_permutation(t: ContingencyTable) -> float:
    """E[I] under the permutation model with both marginals fixed.

    Exact hypergeometric sum over the feasible values of every cell. Cells only
    depend on their (row sum, column sum) pair, so equal marginals are grouped.
    """
    n = t.n
    lf = _log_factorials(n)
    a_values, a_mult = np.unique(t.row_sums, return_counts=True)
    b_values, b_mult = np.unique(t.col_sums, return_counts=True)
    log_n = math.log(n)
    emi = 0.0
    for a, ma in zip(a_values.tolist(), a_mult.tolist()):
        for b, mb in zip(b_values.tolist(), b_mult.tolist()):
            lo = max(1, a + b - n)
            hi = min(a, b)
            if hi < lo:
                continue
            nij = np.arange(lo, hi + 1)
            log_p = (
                lf[a] + lf[b] + lf[n - a] + lf[n - b] - lf[n]
                - lf[nij] - lf[a - nij] - lf[b - nij] - lf[n - a - b + nij]
            )
            term = nij / n * (log_n + np.log(nij) - math.log(a) - math.log(b))
            emi += ma * mb * float((term * np.exp(log_p)).sum())
    if not math.isfinite(emi):
        raise NumericOverflowError("expected mutual information")
    return max(emi, 0.0)


def ami(t: ContingencyTable) -> MeasureResult:
    h_f, h_g = _entropies(t)
    emi = expected_mi_permutation(t)
    denominator = 0.5 * (h_f + h_g) - emi
    if denominator <= settings.DEGENERATE_TOL:
        return _degenerate(MeasureName.AMI, t.is_same_partition())
    value = (mutual_information(t) - emi) / denominator
    return MeasureResult(measure_name=MeasureName.AMI, value=value)


def rand_index(p: PairStats) -> MeasureResult:
    return MeasureResult(measure_name=MeasureName.RI, value=(p.n11 + p.n00) / p.total_pairs)


def ari(p: PairStats) -> MeasureResult:
    expected = p.same_f * p.same_g / p.total_pairs
    denominator = 0.5 * (p.same_f + p.same_g) - expected
    if abs(denominator) <= settings.DEGENERATE_TOL:
        return _degenerate(MeasureName.ARI, p.n10 == 0 and p.n01 == 0)
    return MeasureResult(measure_name=MeasureName.ARI, value=(p.n11 - expected) / denominator)


def _choose_omega(row_sums: Sequence[int], col_sums: Sequence[int], mode: OmegaMode) -> OmegaMethod:
    if mode is OmegaMode.EXACT:
        return OmegaMethod.EXACT
    if mode is OmegaMode.APPROX:
        return OmegaMethod.APPROX
    return OmegaMethod.EXACT if exact_omega_feasible(row_sums, col_sums) else OmegaMethod.APPROX


def _log_omega(row_sums: Sequence[int], col_sums: Sequence[int], method: OmegaMethod) -> float:
    if method is OmegaMethod.EXACT:
        return log_omega_exact(row_sums, col_sums)
    return log_omega_approx(row_sums, col_sums)


def _rmi_value(mi: float, n: int, row_sums: Sequence[int], col_sums: Sequence[int], method: OmegaMethod) -> float:
    return mi - _log_omega(row_sums, col_sums, method) / n


def _polya_cost(log_alpha: float, row_sums: np.ndarray, cells: np.ndarray, n_cols: int) -> float:
    alpha = math.exp(log_alpha)
    total = n_cols * alpha
    return float(
        (gammaln(row_sums + total) - gammaln(total)).sum()
        - (gammaln(cells + alpha) - gammaln(alpha)).sum()
    )


def _polya_code_length(row_sums: Sequence[int], cells: Sequence[int], n_cols: int) -> float:
    """Shortest Dirichlet-multinomial code length (nats) for labels over ``n_cols`` symbols.

    Each row is coded with its own symmetric Dirichlet-multinomial sharing one
    concentration, minimised over log-concentration; the uniform code (infinite
    concentration) is always a candidate.
    """
    if n_cols <= 1:
        return 0.0
    rows = np.sort(np.asarray(row_sums, dtype=np.float64))
    rows = rows[rows > 0]
    nonzero = np.sort(np.asarray(cells, dtype=np.float64))
    nonzero = nonzero[nonzero > 0]
    uniform = float(rows.sum()) * math.log(n_cols)
    lo, hi = DIRICHLET_LOG_ALPHA_BOUNDS
    grid = np.arange(lo, hi + DIRICHLET_GRID_STEP / 2, DIRICHLET_GRID_STEP)
    costs = [_polya_cost(float(t), rows, nonzero, n_cols) for t in grid]
    best = int(np.argmin(costs))
    refined = minimize_scalar(
        _polya_cost,
        bounds=(float(grid[max(best - 1, 0)]), float(grid[min(best + 1, len(grid) - 1)])),
        args=(rows, nonzero, n_cols),
        method="bounded",
        options={"xatol": 1e-8},
    )
    length = min(uniform, costs[best], float(refined.fun))
    if not math.isfinite(length):
        raise NumericOverflowError("Dirichlet-multinomial code length")
    return length


def _dirichlet_direction(given_sums: Sequence[int], cells: Sequence[int], target_sums: Sequence[int], n: int) -> float:
    n_cols = int(np.count_nonzero(target_sums))
    without = _polya_code_length([n], target_sums, n_cols)
    given = _polya_code_length(given_sums, cells, n_cols)
    return (without - given) / n


def _dirichlet_rmi(row_sums: Sequence[int], col_sums: Sequence[int], cells: Sequence[int], n: int) -> float:
    return 0.5 * (
        _dirichlet_direction(row_sums, cells, col_sums, n) + _dirichlet_direction(col_sums, cells, row_sums, n)
    )


def _flat_rmi(t: ContingencyTable, normalized: bool, omega_mode: OmegaMode) -> MeasureResult:
    method = _choose_omega(t.row_sums, t.col_sums, omega_mode)
    raw = _rmi_value(mutual_information(t), t.n, t.row_sums, t.col_sums, method)
    tags = {"omega_method": method, "encoding": RmiEncoding.FLAT}
    if not normalized:
        return MeasureResult(measure_name=MeasureName.RMI, value=raw, unit="nats", **tags)
    h_f, h_g = _entropies(t)
    self_f = _rmi_value(h_f, t.n, t.row_sums, t.row_sums, method)
    self_g = _rmi_value(h_g, t.n, t.col_sums, t.col_sums, method)
    denominator = 0.5 * (self_f + self_g)
    if denominator <= settings.DEGENERATE_TOL:
        return _degenerate(MeasureName.RMI, t.is_same_partition()).model_copy(update=tags)
    return MeasureResult(measure_name=MeasureName.RMI, value=raw / denominator, **tags)


def _dirichlet_rmi_result(t: ContingencyTable, normalized: bool) -> MeasureResult:
    cells = t.counts[t.counts > 0]
    raw = _dirichlet_rmi(t.row_sums, t.col_sums, cells, t.n)
    if not normalized:
        return MeasureResult(measure_name=MeasureName.RMI, value=raw, unit="nats", encoding=RmiEncoding.DIRICHLET)
    self_f = _dirichlet_rmi(t.row_sums, t.row_sums, t.row_sums, t.n)
    self_g = _dirichlet_rmi(t.col_sums, t.col_sums, t.col_sums, t.n)
    denominator = 0.5 * (self_f + self_g)
    if denominator <= settings.DEGENERATE_TOL:
        result = _degenerate(MeasureName.RMI, t.is_same_partition())
        return result.model_copy(update={"encoding": RmiEncoding.DIRICHLET})
    return MeasureResult(measure_name=MeasureName.RMI, value=raw / denominator, encoding=RmiEncoding.DIRICHLET)


def rmi(
    t: ContingencyTable,
    normalized: bool = True,
    omega_mode: OmegaMode = OmegaMode.AUTO,
    encoding: Optional[RmiEncoding] = None,
) -> MeasureResult:
    """Reduced mutual information, raw (nats) or normalized by the mean self-RMI.

    ``encoding`` selects the correction subtracted from the mutual information:
    ``flat`` uses ``ln Omega / n`` (``omega_mode`` picks exact counting or the
    closed-form estimate), ``dirichlet`` uses Dirichlet-multinomial code lengths
    averaged over both directions. ``None`` falls back to ``settings.RMI_ENCODING``.
    """
    encoding = RmiEncoding(encoding or settings.RMI_ENCODING)
    if encoding is RmiEncoding.FLAT:
        return _flat_rmi(t, normalized, omega_mode)
    return _dirichlet_rmi_result(t, normalized)


def resmi_numerator(p: PairStats) -> float:
    """Mutual information between the same-cluster indicators of a random object pair."""
    conditional = 0.0
    if p.q_f_given_G is not None:
        conditional += p.q_g * binary_entropy(p.q_f_given_G)
    if p.q_f_given_Gc is not None:
        conditional += (1.0 - p.q_g) * binary_entropy(p.q_f_given_Gc)
    return binary_entropy(p.q_f) - conditional


def resmi(p: PairStats) -> MeasureResult:
    denominator = 0.5 * (binary_entropy(p.q_f) + binary_entropy(p.q_g))
    if denominator <= settings.DEGENERATE_TOL:
        return _degenerate(MeasureName.RESMI, p.n10 == 0 and p.n01 == 0)
    value = resmi_numerator(p) / denominator
    return MeasureResult(measure_name=MeasureName.RESMI, value=min(max(value, 0.0), 1.0))


def resmi_indicator_oracle(f: Labeling, g: Labeling) -> float:
    """ResMI numerator as the mutual information of the 2x2 pair-indicator table."""
    p = pair_stats_bruteforce(f, g)
    table = np.array([[p.n11, p.n10], [p.n01, p.n00]], dtype=np.int64)
    return mutual_information_from_counts(table)


def compare_labelings(
    f: Labeling,
    g: Labeling,
    measures: Sequence[MeasureName],
    nmi_normalization: NmiNormalization = NmiNormalization.AVERAGE,
    omega_mode: OmegaMode = OmegaMode.AUTO,
    rmi_encoding: Optional[RmiEncoding] = None,
) -> list[MeasureResult]:
    """Evaluate several measures sharing one contingency table and one set of pair counts."""
    table = contingency(f, g)
    pairs: PairStats | None = None
    results: list[MeasureResult] = []
    for name in measures:
        if name in (MeasureName.RI, MeasureName.ARI, MeasureName.RESMI) and pairs is None:
            pairs = pair_stats_from_table(table)
        if name is MeasureName.MI:
            results.append(MeasureResult(measure_name=name, value=mutual_information(table), unit="nats"))
        elif name is MeasureName.NMI:
            results.append(nmi(table, nmi_normalization))
        elif name is MeasureName.AMI:
            results.append(ami(table))
        elif name is MeasureName.RI:
            results.append(rand_index(pairs))
        elif name is MeasureName.ARI:
            results.append(ari(pairs))
        elif name is MeasureName.RMI:
            results.append(rmi(table, normalized=True, omega_mode=omega_mode, encoding=rmi_encoding))
        elif name is MeasureName.RESMI:
            results.append(resmi(pairs))
    return results
