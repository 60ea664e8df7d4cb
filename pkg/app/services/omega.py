"""
ln Omega: the log-number of non-negative integer matrices with given row and
column sums, the correction term of reduced mutual information.
"""
import logging
import math
from collections.abc import Iterator, Sequence
from functools import lru_cache

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.special import gammaln

from app.core.config import settings
from app.core.exceptions import InvalidParameterError, OmegaInfeasibleError

logger = logging.getLogger(__name__)


def _validated(row_sums: Sequence[int], col_sums: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    rows = tuple(int(r) for r in row_sums)
    cols = tuple(int(c) for c in col_sums)
    if not rows or not cols or min(rows) < 0 or min(cols) < 0:
        raise InvalidParameterError("marginals must be non-empty and non-negative")
    if sum(rows) != sum(cols):
        raise InvalidParameterError(f"row sums ({sum(rows)}) and column sums ({sum(cols)}) differ")
    return rows, cols


def exact_omega_feasible(row_sums: Sequence[int], col_sums: Sequence[int]) -> bool:
    n = sum(int(r) for r in row_sums)
    return n <= settings.EXACT_OMEGA_MAX_N and max(len(row_sums), len(col_sums)) <= settings.EXACT_OMEGA_MAX_DIM


def _column_fillings(remaining: tuple[int, ...], total: int) -> Iterator[tuple[int, ...]]:
    """All ways to place ``total`` units into rows without exceeding ``remaining``."""
    if len(remaining) == 1:
        if total <= remaining[0]:
            yield (total,)
        return
    capacity_after = sum(remaining[1:])
    for first in range(max(0, total - capacity_after), min(remaining[0], total) + 1):
        for rest in _column_fillings(remaining[1:], total - first):
            yield (first, *rest)


def count_omega(row_sums: Sequence[int], col_sums: Sequence[int]) -> int:
    """Exact count by dynamic programming over columns with row-remainder states."""
    rows, cols = _validated(row_sums, col_sums)

    @lru_cache(maxsize=None)
    def completions(remaining: tuple[int, ...], column: int) -> int:
        if column == len(cols):
            return 1 if not any(remaining) else 0
        total = 0
        for filling in _column_fillings(remaining, cols[column]):
            left = tuple(sorted(r - x for r, x in zip(remaining, filling)))
            total += completions(left, column + 1)
        return total

    return completions(tuple(sorted(rows)), 0)


def log_omega_exact(row_sums: Sequence[int], col_sums: Sequence[int]) -> float:
    rows, cols = _validated(row_sums, col_sums)
    if not exact_omega_feasible(rows, cols):
        raise OmegaInfeasibleError(sum(rows), len(rows), len(cols))
    return math.log(count_omega(rows, cols))


def _log_binom(top: float, bottom: float) -> float:
    return float(gammaln(top + 1.0) - gammaln(bottom + 1.0) - gammaln(top - bottom + 1.0))


def _log_omega_effective_columns(rows: tuple[int, ...], cols: tuple[int, ...]) -> float:
    """Effective-columns estimate with the rows as the Dirichlet-multinomial side.

    Each column is a uniformly random composition of its sum into len(rows) parts;
    the distribution of the resulting row sums is approximated by a Dirichlet-
    multinomial whose concentration alpha matches the exact variance.
    """
    n = sum(rows)
    m = len(rows)
    if m == 1 or len(cols) == 1:
        return 0.0
    sum_sq = float(sum(c * c for c in cols))
    log_columns = sum(_log_binom(c + m - 1, m - 1) for c in cols)
    if sum_sq <= n:
        # all columns are 1: alpha -> infinity, the row-sum law is multinomial
        return float(gammaln(n + 1.0) - sum(gammaln(r + 1.0) for r in rows))
    alpha = (n * n - n + (n * n - sum_sq) / m) / (sum_sq - n)
    log_rows = sum(_log_binom(r + alpha - 1.0, alpha - 1.0) for r in rows)
    return log_columns + log_rows - _log_binom(n + m * alpha - 1.0, m * alpha - 1.0)


def log_omega_approx(row_sums: Sequence[int], col_sums: Sequence[int]) -> float:
    """Symmetrised estimate of ln Omega: mean of the two orientations."""
    rows, cols = _validated(row_sums, col_sums)
    if sum(rows) == 0:
        return 0.0
    rows = tuple(r for r in rows if r > 0)
    cols = tuple(c for c in cols if c > 0)
    estimate = 0.5 * (_log_omega_effective_columns(rows, cols) + _log_omega_effective_columns(cols, rows))
    if not np.isfinite(estimate):
        raise InvalidParameterError(f"ln Omega estimate is not finite for rows={rows}, cols={cols}")
    return max(estimate, 0.0)


class OmegaReportRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    row_sums: tuple[int, ...]
    col_sums: tuple[int, ...]
    exact: float
    approx: float
    relative_error: float
    within_tolerance: bool


def omega_approx_report(cases: Sequence[tuple[Sequence[int], Sequence[int]]]) -> list[OmegaReportRow]:
    """Compare the estimate against the exact count on small instances.

    Instances outside ``OMEGA_REPORT_TOLERANCE`` are reported (and logged), not rejected.
    """
    report: list[OmegaReportRow] = []
    for row_sums, col_sums in cases:
        exact = log_omega_exact(row_sums, col_sums)
        approx = log_omega_approx(row_sums, col_sums)
        if exact == 0.0:
            relative_error = 0.0 if abs(approx) <= 1e-9 else math.inf
        else:
            relative_error = abs(approx - exact) / exact
        within = relative_error <= settings.OMEGA_REPORT_TOLERANCE
        if not within:
            logger.warning(
                f"[omega_approx_report] rows={tuple(row_sums)} cols={tuple(col_sums)}: "
                f"exact={exact:.6g} approx={approx:.6g} rel.err={relative_error:.3g}"
            )
        report.append(
            OmegaReportRow(
                row_sums=tuple(int(r) for r in row_sums),
                col_sums=tuple(int(c) for c in col_sums),
                exact=exact,
                approx=approx,
                relative_error=relative_error,
                within_tolerance=within,
            )
        )
    return report
