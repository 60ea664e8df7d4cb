"""
Synthetic experiment harness: grids, seeded runs, aggregation and CSV I/O.

Run r of every grid point draws from stream ``RngSeed(seed, r)``, so results do
not depend on the order in which grid points or runs are executed.
"""
import logging
from collections.abc import Sequence
from pathlib import Path
from typing import Optional

import pandas as pd
from pydantic import ValidationError

from app.core.config import settings
from app.core.exceptions import InvalidParameterError, SchemaError
from app.schemas.experiment import (
    ExperimentKind,
    ExperimentRecord,
    GroundTruthKind,
    GroundTruthSpec,
    RngSeed,
    RunConfig,
    RunValue,
)
from app.schemas.measures import MeasureName
from app.schemas.partition import Labeling
from app.services import synthgen
from app.services.measures import compare_labelings

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["experiment", "param", "measure", "mean", "std", "runs"]
RUN_COLUMNS = ["experiment", "param", "measure", "run", "value", "defined"]
MAIN_CLUSTER = 0
SYNTHETIC_KINDS = (
    ExperimentKind.RANDOM_REASSIGN,
    ExperimentKind.MERGE_SPLIT,
    ExperimentKind.SHUFFLE,
    ExperimentKind.SHUFFLE_OUTSIDE_MAIN,
)


def default_grid(kind: ExperimentKind, n: int) -> list[float]:
    if kind.sweeps_cluster_count:
        grid = []
        c = 1
        while c < n:
            grid.append(float(c))
            c *= 2
        grid.append(float(n))
        return grid
    return [round(step * 0.05, 10) for step in range(21)]


def validate_grid(kind: ExperimentKind, grid: Sequence[float], n: int) -> list[float]:
    if not grid:
        raise InvalidParameterError("empty parameter grid")
    checked = []
    for value in grid:
        if kind.sweeps_cluster_count:
            if value != int(value) or not 1 <= value <= n:
                raise InvalidParameterError(f"cluster count {value} must be an integer in [1, {n}]")
        elif not 0.0 <= value <= 1.0:
            raise InvalidParameterError(f"proportion {value} must lie in [0, 1]")
        checked.append(float(value))
    return sorted(set(checked))


def ground_truth_for(kind: ExperimentKind, n: int) -> Labeling:
    truth_kind = GroundTruthKind.ASYMMETRIC if kind is ExperimentKind.SHUFFLE_OUTSIDE_MAIN else GroundTruthKind.EQUAL_32
    try:
        spec = GroundTruthSpec(kind=truth_kind, n=n)
    except ValidationError as e:
        raise InvalidParameterError(str(e.errors()[0]["msg"]))
    return synthgen.ground_truth(spec)


def generate(kind: ExperimentKind, truth: Labeling, param: float, seed: RngSeed) -> Labeling:
    if kind is ExperimentKind.RANDOM_REASSIGN:
        return synthgen.random_reassign(truth.n, int(param), seed)
    if kind is ExperimentKind.MERGE_SPLIT:
        return synthgen.merge_split(truth, int(param), seed)
    if kind is ExperimentKind.SHUFFLE:
        return synthgen.shuffle_labels(truth, param, seed)
    if kind is ExperimentKind.SHUFFLE_OUTSIDE_MAIN:
        return synthgen.shuffle_outside_main(truth, param, MAIN_CLUSTER, seed)
    raise InvalidParameterError(f"experiment {kind.value!r} is not a synthetic experiment")


def run_grid_point(kind: ExperimentKind, param: float, cfg: RunConfig) -> list[RunValue]:
    truth = ground_truth_for(kind, cfg.n)
    values: list[RunValue] = []
    for run in range(cfg.runs):
        candidate = generate(kind, truth, param, RngSeed(seed=cfg.seed, stream_id=run))
        results = compare_labelings(
            truth, candidate, cfg.measures, omega_mode=cfg.omega_mode, rmi_encoding=cfg.rmi_encoding
        )
        logger.debug(
            f"[run_grid_point] {kind.value} param={param:g} run={run} M={candidate.M} "
            + " ".join(f"{r.measure_name.value}={r.value:.6g}" for r in results)
        )
        for result in results:
            values.append(
                RunValue(
                    experiment=kind,
                    param=param,
                    measure=result.measure_name,
                    run=run,
                    value=result.value,
                    defined=result.defined,
                )
            )
    return values


def run_experiment(kind: ExperimentKind, cfg: RunConfig) -> tuple[list[ExperimentRecord], list[RunValue]]:
    if kind not in SYNTHETIC_KINDS:
        raise InvalidParameterError(f"experiment {kind.value!r} is not a synthetic experiment")
    grid = validate_grid(kind, cfg.grid if cfg.grid is not None else default_grid(kind, cfg.n), cfg.n)
    logger.info(f"[run_experiment] experiment {kind.value}: n={cfg.n} runs={cfg.runs} seed={cfg.seed} grid={len(grid)} points")
    values: list[RunValue] = []
    for param in grid:
        values.extend(run_grid_point(kind, param, cfg))
        logger.info(f"[run_experiment] experiment {kind.value}: param={param:g} done")
    return aggregate_runs(values, cfg.measures), values


def aggregate_runs(values: Sequence[RunValue], measures: Sequence[MeasureName]) -> list[ExperimentRecord]:
    """Mean and sample standard deviation per (param, measure), rows sorted by (param, measure)."""
    if not values:
        return []
    frame = pd.DataFrame(
        {
            "experiment": [v.experiment.value for v in values],
            "param": [v.param for v in values],
            "measure": [v.measure.value for v in values],
            "value": [v.value for v in values],
        }
    )
    frame = frame[frame["measure"].isin([m.value for m in measures])]
    grouped = frame.groupby(["experiment", "param", "measure"], sort=True)["value"]
    summary = grouped.agg(mean="mean", std=lambda s: s.std(ddof=1), runs="count").reset_index()
    summary["std"] = summary["std"].fillna(0.0)
    summary = summary.sort_values(["param", "measure"], kind="stable")
    return [
        ExperimentRecord(
            experiment=row.experiment,
            param=float(row.param),
            measure=row.measure,
            mean=float(row.mean),
            std=float(row.std),
            runs=int(row.runs),
        )
        for row in summary.itertuples(index=False)
    ]


def records_frame(records: Sequence[ExperimentRecord]) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {
                "experiment": r.experiment.value,
                "param": r.param,
                "measure": r.measure.value,
                "mean": r.mean,
                "std": r.std,
                "runs": r.runs,
            }
            for r in records
        ],
        columns=CSV_COLUMNS,
    )


def argmax_by_measure(records: Sequence[ExperimentRecord]) -> dict[MeasureName, float]:
    """Parameter maximising each measure's mean (smallest parameter on ties)."""
    best: dict[MeasureName, ExperimentRecord] = {}
    for record in sorted(records, key=lambda r: r.param):
        current = best.get(record.measure)
        if current is None or record.mean > current.mean:
            best[record.measure] = record
    return {measure: record.param for measure, record in best.items()}


def _float_format(full_precision: bool) -> Optional[str]:
    return None if full_precision else f"%.{settings.CSV_SIGNIFICANT_DIGITS}g"


def records_csv_text(
    records: Sequence[ExperimentRecord],
    full_precision: bool = False,
    footer: Sequence[str] = (),
) -> str:
    text = records_frame(records).to_csv(index=False, float_format=_float_format(full_precision), lineterminator="\n")
    return text + "".join(f"# {line}\n" for line in footer)


def write_records_csv(
    records: Sequence[ExperimentRecord],
    path: Path,
    full_precision: bool = False,
    footer: Sequence[str] = (),
) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(records_csv_text(records, full_precision, footer), encoding="utf-8")
    logger.info(f"[write_records_csv] wrote {len(records)} rows to {path}")


def write_run_values_csv(values: Sequence[RunValue], path: Path) -> None:
    frame = pd.DataFrame(
        [
            {
                "experiment": v.experiment.value,
                "param": v.param,
                "measure": v.measure.value,
                "run": v.run,
                "value": v.value,
                "defined": v.defined,
            }
            for v in values
        ],
        columns=RUN_COLUMNS,
    )
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, lineterminator="\n")
    logger.info(f"[write_run_values_csv] wrote {len(values)} run values to {path}")


def read_records_csv(path: Path) -> list[ExperimentRecord]:
    try:
        frame = pd.read_csv(path, comment="#", float_precision="round_trip")
    except pd.errors.EmptyDataError:
        raise SchemaError(f"{path}: empty CSV")
    if list(frame.columns) != CSV_COLUMNS:
        raise SchemaError(f"{path}: expected columns {','.join(CSV_COLUMNS)}, got {','.join(map(str, frame.columns))}")
    if frame.empty:
        raise SchemaError(f"{path}: CSV has a header but no rows")
    try:
        return [ExperimentRecord(**row) for row in frame.to_dict(orient="records")]
    except ValidationError as e:
        raise SchemaError(f"{path}: invalid row: {e.errors()[0]['msg']}")


def argmax_footer(records: Sequence[ExperimentRecord]) -> list[str]:
    """Summary lines naming, per measure, the parameter with the highest mean."""
    best = argmax_by_measure(records)
    return [f"argmax {measure.value} c={param:g}" for measure, param in best.items()]
