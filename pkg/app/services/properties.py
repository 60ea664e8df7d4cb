"""
Desirable-property checklist for similarity measures, evaluated on experiment records.

constant baseline and cluster-count bias come from the random reassignment
experiment, endpoint decay from merge/split, symmetry bias from shuffling outside
the main cluster. Model independence is a property of how a measure is defined.
"""
import logging
from collections.abc import Sequence
from pathlib import Path

import numpy as np
import pandas as pd

from app.schemas.experiment import ExperimentKind, ExperimentRecord
from app.schemas.measures import EXPERIMENT_MEASURES, UNIT_INTERVAL_MEASURES, MeasureName
from app.schemas.properties import PropertyCheck, PropertyName

logger = logging.getLogger(__name__)

BASELINE_TOLERANCE = 0.1
SYMMETRY_TOLERANCE = 0.15
RANGE_SLACK = 1e-9

# Chance-corrected measures depend on an assumed randomization model.
MODEL_INDEPENDENT: frozenset[MeasureName] = frozenset(
    {MeasureName.MI, MeasureName.NMI, MeasureName.RI, MeasureName.RMI, MeasureName.RESMI}
)

MARKS = {True: "✓", False: "×", None: "?"}


def _curve(records: Sequence[ExperimentRecord], kind: ExperimentKind, measure: MeasureName) -> list[ExperimentRecord]:
    return sorted(
        (r for r in records if r.experiment is kind and r.measure is measure),
        key=lambda r: r.param,
    )


def _constant_baseline(records, measure, tolerance) -> PropertyCheck:
    curve = _curve(records, ExperimentKind.RANDOM_REASSIGN, measure)
    if not curve:
        return PropertyCheck(property=PropertyName.CONSTANT_BASELINE, measure=measure)
    worst = max(abs(r.mean) for r in curve)
    return PropertyCheck(
        property=PropertyName.CONSTANT_BASELINE,
        measure=measure,
        passed=worst <= tolerance,
        detail=f"max |mean| {worst:.4g}",
    )


def _cluster_count_bias(records, measure, tolerance) -> PropertyCheck:
    curve = [r for r in _curve(records, ExperimentKind.RANDOM_REASSIGN, measure) if r.param > 1]
    if len(curve) < 2:
        return PropertyCheck(property=PropertyName.CLUSTER_COUNT_BIAS_FREE, measure=measure)
    rise = curve[-1].mean - curve[0].mean
    passed = curve[-1].mean <= tolerance and rise <= tolerance
    return PropertyCheck(
        property=PropertyName.CLUSTER_COUNT_BIAS_FREE,
        measure=measure,
        passed=passed,
        detail=f"mean at c={curve[-1].param:g}: {curve[-1].mean:.4g}, rise {rise:.4g}",
    )


def _merge_split_endpoints(records, measure, tolerance) -> PropertyCheck:
    curve = _curve(records, ExperimentKind.MERGE_SPLIT, measure)
    if len(curve) < 2:
        return PropertyCheck(property=PropertyName.MERGE_SPLIT_ENDPOINTS, measure=measure)
    low, high = curve[0], curve[-1]
    return PropertyCheck(
        property=PropertyName.MERGE_SPLIT_ENDPOINTS,
        measure=measure,
        passed=abs(low.mean) <= tolerance and abs(high.mean) <= tolerance,
        detail=f"c={low.param:g}: {low.mean:.4g}, c={high.param:g}: {high.mean:.4g}",
    )


def _unit_interval(records, measure) -> PropertyCheck:
    means = [r.mean for r in records if r.measure is measure]
    definitional = measure in UNIT_INTERVAL_MEASURES
    if not means:
        return PropertyCheck(property=PropertyName.UNIT_INTERVAL, measure=measure, passed=definitional, detail="by definition")
    low, high = min(means), max(means)
    observed = low >= -RANGE_SLACK and high <= 1.0 + RANGE_SLACK
    return PropertyCheck(
        property=PropertyName.UNIT_INTERVAL,
        measure=measure,
        passed=definitional and observed,
        detail=f"observed [{low:.4g}, {high:.4g}]",
    )


def _symmetry_bias(records, measure, measures, tolerance) -> PropertyCheck:
    kind = ExperimentKind.SHUFFLE_OUTSIDE_MAIN
    own = {r.param: r.mean for r in _curve(records, kind, measure)}
    others = [{r.param: r.mean for r in _curve(records, kind, m)} for m in measures if m is not measure]
    others = [curve for curve in others if curve]
    if not own or not others:
        return PropertyCheck(property=PropertyName.SYMMETRY_BIAS_FREE, measure=measure)
    deviations = []
    for param, value in own.items():
        peers = [curve[param] for curve in others if param in curve]
        if peers:
            deviations.append(abs(value - float(np.median(peers))))
    if not deviations:
        return PropertyCheck(property=PropertyName.SYMMETRY_BIAS_FREE, measure=measure)
    worst = max(deviations)
    return PropertyCheck(
        property=PropertyName.SYMMETRY_BIAS_FREE,
        measure=measure,
        passed=worst <= tolerance,
        detail=f"max deviation from peer median {worst:.4g}",
    )


def property_checklist(
    records: Sequence[ExperimentRecord],
    measures: Sequence[MeasureName] = EXPERIMENT_MEASURES,
    tolerance: float = BASELINE_TOLERANCE,
    symmetry_tolerance: float = SYMMETRY_TOLERANCE,
) -> list[PropertyCheck]:
    checks: list[PropertyCheck] = []
    for measure in measures:
        checks.append(_constant_baseline(records, measure, tolerance))
        checks.append(
            PropertyCheck(
                property=PropertyName.MODEL_INDEPENDENCE,
                measure=measure,
                passed=measure in MODEL_INDEPENDENT,
                detail="by definition",
            )
        )
        checks.append(_unit_interval(records, measure))
        checks.append(_cluster_count_bias(records, measure, tolerance))
        checks.append(_symmetry_bias(records, measure, measures, symmetry_tolerance))
        checks.append(_merge_split_endpoints(records, measure, tolerance))
    missing = sum(1 for c in checks if c.passed is None)
    if missing:
        logger.warning(f"[property_checklist] {missing} checks undecided: experiment records missing")
    return checks


def checklist_table(checks: Sequence[PropertyCheck]) -> pd.DataFrame:
    """One row per property, one column per measure, cells ✓ / × / ?."""
    frame = pd.DataFrame(
        {
            "property": [c.property.value for c in checks],
            "measure": [c.measure.value.upper() for c in checks],
            "mark": [MARKS[c.passed] for c in checks],
        }
    )
    table = frame.pivot(index="property", columns="measure", values="mark")
    properties = list(dict.fromkeys(frame["property"]))
    measures = list(dict.fromkeys(frame["measure"]))
    return table.reindex(index=properties, columns=measures)


def write_checklist_csv(checks: Sequence[PropertyCheck], path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    checklist_table(checks).to_csv(path, lineterminator="\n")
    logger.info(f"[write_checklist_csv] wrote {path}")
