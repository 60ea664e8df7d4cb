"""
SVG plots of aggregated experiment records.
"""
import logging
from collections.abc import Sequence
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from app.core.exceptions import SchemaError  # noqa: E402
from app.schemas.experiment import ExperimentKind, ExperimentRecord  # noqa: E402

logger = logging.getLogger(__name__)

SVG_HASH_SALT = "resmi-toolkit"
TITLES = {
    ExperimentKind.RANDOM_REASSIGN: "Random reassignment to c clusters",
    ExperimentKind.MERGE_SPLIT: "Merging and splitting to c clusters",
    ExperimentKind.SHUFFLE: "Shuffling a proportion p of labels",
    ExperimentKind.SHUFFLE_OUTSIDE_MAIN: "Shuffling outside the main cluster",
    ExperimentKind.NETWORK: "SCORE+ communities against ground truth",
}


def plot_records(records: Sequence[ExperimentRecord], out_path: Path) -> Path:
    """Mean +/- std of every measure against the experiment parameter, written as SVG."""
    if not records:
        raise SchemaError("nothing to plot: no records")
    kinds = {r.experiment for r in records}
    if len(kinds) != 1:
        raise SchemaError(f"records mix experiments: {sorted(k.value for k in kinds)}")
    kind = kinds.pop()

    with plt.rc_context({"svg.hashsalt": SVG_HASH_SALT, "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(6.4, 4.4))
        measures = list(dict.fromkeys(r.measure for r in records))
        for measure in measures:
            rows = sorted((r for r in records if r.measure == measure), key=lambda r: r.param)
            ax.errorbar(
                [r.param for r in rows],
                [r.mean for r in rows],
                yerr=[r.std for r in rows],
                label=measure.value.upper(),
                marker="o",
                markersize=3,
                capsize=2,
            )
        if kind.sweeps_cluster_count:
            ax.set_xscale("log", base=2)
            ax.set_xlabel("number of clusters c")
        else:
            ax.set_xlabel("proportion p")
        ax.set_ylabel("similarity")
        ax.set_title(TITLES[kind])
        ax.axhline(0.0, color="grey", linewidth=0.5)
        ax.legend()
        fig.tight_layout()
        out_path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(out_path, format="svg", metadata={"Date": None})
        plt.close(fig)
    logger.info(f"[plot_records] wrote {out_path}")
    return out_path
