import logging
from typing import Any

from app.jobs.celery_worker import celery_app
from app.schemas.experiment import ExperimentKind, RunConfig
from app.services.experiments import run_grid_point

logger = logging.getLogger(__name__)


@celery_app.task(name="run_grid_point_task")
def run_grid_point_task(which: str, param: float, cfg: dict[str, Any]) -> list[dict[str, Any]]:
    """
    Evaluate one grid point of a synthetic experiment in a background worker.

    Args:
        which: Experiment id (a, b, c or d)
        param: Cluster count or proportion of this grid point
        cfg: RunConfig as a JSON-compatible dict

    Returns:
        Per-run measure values as JSON-compatible dicts
    """
    kind = ExperimentKind(which)
    config = RunConfig(**cfg)
    logger.info(f"[run_grid_point_task] Started experiment {kind.value} param={param:g} runs={config.runs}")
    values = run_grid_point(kind, param, config)
    logger.info(f"[run_grid_point_task] Completed experiment {kind.value} param={param:g}: {len(values)} values")
    return [value.model_dump(mode="json") for value in values]
