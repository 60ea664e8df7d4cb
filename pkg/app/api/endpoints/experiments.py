"""
Background synthetic experiments: one Celery task per grid point.
"""
import logging

from celery import group
from celery.result import GroupResult
from fastapi import APIRouter, HTTPException

from app.core.config import settings
from app.jobs.celery_worker import celery_app
from app.jobs.tasks import run_grid_point_task
from app.schemas.api import ExperimentJobSchema, ExperimentRequestSchema, ExperimentStatusSchema
from app.schemas.experiment import ExperimentKind, RunConfig, RunValue
from app.services.experiments import SYNTHETIC_KINDS, aggregate_runs, default_grid, validate_grid

logger = logging.getLogger(__name__)

router = APIRouter(prefix=settings.API_V1_STR, tags=["Experiments"])


def build_run_config(request: ExperimentRequestSchema) -> RunConfig:
    overrides = request.model_dump(exclude_none=True)
    return RunConfig(**overrides)


@router.post(
    "/experiments/{which}",
    response_model=ExperimentJobSchema,
    status_code=202,
    summary="Enqueue a synthetic experiment",
    description="Split the experiment grid into background tasks; poll the returned group id for results",
)
def enqueue_experiment(which: str, request: ExperimentRequestSchema) -> ExperimentJobSchema:
    try:
        kind = ExperimentKind(which)
        if kind not in SYNTHETIC_KINDS:
            raise ValueError(f"experiment {which!r} is not a synthetic experiment")
        cfg = build_run_config(request)
        grid = validate_grid(kind, cfg.grid if cfg.grid is not None else default_grid(kind, cfg.n), cfg.n)
    except ValueError as e:
        logger.info(f"[enqueue_experiment] Validation error: {e}")
        raise HTTPException(status_code=400, detail={"error": str(e)})

    try:
        payload = cfg.model_dump(mode="json")
        job = group(run_grid_point_task.s(kind.value, param, payload) for param in grid).apply_async()
        job.save()
        logger.info(f"[enqueue_experiment] experiment {kind.value}: {len(grid)} grid points, group {job.id}")
        return ExperimentJobSchema(group_id=job.id, experiment=kind.value, grid_points=len(grid))
    except Exception as e:
        logger.error(f"[enqueue_experiment] Error: {e}")
        raise HTTPException(status_code=500, detail={"error": str(e)})


@router.get(
    "/experiments/{group_id}",
    response_model=ExperimentStatusSchema,
    summary="Experiment status and aggregated records",
)
def experiment_status(group_id: str) -> ExperimentStatusSchema:
    job = GroupResult.restore(group_id, app=celery_app)
    if job is None:
        raise HTTPException(status_code=404, detail={"error": f"unknown experiment group {group_id}"})
    total = len(job.results)
    completed = job.completed_count()
    if not job.ready():
        status = "running" if completed else "pending"
        return ExperimentStatusSchema(group_id=group_id, status=status, completed=completed, total=total)
    if job.failed():
        errors = [str(r.result) for r in job.results if r.failed()]
        return ExperimentStatusSchema(
            group_id=group_id, status="failed", completed=completed, total=total, error=errors[0] if errors else None
        )
    values = [RunValue(**value) for chunk in job.get() for value in chunk]
    measures = list(dict.fromkeys(v.measure for v in values))
    return ExperimentStatusSchema(
        group_id=group_id,
        status="completed",
        completed=completed,
        total=total,
        records=aggregate_runs(values, measures),
    )
