"""
Label comparison endpoints.
"""
import logging

from fastapi import APIRouter, File, HTTPException, UploadFile

from app.core.config import settings
from app.schemas.api import CompareRequestSchema, CompareResponseSchema
from app.schemas.measures import EXPERIMENT_MEASURES, MeasureName
from app.services.measures import compare_labelings
from app.services.partition import make_labeling
from app.utils.label_files import paired_labelings, parse_label_lines

logger = logging.getLogger(__name__)

router = APIRouter(prefix=settings.API_V1_STR, tags=["Compare"])


@router.post(
    "/compare",
    response_model=CompareResponseSchema,
    summary="Compare two labelings",
    description="Evaluate NMI, AMI, RI, ARI, RMI and ResMI (or a chosen subset) between two labelings",
)
def compare(request: CompareRequestSchema) -> CompareResponseSchema:
    try:
        f = make_labeling(request.f)
        g = make_labeling(request.g)
        results = compare_labelings(
            f,
            g,
            request.measures,
            nmi_normalization=request.nmi_normalization,
            omega_mode=request.omega_mode,
            rmi_encoding=request.rmi_encoding,
        )
        logger.info(f"[compare] n={f.n} measures={[m.value for m in request.measures]}")
        return CompareResponseSchema(n=f.n, results=results)
    except ValueError as e:
        logger.info(f"[compare] Validation error: {e}")
        raise HTTPException(status_code=400, detail={"error": str(e)})
    except Exception as e:
        logger.error(f"[compare] Error: {e}")
        raise HTTPException(status_code=500, detail={"error": str(e)})


@router.post(
    "/compare/files",
    response_model=CompareResponseSchema,
    summary="Compare two label files",
)
async def compare_files(
    file_f: UploadFile = File(..., description="Label file: one label per line, or node_id label"),
    file_g: UploadFile = File(..., description="Label file, matched on the first file's node ids when keyed"),
) -> CompareResponseSchema:
    try:
        parsed_f = parse_label_lines((await file_f.read()).decode("utf-8").splitlines())
        parsed_g = parse_label_lines((await file_g.read()).decode("utf-8").splitlines())
        f, g = paired_labelings(parsed_f, parsed_g)
        measures = [*EXPERIMENT_MEASURES, MeasureName.RI]
        return CompareResponseSchema(n=f.n, results=compare_labelings(f, g, measures))
    except ValueError as e:
        logger.info(f"[compare_files] Validation error: {e}")
        raise HTTPException(status_code=400, detail={"error": str(e)})
    except Exception as e:
        logger.error(f"[compare_files] Error: {e}")
        raise HTTPException(status_code=500, detail={"error": str(e)})
