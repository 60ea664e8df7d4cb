from fastapi import APIRouter

from app.api.endpoints.compare import router as compare
from app.api.endpoints.experiments import router as experiments

api_router = APIRouter()

api_router.include_router(compare)
api_router.include_router(experiments)
