from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from app.api.router import router as api_router
from app.config import configure_logging, get_settings

settings = get_settings()
configure_logging(settings.log_level)

app = FastAPI(title="Spin-3/2 Geometric Phase API")

# Batch consumers only; browsers are limited to the configured origins.
app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.allowed_origins(),
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(api_router, prefix="/api", tags=["geophase"])


@app.get("/health")
async def health():
    return {"status": "ok"}
