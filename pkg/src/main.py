"""
Main application module for the spreadhom service.
"""
import logging
import os

from dotenv import load_dotenv
from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.openapi.utils import get_openapi

from src.api.routes import router
from src.core.config import get_settings

# Load environment variables
load_dotenv()

# Configure logging
logging_level = os.getenv("LOG_LEVEL", "INFO").upper()
logging.basicConfig(
    level=getattr(logging, logging_level),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    handlers=[
        logging.StreamHandler()
    ]
)
logger = logging.getLogger(__name__)

# Create FastAPI app
app = FastAPI(
    title="spreadhom",
    description="Relative homological invariants of persistence modules over finite grids",
    version="1.0.0",
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Include API routes
app.include_router(router, prefix="/api/v1")


def custom_openapi():
    if app.openapi_schema:
        return app.openapi_schema

    openapi_schema = get_openapi(
        title=app.title,
        version=app.version,
        description=app.description,
        routes=app.routes,
    )
    openapi_schema["info"]["x-field"] = "GF(p), p from SPREADHOM_PRIME"
    app.openapi_schema = openapi_schema
    return app.openapi_schema


app.openapi = custom_openapi


@app.get("/", tags=["Root"])
async def root():
    """Root endpoint pointing at the API documentation."""
    return {
        "message": "spreadhom service",
        "documentation": "/docs",
        "api_prefix": "/api/v1",
    }


@app.on_event("startup")
async def startup_event():
    """Validate the configuration before serving."""
    settings = get_settings()
    logger.info(f"Resolved settings: {settings.describe()}")


if __name__ == "__main__":
    import uvicorn

    settings = get_settings()
    logger.info(f"Starting spreadhom on {settings.api_host}:{settings.api_port} (debug={settings.debug})")

    uvicorn.run(
        "src.main:app",
        host=settings.api_host,
        port=settings.api_port,
        reload=settings.debug,
        log_level=logging_level.lower(),
    )
