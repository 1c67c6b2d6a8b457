#!/usr/bin/env python3
"""
Run script for the spreadhom HTTP service.
"""
import logging

import uvicorn

from src.core.config import get_settings

# Set up logging
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    handlers=[logging.StreamHandler()]
)
logger = logging.getLogger(__name__)

if __name__ == "__main__":
    # Settings load the .env file and validate the prime before the server starts
    settings = get_settings()

    logger.info(f"Starting spreadhom API on {settings.api_host}:{settings.api_port} (debug={settings.debug})")

    uvicorn.run(
        "src.main:app",
        host=settings.api_host,
        port=settings.api_port,
        reload=settings.debug,
        log_level=settings.log_level.lower(),
    )
