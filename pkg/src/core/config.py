"""
Configuration module for spreadhom.
"""
import os
import logging
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError, field_validator

from src.core.errors import ConfigurationError

logger = logging.getLogger(__name__)

DEFAULT_PRIME = 32003
DEFAULT_FAMILY_CAP = 200_000

# Dense products of int64 matrices stay exact while k * p^2 < 2^63 for k up to ~10^3.
MAX_PRIME = 2**25


def is_prime(n: int) -> bool:
    """Check if a number is prime using trial division."""
    if n <= 1:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


class Settings(BaseModel):
    """Runtime settings read from the environment."""
    prime: int = Field(DEFAULT_PRIME, description="Characteristic of the ground field")
    family_cap: int = Field(DEFAULT_FAMILY_CAP, description="Maximum number of members a family enumeration may produce")
    max_len: Optional[int] = Field(None, description="Default resolution budget; None means 2 * |P|")
    log_level: str = Field("INFO", description="Logging level name")
    api_host: str = Field("0.0.0.0", description="Host for the HTTP service")
    api_port: int = Field(8000, description="Port for the HTTP service")
    debug: bool = Field(False, description="Enable uvicorn reload")

    @field_validator("prime")
    @classmethod
    def _check_prime(cls, value: int) -> int:
        if not is_prime(value) or value >= MAX_PRIME:
            raise ValueError(f"field prime must be a prime below {MAX_PRIME}, got {value}")
        return value

    @field_validator("family_cap")
    @classmethod
    def _check_cap(cls, value: int) -> int:
        if value < 1:
            raise ValueError("family cap must be positive")
        return value

    @field_validator("max_len")
    @classmethod
    def _check_max_len(cls, value: Optional[int]) -> Optional[int]:
        if value is not None and value < 0:
            raise ValueError("max_len must be non-negative")
        return value

    def describe(self) -> str:
        """One line naming the values that shape computations."""
        max_len = "2*|P|" if self.max_len is None else self.max_len
        return f"prime={self.prime}, family_cap={self.family_cap}, max_len={max_len}, log_level={self.log_level}"


_settings: Optional[Settings] = None


def load_settings() -> Settings:
    """
    Build settings from the process environment (after loading a .env file).

    Returns:
        Validated settings.

    Raises:
        ConfigurationError: If a variable is malformed.
    """
    load_dotenv()
    raw = {
        "prime": os.getenv("SPREADHOM_PRIME", str(DEFAULT_PRIME)),
        "family_cap": os.getenv("SPREADHOM_FAMILY_CAP", str(DEFAULT_FAMILY_CAP)),
        "max_len": os.getenv("SPREADHOM_MAX_LEN") or None,
        "log_level": os.getenv("LOG_LEVEL", "INFO").upper(),
        "api_host": os.getenv("API_HOST", "0.0.0.0"),
        "api_port": os.getenv("API_PORT", "8000"),
        "debug": os.getenv("DEBUG", "False").lower() == "true",
    }
    try:
        settings = Settings(**raw)
    except ValidationError as e:
        raise ConfigurationError(f"invalid configuration: {e}") from e
    logger.debug(f"Loaded settings: prime={settings.prime}, family_cap={settings.family_cap}")
    return settings


def get_settings() -> Settings:
    """Get the settings singleton."""
    global _settings
    if _settings is None:
        _settings = load_settings()
    return _settings


def reset_settings() -> None:
    """Drop the cached settings so the next access re-reads the environment."""
    global _settings
    _settings = None
