"""
Engine settings

Reads RPQ_* environment variables (optionally from a .env file) into a
validated settings object.
"""

import os
from typing import Literal

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator

load_dotenv()


class EngineSettings(BaseModel):
    """Process-wide defaults for the command-line front end"""

    log_level: str = "WARNING"
    output_format: Literal["text", "jsonl"] = "text"
    max_workers: int = Field(default=1, ge=1)

    @field_validator("log_level")
    @classmethod
    def _normalise_level(cls, value: str) -> str:
        level = value.strip().upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"unsupported log level: {value}")
        return level

    @classmethod
    def from_env(cls) -> "EngineSettings":
        return cls(
            log_level=os.getenv("RPQ_LOG_LEVEL", "WARNING"),
            output_format=os.getenv("RPQ_OUTPUT_FORMAT", "text"),
            max_workers=int(os.getenv("RPQ_MAX_WORKERS", "1")),
        )
