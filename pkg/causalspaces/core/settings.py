import logging

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # Logging
    LOG_LEVEL: str = "INFO"
    DEBUG: bool = False

    # Size guards
    MAX_PREORDER_EVENTS: int = Field(default=5, ge=0)
    MAX_GROUP_ORDER: int = Field(default=10_000, ge=1)
    MAX_BRUTEFORCE_OPTIONAL: int = Field(default=22, ge=0)   # 2^k candidate subsets
    MAX_COMPLETION_OPTIONAL: int = Field(default=40, ge=0)
    MAX_UNIVERSE_CODES: int = Field(default=6561, ge=1)      # prod(|I_w| + 1)

    # Search / checkpointing
    CHECKPOINT_SECONDS: float = 5.0
    CHECKPOINT_EVERY: int = Field(default=0, ge=0)           # leaves, 0 = off
    DEFAULT_JOBS: int = Field(default=1, ge=1)

    # Artifacts
    OUTPUT_DIR: str = "output"

    @field_validator("LOG_LEVEL")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        level = v.strip().upper()
        if level not in logging.getLevelNamesMapping():
            raise ValueError(f"LOG_LEVEL must be a logging level name, got {v!r}")
        return level

    @property
    def log_level(self) -> int:
        """Effective numeric level, DEBUG wins over LOG_LEVEL"""
        if self.DEBUG:
            return logging.DEBUG
        return logging.getLevelNamesMapping()[self.LOG_LEVEL]

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="CAUSAL_",
        case_sensitive=True,
    )


settings = Settings()
