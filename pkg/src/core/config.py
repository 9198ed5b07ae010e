from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

ROOT_DIR = str(Path(__file__).parent.parent.parent)


class AppSettings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=str(Path(ROOT_DIR) / ".env"), env_file_encoding="utf-8", extra="ignore"
    )

    # Enumeration
    QSWE_THREADS: int = Field(default=1, ge=1)
    QSWE_KERNEL_DIMENSION_LIMIT: int = Field(default=28, ge=0)
    QSWE_NAIVE_LIMIT: int = Field(default=20, ge=0)

    # Dense matrices (Pauli oracle, simulator, embedding check)
    QSWE_DENSE_QUBIT_LIMIT: int = Field(default=12, ge=0)

    QSWE_LOG_LEVEL: str = "WARNING"


settings = AppSettings()
