# siplb/core/config.py
from functools import lru_cache

from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict


class Settings(BaseSettings):
    # Global optimizer (branch-and-bound) defaults
    EPS_OBJ: float = 1e-6
    EPS_FEAS_OPT: float = 1e-8
    MAX_NODES: int = 1_000_000
    MAX_SPLIT_DEPTH: int = 200
    INTERVAL_PADDING: float = 1e-12
    GRID_POINT_CAP: int = 10_000_000

    # Lower bounding loop
    EPS_FEAS_SIP: float = 1e-6
    MAX_ITER: int = 100
    DUPLICATE_TOL: float = 1e-12

    # Alpha-degraded oracle
    ALPHA_VALUE_TOL: float = 1e-9
    ALPHA_MAX_BISECTIONS: int = 200

    # Exact oracle: eps_obj is tightened 10x per refinement, never below this
    REFINE_EPS_OBJ_FLOOR: float = 1e-9

    # Logging
    LOG_LEVEL: str = "WARNING"
    LOG_FORMAT: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    model_config = SettingsConfigDict(case_sensitive=True)

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        # Runs are fully determined by command-line flags: no env, no .env file.
        return (init_settings,)


# Create a global settings instance
settings = Settings()


@lru_cache()
def get_settings() -> Settings:
    return Settings()
