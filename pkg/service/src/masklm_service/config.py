"""Service configuration."""

from __future__ import annotations

import os
from dataclasses import dataclass

DEFAULT_MODEL = "bert-base-uncased"
MIN_TOP_N_BUDGET = 500  # clients may legitimately ask for 500 candidates


class ServiceConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ServiceConfig:
    model: str = DEFAULT_MODEL
    device: str = "cpu"
    max_top_n: int = MIN_TOP_N_BUDGET
    port: int = 8551

    def __post_init__(self) -> None:
        if self.max_top_n < MIN_TOP_N_BUDGET:
            raise ServiceConfigError(
                f"max_top_n must be at least {MIN_TOP_N_BUDGET}, got {self.max_top_n}"
            )
        if not 0 < self.port < 65536:
            raise ServiceConfigError(f"invalid port {self.port}")

    @classmethod
    def from_env(cls) -> "ServiceConfig":
        return cls(
            model=os.environ.get("MASKLM_MODEL", DEFAULT_MODEL),
            device=os.environ.get("MASKLM_DEVICE", "cpu"),
            max_top_n=int(os.environ.get("MASKLM_MAX_TOP_N", MIN_TOP_N_BUDGET)),
            port=int(os.environ.get("MASKLM_PORT", 8551)),
        )
