"""Service configuration, environment-driven with sensible defaults."""

from __future__ import annotations

import os
from dataclasses import dataclass

from ..allocator import DEFAULT_EXACT_CAP
from ..routing.times import FALLBACK_STRAIGHT_LINE

ENV_PREFIX = "EVACALLOC_"


@dataclass
class ServiceConfig:
    kb_path: str | None = None           # triple file, loaded at startup and saved on writes
    entities_path: str | None = None     # bulk entity file, alternative seed
    graph_path: str | None = None
    gazetteer_path: str | None = None
    log_path: str | None = None          # append-only recommendation/decision log (JSONL)
    exact_cap: int = DEFAULT_EXACT_CAP
    fallback: str = FALLBACK_STRAIGHT_LINE
    host: str = "127.0.0.1"
    port: int = 8000
    driver_token: str | None = None      # bearer token for availability reporting
    decider_token: str | None = None     # bearer token for decision-maker endpoints

    @classmethod
    def from_env(cls, env: dict | None = None) -> "ServiceConfig":
        env = dict(os.environ if env is None else env)

        def get(name: str, default=None):
            return env.get(ENV_PREFIX + name, default)

        return cls(
            kb_path=get("KB"),
            entities_path=get("ENTITIES"),
            graph_path=get("GRAPH"),
            gazetteer_path=get("GAZETTEER"),
            log_path=get("LOG"),
            exact_cap=int(get("EXACT_CAP", DEFAULT_EXACT_CAP)),
            fallback=get("FALLBACK", FALLBACK_STRAIGHT_LINE),
            host=get("HOST", "127.0.0.1"),
            port=int(get("PORT", 8000)),
            driver_token=get("DRIVER_TOKEN"),
            decider_token=get("DECIDER_TOKEN"),
        )
