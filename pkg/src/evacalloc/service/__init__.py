"""HTTP service wrapping the allocation engine."""

from .app import create_app
from .config import ServiceConfig
from .engine import Engine, ServiceError

__all__ = ["Engine", "ServiceConfig", "ServiceError", "create_app"]
