from .core import (
    MAX_CANDIDATES,
    ApiError,
    Session,
    SessionManager,
    in_process_client_factory,
    tcp_client_factory,
)
from .http import create_app
from .journal import Journal

__all__ = [
    "MAX_CANDIDATES",
    "ApiError",
    "Journal",
    "Session",
    "SessionManager",
    "create_app",
    "in_process_client_factory",
    "tcp_client_factory",
]
