"""Session orchestration: state machine, event store, HTTP API, CLI."""

from strokescreen.service.core import ModelBundle, ScreeningService
from strokescreen.service.session import (
    EventRecord,
    ScreeningSession,
    SessionState,
    TierOrderError,
    UnknownSessionError,
    replay,
)
from strokescreen.service.store import SessionStore

__all__ = [
    "ModelBundle",
    "ScreeningService",
    "ScreeningSession",
    "SessionState",
    "EventRecord",
    "SessionStore",
    "TierOrderError",
    "UnknownSessionError",
    "replay",
]
