"""Live editing service."""

from .sessions import ParamDelta, RejectedEdit, Session, SessionManager, UnknownSession
from .app import create_app

__all__ = ["ParamDelta", "RejectedEdit", "Session", "SessionManager",
           "UnknownSession", "create_app"]
