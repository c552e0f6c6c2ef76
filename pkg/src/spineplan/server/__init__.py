from .app import create_app
from .store import SessionStore

__all__ = ["create_app", "SessionStore"]
