"""In-memory session store with per-session write serialization.

Sessions are immutable values, so readers can take whatever the dict
currently holds without locking; writers for one session id are
serialized by that session's lock, which makes each mutation an atomic
read-modify-write (linearizable per session).
"""

from __future__ import annotations

import threading
from typing import Callable, TypeVar

from ..errors import UnknownSession
from ..session import Session

T = TypeVar("T")


class SessionStore:
    def __init__(self):
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry = threading.Lock()

    def _lock_for(self, session_id: str) -> threading.Lock:
        with self._registry:
            return self._locks.setdefault(session_id, threading.Lock())

    def put(self, session: Session) -> None:
        """Insert or replace; re-creating an id starts that session over."""
        self._lock_for(session.id)
        self._sessions[session.id] = session

    def get(self, session_id: str) -> Session:
        try:
            return self._sessions[session_id]
        except KeyError:
            raise UnknownSession(f"no session {session_id!r}") from None

    def mutate(self, session_id: str, fn: Callable[[Session], tuple[Session, T]]) -> T:
        """Apply fn under the session's lock; store the new state."""
        lock = self._lock_for(session_id)
        with lock:
            new_session, result = fn(self.get(session_id))
            self._sessions[session_id] = new_session
            return result
