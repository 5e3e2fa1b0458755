#!/usr/bin/env python3

"""
JSON over HTTP for the remote embedding and generation clients.
"""

import json
import logging
import threading
from typing import Any, Dict, List, Union

import requests

from .abc import BackendError, ProtocolError, TransportError

logger = logging.getLogger("kgrag.http")

MAX_RETRIES = 2


class JsonClient:
    """
    Posts JSON bodies to one endpoint. Each thread gets its own session, `close` closes all of them.
    """

    __slots__ = ("endpoint", "token", "timeout", "retries", "_local", "_sessions", "_lock")

    def __init__(
            self, endpoint: str, token: Union[str, None] = None, timeout: float = 60.0, retries: int = MAX_RETRIES,
    ) -> None:
        """
        :param endpoint: The URL to post to.
        :param token: A bearer token to authenticate with, if any.
        :param timeout: Seconds to wait for each request.
        :param retries: How many times to retry a request that failed in transport.
        """

        self.endpoint = endpoint
        self.token = token
        self.timeout = timeout
        self.retries = retries

        self._local = threading.local()
        self._sessions: List[requests.Session] = []
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        return "<JsonClient(endpoint=%r) at %x>" % (self.endpoint, id(self))

    @property
    def session(self) -> requests.Session:
        """
        :return: This thread's session.
        """

        session = getattr(self._local, "session", None)
        if session is None:
            session = requests.Session()
            session.headers["Content-Type"] = "application/json"
            session.headers["Accept"] = "application/json"
            if self.token:
                session.headers["Authorization"] = "Bearer %s" % self.token
            self._local.session = session
            with self._lock:
                self._sessions.append(session)
        return session

    def close(self) -> None:
        """
        Closes every session opened so far. Later posts open new ones.
        """

        with self._lock:
            sessions, self._sessions = self._sessions, []
            self._local = threading.local()
        for session in sessions:
            session.close()
        if sessions:
            logger.debug("Closed %i session(s) to %s.", len(sessions), self.endpoint)

    def post(self, body: Dict[str, Any]) -> Any:
        """
        Posts a JSON body, retrying on transport failures. The body isn't modified between attempts.

        :param body: The request body.
        :return: The decoded JSON response.
        """

        data = json.dumps(body)
        attempt = 0
        while True:
            try:
                response = self.session.post(self.endpoint, data=data, timeout=self.timeout)
                break
            except (requests.ConnectionError, requests.Timeout) as error:
                if attempt >= self.retries:
                    raise TransportError("POST %s failed after %i attempt(s): %s" % (self.endpoint, attempt + 1, error))
                attempt += 1
                logger.debug("Retrying POST %s (attempt %i) after: %s", self.endpoint, attempt + 1, error)
            except requests.RequestException as error:
                raise TransportError("POST %s failed: %s" % (self.endpoint, error))

        if not 200 <= response.status_code < 300:
            raise BackendError(response.status_code, response.text)
        try:
            return response.json()
        except ValueError as error:
            raise ProtocolError("Response from %s isn't JSON: %s" % (self.endpoint, error))
