"""Chat-completion backends: a real HTTP client and a fixture-driven mock.

The HTTP contract is the familiar one: POST a JSON body
{model, messages, temperature, max_tokens} with a bearer token, read
choices[0].message.content back. Anything else (non-2xx, transport
errors, unparseable body) raises BackendUnavailable.

MockLLM keys canned responses on a fingerprint of the message list, so
tests are hermetic and any drift in prompt construction fails loudly
instead of silently testing different prompts.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import requests

from .errors import BackendUnavailable

Message = Tuple[str, str]  # (role, content)

FINGERPRINT_LENGTH = 16


def fingerprint(messages: Sequence[Message]) -> str:
    """Stable key for a message list: sha256 over role/content blocks."""
    payload = "\x00".join(f"{role}\n{content}" for role, content in messages)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:FINGERPRINT_LENGTH]


class LlmBackend:
    """Behavioural contract; implementations must be stateless across calls."""

    def complete(
        self,
        messages: Sequence[Message],
        temperature: float = 0.0,
        max_tokens: int = 1024,
    ) -> str:
        raise NotImplementedError


class HttpChatBackend(LlmBackend):
    def __init__(
        self,
        url: str,
        model: str,
        api_key: Optional[str] = None,
        api_key_env: Optional[str] = None,
        timeout_seconds: float = 30.0,
        max_concurrent: int = 4,
    ):
        self.url = url
        self.model = model
        self._api_key = api_key
        self._api_key_env = api_key_env
        self.timeout_seconds = timeout_seconds
        self._semaphore = threading.Semaphore(max_concurrent)

    def _key(self) -> Optional[str]:
        if self._api_key:
            return self._api_key
        if self._api_key_env:
            return os.environ.get(self._api_key_env)
        return None

    def complete(self, messages, temperature=0.0, max_tokens=1024) -> str:
        body = {
            "model": self.model,
            "messages": [{"role": role, "content": content} for role, content in messages],
            "temperature": temperature,
            "max_tokens": max_tokens,
        }
        headers = {"Content-Type": "application/json"}
        key = self._key()
        if key:
            headers["Authorization"] = f"Bearer {key}"
        with self._semaphore:
            try:
                response = requests.post(
                    self.url, json=body, headers=headers, timeout=self.timeout_seconds
                )
            except requests.RequestException as exc:
                raise BackendUnavailable(f"backend request failed: {exc}") from exc
        if not 200 <= response.status_code < 300:
            raise BackendUnavailable(
                f"backend returned HTTP {response.status_code}: {response.text[:200]}"
            )
        try:
            payload = response.json()
            content = payload["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise BackendUnavailable(f"backend response not understood: {exc}") from exc
        if not isinstance(content, str):
            raise BackendUnavailable("backend response content is not text")
        return content


class MockLLM(LlmBackend):
    """Deterministic stand-in: canned text keyed by message fingerprints.

    Fixtures live in a JSON file mapping fingerprint -> response text
    (a directory containing fixtures.json is also accepted). Unknown
    fingerprints fail the call; they never fall through to guesses.
    """

    def __init__(self, fixtures: Union[str, Path, Dict[str, str], None] = None):
        self.responses: Dict[str, str] = {}
        self.calls: List[Sequence[Message]] = []
        if isinstance(fixtures, dict):
            self.responses.update(fixtures)
        elif fixtures is not None:
            path = Path(fixtures)
            if path.is_dir():
                path = path / "fixtures.json"
            data = json.loads(path.read_text(encoding="utf-8"))
            if not isinstance(data, dict):
                raise BackendUnavailable(f"mock fixture file {path} must hold an object")
            self.responses.update({str(k): str(v) for k, v in data.items()})

    def register(self, messages: Sequence[Message], response: str) -> str:
        key = fingerprint(messages)
        self.responses[key] = response
        return key

    def save(self, path: Union[str, Path]) -> None:
        path = Path(path)
        if path.is_dir():
            path = path / "fixtures.json"
        ordered = {k: self.responses[k] for k in sorted(self.responses)}
        path.write_text(
            json.dumps(ordered, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
        )

    def complete(self, messages, temperature=0.0, max_tokens=1024) -> str:
        self.calls.append(tuple(messages))
        key = fingerprint(messages)
        if key not in self.responses:
            raise BackendUnavailable(
                f"no mock fixture for fingerprint {key} "
                f"(first message: {messages[0][1][:80]!r}...)"
            )
        return self.responses[key]
