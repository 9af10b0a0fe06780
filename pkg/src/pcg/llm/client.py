"""LLM endpoint client with a content-addressed record/replay store.

Offline (replay) mode serves responses from fixtures keyed by the SHA-256
of the prompt, so every test runs without network access. Live calls hit
an OpenAI-style chat-completions endpoint; the auth token is read from an
environment variable and never logged or stored.
"""

from __future__ import annotations

import hashlib
import os
import threading
from dataclasses import dataclass

import requests

RETRYABLE_STATUSES = (429, 500, 502, 503, 504)


class LlmError(Exception):
    retryable = False


class ReplayMiss(LlmError):
    """Offline mode had no recorded response for this prompt."""


class LlmTimeout(LlmError):
    retryable = True


class AuthError(LlmError):
    retryable = False


class HttpError(LlmError):
    def __init__(self, status: int, message: str):
        super().__init__(f"HTTP {status}: {message}")
        self.status = status
        self.retryable = status in RETRYABLE_STATUSES


@dataclass(frozen=True)
class LlmEndpointConfig:
    base_url: str = "https://api.openai.com/v1"
    model: str = "gpt-4o"
    token_env: str = "PCG_LLM_TOKEN"
    max_output_tokens: int = 2048
    temperature: float = 0.2
    timeout: float = 60.0
    max_concurrent: int = 4  # in-flight live calls per endpoint
    replay_dir: str | None = None
    replay: bool = False  # offline: serve replay_dir fixtures only


_limiters: dict[tuple, threading.BoundedSemaphore] = {}
_limiters_lock = threading.Lock()


def _limiter(config: LlmEndpointConfig) -> threading.BoundedSemaphore:
    key = (config.base_url, config.max_concurrent)
    with _limiters_lock:
        if key not in _limiters:
            _limiters[key] = threading.BoundedSemaphore(config.max_concurrent)
        return _limiters[key]


def prompt_key(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


class ReplayStore:
    """Append-only store of prompt-hash -> response text files."""

    def __init__(self, directory):
        self.directory = str(directory)

    def path_for(self, prompt: str) -> str:
        return os.path.join(self.directory, prompt_key(prompt) + ".txt")

    def get(self, prompt: str) -> str | None:
        path = self.path_for(prompt)
        if not os.path.exists(path):
            return None
        with open(path, "r") as f:
            return f.read()

    def put(self, prompt: str, response: str) -> str:
        os.makedirs(self.directory, exist_ok=True)
        path = self.path_for(prompt)
        if not os.path.exists(path):  # first write wins; store is append-only
            with open(path, "w") as f:
                f.write(response)
        return path


def call_llm(config: LlmEndpointConfig, prompt: str) -> str:
    """Raw completion text for a prompt, from the replay store or live endpoint."""
    store = ReplayStore(config.replay_dir) if config.replay_dir else None
    if store is not None:
        hit = store.get(prompt)
        if hit is not None:
            return hit
        if config.replay:
            raise ReplayMiss(
                f"no recorded response for prompt hash {prompt_key(prompt)[:12]}...")
    elif config.replay:
        raise ReplayMiss("replay mode requires a replay_dir")

    token = os.environ.get(config.token_env)
    if not token:
        raise AuthError(f"environment variable {config.token_env} is not set")
    try:
        with _limiter(config):
            resp = requests.post(
                config.base_url.rstrip("/") + "/chat/completions",
                headers={"Authorization": f"Bearer {token}"},
                json={
                    "model": config.model,
                    "messages": [{"role": "user", "content": prompt}],
                    "max_tokens": config.max_output_tokens,
                    "temperature": config.temperature,
                },
                timeout=config.timeout,
            )
    except requests.Timeout as e:
        raise LlmTimeout(str(e)) from e
    except requests.RequestException as e:
        raise HttpError(0, str(e)) from e
    if resp.status_code in (401, 403):
        raise AuthError(f"endpoint rejected credentials ({resp.status_code})")
    if resp.status_code >= 400:
        raise HttpError(resp.status_code, resp.text[:200])
    try:
        text = resp.json()["choices"][0]["message"]["content"]
    except (KeyError, IndexError, ValueError) as e:
        raise HttpError(resp.status_code, f"malformed completion payload: {e}") from e
    if store is not None:
        store.put(prompt, text)
    return text
