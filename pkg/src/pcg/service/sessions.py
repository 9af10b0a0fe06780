"""Editing sessions: graph state, parameter deltas, LLM edits, persistence.

Every mutation appends to a per-session JSONL event log; replaying a log
from its init record reproduces the session state exactly, which is also
how sessions survive restarts. A failed mutation (bad value, rejected
edit) leaves the session untouched.
"""

from __future__ import annotations

import json
import logging
import os
import time
import uuid
from dataclasses import dataclass, field

from ..kernel.errors import EvalError
from ..kernel.evaluator import EvalSession
from ..lang.model import Graph, ValueType
from ..lang.parser import parse_pcg
from ..lang.printer import print_pcg
from ..llm.bm25 import Bm25Index, build_index, retrieve
from ..llm.client import LlmEndpointConfig, call_llm
from ..llm.prompts import build_edit_prompt, build_generation_prompt, extract_graph

log = logging.getLogger(__name__)


class UnknownSession(KeyError):
    pass


class RejectedEdit(Exception):
    """Generation or edit failed; diagnostics plus the raw model text."""

    def __init__(self, message: str, diagnostics: list | None = None,
                 raw_response: str | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or []
        self.raw_response = raw_response


@dataclass(frozen=True)
class ParamDelta:
    name: str
    value: object


@dataclass
class Session:
    id: str
    eval: EvalSession
    history: list = field(default_factory=list)
    revision: int = 0
    touched: set = field(default_factory=set)  # params the user actually set
    created: float = field(default_factory=time.time)
    updated: float = field(default_factory=time.time)

    @property
    def graph(self) -> Graph:
        return self.eval.graph

    @property
    def pcg_text(self) -> str:
        return print_pcg(self.eval.graph)

    def mesh(self):
        return self.eval.reevaluate({})  # cached result

    def state(self) -> dict:
        params = []
        for p in self.eval.graph.params:
            params.append({
                "name": p.name,
                "type": p.type.value,
                "default": p.default,
                "range": list(p.range) if p.range else None,
                "value": self.eval.values[p.name],
            })
        return {"session_id": self.id, "pcg": self.pcg_text,
                "params": params, "revision": self.revision}


def _carry_bindings(old: EvalSession, touched: set, new_graph: Graph) -> dict:
    """Slider positions the user actually set survive an edit.

    Carried when the new graph declares the same (name, type) and the value
    still fits the declared range; everything else takes the new defaults,
    so an edit that changes a default (e.g. unchecking a part) wins unless
    the user had pinned that control themselves.
    """
    carried: dict = {}
    old_params = {p.name: p for p in old.graph.params}
    for p in new_graph.params:
        prev = old_params.get(p.name)
        if prev is None or prev.type != p.type or p.name not in touched:
            continue
        value = old.values[p.name]
        if p.range is not None and not (p.range[0] <= value <= p.range[1]):
            continue  # range changed under the slider; fall back to the default
        carried[p.name] = value
    return carried


class SessionManager:
    """Owns all sessions plus the optional event-log directory and LLM wiring."""

    def __init__(self, data_dir: str | None = None,
                 llm_config: LlmEndpointConfig | None = None,
                 corpus: list | None = None, examples_k: int = 20):
        self.data_dir = data_dir
        self.llm_config = llm_config or LlmEndpointConfig()
        self.examples_k = examples_k
        self.index: Bm25Index | None = build_index(corpus) if corpus else None
        self.sessions: dict[str, Session] = {}
        if data_dir:
            os.makedirs(data_dir, exist_ok=True)
            self.load_sessions()

    # -- creation ------------------------------------------------------

    def create_from_pcg(self, pcg_text: str, session_id: str | None = None,
                        persist: bool = True) -> Session:
        result = parse_pcg(pcg_text)
        if not result.ok:
            raise RejectedEdit("graph does not validate", result.diagnostics)
        ev = EvalSession(result.graph, check=False)
        ev.evaluate()
        session = Session(session_id or uuid.uuid4().hex[:12], ev)
        self.sessions[session.id] = session
        if persist:
            self._append(session, {"event": "init", "pcg": pcg_text})
        return session

    def create_from_instruction(self, instruction: str) -> Session:
        examples = []
        if self.index is not None:
            examples = retrieve(self.index, instruction, self.examples_k)
        prompt = build_generation_prompt(instruction, examples)
        raw = call_llm(self.llm_config, prompt.text)
        result = extract_graph(raw)
        if not result.ok:
            raise RejectedEdit("generated graph does not compile",
                               result.diagnostics, raw)
        text = print_pcg(result.graph)
        try:
            session = self.create_from_pcg(text, persist=False)
        except EvalError as e:
            raise RejectedEdit(f"generated graph does not evaluate: {e}",
                               raw_response=raw) from e
        self._append(session, {"event": "init", "instruction": instruction,
                               "pcg": text})
        return session

    # -- mutations -----------------------------------------------------

    def get(self, session_id: str) -> Session:
        try:
            return self.sessions[session_id]
        except KeyError:
            raise UnknownSession(session_id) from None

    def apply_param(self, session_id: str, delta: ParamDelta):
        """Reevaluate with one changed parameter; errors leave state untouched."""
        session = self.get(session_id)
        mesh = session.eval.reevaluate({delta.name: delta.value})
        session.touched.add(delta.name)
        session.revision += 1
        session.updated = time.time()
        event = {"event": "param", "name": delta.name, "value": delta.value}
        session.history.append(event)
        self._append(session, event)
        return mesh

    def apply_text_edit(self, session_id: str, instruction: str):
        session = self.get(session_id)
        prompt = build_edit_prompt(session.graph, instruction)
        raw = call_llm(self.llm_config, prompt)
        result = extract_graph(raw)
        if not result.ok:
            raise RejectedEdit("edited graph does not compile",
                               result.diagnostics, raw)
        mesh = self._swap_graph(session, result.graph, raw)
        event = {"event": "edit", "instruction": instruction,
                 "pcg": print_pcg(result.graph)}
        session.history.append(event)
        self._append(session, event)
        return mesh

    def _swap_graph(self, session: Session, new_graph: Graph, raw: str | None):
        carried = _carry_bindings(session.eval, session.touched, new_graph)
        try:
            ev = EvalSession(new_graph, carried, check=False)
            mesh = ev.evaluate()
        except EvalError as e:
            raise RejectedEdit(f"edited graph does not evaluate: {e}",
                               raw_response=raw) from e
        session.eval = ev
        session.touched &= set(carried)
        session.revision += 1
        session.updated = time.time()
        return mesh

    # -- persistence -----------------------------------------------------

    def _log_path(self, session_id: str) -> str:
        return os.path.join(self.data_dir, session_id + ".jsonl")

    def _append(self, session: Session, event: dict) -> None:
        if not self.data_dir:
            return
        record = dict(event)
        record["ts"] = time.time()
        with open(self._log_path(session.id), "a") as f:
            f.write(json.dumps(record) + "\n")
            f.flush()

    def load_sessions(self) -> int:
        """Rebuild sessions by replaying event logs; corrupt logs are skipped."""
        loaded = 0
        for name in sorted(os.listdir(self.data_dir)):
            if not name.endswith(".jsonl"):
                continue
            session_id = name[:-6]
            try:
                self._replay(session_id)
                loaded += 1
            except Exception as e:  # noqa: BLE001 - one bad log must not kill the rest
                log.warning("skipping session %s: %s", session_id, e)
                self.sessions.pop(session_id, None)
        return loaded

    def _replay(self, session_id: str) -> None:
        with open(self._log_path(session_id), "r") as f:
            lines = [line for line in f.read().splitlines() if line.strip()]
        if not lines:
            raise ValueError("empty event log")
        events = [json.loads(line) for line in lines]
        if events[0].get("event") != "init":
            raise ValueError("log does not start with an init record")
        session = self.create_from_pcg(events[0]["pcg"], session_id=session_id,
                                       persist=False)
        for event in events[1:]:
            kind = event.get("event")
            if kind == "param":
                session.eval.reevaluate({event["name"]: event["value"]})
                session.touched.add(event["name"])
                session.revision += 1
            elif kind == "edit":
                result = parse_pcg(event["pcg"])
                if not result.ok:
                    raise ValueError("edit record holds an invalid graph")
                self._swap_graph(session, result.graph, None)
            else:
                raise ValueError(f"unknown event {kind!r}")
            session.history.append(
                {k: v for k, v in event.items() if k != "ts"})
