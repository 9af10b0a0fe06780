"""HTTP/WebSocket service over editing sessions.

Endpoints:
  POST  /sessions                {"pcg": ...} or {"instruction": ...}
  GET   /sessions/{id}           state snapshot
  PATCH /sessions/{id}/params    {"name": ..., "value": ...}
  POST  /sessions/{id}/edits     {"instruction": ...}
  GET   /sessions/{id}/mesh.obj  current mesh as OBJ
  WS    /sessions/{id}/stream    binary mesh frames + JSON control messages

Within a session mutations are serialized; across sessions they are
independent. Stream subscribers that fall behind skip to the latest frame.
"""

from __future__ import annotations

import asyncio
from collections import defaultdict

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel

from ..kernel.errors import EvalError
from ..kernel.mesh import encode_frame, export_obj
from ..llm.client import LlmError
from .sessions import ParamDelta, RejectedEdit, SessionManager, UnknownSession


class CreateSessionRequest(BaseModel):
    pcg: str | None = None
    instruction: str | None = None


class ParamPatch(BaseModel):
    name: str
    value: float | int | bool


class EditRequest(BaseModel):
    instruction: str


def _diag_list(diagnostics) -> list[dict]:
    return [
        {"severity": d.severity.value, "line": d.line, "code": d.code,
         "message": d.message}
        for d in diagnostics
    ]


class _Broadcaster:
    """Latest-wins fan-out: slow subscribers drop intermediate revisions."""

    def __init__(self):
        self.queues: dict[str, list[asyncio.Queue]] = defaultdict(list)

    def subscribe(self, session_id: str) -> asyncio.Queue:
        q: asyncio.Queue = asyncio.Queue(maxsize=1)
        self.queues[session_id].append(q)
        return q

    def unsubscribe(self, session_id: str, q: asyncio.Queue) -> None:
        try:
            self.queues[session_id].remove(q)
        except ValueError:
            pass

    def publish(self, session_id: str, item) -> None:
        for q in self.queues[session_id]:
            if q.full():
                try:
                    q.get_nowait()
                except asyncio.QueueEmpty:
                    pass
            q.put_nowait(item)


def create_app(manager: SessionManager | None = None) -> FastAPI:
    manager = manager or SessionManager()
    app = FastAPI(title="pcg edit service")
    app.state.manager = manager
    broadcaster = _Broadcaster()
    locks: dict[str, asyncio.Lock] = defaultdict(asyncio.Lock)

    def _session(session_id: str):
        try:
            return manager.get(session_id)
        except UnknownSession:
            raise HTTPException(404, f"unknown session {session_id!r}") from None

    def _publish(session) -> None:
        broadcaster.publish(session.id, {
            "revision": session.revision,
            "frame": encode_frame(session.mesh()),
            "params": session.state()["params"],
        })

    @app.post("/sessions")
    async def create_session(body: CreateSessionRequest):
        if (body.pcg is None) == (body.instruction is None):
            raise HTTPException(400, "provide exactly one of pcg | instruction")
        try:
            if body.pcg is not None:
                session = manager.create_from_pcg(body.pcg)
            else:
                session = manager.create_from_instruction(body.instruction)
        except RejectedEdit as e:
            raise HTTPException(422, detail={
                "message": str(e),
                "diagnostics": _diag_list(e.diagnostics),
                "raw_response": e.raw_response,
            }) from e
        except (EvalError, LlmError) as e:
            raise HTTPException(422, detail={"message": str(e)}) from e
        return session.state()

    @app.get("/sessions/{session_id}")
    async def get_state(session_id: str):
        return _session(session_id).state()

    @app.patch("/sessions/{session_id}/params")
    async def patch_param(session_id: str, body: ParamPatch):
        session = _session(session_id)
        async with locks[session_id]:
            try:
                manager.apply_param(session_id, ParamDelta(body.name, body.value))
            except EvalError as e:
                raise HTTPException(422, detail={"message": str(e),
                                                 "code": e.code}) from e
            _publish(session)
            return {"revision": session.revision, "params": session.state()["params"]}

    @app.post("/sessions/{session_id}/edits")
    async def post_edit(session_id: str, body: EditRequest):
        session = _session(session_id)
        async with locks[session_id]:
            try:
                manager.apply_text_edit(session_id, body.instruction)
            except RejectedEdit as e:
                raise HTTPException(422, detail={
                    "message": str(e),
                    "diagnostics": _diag_list(e.diagnostics),
                    "raw_response": e.raw_response,
                }) from e
            except (EvalError, LlmError, ValueError) as e:
                raise HTTPException(422, detail={"message": str(e)}) from e
            _publish(session)
            return session.state()

    @app.get("/sessions/{session_id}/mesh.obj")
    async def get_mesh(session_id: str):
        session = _session(session_id)
        return PlainTextResponse(export_obj(session.mesh()),
                                 media_type="text/plain")

    @app.websocket("/sessions/{session_id}/stream")
    async def stream(websocket: WebSocket, session_id: str):
        try:
            session = manager.get(session_id)
        except UnknownSession:
            await websocket.close(code=4404)
            return
        await websocket.accept()
        queue = broadcaster.subscribe(session_id)
        try:
            # initial snapshot so a fresh client can render immediately
            await websocket.send_json({"revision": session.revision,
                                       "params": session.state()["params"]})
            await websocket.send_bytes(encode_frame(session.mesh()))
            while True:
                item = await queue.get()
                await websocket.send_json({"revision": item["revision"],
                                           "params": item["params"]})
                await websocket.send_bytes(item["frame"])
        except WebSocketDisconnect:
            pass
        finally:
            broadcaster.unsubscribe(session_id, queue)

    return app
