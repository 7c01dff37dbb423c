"""HTTP service exposing sessions over a small JSON API.

Sessions live in memory keyed by id; there is no persistence, the
client's action log is the durability mechanism.  Actions for one
session are applied under that session's lock, in arrival order;
distinct sessions are independent.  Scene and state responses are
emitted through the canonical serializer so that replaying an action log
against a fresh session reproduces the bytes exactly.
"""

from __future__ import annotations

import itertools
import json
import threading
from dataclasses import dataclass

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from . import io
from .design import PRESET_NAMES, preset
from .errors import (
    FormatError,
    InvalidAction,
    InvalidDesign,
    NoSuchField,
    TimelineError,
    UnknownCentral,
    UnknownPreset,
)
from .model import S4DDataset, field_kind
from .session import SessionState, apply, initial_state, render_state


@dataclass
class _Session:
    state: SessionState
    lock: threading.Lock


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"detail": message})


def _dataset_fields(dataset: S4DDataset) -> list[dict]:
    names = sorted({k for tp in dataset.time_points for s in tp.snapshots for k in s.annotations})
    fields = []
    for name in names:
        try:
            kind = field_kind(dataset, name)
        except NoSuchField:
            continue
        fields.append({"name": name, "kind": kind})
    return fields


def create_app(dataset: S4DDataset) -> FastAPI:
    app = FastAPI(title="timeline3d", docs_url=None, redoc_url=None)
    sessions: dict[str, _Session] = {}
    store_lock = threading.Lock()
    ids = itertools.count(1)
    meta_doc = {
        "name": dataset.meta.name,
        "time_unit": dataset.meta.time_unit,
        "space_unit": dataset.meta.space_unit,
        "time_point_count": len(dataset.time_points),
        "snapshot_count": len(dataset.all_snapshot_ids()),
        "extent": dataset.extent(),
        "fields": _dataset_fields(dataset),
    }

    def _get(session_id: str) -> _Session | None:
        with store_lock:
            return sessions.get(session_id)

    async def _body(request: Request):
        raw = await request.body()
        if not raw:
            return {}
        try:
            return json.loads(raw)
        except json.JSONDecodeError as exc:
            raise _MalformedBody(str(exc)) from None

    class _MalformedBody(Exception):
        pass

    @app.exception_handler(_MalformedBody)
    async def _malformed(request: Request, exc: _MalformedBody):
        return _error(400, f"malformed JSON: {exc}")

    @app.get("/dataset/meta")
    async def dataset_meta() -> Response:
        return Response(content=io.emit(meta_doc), media_type="application/json")

    @app.get("/presets")
    async def presets() -> Response:
        doc = {
            "presets": [
                {"name": name, "design": io.design_doc(preset(name))} for name in PRESET_NAMES
            ]
        }
        return Response(content=io.emit(doc), media_type="application/json")

    @app.post("/session")
    async def create_session(request: Request):
        body = await _body(request)
        if not isinstance(body, dict):
            return _error(422, "expected a JSON object")
        unknown = set(body) - {"preset", "design", "central"}
        if unknown:
            return _error(422, f"unknown fields: {sorted(unknown)}")
        if "preset" in body and "design" in body:
            return _error(422, "give either a preset name or a design, not both")
        try:
            if "design" in body:
                design = io.design_from_doc(body["design"])
            else:
                design = preset(body.get("preset", "helicoid-unified"))
            central = None
            raw_central = body.get("central")
            if raw_central is not None:
                if (
                    not isinstance(raw_central, list)
                    or len(raw_central) != 2
                    or not isinstance(raw_central[0], str)
                    or not isinstance(raw_central[1], int)
                ):
                    return _error(422, "central must be [branch, index]")
                central = (raw_central[0], raw_central[1])
            state = initial_state(dataset, design, central=central)
        except (FormatError, UnknownPreset, UnknownCentral, InvalidDesign) as exc:
            return _error(422, str(exc))
        session_id = f"s{next(ids)}"
        with store_lock:
            sessions[session_id] = _Session(state=state, lock=threading.Lock())
        return JSONResponse(status_code=201, content={"id": session_id})

    @app.post("/session/{session_id}/action")
    async def post_action(session_id: str, request: Request):
        session = _get(session_id)
        if session is None:
            return _error(404, f"unknown session {session_id!r}")
        body = await _body(request)
        try:
            action = io.parse_action(body)
        except FormatError as exc:
            return _error(422, str(exc))
        with session.lock:
            try:
                new_state, changed = apply(session.state, action)
            except InvalidAction as exc:
                return _error(422, str(exc))
            session.state = new_state
        return JSONResponse(content={"changed": sorted(changed)})

    @app.get("/session/{session_id}/scene")
    async def get_scene(session_id: str):
        session = _get(session_id)
        if session is None:
            return _error(404, f"unknown session {session_id!r}")
        with session.lock:
            state = session.state
        try:
            render = render_state(state)
        except TimelineError as exc:
            return _error(422, str(exc))
        return Response(content=io.scene_to_json(render, state), media_type="application/json")

    @app.get("/session/{session_id}/state")
    async def get_state(session_id: str):
        session = _get(session_id)
        if session is None:
            return _error(404, f"unknown session {session_id!r}")
        with session.lock:
            state = session.state
        return Response(content=io.emit(io.state_doc(state)), media_type="application/json")

    return app
