"""HTTP/JSON boundary over the platform.

Every endpoint maps 1:1 onto an in-process operation; domain errors
surface as their stable machine codes with HTTP-status equivalents.
Optional shared-token auth via the X-KWSP-Token header.
"""

from __future__ import annotations

import os
from typing import Optional

from fastapi import Body, FastAPI, Query, Request
from fastapi.responses import JSONResponse, StreamingResponse

from .contextualize import ArticulationRequest, TranscriptionJob
from .errors import KwspError
from .exploration import SearchRequest
from .model import ElementKind, InformationalElement, Surrogate
from .platform import Platform


def create_app(data_dir: str, auth_token: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="kwsp", version="0.1.0")
    platform = Platform(data_dir)
    app.state.platform = platform
    app.state.auth_token = auth_token

    @app.exception_handler(KwspError)
    async def domain_error_handler(_request: Request, exc: KwspError):
        return JSONResponse(status_code=exc.http_status, content=exc.to_dict())

    @app.middleware("http")
    async def check_token(request: Request, call_next):
        token = app.state.auth_token
        if token and request.headers.get("x-kwsp-token") != token:
            return JSONResponse(
                status_code=401,
                content={"code": "Unauthorized", "message": "missing or bad token"},
            )
        return await call_next(request)

    # -- definitions -----------------------------------------------------

    @app.get("/task-types")
    def list_task_types():
        return [
            {"id": d.id, "name": d.name, "version": d.version}
            for d in platform.task_types()
        ]

    @app.put("/task-types")
    def put_task_type(document: dict = Body(...)):
        import json

        definition = platform.register_definition(json.dumps(document))
        return {"id": definition.id, "version": definition.version}

    @app.get("/task-types/{task_type}")
    def get_task_type(task_type: str, version: Optional[int] = None):
        registry = platform.archive.registry
        definition = (
            registry.get(task_type, version) if version else registry.latest(task_type)
        )
        if definition is None:
            return JSONResponse(
                status_code=404,
                content={"code": "UnknownTaskType", "message": task_type},
            )
        return definition.to_dict()

    @app.get("/task-types/{task_type}/deviation-report")
    def deviation_report(task_type: str):
        return platform.workspace.deviation_report(task_type)

    @app.get("/task-types/{task_type}/nodes/{node}/instances")
    def node_instances(task_type: str, node: str):
        return platform.instances_under(task_type, node)

    # -- sessions --------------------------------------------------------

    @app.post("/sessions")
    def open_session(body: dict = Body(...)):
        session = platform.workspace.open_session(
            body["worker"], body["task_type"], body["task_instance"]
        )
        return session.to_dict()

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        session = platform.workspace.get_session(session_id)
        if session is None:
            return JSONResponse(
                status_code=404,
                content={"code": "UnknownRecord", "message": session_id},
            )
        return session.to_dict()

    @app.post("/sessions/{session_id}/advance")
    def advance(session_id: str, body: dict = Body(...)):
        event = platform.workspace.advance(
            session_id, body["to_activity"], body.get("note")
        )
        return event.to_dict()

    @app.get("/sessions/{session_id}/context")
    def context(session_id: str):
        return platform.workspace.current_context(session_id).to_dict()

    @app.post("/sessions/{session_id}/complete")
    def complete(session_id: str):
        return platform.workspace.complete_session(session_id).to_dict()

    @app.post("/sessions/{session_id}/elements")
    def articulate_element(session_id: str, body: dict = Body(...)):
        request = ArticulationRequest(
            session_id=session_id,
            kind=ElementKind(body["kind"]),
            content=body["content"],
            surrogate=Surrogate(
                title=body["surrogate"]["title"],
                terms=tuple(body["surrogate"].get("terms", [])),
            ),
            supports=tuple(body.get("supports", [])),
            satisfies=tuple(body.get("satisfies", [])),
            ie_type_node=body.get("ie_type_node"),
            note=body.get("note", ""),
        )
        return platform.articulate(request).to_dict()

    @app.get("/sessions/{session_id}/recommendations/next")
    def recommend_next(session_id: str):
        return [r.to_dict() for r in platform.recommender.next_activities(session_id)]

    @app.get("/sessions/{session_id}/recommendations/related")
    def recommend_related(session_id: str, limit: int = Query(5)):
        return [
            r.to_dict()
            for r in platform.recommender.related_elements(session_id, limit)
        ]

    @app.get("/sessions/{session_id}/recommendations/completeness")
    def recommend_completeness(session_id: str):
        return [
            r.to_dict()
            for r in platform.recommender.completeness_warnings(session_id)
        ]

    # -- transcription ---------------------------------------------------

    @app.post("/transcriptions")
    def post_transcription(body: dict = Body(...)):
        return platform.transcribe(TranscriptionJob.from_dict(body)).to_dict()

    # -- exploration -----------------------------------------------------

    @app.get("/search")
    def search(
        terms: str = Query(""),
        task_type: Optional[str] = None,
        task_instance: Optional[str] = None,
        kind: Optional[str] = None,
        activity_node: Optional[str] = None,
        ie_type_node: Optional[str] = None,
        limit: int = Query(10),
    ):
        filter: dict = {}
        if task_type:
            filter["task_type"] = task_type
        if task_instance:
            filter["task_instance"] = task_instance
        if kind:
            filter["kind"] = kind
        if activity_node:
            filter["activity_node"] = activity_node
        if ie_type_node:
            filter["ie_type_node"] = ie_type_node
        request = SearchRequest(
            terms=tuple(t for t in terms.split(",") if t), filter=filter, limit=limit
        )
        return [r.to_dict() for r in platform.search(request)]

    @app.get("/elements/{element_id}")
    def get_element(element_id: str):
        body = platform.archive.get(element_id)
        if not isinstance(body, InformationalElement):
            return JSONResponse(
                status_code=404,
                content={"code": "UnknownRecord", "message": element_id},
            )
        return body.to_dict()

    @app.get("/elements/{element_id}/provenance")
    def provenance(element_id: str, max_depth: Optional[int] = None):
        return platform.provenance_closure(element_id, max_depth).to_dict()

    @app.get("/elements/{element_id}/supports")
    def supports(element_id: str):
        return platform.support_set(element_id)

    # -- argumentation ---------------------------------------------------

    @app.post("/issues")
    def post_issue(body: dict = Body(...)):
        return platform.argumentation.raise_issue(body["session"], body["text"]).to_dict()

    @app.post("/positions")
    def post_position(body: dict = Body(...)):
        return platform.argumentation.take_position(
            body["issue"], body["text"], body["session"]
        ).to_dict()

    @app.post("/arguments")
    def post_argument(body: dict = Body(...)):
        return platform.argumentation.argue(
            body["position"],
            body["stance"],
            body["text"],
            body["session"],
            tuple(body.get("evidence", [])),
        ).to_dict()

    @app.get("/positions/{position_id}/verify")
    def verify_position(position_id: str):
        return platform.argumentation.verify(position_id).to_dict()

    @app.post("/positions/{position_id}/conclude")
    def conclude_position(position_id: str, body: dict = Body(...)):
        return platform.argumentation.conclude(position_id, body["session"]).to_dict()

    # -- export ----------------------------------------------------------

    @app.get("/export")
    def export():
        return StreamingResponse(
            platform.archive.export_stream(), media_type="application/jsonl"
        )

    return app
