"""HTTP facade over the planning core.

Every endpoint is a thin adapter: parse the body, call one session
operation under the store's per-session lock, serialize the result.
Domain errors surface as {code, message, detail} with a stable status
per code, so clients can branch on `code` alone.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.encoders import jsonable_encoder
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles

from ..config import ServiceConfig
from ..detect import run_detection
from ..errors import PlanningError
from ..geometry import Point2, ScrewEndpoint
from ..plandoc import render_plan
from ..session import (
    ImageMeta,
    add_screw,
    apply_label,
    attach_detections,
    create_session,
    export_plan,
    move_endpoint,
    set_orientation,
    set_screw_params,
)
from . import schemas
from .store import SessionStore

STATUS_BY_CODE = {
    "INVALID_IMAGE": 400,
    "INVALID_BOX": 400,
    "OUT_OF_BOUNDS": 400,
    "UNKNOWN_SESSION": 404,
    "UNKNOWN_SCREW": 404,
    "NO_MATCHING_BOX": 409,
    "DUPLICATE_BOX": 409,
    "UNPAIRED_LABEL": 409,
    "DUPLICATE_SCREW": 409,
    "EMPTY_PLAN": 409,
    "DEGENERATE_SCREW": 422,
    "UNKNOWN_LABEL": 422,
    "DETECTOR_FAILED": 502,
}


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    store = SessionStore()
    app = FastAPI(title="spineplan", docs_url=None, redoc_url=None)
    app.state.config = config
    app.state.store = store

    @app.exception_handler(PlanningError)
    def domain_error(request: Request, exc: PlanningError) -> JSONResponse:
        return JSONResponse(
            status_code=STATUS_BY_CODE.get(exc.code, 400),
            content=jsonable_encoder(
                {"code": exc.code, "message": exc.message, "detail": exc.detail}
            ),
        )

    @app.exception_handler(RequestValidationError)
    def validation_error(request: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(
            status_code=422,
            content=jsonable_encoder(
                {
                    "code": "VALIDATION_ERROR",
                    "message": "request body failed validation",
                    "detail": exc.errors(),
                }
            ),
        )

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/sessions", status_code=201, response_model=schemas.SessionSnapshot)
    def create(body: schemas.CreateSessionIn) -> schemas.SessionSnapshot:
        session = create_session(
            ImageMeta(body.ap.image_ref, body.ap.width, body.ap.height),
            ImageMeta(body.lp.image_ref, body.lp.width, body.lp.height),
            session_id=body.session_id,
        )
        store.put(session)
        return schemas.snapshot(session)

    @app.get("/sessions/{sid}", response_model=schemas.SessionSnapshot)
    def get_session(sid: str) -> schemas.SessionSnapshot:
        return schemas.snapshot(store.get(sid))

    @app.post("/sessions/{sid}/detect", response_model=schemas.DetectionsOut)
    def detect(sid: str) -> schemas.DetectionsOut:
        def fn(session):
            updated = run_detection(session, config)
            return updated, schemas.DetectionsOut(
                ap_boxes=[schemas.box_body(b) for b in updated.ap.boxes],
                lp_boxes=[schemas.box_body(b) for b in updated.lp.boxes],
            )

        return store.mutate(sid, fn)

    @app.post("/sessions/{sid}/detections", response_model=schemas.DetectionsOut)
    def attach(sid: str, body: schemas.DetectionsIn) -> schemas.DetectionsOut:
        boxes = [schemas.box_from_body(b) for b in body.boxes]

        def fn(session):
            updated = attach_detections(session, schemas.view_kind(body.view), boxes)
            return updated, schemas.DetectionsOut(
                ap_boxes=[schemas.box_body(b) for b in updated.ap.boxes],
                lp_boxes=[schemas.box_body(b) for b in updated.lp.boxes],
            )

        return store.mutate(sid, fn)

    @app.post("/sessions/{sid}/orientation", response_model=schemas.SessionSnapshot)
    def orient(sid: str, body: schemas.OrientationIn) -> schemas.SessionSnapshot:
        def fn(session):
            updated = set_orientation(
                session, schemas.view_kind(body.view), body.rotation, body.flip
            )
            return updated, schemas.snapshot(updated)

        return store.mutate(sid, fn)

    @app.post("/sessions/{sid}/labels", response_model=schemas.LabelResult)
    def label(sid: str, body: schemas.LabelIn) -> schemas.LabelResult:
        def fn(session):
            updated, box = apply_label(
                session, schemas.view_kind(body.view), Point2(body.u, body.v), body.label
            )
            return updated, schemas.LabelResult(
                view=body.view,
                label=body.label,
                box=schemas.box_body(box),
                marker=schemas.Point2Out(u=body.u, v=body.v),
            )

        return store.mutate(sid, fn)

    @app.post("/sessions/{sid}/screws", status_code=201, response_model=schemas.ScrewOut)
    def place_screw(sid: str, body: schemas.AddScrewIn) -> schemas.ScrewOut:
        def fn(session):
            updated, screw = add_screw(session, body.label, schemas.side(body.side))
            return updated, schemas.screw_out(screw, updated)

        return store.mutate(sid, fn)

    @app.patch("/sessions/{sid}/screws/{screw_id}/endpoint", response_model=schemas.ScrewOut)
    def drag_endpoint(sid: str, screw_id: str, body: schemas.EndpointPatch) -> schemas.ScrewOut:
        def fn(session):
            updated = move_endpoint(
                session,
                screw_id,
                schemas.view_kind(body.view),
                ScrewEndpoint(body.endpoint),
                Point2(body.u, body.v),
            )
            return updated, schemas.screw_out(updated.screw_by_id(screw_id), updated)

        return store.mutate(sid, fn)

    @app.patch("/sessions/{sid}/screws/{screw_id}/params", response_model=schemas.ScrewOut)
    def patch_params(sid: str, screw_id: str, body: schemas.ParamsPatch) -> schemas.ScrewOut:
        def fn(session):
            updated = set_screw_params(
                session, screw_id, diameter=body.diameter, screw_type=body.screw_type
            )
            return updated, schemas.screw_out(updated.screw_by_id(screw_id), updated)

        return store.mutate(sid, fn)

    @app.get("/sessions/{sid}/screws", response_model=list[schemas.ScrewOut])
    def list_screws(sid: str) -> list[schemas.ScrewOut]:
        session = store.get(sid)
        return [schemas.screw_out(s, session) for s in session.screws]

    @app.get("/sessions/{sid}/plan", response_class=PlainTextResponse)
    def plan(sid: str) -> str:
        return render_plan(export_plan(store.get(sid)))

    if config.fixture_root and Path(config.fixture_root).is_dir():
        app.mount(
            "/images", StaticFiles(directory=config.fixture_root), name="images"
        )

    return app
