"""HTTP facade over the session engine for the DM console.

Endpoints (JSON bodies documented in wacbench/schemas/):

    POST /sessions                create (or fork) a session -> 201
    GET  /sessions/{id}           full session view
    POST /sessions/{id}/answer    submit priorities or a raw supergradient
    POST /sessions/{id}/step      one cut + recentering (or run-to-stop)
    GET  /sessions/{id}/trace     JSON-lines trace
    GET  /sessions/{id}/report    feasibility report
    GET  /healthz

Errors are {"status": ..., "kind": ..., "detail": ...}.  Per-session
mutations are serialized by the store's single-writer lock.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse

from . import session_engine as se
from .cutting_plane import RunConfig
from .errors import PhaseError, WacbenchError
from .lp_model import augmented_from_json, embed_objective, instance_from_json, to_inequality_form
from .prob_bounds import UncertaintySpec
from .utility_oracles import OracleAnswer, utility_spec_from_json


class ApiError(Exception):
    def __init__(self, status: int, kind: str, detail: str):
        self.status = status
        self.kind = kind
        self.detail = detail
        super().__init__(detail)


def _config_from_json(doc: dict | None) -> RunConfig:
    doc = doc or {}
    cfg = RunConfig()
    for key in (
        "strategy", "variant", "cut_kind", "max_iter", "grad_tol",
        "stationary_tol", "eps_switch", "seed",
    ):
        if key in doc:
            setattr(cfg, key, doc[key])
    return cfg


def _problem_from_json(doc: dict):
    if "A" in doc and "row_labels" in doc:
        return augmented_from_json(doc)
    if "instance" in doc:
        inst = instance_from_json(doc["instance"])
        ineq = inst if all(k == "<=" for k in inst.row_kinds) else to_inequality_form(inst)
        return embed_objective(ineq, v=doc.get("v"))
    raise ApiError(422, "input", "problem must be an augmented system or {'instance': ..., 'v': ...}")


def create_app(data_dir: str = "./wacbench-sessions") -> FastAPI:
    app = FastAPI(title="wacbench", version="0.1.0")
    store = se.SessionStore(data_dir)

    @app.exception_handler(ApiError)
    async def api_error_handler(_req: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"status": exc.status, "kind": exc.kind, "detail": exc.detail},
        )

    def view(state: se.SessionState) -> dict:
        return se.session_to_json(state)

    def load(session_id: str) -> se.SessionState:
        state = store.get(session_id)
        if state is None:
            raise ApiError(404, "not_found", f"no session {session_id!r}")
        return state

    @app.get("/healthz")
    async def healthz():
        return {"status": "ok"}

    @app.post("/sessions", status_code=201)
    async def create_session(body: dict):
        try:
            if "fork" in body:
                src = load(body["fork"]["session_id"])
                state = se.fork_session(
                    src,
                    int(body["fork"]["iteration"]),
                    mode=body.get("mode"),
                )
            else:
                aug = _problem_from_json(body.get("problem") or {})
                utility = (
                    utility_spec_from_json(body["utility"]) if body.get("utility") else None
                )
                unc = (
                    UncertaintySpec.from_json(body["uncertainty"])
                    if body.get("uncertainty")
                    else None
                )
                w0 = np.array(body["start_weight"], dtype=float) if body.get("start_weight") else None
                state = se.create_session(
                    aug,
                    uncertainty=unc,
                    config=_config_from_json(body.get("config")),
                    mode=body.get("mode", "interactive"),
                    utility=utility,
                    w0=w0,
                )
        except ApiError:
            raise
        except IndexError as exc:
            raise ApiError(422, "input", str(exc)) from exc
        except (ValueError, KeyError, TypeError) as exc:
            raise ApiError(422, "input", str(exc)) from exc
        except WacbenchError as exc:
            raise ApiError(500, type(exc).__name__, str(exc)) from exc
        store.save(state)
        return view(state)

    @app.get("/sessions/{session_id}")
    async def get_session(session_id: str):
        return view(load(session_id))

    @app.post("/sessions/{session_id}/answer")
    async def answer(session_id: str, body: dict):
        state = load(session_id)
        with store.lock(session_id):
            try:
                if "priorities" in body:
                    payload = body["priorities"]
                elif "g" in body:
                    payload = OracleAnswer(
                        g=np.array(body["g"], dtype=float),
                        satisfied=bool(body.get("satisfied", False)),
                    )
                elif body.get("satisfied"):
                    m = state.aug.num_rows
                    payload = OracleAnswer(g=np.zeros(m), satisfied=True)
                else:
                    raise ApiError(422, "input", "body needs 'priorities', 'g', or 'satisfied'")
                state = se.submit_answer(state, payload)
            except ApiError:
                raise
            except PhaseError as exc:
                raise ApiError(409, "phase", str(exc)) from exc
            except (ValueError, TypeError) as exc:
                raise ApiError(422, "input", str(exc)) from exc
            store.save(state)
        return view(state)

    @app.post("/sessions/{session_id}/step")
    async def step(session_id: str):
        state = load(session_id)
        with store.lock(session_id):
            try:
                state = se.step(state)
            except PhaseError as exc:
                raise ApiError(409, "phase", str(exc)) from exc
            except WacbenchError as exc:
                raise ApiError(500, type(exc).__name__, str(exc)) from exc
            store.save(state)
        return view(state)

    @app.get("/sessions/{session_id}/trace")
    async def trace(session_id: str):
        state = load(session_id)
        return PlainTextResponse(state.trace.to_jsonl(), media_type="application/x-ndjson")

    @app.get("/sessions/{session_id}/report")
    async def report(session_id: str):
        state = load(session_id)
        if state.report is None:
            raise ApiError(404, "not_found", "no report computed yet")
        return state.report.to_json()

    return app
