"""HTTP session service: the painting UI's single source of truth.

Sessions are in-memory: an electorate, a partition, the latest report, and
a revision counter that bumps on every successful mutation.  Mutations on a
session are serialized behind its lock; reads take a consistent snapshot
without blocking writers for long.  Every response carries the revision it
describes so optimistic clients can detect staleness (409 on a mismatched
expected_revision, 422 on invalid cells with nothing applied).
"""

from __future__ import annotations

import os
import threading
import uuid
from dataclasses import dataclass

import uvicorn
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .anneal import AnnealConfig, anneal
from .electorate import Electorate, LatticeParams, generate_lattice_electorate, load_electorate
from .errors import GerrylabError
from .fileio import report_to_dict
from .grid import CellPartition
from .metrics import PlanReport, plan_report
from .splitline import SplitlineConfig, shortest_splitline

__all__ = ["create_app", "serve", "DEFAULT_PORT"]

DEFAULT_PORT = 8080


class LatticeSpec(BaseModel):
    n: int
    l: int
    a: int
    b: int


class CreateSessionRequest(BaseModel):
    g: int
    k: int
    lattice: LatticeSpec | None = None
    electorate_file: str | None = None


class PaintRequest(BaseModel):
    cells: list[tuple[int, int]] = []  # (cell index, district id)
    expected_revision: int | None = None


class SplitlineRequest(BaseModel):
    angle_steps: int = 180
    population_tolerance: int = 0
    expected_revision: int | None = None


class AnnealRequest(BaseModel):
    seed: int = 0
    steps: int = 200_000
    t_initial: float = 0.30
    t_final: float = 1e-4
    lambda_pop: float = 10.0
    lambda_pp: float = 20.0
    lambda_conn: float = 0.0
    pp_floor: float = 0.10
    delta_cap: float = 0.05
    expected_revision: int | None = None


@dataclass(frozen=True)
class SessionState:
    partition: CellPartition
    report: PlanReport
    revision: int


class Session:
    def __init__(self, sid: str, electorate: Electorate, partition: CellPartition):
        self.id = sid
        self.electorate = electorate
        self.lock = threading.Lock()
        self.state = SessionState(partition, plan_report(electorate, partition), 0)


def _state_payload(session: Session) -> dict:
    state = session.state
    return {
        "id": session.id,
        "revision": state.revision,
        "g": state.partition.g,
        "k": state.partition.k,
        "assignment": list(state.partition.assignment),
        "report": report_to_dict(state.report),
    }


def create_app() -> FastAPI:
    app = FastAPI(title="gerrylab", version="1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()

    def get_session(sid: str) -> Session:
        with registry_lock:
            session = sessions.get(sid)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown session {sid}")
        return session

    def check_revision(session: Session, expected: int | None) -> None:
        if expected is not None and expected != session.state.revision:
            raise HTTPException(
                status_code=409,
                detail={
                    "error": "stale expected_revision",
                    "expected": expected,
                    "revision": session.state.revision,
                },
            )

    def replace_plan(session: Session, partition: CellPartition) -> None:
        report = plan_report(session.electorate, partition)
        old = session.state
        session.state = SessionState(partition, report, old.revision + 1)

    @app.post("/sessions", status_code=201)
    def create_session(req: CreateSessionRequest) -> dict:
        if req.g < 1 or req.k < 1 or req.k > req.g * req.g:
            raise HTTPException(
                status_code=422,
                detail=f"need 1 <= k <= g*g, got g={req.g} k={req.k}",
            )
        if (req.lattice is None) == (req.electorate_file is None):
            raise HTTPException(
                status_code=422,
                detail="provide exactly one of lattice parameters or electorate_file",
            )
        try:
            if req.lattice is not None:
                params = LatticeParams(
                    n=req.lattice.n, l=req.lattice.l, a=req.lattice.a, b=req.lattice.b
                )
                electorate = generate_lattice_electorate(params)
            else:
                electorate = load_electorate(req.electorate_file)
        except (GerrylabError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        sid = uuid.uuid4().hex
        partition = CellPartition(req.g, req.k, (1,) * (req.g * req.g))
        session = Session(sid, electorate, partition)
        with registry_lock:
            sessions[sid] = session
        return _state_payload(session)

    @app.get("/sessions/{sid}")
    def get_state(sid: str) -> dict:
        return _state_payload(get_session(sid))

    @app.get("/sessions/{sid}/metrics")
    def get_metrics(sid: str) -> dict:
        state = get_session(sid).state
        return {"revision": state.revision, "report": report_to_dict(state.report)}

    @app.post("/sessions/{sid}/paint")
    def paint_cells(sid: str, req: PaintRequest) -> dict:
        session = get_session(sid)
        with session.lock:
            check_revision(session, req.expected_revision)
            state = session.state
            p = state.partition
            cells = p.g * p.g
            changes: dict[int, int] = {}
            for cell, district in req.cells:
                if not 0 <= cell < cells:
                    raise HTTPException(
                        status_code=422,
                        detail=f"cell index {cell} outside 0..{cells - 1}; nothing applied",
                    )
                if not 1 <= district <= p.k:
                    raise HTTPException(
                        status_code=422,
                        detail=f"district id {district} outside 1..{p.k}; nothing applied",
                    )
                changes[cell] = district
            if changes:
                replace_plan(session, p.with_cells(changes))
        return _state_payload(session)

    @app.post("/sessions/{sid}/splitline")
    def run_splitline(sid: str, req: SplitlineRequest) -> dict:
        session = get_session(sid)
        with session.lock:
            check_revision(session, req.expected_revision)
            state = session.state
            try:
                cfg = SplitlineConfig(
                    angle_steps=req.angle_steps,
                    population_tolerance=req.population_tolerance,
                )
                partition = shortest_splitline(
                    session.electorate, state.partition.k, state.partition.g, cfg
                )
            except (GerrylabError, ValueError) as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from exc
            replace_plan(session, partition)
        return _state_payload(session)

    @app.post("/sessions/{sid}/anneal")
    def run_anneal(sid: str, req: AnnealRequest) -> dict:
        session = get_session(sid)
        with session.lock:
            check_revision(session, req.expected_revision)
            state = session.state
            try:
                cfg = AnnealConfig(
                    seed=req.seed,
                    steps=req.steps,
                    t_initial=req.t_initial,
                    t_final=req.t_final,
                    lambda_pop=req.lambda_pop,
                    lambda_pp=req.lambda_pp,
                    lambda_conn=req.lambda_conn,
                    pp_floor=req.pp_floor,
                    delta_cap=req.delta_cap,
                )
                result = anneal(
                    session.electorate, state.partition.k, state.partition.g, cfg
                )
            except (GerrylabError, ValueError) as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from exc
            replace_plan(session, result.plan)
        return _state_payload(session)

    return app


def serve(host: str = "127.0.0.1", port: int | None = None) -> None:
    """Run the service; GERRYLAB_PORT overrides the default port 8080."""
    if port is None:
        port = int(os.environ.get("GERRYLAB_PORT", DEFAULT_PORT))
    uvicorn.run(create_app(), host=host, port=port)
