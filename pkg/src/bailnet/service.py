"""HTTP facade for what-if analysis and optimized injections.

Endpoints:

* ``POST /networks``: upload a network document, get a session id (201).
* ``GET /networks/{id}``: node count, total obligations, baseline
  default count with no injections.
* ``POST /networks/{id}/whatif``: clear the network under a trial
  injection; stateless between calls.
* ``POST /networks/{id}/optimize``: run one of the optimizers.  Large
  requests (nodes above ``async_node_threshold`` or more total starts
  than ``async_start_threshold``) return 202 with a job id instead.
* ``GET /jobs/{id}``: poll an asynchronous optimization.

Sessions are in-memory and expire after an idle timeout; a restart drops
them.  Networks are immutable once stored, so concurrent reads need no
coordination; the job table is the only synchronized structure.  Errors
are ``{"code", "message"}`` JSON.  Responses are built by the same
report module the CLI uses, so numeric payloads match the CLI exactly.
"""

from __future__ import annotations

import argparse
import math
import os
import threading
import time
import uuid
from concurrent.futures import ThreadPoolExecutor
from contextlib import asynccontextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

from fastapi import FastAPI
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from . import report
from .fileio import NetworkFormatError, allocation_from_doc, network_from_doc
from .lp import LpError
from .network import (
    ClearingError,
    LiabilityNetwork,
    NetworkValidationError,
    RelativeLiabilities,
    clearing_vector,
    relative_liabilities,
)
from .optimize import (
    ReweightParams,
    minimize_defaults,
    minimize_unpaid,
    minimize_unpaid_lagrangian,
)

__all__ = ["create_app", "SessionStore", "main"]

DEFAULT_SESSION_TIMEOUT = 3600.0
DEFAULT_ASYNC_NODE_THRESHOLD = 256
DEFAULT_ASYNC_START_THRESHOLD = 6


class RequestError(Exception):
    """Maps straight to an error response."""

    def __init__(self, code: str, message: str, status: int = 400) -> None:
        super().__init__(message)
        self.code = code
        self.message = message
        self.status = status


@dataclass
class _Session:
    net: LiabilityNetwork
    rel: RelativeLiabilities
    last_used: float
    baseline_defaults: int | None = None


class SessionStore:
    """Uploaded networks keyed by opaque ids, dropped after idle timeout."""

    def __init__(self, timeout: float) -> None:
        if timeout <= 0:
            raise ValueError("session timeout must be positive")
        self.timeout = timeout
        self._items: dict[str, _Session] = {}
        self._lock = threading.Lock()

    def _sweep(self, now: float) -> None:
        dead = [sid for sid, item in self._items.items()
                if now - item.last_used > self.timeout]
        for sid in dead:
            del self._items[sid]

    def put(self, net: LiabilityNetwork) -> str:
        sid = uuid.uuid4().hex
        session = _Session(net=net, rel=relative_liabilities(net),
                           last_used=time.monotonic())
        with self._lock:
            self._sweep(session.last_used)
            self._items[sid] = session
        return sid

    def get(self, sid: str) -> _Session:
        now = time.monotonic()
        with self._lock:
            self._sweep(now)
            session = self._items.get(sid)
            if session is None:
                raise KeyError(sid)
            session.last_used = now
            return session

    def __len__(self) -> int:
        with self._lock:
            return len(self._items)


@dataclass
class _Job:
    status: str = "queued"
    result: dict | None = None
    error: str | None = None


class _JobTable:
    def __init__(self) -> None:
        self._items: dict[str, _Job] = {}
        self._lock = threading.Lock()

    def create(self) -> str:
        job_id = uuid.uuid4().hex
        with self._lock:
            self._items[job_id] = _Job()
        return job_id

    def set_running(self, job_id: str) -> None:
        with self._lock:
            self._items[job_id].status = "running"

    def set_done(self, job_id: str, result: dict) -> None:
        with self._lock:
            job = self._items[job_id]
            job.status = "done"
            job.result = result

    def set_failed(self, job_id: str, error: str) -> None:
        with self._lock:
            job = self._items[job_id]
            job.status = "failed"
            job.error = error

    def get(self, job_id: str) -> _Job:
        with self._lock:
            job = self._items.get(job_id)
            if job is None:
                raise KeyError(job_id)
            return _Job(status=job.status, result=job.result, error=job.error)


def _number(body: dict, key: str, minimum: float | None = None,
            default: float | None = None) -> float:
    value = body.get(key, default)
    if value is None:
        raise RequestError("invalid_request", f"missing required field {key!r}")
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise RequestError("invalid_request", f"field {key!r} must be a number")
    value = float(value)
    if not math.isfinite(value):
        raise RequestError("invalid_request", f"field {key!r} must be finite")
    if minimum is not None and value < minimum:
        raise RequestError("invalid_request",
                           f"field {key!r} must be at least {minimum}")
    return value


def _integer(body: dict, key: str, default: int, minimum: int) -> int:
    value = body.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise RequestError("invalid_request", f"field {key!r} must be an integer")
    if value < minimum:
        raise RequestError("invalid_request",
                           f"field {key!r} must be at least {minimum}")
    return value


def _reweight_from_body(body: dict) -> ReweightParams:
    try:
        return ReweightParams(
            k_const=_number(body, "k", minimum=0.0, default=1000.0),
            epsilon=_number(body, "epsilon", minimum=0.0, default=1e-3),
            delta=_number(body, "delta", minimum=0.0, default=1e-3),
            max_iterations=_integer(body, "max_iterations", default=50, minimum=1),
            num_random_starts=_integer(body, "starts", default=5, minimum=0),
            rng_seed=_integer(body, "seed", default=0, minimum=-(2 ** 63)),
        )
    except ValueError as exc:
        raise RequestError("invalid_request", str(exc))


def create_app(session_timeout: float = DEFAULT_SESSION_TIMEOUT,
               async_node_threshold: int = DEFAULT_ASYNC_NODE_THRESHOLD,
               async_start_threshold: int = DEFAULT_ASYNC_START_THRESHOLD,
               max_workers: int = 2,
               ui_dir: str | Path | None = None) -> FastAPI:
    store = SessionStore(timeout=session_timeout)
    jobs = _JobTable()
    executor = ThreadPoolExecutor(max_workers=max_workers)

    @asynccontextmanager
    async def lifespan(_: FastAPI):
        yield
        executor.shutdown(wait=False, cancel_futures=True)

    app = FastAPI(title="bailnet", lifespan=lifespan)
    app.state.store = store

    def _error(status: int, code: str, message: str) -> JSONResponse:
        return JSONResponse({"code": code, "message": message}, status_code=status)

    @app.exception_handler(RequestError)
    async def _on_request_error(_, exc: RequestError):
        return _error(exc.status, exc.code, exc.message)

    @app.exception_handler(RequestValidationError)
    async def _on_validation_error(_, exc: RequestValidationError):
        return _error(400, "invalid_request", "body must be a JSON object")

    @app.exception_handler(LpError)
    async def _on_lp_error(_, exc: LpError):
        return _error(500, "solver_failure", str(exc))

    @app.exception_handler(ClearingError)
    async def _on_clearing_error(_, exc: ClearingError):
        return _error(500, "solver_failure", str(exc))

    def _session(sid: str) -> _Session:
        try:
            return store.get(sid)
        except KeyError:
            raise RequestError("unknown_session",
                               f"no live session {sid!r}", status=404)

    @app.post("/networks", status_code=201)
    def post_network(body: dict):
        try:
            net = network_from_doc(body)
        except (NetworkFormatError, NetworkValidationError) as exc:
            raise RequestError("invalid_network", str(exc))
        return {"network_id": store.put(net)}

    @app.get("/networks/{sid}")
    def get_network(sid: str):
        session = _session(sid)
        if session.baseline_defaults is None:
            outcome = clearing_vector(session.net, rel=session.rel)
            session.baseline_defaults = outcome.n_defaults
        return {
            "network_id": sid,
            "n": session.net.n,
            "total_obligations": report.round_currency(
                session.net.liabilities.sum()),
            "baseline_defaults": session.baseline_defaults,
        }

    @app.post("/networks/{sid}/whatif")
    def post_whatif(sid: str, body: dict):
        session = _session(sid)
        try:
            alloc = allocation_from_doc(body, session.net)
        except NetworkFormatError as exc:
            raise RequestError("invalid_injection", str(exc))
        outcome = clearing_vector(session.net, alloc, rel=session.rel)
        return report.outcome_summary(session.net, alloc, outcome)

    def _parse_optimize(session: _Session,
                        body: dict) -> tuple[Callable[[], dict], int]:
        net, rel = session.net, session.rel
        mode = body.get("mode")
        if mode == "liabilities":
            budget = _number(body, "budget", minimum=0.0)

            def run() -> dict:
                result = minimize_unpaid(net, budget, rel=rel)
                return report.optimization_summary(net, "liabilities", result,
                                                   budget=budget)
            return run, 1
        if mode == "lagrangian":
            lam = _number(body, "lambda", minimum=0.0)

            def run() -> dict:
                result = minimize_unpaid_lagrangian(net, lam, rel=rel)
                return report.optimization_summary(net, "lagrangian", result,
                                                   cost_weight=lam)
            return run, 1
        if mode == "defaults":
            budget = _number(body, "budget", minimum=0.0)
            params = _reweight_from_body(body)

            def run() -> dict:
                result = minimize_defaults(net, budget, params=params, rel=rel)
                return report.optimization_summary(net, "defaults", result,
                                                   budget=budget, params=params)
            return run, params.num_random_starts + 1
        raise RequestError("invalid_request",
                           "mode must be liabilities, lagrangian, or defaults")

    def _run_job(job_id: str, run: Callable[[], dict]) -> None:
        jobs.set_running(job_id)
        try:
            jobs.set_done(job_id, run())
        except (LpError, ClearingError, NetworkValidationError) as exc:
            jobs.set_failed(job_id, str(exc))
        except Exception as exc:  # surface anything else for the poller
            jobs.set_failed(job_id, f"internal error: {exc}")

    @app.post("/networks/{sid}/optimize")
    def post_optimize(sid: str, body: dict):
        session = _session(sid)
        run, total_starts = _parse_optimize(session, body)
        if session.net.n > async_node_threshold or \
                total_starts > async_start_threshold:
            job_id = jobs.create()
            executor.submit(_run_job, job_id, run)
            return JSONResponse({"job_id": job_id}, status_code=202)
        return run()

    @app.get("/jobs/{job_id}")
    def get_job(job_id: str):
        try:
            job = jobs.get(job_id)
        except KeyError:
            raise RequestError("unknown_job", f"no job {job_id!r}", status=404)
        doc: dict[str, Any] = {"job_id": job_id, "status": job.status}
        if job.status == "done":
            doc["result"] = job.result
        elif job.status == "failed":
            doc["error"] = job.error
        return doc

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="bailnet-service",
        description="HTTP service for clearing and injection planning")
    parser.add_argument("--host", default=os.environ.get("BAILNET_HOST",
                                                         "127.0.0.1"))
    parser.add_argument("--port", type=int,
                        default=int(os.environ.get("BAILNET_PORT", "8000")))
    parser.add_argument("--session-timeout", type=float,
                        default=float(os.environ.get("BAILNET_SESSION_TIMEOUT",
                                                     str(DEFAULT_SESSION_TIMEOUT))))
    parser.add_argument("--ui-dir", default=os.environ.get("BAILNET_UI_DIR"),
                        help="serve a static UI from this directory at /ui")
    args = parser.parse_args(argv)

    import uvicorn
    app = create_app(session_timeout=args.session_timeout, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
