"""HTTP wire protocol for interactive sessions (JSON over FastAPI).

Endpoints:

* ``POST /sessions`` create a session
* ``GET /sessions/{id}`` status, generation, evaluations, best-so-far
* ``GET /sessions/{id}/population`` the 10 current candidates
* ``POST /sessions/{id}/ratings`` submit one rating per candidate and step
* ``POST /sessions/{id}/freeze`` pin a class (ACO sessions only)
* ``DELETE /sessions/{id}/freeze`` release a pinned class

Unknown ids map to 404, an exhausted session or a concurrent mutation to 409,
and invalid ratings to 422.  Mutating requests to one session are serialized:
a second in-flight mutation is rejected rather than queued.
"""

from __future__ import annotations

from contextlib import contextmanager

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .problem import DesignProblem
from .session import (
    DEFAULT_EVALUATION_CAP,
    InvalidRatingError,
    Rating,
    SessionConflictError,
    SessionManager,
    UnknownSessionError,
    UnsupportedOperationError,
)


class CreateSessionBody(BaseModel):
    problem: str
    engine: str
    seed: int = 0
    evaluation_cap: int = Field(default=DEFAULT_EVALUATION_CAP, ge=1)
    structural_weight: float = Field(default=0.8, gt=0.0, lt=1.0)


class RatingBody(BaseModel):
    index: int
    level: int = Field(ge=1, le=7)


class FreezeBody(BaseModel):
    candidate: int
    class_index: int = Field(alias="class")


class UnfreezeBody(BaseModel):
    elements: list[int] = Field(alias="class")


def create_app(problems: dict[str, DesignProblem]) -> FastAPI:
    app = FastAPI(title="designsearch sessions")
    manager = SessionManager(problems)
    app.state.manager = manager

    def get_session(session_id: str):
        try:
            return manager.get(session_id)
        except UnknownSessionError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc

    @contextmanager
    def mutating(session):
        if not session.lock.acquire(blocking=False):
            raise HTTPException(
                status_code=409, detail="another mutation is in flight"
            )
        try:
            yield
        except SessionConflictError as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from exc
        except InvalidRatingError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        except UnsupportedOperationError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        finally:
            session.lock.release()

    @app.post("/sessions")
    def create_session(body: CreateSessionBody):
        try:
            session = manager.create(
                problem_name=body.problem,
                engine_tag=body.engine,
                seed=body.seed,
                evaluation_cap=body.evaluation_cap,
                structural_weight=body.structural_weight,
            )
        except UnknownSessionError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return session.summary()

    @app.get("/sessions/{session_id}")
    def session_status(session_id: str):
        return get_session(session_id).summary()

    @app.get("/sessions/{session_id}/population")
    def population(session_id: str):
        session = get_session(session_id)
        if session.status != "active":
            raise HTTPException(
                status_code=409, detail=f"session is {session.status}"
            )
        return {
            "generation": session.generation,
            "evaluations": session.evaluations,
            "frozen_classes": session.frozen_view(),
            "candidates": session.population_view(),
        }

    @app.post("/sessions/{session_id}/ratings")
    def submit_ratings(session_id: str, body: list[RatingBody]):
        session = get_session(session_id)
        with mutating(session):
            ratings = [Rating(item.index, item.level) for item in body]
            return session.submit_ratings(ratings)

    @app.post("/sessions/{session_id}/freeze")
    def freeze(session_id: str, body: FreezeBody):
        session = get_session(session_id)
        with mutating(session):
            return session.freeze(body.candidate, body.class_index)

    @app.delete("/sessions/{session_id}/freeze")
    def unfreeze(session_id: str, body: UnfreezeBody):
        session = get_session(session_id)
        with mutating(session):
            return session.unfreeze(body.elements)

    return app


def main(argv=None) -> int:
    """Serve sessions over HTTP: ``python -m designsearch.service [options] file...``"""
    import argparse

    import uvicorn

    from .problem import load_problem

    parser = argparse.ArgumentParser(description="designsearch session service")
    parser.add_argument("instances", nargs="+", help="instance files to offer")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8000)
    args = parser.parse_args(argv)

    problems = {}
    for path in args.instances:
        problem = load_problem(path)
        problems[problem.name] = problem
    app = create_app(problems)
    print(f"serving problems: {', '.join(problems)}")
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


if __name__ == "__main__":
    import sys

    sys.exit(main())
