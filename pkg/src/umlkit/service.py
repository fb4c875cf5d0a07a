"""HTTP API over a CourseStore.

Authentication is a static bearer token per user from the course config;
teacher accounts gate the authoring endpoints. All bodies are JSON. A
built web UI can be mounted at the root by passing its directory.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import Depends, FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from umlkit.game import leaderboard
from umlkit.store import CourseStore, StoreError, UserAccount


class _HttpError(Exception):
    def __init__(self, status: int, code: str, detail: str, extra: dict | None = None):
        self.status = status
        self.payload = {"code": code, "detail": detail, **(extra or {})}


def _error_payload(error: StoreError) -> dict:
    payload: dict = {"code": error.code, "detail": str(error)}
    parse_error = getattr(error, "parse_error", None)
    if parse_error is not None:
        payload["parseError"] = {
            "code": parse_error.code,
            "detail": parse_error.detail,
            "location": parse_error.location,
        }
    issues = getattr(error, "issues", None)
    if issues is not None:
        payload["issues"] = [
            {"code": issue.code, "refId": issue.refId, "detail": issue.detail}
            for issue in issues
        ]
    return payload


def create_app(store: CourseStore, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="umlkit", docs_url=None, redoc_url=None)

    def current_user(request: Request) -> UserAccount:
        header = request.headers.get("authorization", "")
        scheme, _, token = header.partition(" ")
        user = store.user_by_token(token) if scheme.lower() == "bearer" and token else None
        if user is None:
            raise _HttpError(401, "UNAUTHORIZED", "missing or unknown bearer token")
        return user

    def current_teacher(user: UserAccount = Depends(current_user)) -> UserAccount:
        if not user.isTeacher:
            raise _HttpError(403, "FORBIDDEN", "teacher access required")
        return user

    @app.exception_handler(_HttpError)
    async def handle_http_error(_request: Request, exc: _HttpError) -> JSONResponse:
        return JSONResponse(status_code=exc.status, content={"error": exc.payload})

    @app.exception_handler(StoreError)
    async def handle_store_error(_request: Request, exc: StoreError) -> JSONResponse:
        return JSONResponse(
            status_code=exc.http_status, content={"error": _error_payload(exc)}
        )

    @app.get("/api/exercises")
    def list_exercises(user: UserAccount = Depends(current_user)) -> list[dict]:
        return store.exercise_summary(user.id)

    @app.get("/api/exercises/{exercise_id}")
    def exercise_detail(
        exercise_id: str, user: UserAccount = Depends(current_user)
    ) -> dict:
        return store.exercise_detail(user.id, exercise_id)

    @app.post("/api/exercises/{exercise_id}/checks")
    def submit_check(
        exercise_id: str, body: dict, user: UserAccount = Depends(current_user)
    ) -> dict:
        document = body.get("document")
        if not isinstance(document, str):
            raise _HttpError(400, "BAD_REQUEST", "body must carry a 'document' string")
        return store.handle_check(user.id, exercise_id, document).to_dict()

    @app.get("/api/exercises/{exercise_id}/solutions")
    def solution_view(
        exercise_id: str, user: UserAccount = Depends(current_user)
    ) -> dict:
        return {"solutions": store.get_solution_view(user.id, exercise_id)}

    @app.get("/api/leaderboards/xp")
    def leaderboard_xp(user: UserAccount = Depends(current_user)) -> dict:
        entries = leaderboard("xp", store.leaderboard_states())
        return {"kind": "xp", "entries": [entry.to_dict() for entry in entries]}

    @app.get("/api/leaderboards/completed")
    def leaderboard_completed(user: UserAccount = Depends(current_user)) -> dict:
        entries = leaderboard("completed", store.leaderboard_states())
        return {"kind": "completed", "entries": [entry.to_dict() for entry in entries]}

    @app.get("/api/leaderboards/exercise/{exercise_id}")
    def leaderboard_exercise(
        exercise_id: str, user: UserAccount = Depends(current_user)
    ) -> dict:
        store.require_exercise(exercise_id)
        entries = leaderboard("exercise", store.leaderboard_states(), exercise_id=exercise_id)
        return {
            "kind": "exercise",
            "exerciseId": exercise_id,
            "entries": [entry.to_dict() for entry in entries],
        }

    @app.get("/api/profile")
    def profile(user: UserAccount = Depends(current_user)) -> dict:
        return store.profile(user.id)

    @app.put("/api/profile/avatar")
    def equip(body: dict, user: UserAccount = Depends(current_user)) -> dict:
        props = body.get("equippedProps")
        if not isinstance(props, list) or any(not isinstance(p, str) for p in props):
            raise _HttpError(400, "BAD_REQUEST", "body must carry an 'equippedProps' list")
        state = store.equip_props(user.id, props)
        return {"equippedProps": sorted(state.equippedProps)}

    @app.put("/api/course/config")
    def put_config(body: dict, _teacher: UserAccount = Depends(current_teacher)) -> dict:
        store.update_config(body)
        return {"ok": True}

    @app.post("/api/exercises", status_code=201)
    def post_exercise(body: dict, _teacher: UserAccount = Depends(current_teacher)) -> dict:
        spec = store.upsert_exercise(body)
        return {"exerciseId": spec.exerciseId}

    @app.put("/api/exercises/{exercise_id}")
    def put_exercise(
        exercise_id: str, body: dict, _teacher: UserAccount = Depends(current_teacher)
    ) -> dict:
        spec = store.upsert_exercise(body, expect_id=exercise_id)
        return {"exerciseId": spec.exerciseId}

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
