"""File-backed persistence and the check/completion orchestration.

One data directory holds everything: ``course.config`` (game parameters
plus user accounts), ``exercises/<id>.exercise`` solution files,
``students/<id>.state`` snapshots, and ``events.log``. The log is the
authoritative history: every state mutation appends one line, and booting
replays the log through the deterministic game engine, so a restart (or a
crash before a snapshot write) reconstructs the exact same states. Config
and exercise edits are logged too; files changed out-of-band while the
service was down are detected at boot and ingested as fresh events.

Snapshots are derived data, rewritten after each event in a canonical
JSON form so identical states are byte-identical on disk.
"""

from __future__ import annotations

import json
import os
import sys
import threading
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path

from umlkit.authoring import exercise_to_dict, load_exercise, solution_to_dict
from umlkit.evaluator import EvaluationReport, evaluate_exercise
from umlkit.game import (
    AlreadyCompletedError,
    CompletionResult,
    CourseConfig,
    ErrorFingerprint,
    ExerciseSession,
    MoodState,
    MultiplierRule,
    PropUnlock,
    Recap,
    StudentState,
    apply_check,
    complete_exercise,
    completion_ready,
    leaderboard,
    level_for_xp,
    mood_transition,
    report_fingerprints,
)
from umlkit.model import AuthoringIssue, ExerciseSpec
from umlkit.parser import ParseError, parse_document

CONFIG_FILE = "course.config"
EVENTS_FILE = "events.log"
EXERCISES_DIR = "exercises"
STUDENTS_DIR = "students"
EXERCISE_SUFFIX = ".exercise"
STATE_SUFFIX = ".state"


class StoreError(Exception):
    code = "STORE_ERROR"
    http_status = 400


class UnknownStudentError(StoreError):
    code = "UNKNOWN_STUDENT"
    http_status = 404


class UnknownExerciseError(StoreError):
    code = "UNKNOWN_EXERCISE"
    http_status = 404


class NotUnlockedError(StoreError):
    code = "NOT_UNLOCKED"
    http_status = 403


class PropNotOwnedError(StoreError):
    code = "PROP_NOT_OWNED"
    http_status = 400


class BadConfigError(StoreError):
    code = "BAD_CONFIG"
    http_status = 400


class ExerciseExistsError(StoreError):
    code = "EXERCISE_EXISTS"
    http_status = 409


class AlreadyCompletedStoreError(StoreError):
    code = "ALREADY_COMPLETED"
    http_status = 409


class ParseFailedError(StoreError):
    code = "PARSE_FAILED"
    http_status = 422

    def __init__(self, parse_error: ParseError) -> None:
        super().__init__(parse_error.detail)
        self.parse_error = parse_error


class InvalidExerciseError(StoreError):
    code = "INVALID_EXERCISE"
    http_status = 400

    def __init__(self, issues: list[AuthoringIssue]) -> None:
        super().__init__("exercise file has authoring issues")
        self.issues = issues


@dataclass(frozen=True)
class UserAccount:
    id: str
    displayName: str
    token: str
    isTeacher: bool = False


@dataclass(frozen=True)
class CheckResponse:
    report: EvaluationReport
    recap: Recap
    mood: MoodState
    obtainableXp: int
    totalXp: int
    level: int
    completion: CompletionResult | None

    def to_dict(self) -> dict:
        return {
            "report": self.report.to_dict(),
            "recap": self.recap.to_dict(),
            "mood": {"index": self.mood.index, "label": self.mood.label},
            "obtainableXp": self.obtainableXp,
            "totalXp": self.totalXp,
            "level": self.level,
            "completion": self.completion.to_dict() if self.completion else None,
        }


def canonical_json(payload: object) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def config_to_dict(config: CourseConfig, users: tuple[UserAccount, ...]) -> dict:
    return {
        "levelThresholds": list(config.levelThresholds),
        "deductionFraction": config.deductionFraction,
        "floorFraction": config.floorFraction,
        "multipliers": [
            {"maxChecks": rule.maxChecks, "factor": rule.factor} for rule in config.multipliers
        ],
        "propUnlocks": [
            {"propId": prop.propId, "unlockLevel": prop.unlockLevel}
            for prop in config.propUnlocks
        ],
        "users": [
            {
                "id": user.id,
                "displayName": user.displayName,
                "token": user.token,
                "isTeacher": user.isTeacher,
            }
            for user in users
        ],
    }


def config_from_dict(raw: object) -> tuple[CourseConfig, tuple[UserAccount, ...]]:
    """Build a validated config from the course file shape; raises ValueError."""
    if not isinstance(raw, dict):
        raise ValueError("course config must be an object")
    thresholds = raw.get("levelThresholds", [0])
    if not isinstance(thresholds, list) or not all(
        isinstance(value, int) and not isinstance(value, bool) for value in thresholds
    ):
        raise ValueError("levelThresholds must be a list of integers")
    multipliers_raw = raw.get("multipliers", [])
    if not isinstance(multipliers_raw, list):
        raise ValueError("multipliers must be a list")
    multipliers = []
    for record in multipliers_raw:
        if not isinstance(record, dict):
            raise ValueError("each multiplier must be an object")
        multipliers.append(
            MultiplierRule(
                maxChecks=int(record["maxChecks"]), factor=float(record["factor"])
            )
        )
    props_raw = raw.get("propUnlocks", [])
    if not isinstance(props_raw, list):
        raise ValueError("propUnlocks must be a list")
    props = []
    for record in props_raw:
        if not isinstance(record, dict) or not isinstance(record.get("propId"), str):
            raise ValueError("each prop unlock must carry a propId")
        props.append(
            PropUnlock(propId=record["propId"], unlockLevel=int(record["unlockLevel"]))
        )
    config = CourseConfig(
        levelThresholds=tuple(thresholds),
        deductionFraction=float(raw.get("deductionFraction", 0.05)),
        floorFraction=float(raw.get("floorFraction", 0.35)),
        multipliers=tuple(multipliers),
        propUnlocks=tuple(props),
    )
    users_raw = raw.get("users", [])
    if not isinstance(users_raw, list):
        raise ValueError("users must be a list")
    users = []
    seen_ids: set[str] = set()
    seen_tokens: set[str] = set()
    for record in users_raw:
        if not isinstance(record, dict):
            raise ValueError("each user must be an object")
        user_id = record.get("id")
        token = record.get("token")
        if not isinstance(user_id, str) or not user_id:
            raise ValueError("each user needs an id")
        if not isinstance(token, str) or not token:
            raise ValueError(f"user {user_id!r} needs a token")
        if user_id in seen_ids:
            raise ValueError(f"duplicate user id {user_id!r}")
        if token in seen_tokens:
            raise ValueError("two users share a token")
        seen_ids.add(user_id)
        seen_tokens.add(token)
        users.append(
            UserAccount(
                id=user_id,
                displayName=str(record.get("displayName", user_id)),
                token=token,
                isTeacher=bool(record.get("isTeacher", False)),
            )
        )
    return config, tuple(users)


def _fingerprint_to_dict(fingerprint: ErrorFingerprint) -> dict:
    return {"rule": fingerprint.rule, "anchor": fingerprint.anchor}


def _session_to_dict(session: ExerciseSession) -> dict:
    return {
        "exerciseId": session.exerciseId,
        "checksUsed": session.checksUsed,
        "deductions": [
            {**_fingerprint_to_dict(fp), "amount": amount}
            for fp, amount in sorted(session.deductions.items())
        ],
        "activeErrors": [_fingerprint_to_dict(fp) for fp in sorted(session.activeErrors)],
        "lastCompleteness": session.lastCompleteness,
        "bestCompleteness": session.bestCompleteness,
        "lastObtainable": session.lastObtainable,
        "completed": session.completed,
    }


def student_state_to_dict(state: StudentState) -> dict:
    return {
        "studentId": state.studentId,
        "displayName": state.displayName,
        "totalXp": state.totalXp,
        "level": state.level,
        "mood": {"index": state.mood.index},
        "ownedProps": sorted(state.ownedProps),
        "equippedProps": sorted(state.equippedProps),
        "sessions": {
            exercise_id: _session_to_dict(session)
            for exercise_id, session in state.sessions.items()
        },
    }


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


class CourseStore:
    """In-memory course state backed by one data directory.

    Mutations for one student are serialized with a per-student lock;
    course-level mutations (config, exercises) take the store lock. The
    event append is the commit point; snapshots follow and are
    reconstructed by replay if a crash loses them.
    """

    def __init__(self, data_dir: str | Path) -> None:
        self.data_dir = Path(data_dir)
        self._store_lock = threading.RLock()
        self._student_locks: dict[str, threading.Lock] = {}
        self._log_lock = threading.Lock()
        self.config = CourseConfig()
        self.users: tuple[UserAccount, ...] = ()
        self.exercises: dict[str, ExerciseSpec] = {}
        self.students: dict[str, StudentState] = {}
        self._boot()

    # -- boot and replay -------------------------------------------------

    def _boot(self) -> None:
        self.data_dir.mkdir(parents=True, exist_ok=True)
        (self.data_dir / EXERCISES_DIR).mkdir(exist_ok=True)
        (self.data_dir / STUDENTS_DIR).mkdir(exist_ok=True)
        config_path = self.data_dir / CONFIG_FILE
        if not config_path.exists():
            config_path.write_text(
                json.dumps(config_to_dict(CourseConfig(), ()), indent=2) + "\n",
                encoding="utf-8",
            )

        file_config, file_users = config_from_dict(
            json.loads(config_path.read_text(encoding="utf-8"))
        )
        file_exercises = self._read_exercise_files()

        events_path = self.data_dir / EVENTS_FILE
        if events_path.exists():
            self._set_config(file_config, file_users)
            with events_path.open(encoding="utf-8") as handle:
                for line_number, line in enumerate(handle, start=1):
                    line = line.strip()
                    if not line:
                        continue
                    try:
                        self._apply_event(json.loads(line))
                    except Exception as exc:  # noqa: BLE001 - replay must not die mid-log
                        print(
                            f"warning: skipping unreplayable event at line {line_number}: {exc}",
                            file=sys.stderr,
                        )
            # Ingest out-of-band file edits as new events.
            if (self.config, self.users) != (file_config, file_users):
                self._append_event(
                    {
                        "type": "config",
                        "timestamp": _utc_now(),
                        "config": config_to_dict(file_config, file_users),
                    }
                )
                self._set_config(file_config, file_users)
            for exercise_id, spec in file_exercises.items():
                if self.exercises.get(exercise_id) != spec:
                    self._append_event(
                        {
                            "type": "exercise",
                            "timestamp": _utc_now(),
                            "exercise": exercise_to_dict(spec),
                        }
                    )
                    self.exercises[exercise_id] = spec
        else:
            events_path.touch()
            self._append_event(
                {
                    "type": "config",
                    "timestamp": _utc_now(),
                    "config": config_to_dict(file_config, file_users),
                }
            )
            self._set_config(file_config, file_users)
            for spec in file_exercises.values():
                self._append_event(
                    {
                        "type": "exercise",
                        "timestamp": _utc_now(),
                        "exercise": exercise_to_dict(spec),
                    }
                )
                self.exercises[spec.exerciseId] = spec
        self._write_all_snapshots()

    def _read_exercise_files(self) -> dict[str, ExerciseSpec]:
        exercises: dict[str, ExerciseSpec] = {}
        for path in sorted((self.data_dir / EXERCISES_DIR).glob(f"*{EXERCISE_SUFFIX}")):
            loaded = load_exercise(path.read_text(encoding="utf-8"))
            if isinstance(loaded, ExerciseSpec):
                exercises[loaded.exerciseId] = loaded
            else:
                print(f"warning: ignoring invalid exercise file {path}", file=sys.stderr)
        return exercises

    def _apply_event(self, event: dict) -> None:
        kind = event.get("type")
        if kind == "config":
            config, users = config_from_dict(event["config"])
            self._set_config(config, users)
        elif kind == "exercise":
            loaded = load_exercise(json.dumps(event["exercise"]))
            if not isinstance(loaded, ExerciseSpec):
                raise ValueError("exercise event carries an invalid exercise")
            self.exercises[loaded.exerciseId] = loaded
        elif kind == "check":
            student_id = event["studentId"]
            exercise_id = event["exerciseId"]
            if student_id not in self.students:
                raise ValueError(f"unknown student {student_id!r}")
            if exercise_id not in self.exercises:
                raise ValueError(f"unknown exercise {exercise_id!r}")
            self._run_check(student_id, exercise_id, event["documentText"])
        elif kind == "equip":
            student_id = event["studentId"]
            state = self.students[student_id]
            props = frozenset(event["props"]) & state.ownedProps
            self.students[student_id] = replace(state, equippedProps=props)
        else:
            raise ValueError(f"unknown event type {kind!r}")

    def _set_config(self, config: CourseConfig, users: tuple[UserAccount, ...]) -> None:
        self.config = config
        self.users = users
        self._sync_students()
        # Thresholds or unlock levels may have moved; rederive them.
        for student_id, state in self.students.items():
            level = level_for_xp(state.totalXp, config)
            owned = frozenset(
                prop.propId for prop in config.propUnlocks if prop.unlockLevel <= level
            )
            self.students[student_id] = replace(
                state,
                level=level,
                ownedProps=owned,
                equippedProps=state.equippedProps & owned,
            )

    def _sync_students(self) -> None:
        for user in self.users:
            if user.id not in self.students:
                self.students[user.id] = StudentState(
                    studentId=user.id, displayName=user.displayName
                )

    # -- persistence -----------------------------------------------------

    def _append_event(self, event: dict) -> None:
        with self._log_lock:
            with (self.data_dir / EVENTS_FILE).open("a", encoding="utf-8") as handle:
                handle.write(canonical_json(event) + "\n")
                handle.flush()
                os.fsync(handle.fileno())

    def _write_snapshot(self, state: StudentState) -> None:
        path = self.data_dir / STUDENTS_DIR / f"{state.studentId}{STATE_SUFFIX}"
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_text(canonical_json(student_state_to_dict(state)) + "\n", encoding="utf-8")
        os.replace(tmp, path)

    def _write_all_snapshots(self) -> None:
        for state in self.students.values():
            self._write_snapshot(state)

    def _write_config_file(self) -> None:
        path = self.data_dir / CONFIG_FILE
        tmp = path.with_suffix(".tmp")
        tmp.write_text(
            json.dumps(config_to_dict(self.config, self.users), indent=2) + "\n",
            encoding="utf-8",
        )
        os.replace(tmp, path)

    def _write_exercise_file(self, spec: ExerciseSpec) -> None:
        path = self.data_dir / EXERCISES_DIR / f"{spec.exerciseId}{EXERCISE_SUFFIX}"
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_text(json.dumps(exercise_to_dict(spec), indent=2) + "\n", encoding="utf-8")
        os.replace(tmp, path)

    def _student_lock(self, student_id: str) -> threading.Lock:
        with self._store_lock:
            lock = self._student_locks.get(student_id)
            if lock is None:
                lock = self._student_locks[student_id] = threading.Lock()
            return lock

    # -- lookups ----------------------------------------------------------

    def user_by_token(self, token: str) -> UserAccount | None:
        for user in self.users:
            if user.token == token:
                return user
        return None

    def require_student(self, student_id: str) -> StudentState:
        state = self.students.get(student_id)
        if state is None:
            raise UnknownStudentError(f"unknown student {student_id!r}")
        return state

    def require_exercise(self, exercise_id: str) -> ExerciseSpec:
        spec = self.exercises.get(exercise_id)
        if spec is None:
            raise UnknownExerciseError(f"unknown exercise {exercise_id!r}")
        return spec

    def leaderboard_states(self) -> list[StudentState]:
        return [
            self.students[user.id]
            for user in self.users
            if not user.isTeacher and user.id in self.students
        ]

    # -- the check round-trip ---------------------------------------------

    def _run_check(
        self, student_id: str, exercise_id: str, document_text: str
    ) -> CheckResponse:
        """Evaluate, fold into game state, and complete when earned.

        Pure with respect to files: callers persist. Raises without any
        state change when parsing fails or the session is completed."""
        state = self.require_student(student_id)
        exercise = self.require_exercise(exercise_id)
        session = state.sessions.get(exercise_id)
        if session is not None and session.completed:
            raise AlreadyCompletedStoreError(f"exercise {exercise_id!r} is already completed")

        parsed = parse_document(document_text)
        if isinstance(parsed, ParseError):
            raise ParseFailedError(parsed)

        report = evaluate_exercise(exercise, parsed)
        try:
            new_state, recap = apply_check(state, self.config, exercise, report)
        except AlreadyCompletedError as exc:  # pragma: no cover - guarded above
            raise AlreadyCompletedStoreError(str(exc)) from exc
        new_state = replace(new_state, mood=mood_transition(state.mood, recap))

        completion: CompletionResult | None = None
        if completion_ready(new_state.sessions.get(exercise_id)):
            new_state, completion = complete_exercise(new_state, self.config, exercise)

        self.students[student_id] = new_state
        return CheckResponse(
            report=report,
            recap=recap,
            mood=new_state.mood,
            obtainableXp=recap.obtainableXp,
            totalXp=new_state.totalXp,
            level=new_state.level,
            completion=completion,
        )

    def handle_check(
        self, student_id: str, exercise_id: str, document_text: str
    ) -> CheckResponse:
        with self._student_lock(student_id):
            response = self._run_check(student_id, exercise_id, document_text)
            self._append_event(
                {
                    "type": "check",
                    "timestamp": _utc_now(),
                    "studentId": student_id,
                    "exerciseId": exercise_id,
                    "documentText": document_text,
                    "summary": {
                        "completeness": response.report.completeness.overall,
                        "fingerprints": [
                            _fingerprint_to_dict(fp)
                            for fp in sorted(report_fingerprints(response.report))
                        ],
                        "obtainableXp": response.obtainableXp,
                    },
                }
            )
            self._write_snapshot(self.students[student_id])
            return response

    def get_solution_view(self, student_id: str, exercise_id: str) -> list[dict]:
        state = self.require_student(student_id)
        exercise = self.require_exercise(exercise_id)
        session = state.sessions.get(exercise_id)
        if session is None or not session.completed:
            raise NotUnlockedError(
                f"solutions for {exercise_id!r} unlock after completing the exercise"
            )
        return [solution_to_dict(solution) for solution in exercise.solutions]

    def equip_props(self, student_id: str, props: list[str]) -> StudentState:
        with self._student_lock(student_id):
            state = self.require_student(student_id)
            wanted = frozenset(props)
            not_owned = wanted - state.ownedProps
            if not_owned:
                raise PropNotOwnedError(
                    f"props not owned: {', '.join(sorted(not_owned))}"
                )
            new_state = replace(state, equippedProps=wanted)
            self.students[student_id] = new_state
            self._append_event(
                {
                    "type": "equip",
                    "timestamp": _utc_now(),
                    "studentId": student_id,
                    "props": sorted(wanted),
                }
            )
            self._write_snapshot(new_state)
            return new_state

    # -- teacher operations -------------------------------------------------

    def update_config(self, payload: object) -> None:
        with self._store_lock:
            try:
                config, users = config_from_dict(payload)
            except (ValueError, KeyError, TypeError) as exc:
                raise BadConfigError(str(exc)) from exc
            self._append_event(
                {
                    "type": "config",
                    "timestamp": _utc_now(),
                    "config": config_to_dict(config, users),
                }
            )
            self._set_config(config, users)
            self._write_config_file()
            self._write_all_snapshots()

    def upsert_exercise(self, payload: object, *, expect_id: str | None = None) -> ExerciseSpec:
        with self._store_lock:
            loaded = load_exercise(json.dumps(payload))
            if not isinstance(loaded, ExerciseSpec):
                raise InvalidExerciseError(loaded)
            if expect_id is None and loaded.exerciseId in self.exercises:
                raise ExerciseExistsError(f"exercise {loaded.exerciseId!r} already exists")
            if expect_id is not None and loaded.exerciseId != expect_id:
                raise InvalidExerciseError(
                    [
                        AuthoringIssue(
                            "ID_MISMATCH",
                            None,
                            f"body exerciseId {loaded.exerciseId!r} does not match {expect_id!r}",
                        )
                    ]
                )
            self._append_event(
                {
                    "type": "exercise",
                    "timestamp": _utc_now(),
                    "exercise": exercise_to_dict(loaded),
                }
            )
            self.exercises[loaded.exerciseId] = loaded
            self._write_exercise_file(loaded)
            return loaded

    # -- views ----------------------------------------------------------------

    def exercise_summary(self, student_id: str) -> list[dict]:
        state = self.require_student(student_id)
        entries = []
        for exercise_id in sorted(self.exercises):
            spec = self.exercises[exercise_id]
            session = state.sessions.get(exercise_id)
            entries.append(
                {
                    "exerciseId": spec.exerciseId,
                    "title": spec.title,
                    "baseXp": spec.baseXp,
                    "boss": {"iconId": spec.boss.iconId, "taunt": spec.boss.taunt},
                    "completed": bool(session and session.completed),
                }
            )
        return entries

    def exercise_detail(self, student_id: str, exercise_id: str) -> dict:
        state = self.require_student(student_id)
        spec = self.require_exercise(exercise_id)
        session = state.sessions.get(exercise_id)
        return {
            "exerciseId": spec.exerciseId,
            "title": spec.title,
            "statement": spec.statement,
            "baseXp": spec.baseXp,
            "boss": {"iconId": spec.boss.iconId, "taunt": spec.boss.taunt},
            "completed": bool(session and session.completed),
            "checksUsed": session.checksUsed if session else 0,
            "obtainableXp": session.lastObtainable if session else spec.baseXp,
            "leaderboard": [
                entry.to_dict()
                for entry in leaderboard(
                    "exercise", self.leaderboard_states(), exercise_id=exercise_id
                )
            ],
        }

    def profile(self, student_id: str) -> dict:
        state = self.require_student(student_id)
        next_level_at = None
        for threshold in self.config.levelThresholds:
            if threshold > state.totalXp:
                next_level_at = threshold
                break
        return {
            "studentId": state.studentId,
            "displayName": state.displayName,
            "totalXp": state.totalXp,
            "level": state.level,
            "nextLevelAt": next_level_at,
            "mood": {"index": state.mood.index, "label": state.mood.label},
            "ownedProps": sorted(state.ownedProps),
            "equippedProps": sorted(state.equippedProps),
            "sessions": {
                exercise_id: {
                    "checksUsed": session.checksUsed,
                    "completed": session.completed,
                    "lastCompleteness": session.lastCompleteness,
                    "obtainableXp": session.lastObtainable,
                }
                for exercise_id, session in sorted(state.sessions.items())
            },
        }
