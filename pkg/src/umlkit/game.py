"""Game mechanics driven by evaluation reports.

Obtainable XP is tracked as a nominal deduction per error fingerprint,
summed over the currently active errors and clamped to the floor at read
time. That bookkeeping makes two promised behaviors literally true: a
repeated error never deducts twice, and fixing an error restores exactly
what it deducted, even when the floor was binding in between.

All transitions are pure functions from (state, inputs) to (state',
outputs); callers serialize transitions per student and may replay them
from an event log.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from umlkit.evaluator import Diagnostic, EvaluationReport
from umlkit.model import ExerciseSpec

MOOD_MIN = -3
MOOD_MAX = 3
MOOD_LABELS = {
    -3: "miserable",
    -2: "sad",
    -1: "worried",
    0: "neutral",
    1: "content",
    2: "happy",
    3: "ecstatic",
}


class GameError(Exception):
    """Raised when a transition's precondition does not hold."""

    code = "GAME_ERROR"


class CheckOnCompletedError(GameError):
    code = "CHECK_ON_COMPLETED"


class NotCompleteError(GameError):
    code = "NOT_COMPLETE"


class AlreadyCompletedError(GameError):
    code = "ALREADY_COMPLETED"


@dataclass(frozen=True)
class MultiplierRule:
    maxChecks: int
    factor: float


@dataclass(frozen=True)
class PropUnlock:
    propId: str
    unlockLevel: int


@dataclass(frozen=True)
class CourseConfig:
    """Teacher-tunable game parameters.

    ``levelThresholds`` holds the total XP needed for each level; the
    first entry is 0 (level 1). ``multipliers`` reward completing an
    exercise within ``maxChecks`` checks and must be sorted by ascending
    maxChecks with strictly decreasing factors.
    """

    levelThresholds: tuple[int, ...] = (0,)
    deductionFraction: float = 0.05
    floorFraction: float = 0.35
    multipliers: tuple[MultiplierRule, ...] = ()
    propUnlocks: tuple[PropUnlock, ...] = ()

    def __post_init__(self) -> None:
        if not self.levelThresholds or self.levelThresholds[0] != 0:
            raise ValueError("levelThresholds must start at 0")
        if any(b <= a for a, b in zip(self.levelThresholds, self.levelThresholds[1:])):
            raise ValueError("levelThresholds must be strictly increasing")
        if not 0.0 < self.floorFraction < 1.0:
            raise ValueError("floorFraction must be in (0, 1)")
        if not 0.0 <= self.deductionFraction <= 1.0:
            raise ValueError("deductionFraction must be in [0, 1]")
        for earlier, later in zip(self.multipliers, self.multipliers[1:]):
            if later.maxChecks <= earlier.maxChecks or later.factor >= earlier.factor:
                raise ValueError(
                    "multipliers must have ascending maxChecks and strictly decreasing factors"
                )
        if any(rule.factor < 1.0 for rule in self.multipliers):
            raise ValueError("multiplier factors must be >= 1")
        if any(rule.maxChecks < 1 for rule in self.multipliers):
            raise ValueError("multiplier maxChecks must be >= 1")
        if any(prop.unlockLevel < 1 for prop in self.propUnlocks):
            raise ValueError("prop unlockLevel must be >= 1")


@dataclass(frozen=True, order=True)
class ErrorFingerprint:
    """Identity of a diagnostic across checks: rule plus a stable anchor."""

    rule: str
    anchor: str


@dataclass(frozen=True)
class ExerciseSession:
    exerciseId: str
    checksUsed: int = 0
    deductions: dict[ErrorFingerprint, int] = field(default_factory=dict)
    activeErrors: frozenset[ErrorFingerprint] = frozenset()
    lastCompleteness: float = 0.0
    bestCompleteness: float = 0.0
    lastObtainable: int = 0
    completed: bool = False


@dataclass(frozen=True)
class MoodState:
    index: int = 0

    def __post_init__(self) -> None:
        if not MOOD_MIN <= self.index <= MOOD_MAX:
            raise ValueError(f"mood index must be in [{MOOD_MIN}, {MOOD_MAX}]")

    @property
    def label(self) -> str:
        return MOOD_LABELS[self.index]


@dataclass(frozen=True)
class Recap:
    newErrors: int
    fixedErrors: int
    deltaXp: int
    deltaCompleteness: float
    obtainableXp: int
    completeness: float

    def to_dict(self) -> dict:
        return {
            "newErrors": self.newErrors,
            "fixedErrors": self.fixedErrors,
            "deltaXp": self.deltaXp,
            "deltaCompleteness": self.deltaCompleteness,
            "obtainableXp": self.obtainableXp,
            "completeness": self.completeness,
        }


@dataclass(frozen=True)
class StudentState:
    studentId: str
    displayName: str
    totalXp: int = 0
    level: int = 1
    mood: MoodState = MoodState(0)
    ownedProps: frozenset[str] = frozenset()
    equippedProps: frozenset[str] = frozenset()
    sessions: dict[str, ExerciseSession] = field(default_factory=dict)


@dataclass(frozen=True)
class CompletionResult:
    awardedXp: int
    multiplierApplied: float
    newLevel: int
    unlockedProps: tuple[str, ...]
    solutionViewUnlocked: bool = True

    def to_dict(self) -> dict:
        return {
            "awardedXp": self.awardedXp,
            "multiplierApplied": self.multiplierApplied,
            "newLevel": self.newLevel,
            "unlockedProps": list(self.unlockedProps),
            "solutionViewUnlocked": self.solutionViewUnlocked,
        }


def _round_half_up(value: float) -> int:
    return math.floor(value + 0.5)


def _floor_xp(config: CourseConfig, base_xp: int) -> int:
    # The tiny epsilon keeps exact-integer products (e.g. 0.35 * 60) from
    # ceiling one unit too high after float rounding.
    return math.ceil(config.floorFraction * base_xp - 1e-9)


def nominal_deduction(config: CourseConfig, base_xp: int) -> int:
    return _round_half_up(config.deductionFraction * base_xp)


def error_fingerprint(diagnostic: Diagnostic) -> ErrorFingerprint:
    """Stable identity for a diagnostic: reference id when present,
    otherwise the normalized names of the involved elements."""
    if diagnostic.refId is not None:
        anchor = diagnostic.refId
    elif diagnostic.anchor is not None:
        anchor = diagnostic.anchor
    else:
        anchor = "|".join(sorted(set(diagnostic.subjectNames)))
    return ErrorFingerprint(rule=diagnostic.rule, anchor=anchor)


def report_fingerprints(report: EvaluationReport) -> frozenset[ErrorFingerprint]:
    return frozenset(error_fingerprint(diag) for diag in report.diagnostics())


def obtainable_xp(session: ExerciseSession, base_xp: int, config: CourseConfig) -> int:
    """XP the student would earn on completion now, floored at the
    configured fraction of the base value."""
    deducted = sum(session.deductions[fp] for fp in session.activeErrors)
    return max(_floor_xp(config, base_xp), base_xp - deducted)


def fresh_session(exercise: ExerciseSpec) -> ExerciseSession:
    return ExerciseSession(exerciseId=exercise.exerciseId, lastObtainable=exercise.baseXp)


def apply_check(
    state: StudentState,
    config: CourseConfig,
    exercise: ExerciseSpec,
    report: EvaluationReport,
) -> tuple[StudentState, Recap]:
    """Fold one evaluation into the student's session for the exercise.

    Only fingerprints not active in the previous check count as new; a
    first appearance records the nominal deduction, a reappearance after a
    fix re-activates the recorded one. Errors absent from the report are
    fixed and their deductions leave the active sum. The first check is
    compared against a synthetic baseline (completeness 0, no errors,
    full obtainable XP).
    """
    session = state.sessions.get(exercise.exerciseId) or fresh_session(exercise)
    if session.completed:
        raise CheckOnCompletedError(f"exercise {exercise.exerciseId} is already completed")

    fingerprints = report_fingerprints(report)
    new_errors = fingerprints - session.activeErrors
    fixed_errors = session.activeErrors - fingerprints

    deductions = dict(session.deductions)
    nominal = nominal_deduction(config, exercise.baseXp)
    for fingerprint in new_errors:
        deductions.setdefault(fingerprint, nominal)

    previous_obtainable = session.lastObtainable if session.checksUsed else exercise.baseXp
    previous_completeness = session.lastCompleteness if session.checksUsed else 0.0
    overall = report.completeness.overall

    updated = replace(
        session,
        checksUsed=session.checksUsed + 1,
        deductions=deductions,
        activeErrors=fingerprints,
        lastCompleteness=overall,
        bestCompleteness=max(session.bestCompleteness, overall),
    )
    obtainable = obtainable_xp(updated, exercise.baseXp, config)
    updated = replace(updated, lastObtainable=obtainable)

    recap = Recap(
        newErrors=len(new_errors),
        fixedErrors=len(fixed_errors),
        deltaXp=obtainable - previous_obtainable,
        deltaCompleteness=overall - previous_completeness,
        obtainableXp=obtainable,
        completeness=overall,
    )
    sessions = dict(state.sessions)
    sessions[exercise.exerciseId] = updated
    return replace(state, sessions=sessions), recap


def _sign(value: float) -> int:
    if value > 0:
        return 1
    if value < 0:
        return -1
    return 0


def mood_transition(mood: MoodState, recap: Recap) -> MoodState:
    """Move the seven-state mood ladder one step per check.

    The direction is the sign of an equal-weight vote over the check's
    three independent signals: XP delta, fixed-versus-new error balance,
    and completeness delta.
    """
    score = (
        _sign(recap.deltaXp)
        + _sign(recap.fixedErrors - recap.newErrors)
        + _sign(recap.deltaCompleteness)
    )
    index = mood.index + _sign(score)
    return MoodState(max(MOOD_MIN, min(MOOD_MAX, index)))


def level_for_xp(xp: int, config: CourseConfig) -> int:
    """Level reached at a total XP: thresholds are inclusive."""
    return 1 + sum(1 for threshold in config.levelThresholds if 0 < threshold <= xp)


def completion_ready(session: ExerciseSession | None) -> bool:
    """The completion condition: a check happened, it matched everything,
    and it raised no diagnostics."""
    return (
        session is not None
        and session.checksUsed > 0
        and not session.completed
        and session.lastCompleteness >= 1.0
        and not session.activeErrors
    )


def complete_exercise(
    state: StudentState, config: CourseConfig, exercise: ExerciseSpec
) -> tuple[StudentState, CompletionResult]:
    """Award the session's obtainable XP (times any check-count multiplier),
    recompute level and props, and seal the session."""
    session = state.sessions.get(exercise.exerciseId)
    if session is not None and session.completed:
        raise AlreadyCompletedError(f"exercise {exercise.exerciseId} is already completed")
    if not completion_ready(session):
        raise NotCompleteError(
            f"exercise {exercise.exerciseId} is not complete: the last check must "
            "reach full completeness with no errors"
        )
    assert session is not None

    multiplier = 1.0
    for rule in config.multipliers:
        if session.checksUsed <= rule.maxChecks:
            multiplier = rule.factor
            break
    awarded = _round_half_up(session.lastObtainable * multiplier)

    old_level = level_for_xp(state.totalXp, config)
    total_xp = state.totalXp + awarded
    new_level = level_for_xp(total_xp, config)
    unlocked = tuple(
        prop.propId
        for prop in sorted(config.propUnlocks, key=lambda p: (p.unlockLevel, p.propId))
        if old_level < prop.unlockLevel <= new_level
    )
    owned = state.ownedProps | {
        prop.propId for prop in config.propUnlocks if prop.unlockLevel <= new_level
    }

    sessions = dict(state.sessions)
    sessions[exercise.exerciseId] = replace(session, completed=True)
    new_state = replace(
        state,
        totalXp=total_xp,
        level=new_level,
        ownedProps=owned,
        sessions=sessions,
    )
    result = CompletionResult(
        awardedXp=awarded,
        multiplierApplied=multiplier,
        newLevel=new_level,
        unlockedProps=unlocked,
    )
    return new_state, result


@dataclass(frozen=True)
class LeaderboardEntry:
    rank: int
    studentId: str
    displayName: str
    equippedProps: tuple[str, ...]
    metrics: dict[str, int | float]

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "studentId": self.studentId,
            "displayName": self.displayName,
            "equippedProps": list(self.equippedProps),
            **self.metrics,
        }


def leaderboard(
    kind: str, students: list[StudentState], *, exercise_id: str | None = None
) -> list[LeaderboardEntry]:
    """Rank students: ``xp`` by (level, total XP), ``exercise`` by best
    completeness on one exercise, ``completed`` by completed-session count.
    Equal scores share a rank (competition ranking) and are listed by
    display name."""

    def score(student: StudentState) -> tuple:
        if kind == "xp":
            return (student.level, student.totalXp)
        if kind == "exercise":
            session = student.sessions.get(exercise_id or "")
            return (session.bestCompleteness if session else 0.0,)
        if kind == "completed":
            return (sum(1 for session in student.sessions.values() if session.completed),)
        raise ValueError(f"unknown leaderboard kind {kind!r}")

    def metrics(student: StudentState) -> dict[str, int | float]:
        if kind == "xp":
            return {"level": student.level, "totalXp": student.totalXp}
        if kind == "exercise":
            session = student.sessions.get(exercise_id or "")
            return {"completeness": session.bestCompleteness if session else 0.0}
        return {"completed": sum(1 for s in student.sessions.values() if s.completed)}

    ordered = sorted(students, key=lambda s: (tuple(-x for x in score(s)), s.displayName))
    entries: list[LeaderboardEntry] = []
    previous_score: tuple | None = None
    rank = 0
    for position, student in enumerate(ordered, start=1):
        current = score(student)
        if current != previous_score:
            rank = position
            previous_score = current
        entries.append(
            LeaderboardEntry(
                rank=rank,
                studentId=student.studentId,
                displayName=student.displayName,
                equippedProps=tuple(sorted(student.equippedProps)),
                metrics=metrics(student),
            )
        )
    return entries
