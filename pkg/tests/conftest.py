import json

import pytest

from helpers import clinic_exercise, shop_exercise
from umlkit.authoring import exercise_to_dict
from umlkit.game import CourseConfig, MultiplierRule, PropUnlock
from umlkit.store import UserAccount, config_to_dict


def course_config() -> CourseConfig:
    return CourseConfig(
        levelThresholds=(0, 100, 250, 500),
        deductionFraction=0.05,
        floorFraction=0.35,
        multipliers=(MultiplierRule(1, 1.5), MultiplierRule(3, 1.2)),
        propUnlocks=(PropUnlock("hat", 2), PropUnlock("cape", 3)),
    )


def course_users() -> tuple[UserAccount, ...]:
    return (
        UserAccount(id="ann", displayName="Ann", token="tok-ann"),
        UserAccount(id="bob", displayName="Bob", token="tok-bob"),
        UserAccount(id="cli", displayName="Cli", token="tok-cli"),
        UserAccount(id="prof", displayName="Prof", token="tok-prof", isTeacher=True),
    )


@pytest.fixture
def course_dir(tmp_path):
    """A populated data directory: config with four users, two exercises."""
    data = tmp_path / "course"
    data.mkdir()
    (data / "course.config").write_text(
        json.dumps(config_to_dict(course_config(), course_users()), indent=2),
        encoding="utf-8",
    )
    exercises = data / "exercises"
    exercises.mkdir()
    for spec in (shop_exercise(), clinic_exercise()):
        (exercises / f"{spec.exerciseId}.exercise").write_text(
            json.dumps(exercise_to_dict(spec), indent=2), encoding="utf-8"
        )
    return data
