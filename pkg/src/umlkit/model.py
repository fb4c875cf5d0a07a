"""Domain types shared by the parser, evaluator, authoring, and service.

Two families of structures live here: student diagrams (what the parser
produces from an uploaded document) and reference solutions (what teachers
author, either through the record form or by deriving from a drawn
diagram). Both are immutable values; the evaluator never mutates them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

from umlkit.textsim import normalize_name


class ElementKind(str, Enum):
    """The three element kinds of the use case notation."""

    ACTOR = "Actor"
    USE_CASE = "UseCase"
    SYSTEM = "System"


class RelationKind(str, Enum):
    """The four relation kinds of the use case notation."""

    ASSOCIATION = "Association"
    INCLUDE = "Include"
    EXTEND = "Extend"
    GENERALIZATION = "Generalization"


@dataclass(frozen=True)
class DiagramElement:
    """One element of a student diagram.

    ``owner`` points at the containing System element, when any. Extra
    fields from the source document (geometry and the like) are kept in
    ``extra`` so serialization can round-trip them untouched.
    """

    id: str
    kind: ElementKind
    name: str
    owner: str | None = None
    extra: Mapping[str, object] = field(default_factory=dict)


@dataclass(frozen=True)
class DiagramRelation:
    """One relation of a student diagram; source/target are element ids."""

    id: str
    kind: RelationKind
    source: str
    target: str
    extra: Mapping[str, object] = field(default_factory=dict)
    source_extra: Mapping[str, object] = field(default_factory=dict)
    target_extra: Mapping[str, object] = field(default_factory=dict)


@dataclass(frozen=True)
class DiagramDocument:
    """A parsed student diagram.

    Elements and relations are kept in canonical order (ascending
    lexicographic id), which is the tie-breaking order used by the
    greedy matcher.
    """

    version: str
    notation: str
    elements: tuple[DiagramElement, ...]
    relations: tuple[DiagramRelation, ...]
    extra: Mapping[str, object] = field(default_factory=dict)

    def element_by_id(self, element_id: str) -> DiagramElement | None:
        for element in self.elements:
            if element.id == element_id:
                return element
        return None


@dataclass(frozen=True)
class RefElement:
    """An expected element in a reference solution.

    ``alternatives`` lists other accepted names. ``external`` marks a
    System that cannot contain use cases and instead plays the role of a
    supporting actor. ``owningSystem`` is set on UseCases only and names
    the System that must contain them.
    """

    refId: str
    kind: ElementKind
    name: str
    alternatives: tuple[str, ...] = ()
    external: bool = False
    owningSystem: str | None = None

    def accepted_names(self) -> tuple[str, ...]:
        return (self.name, *self.alternatives)


@dataclass(frozen=True)
class ActorUseCaseRel:
    """Association between an actor (or supporting system) and a use case."""

    actor: str
    useCase: str
    supporting: bool = False


@dataclass(frozen=True)
class ActorActorRel:
    """Generalization: ``child`` inherits from ``parent``."""

    child: str
    parent: str


@dataclass(frozen=True)
class UseCaseUseCaseRel:
    """Directed include/extend between two use cases."""

    source: str
    target: str
    flavor: RelationKind  # INCLUDE or EXTEND

    def __post_init__(self) -> None:
        if self.flavor not in (RelationKind.INCLUDE, RelationKind.EXTEND):
            raise ValueError(f"flavor must be Include or Extend, got {self.flavor}")


RefRelation = ActorUseCaseRel | ActorActorRel | UseCaseUseCaseRel


@dataclass(frozen=True)
class ReferenceSolution:
    label: str
    elements: tuple[RefElement, ...]
    relations: tuple[RefRelation, ...] = ()
    forbiddenNames: tuple[str, ...] = ()

    def element_by_ref_id(self, ref_id: str) -> RefElement | None:
        for element in self.elements:
            if element.refId == ref_id:
                return element
        return None


@dataclass(frozen=True)
class BossSpec:
    iconId: str
    taunt: str


@dataclass(frozen=True)
class ExerciseSpec:
    exerciseId: str
    title: str
    statement: str
    baseXp: int
    boss: BossSpec
    solutions: tuple[ReferenceSolution, ...]


@dataclass(frozen=True)
class AuthoringIssue:
    """A structural problem found while validating authored content."""

    code: str
    refId: str | None = None
    detail: str = ""


# Issue codes produced by validate_reference and the authoring loaders.
NO_ELEMENTS = "NO_ELEMENTS"
NO_SOLUTIONS = "NO_SOLUTIONS"
EMPTY_NAME = "EMPTY_NAME"
DUPLICATE_REF_ID = "DUPLICATE_REF_ID"
DUPLICATE_REF_NAME = "DUPLICATE_REF_NAME"
EXTERNAL_ON_NON_SYSTEM = "EXTERNAL_ON_NON_SYSTEM"
OWNER_ON_NON_USECASE = "OWNER_ON_NON_USECASE"
UC_NO_OWNER = "UC_NO_OWNER"
UC_OWNER_NOT_SYSTEM = "UC_OWNER_NOT_SYSTEM"
UC_IN_EXTERNAL_SYSTEM = "UC_IN_EXTERNAL_SYSTEM"
UNKNOWN_REF = "UNKNOWN_REF"
WRONG_KIND_REF = "WRONG_KIND_REF"
SYSTEM_ACTOR_NOT_SUPPORTING = "SYSTEM_ACTOR_NOT_SUPPORTING"
SELF_REF_RELATION = "SELF_REF_RELATION"
BAD_BASE_XP = "BAD_BASE_XP"
MALFORMED_SOLUTION = "MALFORMED_SOLUTION"
UNMATCHABLE_RELATION = "UNMATCHABLE_RELATION"


def validate_reference(solution: ReferenceSolution) -> list[AuthoringIssue]:
    """Check every reference-solution invariant; an empty list means valid.

    Issues are data, not failures: authoring surfaces feed them back to
    the teacher. The scan order (elements, then relations, then
    solution-level rules) is fixed so repeated validation of the same
    input yields the identical list.
    """
    issues: list[AuthoringIssue] = []
    by_id: dict[str, RefElement] = {}

    for element in solution.elements:
        if element.refId in by_id:
            issues.append(AuthoringIssue(DUPLICATE_REF_ID, element.refId))
            continue
        by_id[element.refId] = element

    for element in solution.elements:
        if not normalize_name(element.name):
            issues.append(AuthoringIssue(EMPTY_NAME, element.refId, "element name is empty"))
        for alternative in element.alternatives:
            if not normalize_name(alternative):
                issues.append(
                    AuthoringIssue(EMPTY_NAME, element.refId, "alternative name is empty")
                )
        if element.external and element.kind is not ElementKind.SYSTEM:
            issues.append(AuthoringIssue(EXTERNAL_ON_NON_SYSTEM, element.refId))
        if element.owningSystem is not None and element.kind is not ElementKind.USE_CASE:
            issues.append(AuthoringIssue(OWNER_ON_NON_USECASE, element.refId))
        if element.kind is ElementKind.USE_CASE:
            if element.owningSystem is None:
                issues.append(AuthoringIssue(UC_NO_OWNER, element.refId))
            else:
                owner = by_id.get(element.owningSystem)
                if owner is None or owner.kind is not ElementKind.SYSTEM:
                    issues.append(
                        AuthoringIssue(
                            UC_OWNER_NOT_SYSTEM,
                            element.refId,
                            f"owningSystem {element.owningSystem!r} is not a System",
                        )
                    )
                elif owner.external:
                    issues.append(AuthoringIssue(UC_IN_EXTERNAL_SYSTEM, element.refId))

    seen_names: dict[tuple[ElementKind, str], str] = {}
    for element in solution.elements:
        for name in element.accepted_names():
            key = (element.kind, normalize_name(name))
            if not key[1]:
                continue
            if key in seen_names and seen_names[key] != element.refId:
                issues.append(
                    AuthoringIssue(
                        DUPLICATE_REF_NAME,
                        element.refId,
                        f"{element.kind.value} name {name!r} already used by "
                        f"{seen_names[key]!r}",
                    )
                )
            else:
                seen_names.setdefault(key, element.refId)

    def resolve(ref_id: str, kinds: tuple[ElementKind, ...], role: str) -> RefElement | None:
        element = by_id.get(ref_id)
        if element is None:
            issues.append(AuthoringIssue(UNKNOWN_REF, ref_id, f"{role} does not exist"))
            return None
        if element.kind not in kinds:
            issues.append(
                AuthoringIssue(
                    WRONG_KIND_REF, ref_id, f"{role} must be one of {[k.value for k in kinds]}"
                )
            )
            return None
        return element

    for relation in solution.relations:
        if isinstance(relation, ActorUseCaseRel):
            actor = resolve(
                relation.actor, (ElementKind.ACTOR, ElementKind.SYSTEM), "association actor"
            )
            resolve(relation.useCase, (ElementKind.USE_CASE,), "association use case")
            if actor is not None and actor.kind is ElementKind.SYSTEM and not relation.supporting:
                issues.append(AuthoringIssue(SYSTEM_ACTOR_NOT_SUPPORTING, relation.actor))
        elif isinstance(relation, ActorActorRel):
            resolve(relation.child, (ElementKind.ACTOR,), "generalization child")
            resolve(relation.parent, (ElementKind.ACTOR,), "generalization parent")
            if relation.child == relation.parent:
                issues.append(AuthoringIssue(SELF_REF_RELATION, relation.child))
        elif isinstance(relation, UseCaseUseCaseRel):
            resolve(relation.source, (ElementKind.USE_CASE,), f"{relation.flavor.value} source")
            resolve(relation.target, (ElementKind.USE_CASE,), f"{relation.flavor.value} target")
            if relation.source == relation.target:
                issues.append(AuthoringIssue(SELF_REF_RELATION, relation.source))

    for forbidden in solution.forbiddenNames:
        if not normalize_name(forbidden):
            issues.append(AuthoringIssue(EMPTY_NAME, None, "forbidden name is empty"))

    if not solution.elements:
        issues.append(AuthoringIssue(NO_ELEMENTS, None))

    return issues
