"""Teacher-facing creation of exercises and reference solutions.

Exercises load from a JSON solution file (the record-form equivalent) or
derive from a drawn diagram document. Loading is all-or-nothing: any
structural problem returns the full issue list instead of a spec.
"""

from __future__ import annotations

import json

from umlkit.model import (
    ActorActorRel,
    ActorUseCaseRel,
    AuthoringIssue,
    BAD_BASE_XP,
    BossSpec,
    DiagramDocument,
    ElementKind,
    ExerciseSpec,
    MALFORMED_SOLUTION,
    NO_SOLUTIONS,
    RefElement,
    ReferenceSolution,
    RefRelation,
    RelationKind,
    UNMATCHABLE_RELATION,
    UseCaseUseCaseRel,
    validate_reference,
)

_ELEMENT_KINDS = {kind.value: kind for kind in ElementKind}
_FLAVORS = {"Include": RelationKind.INCLUDE, "Extend": RelationKind.EXTEND}


def load_exercise(text: str) -> ExerciseSpec | list[AuthoringIssue]:
    """Parse and validate a solution file; returns the exercise or every issue found."""
    issues: list[AuthoringIssue] = []
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        return [AuthoringIssue(MALFORMED_SOLUTION, None, f"not valid JSON: {exc}")]
    if not isinstance(raw, dict):
        return [AuthoringIssue(MALFORMED_SOLUTION, None, "top level must be an object")]

    exercise_id = raw.get("exerciseId")
    title = raw.get("title")
    statement = raw.get("statement")
    base_xp = raw.get("baseXp")
    boss_raw = raw.get("boss")
    solutions_raw = raw.get("solutions")

    for name, value in (("exerciseId", exercise_id), ("title", title), ("statement", statement)):
        if not isinstance(value, str) or (name == "exerciseId" and not value):
            issues.append(AuthoringIssue(MALFORMED_SOLUTION, None, f"missing or invalid {name!r}"))
    if not isinstance(base_xp, int) or isinstance(base_xp, bool) or base_xp <= 0:
        issues.append(AuthoringIssue(BAD_BASE_XP, None, "baseXp must be a positive integer"))
    if (
        not isinstance(boss_raw, dict)
        or not isinstance(boss_raw.get("iconId"), str)
        or not isinstance(boss_raw.get("taunt"), str)
    ):
        issues.append(
            AuthoringIssue(MALFORMED_SOLUTION, None, "boss must carry 'iconId' and 'taunt'")
        )
    if not isinstance(solutions_raw, list) or not solutions_raw:
        issues.append(AuthoringIssue(NO_SOLUTIONS, None, "at least one solution is required"))
        solutions_raw = []

    solutions: list[ReferenceSolution] = []
    for index, solution_raw in enumerate(solutions_raw):
        solution = _load_solution(solution_raw, index, issues)
        if solution is not None:
            solutions.append(solution)
            issues.extend(validate_reference(solution))

    if issues:
        return issues
    assert isinstance(boss_raw, dict)
    return ExerciseSpec(
        exerciseId=exercise_id,  # type: ignore[arg-type]
        title=title,  # type: ignore[arg-type]
        statement=statement,  # type: ignore[arg-type]
        baseXp=base_xp,  # type: ignore[arg-type]
        boss=BossSpec(iconId=boss_raw["iconId"], taunt=boss_raw["taunt"]),
        solutions=tuple(solutions),
    )


def _load_solution(
    raw: object, index: int, issues: list[AuthoringIssue]
) -> ReferenceSolution | None:
    where = f"solutions[{index}]"
    if not isinstance(raw, dict):
        issues.append(AuthoringIssue(MALFORMED_SOLUTION, None, f"{where} must be an object"))
        return None
    label = raw.get("label")
    if not isinstance(label, str):
        label = f"Solution {index + 1}"
    forbidden_raw = raw.get("forbiddenNames", [])
    if not isinstance(forbidden_raw, list) or any(
        not isinstance(name, str) for name in forbidden_raw
    ):
        issues.append(
            AuthoringIssue(MALFORMED_SOLUTION, None, f"{where}.forbiddenNames must be strings")
        )
        forbidden_raw = []

    elements: list[RefElement] = []
    for position, record in enumerate(raw.get("elements") or []):
        element = _load_ref_element(record, f"{where}.elements[{position}]", issues)
        if element is not None:
            elements.append(element)
    relations: list[RefRelation] = []
    for position, record in enumerate(raw.get("relations") or []):
        relation = _load_ref_relation(record, f"{where}.relations[{position}]", issues)
        if relation is not None:
            relations.append(relation)

    return ReferenceSolution(
        label=label,
        elements=tuple(elements),
        relations=tuple(relations),
        forbiddenNames=tuple(forbidden_raw),
    )


def _load_ref_element(
    record: object, where: str, issues: list[AuthoringIssue]
) -> RefElement | None:
    if not isinstance(record, dict):
        issues.append(AuthoringIssue(MALFORMED_SOLUTION, None, f"{where} must be an object"))
        return None
    ref_id = record.get("refId")
    kind_name = record.get("kind")
    name = record.get("name")
    if not isinstance(ref_id, str) or not ref_id:
        issues.append(AuthoringIssue(MALFORMED_SOLUTION, None, f"{where} needs a 'refId'"))
        return None
    kind = _ELEMENT_KINDS.get(kind_name) if isinstance(kind_name, str) else None
    if kind is None:
        issues.append(
            AuthoringIssue(MALFORMED_SOLUTION, ref_id, f"{where} has unknown kind {kind_name!r}")
        )
        return None
    if not isinstance(name, str):
        issues.append(AuthoringIssue(MALFORMED_SOLUTION, ref_id, f"{where} needs a 'name'"))
        return None
    alternatives = record.get("alternatives", [])
    if not isinstance(alternatives, list) or any(
        not isinstance(alt, str) for alt in alternatives
    ):
        issues.append(
            AuthoringIssue(MALFORMED_SOLUTION, ref_id, f"{where}.alternatives must be strings")
        )
        alternatives = []
    external = record.get("external", False)
    if not isinstance(external, bool):
        issues.append(
            AuthoringIssue(MALFORMED_SOLUTION, ref_id, f"{where}.external must be a boolean")
        )
        external = False
    owning = record.get("owningSystem")
    if owning is not None and not isinstance(owning, str):
        issues.append(
            AuthoringIssue(MALFORMED_SOLUTION, ref_id, f"{where}.owningSystem must be a refId")
        )
        owning = None
    return RefElement(
        refId=ref_id,
        kind=kind,
        name=name,
        alternatives=tuple(alternatives),
        external=external,
        owningSystem=owning,
    )


def _load_ref_relation(
    record: object, where: str, issues: list[AuthoringIssue]
) -> RefRelation | None:
    if not isinstance(record, dict):
        issues.append(AuthoringIssue(MALFORMED_SOLUTION, None, f"{where} must be an object"))
        return None
    kind = record.get("kind")
    if kind == "ActorUseCase":
        actor = record.get("actor")
        use_case = record.get("useCase")
        supporting = record.get("supporting", False)
        if not isinstance(actor, str) or not isinstance(use_case, str):
            issues.append(
                AuthoringIssue(MALFORMED_SOLUTION, None, f"{where} needs 'actor' and 'useCase'")
            )
            return None
        if not isinstance(supporting, bool):
            issues.append(
                AuthoringIssue(MALFORMED_SOLUTION, None, f"{where}.supporting must be a boolean")
            )
            supporting = False
        return ActorUseCaseRel(actor=actor, useCase=use_case, supporting=supporting)
    if kind == "ActorActor":
        child = record.get("child")
        parent = record.get("parent")
        if not isinstance(child, str) or not isinstance(parent, str):
            issues.append(
                AuthoringIssue(MALFORMED_SOLUTION, None, f"{where} needs 'child' and 'parent'")
            )
            return None
        return ActorActorRel(child=child, parent=parent)
    if kind == "UseCaseUseCase":
        source = record.get("source")
        target = record.get("target")
        flavor = record.get("flavor")
        if (
            not isinstance(source, str)
            or not isinstance(target, str)
            or not isinstance(flavor, str)
            or flavor not in _FLAVORS
        ):
            issues.append(
                AuthoringIssue(
                    MALFORMED_SOLUTION,
                    None,
                    f"{where} needs 'source', 'target' and a flavor of Include or Extend",
                )
            )
            return None
        return UseCaseUseCaseRel(source=source, target=target, flavor=_FLAVORS[flavor])
    issues.append(AuthoringIssue(MALFORMED_SOLUTION, None, f"{where} has unknown kind {kind!r}"))
    return None


def solution_to_dict(solution: ReferenceSolution) -> dict:
    elements = []
    for element in solution.elements:
        elements.append(
            {
                "refId": element.refId,
                "kind": element.kind.value,
                "name": element.name,
                "alternatives": list(element.alternatives),
                "external": element.external,
                "owningSystem": element.owningSystem,
            }
        )
    relations = []
    for relation in solution.relations:
        if isinstance(relation, ActorUseCaseRel):
            relations.append(
                {
                    "kind": "ActorUseCase",
                    "actor": relation.actor,
                    "useCase": relation.useCase,
                    "supporting": relation.supporting,
                }
            )
        elif isinstance(relation, ActorActorRel):
            relations.append(
                {"kind": "ActorActor", "child": relation.child, "parent": relation.parent}
            )
        else:
            relations.append(
                {
                    "kind": "UseCaseUseCase",
                    "source": relation.source,
                    "target": relation.target,
                    "flavor": relation.flavor.value,
                }
            )
    return {
        "label": solution.label,
        "forbiddenNames": list(solution.forbiddenNames),
        "elements": elements,
        "relations": relations,
    }


def exercise_to_dict(spec: ExerciseSpec) -> dict:
    return {
        "exerciseId": spec.exerciseId,
        "title": spec.title,
        "statement": spec.statement,
        "baseXp": spec.baseXp,
        "boss": {"iconId": spec.boss.iconId, "taunt": spec.boss.taunt},
        "solutions": [solution_to_dict(solution) for solution in spec.solutions],
    }


def serialize_exercise(spec: ExerciseSpec) -> str:
    """Inverse of load_exercise for valid specs."""
    return json.dumps(exercise_to_dict(spec), indent=2)


def derive_reference_from_diagram(
    doc: DiagramDocument, label: str = "Derived from diagram"
) -> ReferenceSolution | list[AuthoringIssue]:
    """Turn a drawn diagram into a reference solution.

    Element ids become refIds, containment becomes the owning system, and
    relations map to their reference counterparts. The drawing cannot
    express alternatives or externality, so teachers edit those in the
    record form afterwards. A system drawn as an association endpoint is
    marked as supporting, which the reference structure requires.
    """
    issues: list[AuthoringIssue] = []
    kinds = {element.id: element.kind for element in doc.elements}
    elements = tuple(
        RefElement(
            refId=element.id,
            kind=element.kind,
            name=element.name,
            owningSystem=element.owner if element.kind is ElementKind.USE_CASE else None,
        )
        for element in doc.elements
    )

    relations: list[RefRelation] = []
    for relation in doc.relations:
        source_kind = kinds[relation.source]
        target_kind = kinds[relation.target]
        if relation.kind is RelationKind.ASSOCIATION:
            if target_kind is ElementKind.USE_CASE and source_kind in (
                ElementKind.ACTOR,
                ElementKind.SYSTEM,
            ):
                actor_id, use_case_id = relation.source, relation.target
            elif source_kind is ElementKind.USE_CASE and target_kind in (
                ElementKind.ACTOR,
                ElementKind.SYSTEM,
            ):
                actor_id, use_case_id = relation.target, relation.source
            else:
                issues.append(
                    AuthoringIssue(
                        UNMATCHABLE_RELATION,
                        relation.id,
                        "an association must connect an actor or system with a use case",
                    )
                )
                continue
            relations.append(
                ActorUseCaseRel(
                    actor=actor_id,
                    useCase=use_case_id,
                    supporting=kinds[actor_id] is ElementKind.SYSTEM,
                )
            )
        elif relation.kind is RelationKind.GENERALIZATION:
            relations.append(ActorActorRel(child=relation.source, parent=relation.target))
        else:
            relations.append(
                UseCaseUseCaseRel(
                    source=relation.source, target=relation.target, flavor=relation.kind
                )
            )

    solution = ReferenceSolution(label=label, elements=elements, relations=tuple(relations))
    issues.extend(validate_reference(solution))
    if issues:
        return issues
    return solution
