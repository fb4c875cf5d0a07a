"""Evaluation of student diagrams against reference solutions.

The procedure runs in fixed stages: greedy element matching (reference
elements in authored order, diagram elements in canonical order, first
same-kind element whose name clears the similarity threshold wins), exact
relation matching over the matched endpoints, completeness metrics, then
the two diagnostic passes. Syntactic checks look only at the diagram;
semantic checks compare it with the reference.

Everything here is a pure function, so one document can be evaluated
against many solutions concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from umlkit.model import (
    ActorActorRel,
    ActorUseCaseRel,
    DiagramDocument,
    DiagramElement,
    DiagramRelation,
    ElementKind,
    ExerciseSpec,
    ReferenceSolution,
    RefRelation,
    RelationKind,
    UseCaseUseCaseRel,
)
from umlkit.textsim import MATCH_THRESHOLD, normalize_name, similarity


class Severity(str, Enum):
    SYNTACTIC = "syntactic"
    SEMANTIC = "semantic"


# Syntactic rules: structural issues independent of any reference.
SYN_MISSING_NAME = "SYN_MISSING_NAME"
SYN_DUPLICATE_NAME = "SYN_DUPLICATE_NAME"
SYN_INVALID_ASSOCIATION = "SYN_INVALID_ASSOCIATION"
SYN_ACTOR_IN_SYSTEM = "SYN_ACTOR_IN_SYSTEM"
SYN_USECASE_OUTSIDE_SYSTEM = "SYN_USECASE_OUTSIDE_SYSTEM"

# Semantic rules: violations relative to the matched reference.
SEM_MISSING_ELEMENT = "SEM_MISSING_ELEMENT"
SEM_MISSING_RELATION = "SEM_MISSING_RELATION"
SEM_WRONG_UC_RELATION_TYPE = "SEM_WRONG_UC_RELATION_TYPE"
SEM_WRONG_UC_RELATION_DIRECTION = "SEM_WRONG_UC_RELATION_DIRECTION"
SEM_WRONG_SYSTEM = "SEM_WRONG_SYSTEM"
SEM_FORBIDDEN_NAME = "SEM_FORBIDDEN_NAME"
SEM_EXTRA_RELATION = "SEM_EXTRA_RELATION"

SYNTACTIC_RULES = (
    SYN_MISSING_NAME,
    SYN_DUPLICATE_NAME,
    SYN_INVALID_ASSOCIATION,
    SYN_ACTOR_IN_SYSTEM,
    SYN_USECASE_OUTSIDE_SYSTEM,
)
SEMANTIC_RULES = (
    SEM_MISSING_ELEMENT,
    SEM_MISSING_RELATION,
    SEM_WRONG_UC_RELATION_TYPE,
    SEM_WRONG_UC_RELATION_DIRECTION,
    SEM_WRONG_SYSTEM,
    SEM_FORBIDDEN_NAME,
    SEM_EXTRA_RELATION,
)

_KIND_LABELS = {
    ElementKind.ACTOR: "actor",
    ElementKind.USE_CASE: "use case",
    ElementKind.SYSTEM: "system",
}

# Endpoint-kind combinations each relation kind may connect.
_ALLOWED_COMBOS: dict[RelationKind, frozenset[frozenset[ElementKind]]] = {
    RelationKind.ASSOCIATION: frozenset(
        {
            frozenset({ElementKind.ACTOR, ElementKind.USE_CASE}),
            frozenset({ElementKind.SYSTEM, ElementKind.USE_CASE}),
        }
    ),
    RelationKind.GENERALIZATION: frozenset({frozenset({ElementKind.ACTOR})}),
    RelationKind.INCLUDE: frozenset({frozenset({ElementKind.USE_CASE})}),
    RelationKind.EXTEND: frozenset({frozenset({ElementKind.USE_CASE})}),
}


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    rule: str
    message: str
    subjectIds: tuple[str, ...] = ()
    refId: str | None = None
    # Normalized names of the involved elements; drives sorting and error
    # identity across checks (ids change when students redraw, names less so).
    subjectNames: tuple[str, ...] = ()
    anchor: str | None = None

    def to_dict(self) -> dict:
        return {
            "severity": self.severity.value,
            "rule": self.rule,
            "message": self.message,
            "subjectIds": list(self.subjectIds),
            "refId": self.refId,
        }


def _sort_key(diag: Diagnostic) -> tuple:
    return (diag.rule, "|".join(sorted(diag.subjectNames)), diag.refId or "", diag.subjectIds)


@dataclass(frozen=True)
class ElementMatching:
    pairs: dict[str, str]  # refId -> diagram element id (injective)
    unmatchedRefs: tuple[str, ...]
    similarityUsed: dict[str, float]

    def to_dict(self) -> dict:
        return {
            "pairs": dict(self.pairs),
            "unmatchedRefs": list(self.unmatchedRefs),
            "similarityUsed": dict(self.similarityUsed),
        }


@dataclass(frozen=True)
class RelationMatching:
    matched: tuple[int, ...]
    unmatched: tuple[int, ...]
    # Which diagram relation satisfied each matched reference relation.
    matchedRelationIds: dict[int, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "matched": list(self.matched),
            "unmatched": list(self.unmatched),
            "matchedRelationIds": {str(k): v for k, v in self.matchedRelationIds.items()},
        }


@dataclass(frozen=True)
class KindCount:
    matched: int
    total: int

    def to_dict(self) -> dict:
        return {"matched": self.matched, "total": self.total}


@dataclass(frozen=True)
class CompletenessMetrics:
    perKind: dict[str, KindCount]
    overall: float

    def to_dict(self) -> dict:
        return {
            "perKind": {kind: count.to_dict() for kind, count in self.perKind.items()},
            "overall": self.overall,
        }


@dataclass(frozen=True)
class MatchedItem:
    elementId: str
    refId: str
    displayName: str

    def to_dict(self) -> dict:
        return {"elementId": self.elementId, "refId": self.refId, "displayName": self.displayName}


@dataclass(frozen=True)
class EvaluationReport:
    solutionIndex: int
    matching: ElementMatching
    relationMatching: RelationMatching
    completeness: CompletenessMetrics
    syntactic: tuple[Diagnostic, ...]
    semantic: tuple[Diagnostic, ...]
    matchedList: tuple[MatchedItem, ...]

    def diagnostics(self) -> tuple[Diagnostic, ...]:
        return self.syntactic + self.semantic

    def to_dict(self) -> dict:
        return {
            "solutionIndex": self.solutionIndex,
            "matching": self.matching.to_dict(),
            "relationMatching": self.relationMatching.to_dict(),
            "completeness": self.completeness.to_dict(),
            "syntactic": [diag.to_dict() for diag in self.syntactic],
            "semantic": [diag.to_dict() for diag in self.semantic],
            "matchedList": [item.to_dict() for item in self.matchedList],
        }


def relation_ref_key(relation: RefRelation) -> str:
    """Stable identifier for a reference relation, used in diagnostics and feedback."""
    if isinstance(relation, ActorUseCaseRel):
        return f"assoc:{relation.actor}~{relation.useCase}"
    if isinstance(relation, ActorActorRel):
        return f"gen:{relation.child}->{relation.parent}"
    return f"{relation.flavor.value.lower()}:{relation.source}->{relation.target}"


def match_elements(ref: ReferenceSolution, doc: DiagramDocument) -> ElementMatching:
    """Greedy first-found matching at the similarity threshold.

    Reference elements are processed in authored order; for each, the
    first unconsumed same-kind diagram element (canonical order) whose
    best similarity against the accepted names reaches the threshold is
    taken, which keeps the matching injective and deterministic.
    """
    pairs: dict[str, str] = {}
    similarity_used: dict[str, float] = {}
    unmatched: list[str] = []
    consumed: set[str] = set()
    for ref_element in ref.elements:
        taken: tuple[str, float] | None = None
        for element in doc.elements:
            if element.kind is not ref_element.kind or element.id in consumed:
                continue
            best = max(
                similarity(name, element.name) for name in ref_element.accepted_names()
            )
            if best >= MATCH_THRESHOLD:
                taken = (element.id, best)
                break
        if taken is None:
            unmatched.append(ref_element.refId)
        else:
            pairs[ref_element.refId] = taken[0]
            similarity_used[ref_element.refId] = taken[1]
            consumed.add(taken[0])
    return ElementMatching(pairs=pairs, unmatchedRefs=tuple(unmatched), similarityUsed=similarity_used)


def _exact_relation_match(
    relation: RefRelation,
    doc: DiagramDocument,
    pairs: dict[str, str],
    consumed: set[str],
) -> DiagramRelation | None:
    if isinstance(relation, ActorUseCaseRel):
        actor_id = pairs.get(relation.actor)
        use_case_id = pairs.get(relation.useCase)
        if actor_id is None or use_case_id is None:
            return None
        wanted = {actor_id, use_case_id}
        for doc_relation in doc.relations:
            if (
                doc_relation.id not in consumed
                and doc_relation.kind is RelationKind.ASSOCIATION
                and {doc_relation.source, doc_relation.target} == wanted
            ):
                return doc_relation
        return None
    if isinstance(relation, ActorActorRel):
        child_id = pairs.get(relation.child)
        parent_id = pairs.get(relation.parent)
        if child_id is None or parent_id is None:
            return None
        for doc_relation in doc.relations:
            if (
                doc_relation.id not in consumed
                and doc_relation.kind is RelationKind.GENERALIZATION
                and doc_relation.source == child_id
                and doc_relation.target == parent_id
            ):
                return doc_relation
        return None
    source_id = pairs.get(relation.source)
    target_id = pairs.get(relation.target)
    if source_id is None or target_id is None:
        return None
    for doc_relation in doc.relations:
        if (
            doc_relation.id not in consumed
            and doc_relation.kind is relation.flavor
            and doc_relation.source == source_id
            and doc_relation.target == target_id
        ):
            return doc_relation
    return None


def match_relations(
    ref: ReferenceSolution, doc: DiagramDocument, matching: ElementMatching
) -> RelationMatching:
    """A reference relation matches when both endpoints matched and the
    diagram holds a relation of the right kind (and direction, for
    generalizations and include/extend) between exactly those elements."""
    matched: list[int] = []
    unmatched: list[int] = []
    matched_ids: dict[int, str] = {}
    consumed: set[str] = set()
    for index, relation in enumerate(ref.relations):
        doc_relation = _exact_relation_match(relation, doc, matching.pairs, consumed)
        if doc_relation is None:
            unmatched.append(index)
        else:
            matched.append(index)
            matched_ids[index] = doc_relation.id
            consumed.add(doc_relation.id)
    return RelationMatching(
        matched=tuple(matched), unmatched=tuple(unmatched), matchedRelationIds=matched_ids
    )


def _display_name(element: DiagramElement) -> str:
    return element.name if normalize_name(element.name) else "(unnamed)"


def check_syntax(doc: DiagramDocument) -> list[Diagnostic]:
    """Structural checks that need no reference solution."""
    diagnostics: list[Diagnostic] = []

    for element in doc.elements:
        if not normalize_name(element.name):
            label = _KIND_LABELS[element.kind]
            diagnostics.append(
                Diagnostic(
                    severity=Severity.SYNTACTIC,
                    rule=SYN_MISSING_NAME,
                    message=f"A {label} (id {element.id}) has no name; every {label} needs one.",
                    subjectIds=(element.id,),
                    subjectNames=("",),
                    anchor=f"{element.kind.value}:{element.id}",
                )
            )

    groups: dict[tuple[ElementKind, str], list[DiagramElement]] = {}
    for element in doc.elements:
        name = normalize_name(element.name)
        if name:
            groups.setdefault((element.kind, name), []).append(element)
    for (kind, name), members in groups.items():
        if len(members) < 2:
            continue
        label = _KIND_LABELS[kind]
        diagnostics.append(
            Diagnostic(
                severity=Severity.SYNTACTIC,
                rule=SYN_DUPLICATE_NAME,
                message=f'{len(members)} {label} elements share the name "{members[0].name}".',
                subjectIds=tuple(sorted(member.id for member in members)),
                subjectNames=(name,),
                anchor=f"{kind.value}:{name}",
            )
        )

    kinds = {element.id: element.kind for element in doc.elements}
    names = {element.id: element for element in doc.elements}
    for relation in doc.relations:
        combo = frozenset({kinds[relation.source], kinds[relation.target]})
        if combo not in _ALLOWED_COMBOS[relation.kind]:
            source = names[relation.source]
            target = names[relation.target]
            subject_names = tuple(
                sorted((normalize_name(source.name), normalize_name(target.name)))
            )
            diagnostics.append(
                Diagnostic(
                    severity=Severity.SYNTACTIC,
                    rule=SYN_INVALID_ASSOCIATION,
                    message=(
                        f'A {relation.kind.value} between "{_display_name(source)}" '
                        f'({_KIND_LABELS[source.kind]}) and "{_display_name(target)}" '
                        f"({_KIND_LABELS[target.kind]}) is not allowed in a use case diagram."
                    ),
                    subjectIds=(relation.id,),
                    subjectNames=subject_names,
                    anchor=f"{relation.kind.value}:" + "|".join(subject_names),
                )
            )

    for element in doc.elements:
        if element.kind is ElementKind.ACTOR and element.owner is not None:
            diagnostics.append(
                Diagnostic(
                    severity=Severity.SYNTACTIC,
                    rule=SYN_ACTOR_IN_SYSTEM,
                    message=(
                        f'Actor "{_display_name(element)}" is placed inside a system; '
                        "actors belong outside system boundaries."
                    ),
                    subjectIds=(element.id,),
                    subjectNames=(normalize_name(element.name),),
                )
            )
        elif element.kind is ElementKind.USE_CASE and element.owner is None:
            diagnostics.append(
                Diagnostic(
                    severity=Severity.SYNTACTIC,
                    rule=SYN_USECASE_OUTSIDE_SYSTEM,
                    message=(
                        f'Use case "{_display_name(element)}" is not inside any system; '
                        "use cases belong inside a system boundary."
                    ),
                    subjectIds=(element.id,),
                    subjectNames=(normalize_name(element.name),),
                )
            )

    return diagnostics


def _relation_endpoint_refs(relation: RefRelation) -> tuple[str, str]:
    if isinstance(relation, ActorUseCaseRel):
        return (relation.actor, relation.useCase)
    if isinstance(relation, ActorActorRel):
        return (relation.child, relation.parent)
    return (relation.source, relation.target)


def check_semantics(
    ref: ReferenceSolution,
    doc: DiagramDocument,
    matching: ElementMatching,
    relation_matching: RelationMatching,
) -> list[Diagnostic]:
    """Reference-dependent checks, run after matching."""
    diagnostics: list[Diagnostic] = []
    ref_by_id = {element.refId: element for element in ref.elements}
    doc_by_id = {element.id: element for element in doc.elements}

    for ref_id in matching.unmatchedRefs:
        ref_element = ref_by_id[ref_id]
        label = _KIND_LABELS[ref_element.kind]
        diagnostics.append(
            Diagnostic(
                severity=Severity.SEMANTIC,
                rule=SEM_MISSING_ELEMENT,
                message=f'The expected {label} "{ref_element.name}" has no match in the diagram.',
                refId=ref_id,
                subjectNames=(normalize_name(ref_element.name),),
            )
        )

    consumed = set(relation_matching.matchedRelationIds.values())
    attributed: set[str] = set()

    def ref_name(ref_id: str) -> str:
        return ref_by_id[ref_id].name

    for index in relation_matching.unmatched:
        relation = ref.relations[index]
        first_ref, second_ref = _relation_endpoint_refs(relation)
        first_id = matching.pairs.get(first_ref)
        second_id = matching.pairs.get(second_ref)
        if first_id is None or second_id is None:
            continue  # the missing endpoint is already reported
        names = (normalize_name(ref_name(first_ref)), normalize_name(ref_name(second_ref)))
        key = relation_ref_key(relation)
        if isinstance(relation, UseCaseUseCaseRel):
            wanted = {first_id, second_id}
            candidates = [
                doc_relation
                for doc_relation in doc.relations
                if doc_relation.id not in consumed
                and doc_relation.id not in attributed
                and doc_relation.kind in (RelationKind.INCLUDE, RelationKind.EXTEND)
                and {doc_relation.source, doc_relation.target} == wanted
            ]
            reversed_same_flavor = [c for c in candidates if c.kind is relation.flavor]
            if reversed_same_flavor:
                candidate = reversed_same_flavor[0]
                attributed.add(candidate.id)
                diagnostics.append(
                    Diagnostic(
                        severity=Severity.SEMANTIC,
                        rule=SEM_WRONG_UC_RELATION_DIRECTION,
                        message=(
                            f'The {relation.flavor.value} between "{ref_name(first_ref)}" and '
                            f'"{ref_name(second_ref)}" points the wrong way: it must go from '
                            f'"{ref_name(first_ref)}" to "{ref_name(second_ref)}".'
                        ),
                        subjectIds=(candidate.id,),
                        refId=key,
                        subjectNames=names,
                    )
                )
                continue
            if candidates:
                candidate = candidates[0]
                attributed.add(candidate.id)
                diagnostics.append(
                    Diagnostic(
                        severity=Severity.SEMANTIC,
                        rule=SEM_WRONG_UC_RELATION_TYPE,
                        message=(
                            f'The relation between "{ref_name(first_ref)}" and '
                            f'"{ref_name(second_ref)}" must be an {relation.flavor.value}, '
                            f"not an {candidate.kind.value}."
                        ),
                        subjectIds=(candidate.id,),
                        refId=key,
                        subjectNames=names,
                    )
                )
                continue
        if isinstance(relation, ActorUseCaseRel):
            wording = (
                f'"{ref_name(first_ref)}" must be connected to the use case '
                f'"{ref_name(second_ref)}" by an association.'
            )
        elif isinstance(relation, ActorActorRel):
            wording = (
                f'A generalization from "{ref_name(first_ref)}" to its parent actor '
                f'"{ref_name(second_ref)}" is missing.'
            )
        else:
            wording = (
                f'An {relation.flavor.value} relation from "{ref_name(first_ref)}" to '
                f'"{ref_name(second_ref)}" is missing.'
            )
        diagnostics.append(
            Diagnostic(
                severity=Severity.SEMANTIC,
                rule=SEM_MISSING_RELATION,
                message="Missing relation: " + wording,
                refId=key,
                subjectNames=names,
            )
        )

    for ref_element in ref.elements:
        if ref_element.kind is not ElementKind.USE_CASE or ref_element.owningSystem is None:
            continue
        element_id = matching.pairs.get(ref_element.refId)
        if element_id is None:
            continue
        element = doc_by_id[element_id]
        expected_owner = matching.pairs.get(ref_element.owningSystem)
        if element.owner is None or element.owner == expected_owner:
            continue
        actual_system = doc_by_id[element.owner]
        expected_name = ref_by_id[ref_element.owningSystem].name
        diagnostics.append(
            Diagnostic(
                severity=Severity.SEMANTIC,
                rule=SEM_WRONG_SYSTEM,
                message=(
                    f'Use case "{_display_name(element)}" is placed in system '
                    f'"{_display_name(actual_system)}" but belongs in "{expected_name}".'
                ),
                subjectIds=(element_id,),
                refId=ref_element.refId,
                subjectNames=(normalize_name(element.name),),
            )
        )

    for element in doc.elements:
        if any(
            similarity(element.name, forbidden) >= MATCH_THRESHOLD
            for forbidden in ref.forbiddenNames
        ):
            diagnostics.append(
                Diagnostic(
                    severity=Severity.SEMANTIC,
                    rule=SEM_FORBIDDEN_NAME,
                    message=f'The name "{element.name}" is not allowed in this exercise.',
                    subjectIds=(element.id,),
                    subjectNames=(normalize_name(element.name),),
                )
            )

    matched_element_ids = set(matching.pairs.values())
    for doc_relation in doc.relations:
        if doc_relation.id in consumed or doc_relation.id in attributed:
            continue
        if (
            doc_relation.source not in matched_element_ids
            or doc_relation.target not in matched_element_ids
        ):
            continue
        source = doc_by_id[doc_relation.source]
        target = doc_by_id[doc_relation.target]
        subject_names = tuple(
            sorted((normalize_name(source.name), normalize_name(target.name)))
        )
        diagnostics.append(
            Diagnostic(
                severity=Severity.SEMANTIC,
                rule=SEM_EXTRA_RELATION,
                message=(
                    f'The {doc_relation.kind.value} between "{_display_name(source)}" and '
                    f'"{_display_name(target)}" is not part of the expected solution.'
                ),
                subjectIds=(doc_relation.id,),
                subjectNames=subject_names,
                anchor=f"{doc_relation.kind.value}:" + "|".join(subject_names),
            )
        )

    return diagnostics


def completeness(
    ref: ReferenceSolution,
    matching: ElementMatching,
    relation_matching: RelationMatching,
) -> CompletenessMetrics:
    """Per-kind and overall completeness; elements and relations pool into one ratio."""
    per_kind: dict[str, KindCount] = {}
    for kind in (ElementKind.ACTOR, ElementKind.USE_CASE, ElementKind.SYSTEM):
        of_kind = [element for element in ref.elements if element.kind is kind]
        matched = sum(1 for element in of_kind if element.refId in matching.pairs)
        per_kind[kind.value] = KindCount(matched=matched, total=len(of_kind))
    per_kind["Relation"] = KindCount(
        matched=len(relation_matching.matched), total=len(ref.relations)
    )
    total = sum(count.total for count in per_kind.values())
    matched_total = sum(count.matched for count in per_kind.values())
    overall = matched_total / total if total else 1.0
    return CompletenessMetrics(perKind=per_kind, overall=overall)


def _matched_list(
    ref: ReferenceSolution,
    doc: DiagramDocument,
    matching: ElementMatching,
    relation_matching: RelationMatching,
) -> tuple[MatchedItem, ...]:
    doc_by_id = {element.id: element for element in doc.elements}
    items: list[MatchedItem] = []
    for ref_element in ref.elements:
        element_id = matching.pairs.get(ref_element.refId)
        if element_id is None:
            continue
        items.append(
            MatchedItem(
                elementId=element_id,
                refId=ref_element.refId,
                displayName=doc_by_id[element_id].name,
            )
        )
    for index in relation_matching.matched:
        relation = ref.relations[index]
        doc_relation_id = relation_matching.matchedRelationIds[index]
        first_ref, second_ref = _relation_endpoint_refs(relation)
        first = doc_by_id[matching.pairs[first_ref]].name
        second = doc_by_id[matching.pairs[second_ref]].name
        if isinstance(relation, ActorUseCaseRel):
            display = f"Association: {first} - {second}"
        elif isinstance(relation, ActorActorRel):
            display = f"Generalization: {first} -> {second}"
        else:
            display = f"{relation.flavor.value}: {first} -> {second}"
        items.append(
            MatchedItem(
                elementId=doc_relation_id,
                refId=relation_ref_key(relation),
                displayName=display,
            )
        )
    return tuple(items)


def evaluate(
    solution: ReferenceSolution, doc: DiagramDocument, solution_index: int = 0
) -> EvaluationReport:
    """Run the full evaluation of one document against one solution."""
    matching = match_elements(solution, doc)
    relation_matching = match_relations(solution, doc, matching)
    metrics = completeness(solution, matching, relation_matching)
    syntactic = sorted(check_syntax(doc), key=_sort_key)
    semantic = sorted(
        check_semantics(solution, doc, matching, relation_matching), key=_sort_key
    )
    return EvaluationReport(
        solutionIndex=solution_index,
        matching=matching,
        relationMatching=relation_matching,
        completeness=metrics,
        syntactic=tuple(syntactic),
        semantic=tuple(semantic),
        matchedList=_matched_list(solution, doc, matching, relation_matching),
    )


def evaluate_exercise(exercise: ExerciseSpec, doc: DiagramDocument) -> EvaluationReport:
    """Evaluate against every solution and keep the report with the highest
    overall completeness; ties go to the lowest solution index."""
    best: EvaluationReport | None = None
    for index, solution in enumerate(exercise.solutions):
        report = evaluate(solution, doc, solution_index=index)
        if best is None or report.completeness.overall > best.completeness.overall:
            best = report
    assert best is not None  # ExerciseSpec guarantees at least one solution
    return best
