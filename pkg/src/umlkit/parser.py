"""Conversion between the on-disk diagram format and DiagramDocument.

The textual format mirrors the Apollon editor's export shape for use case
diagrams, so real exports load unmodified: a JSON object with ``version``,
``type`` (must be ``"UseCaseDiagram"``), an ``elements`` map and a
``relationships`` map. Fields the grader does not understand (geometry,
editor state) are preserved opaquely and survive a round trip.

Parsing is total: every input yields either a DiagramDocument or a
ParseError, never an exception. The first structural failure wins, with
records scanned in ascending id order so the outcome is deterministic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from umlkit.model import (
    DiagramDocument,
    DiagramElement,
    DiagramRelation,
    ElementKind,
    RelationKind,
)

NOTATION = "UseCaseDiagram"

MALFORMED_INPUT = "MALFORMED_INPUT"
UNKNOWN_NOTATION = "UNKNOWN_NOTATION"
UNKNOWN_ELEMENT_KIND = "UNKNOWN_ELEMENT_KIND"
UNKNOWN_RELATION_KIND = "UNKNOWN_RELATION_KIND"
DANGLING_REFERENCE = "DANGLING_REFERENCE"
DUPLICATE_ID = "DUPLICATE_ID"
SELF_RELATION = "SELF_RELATION"

_ELEMENT_TYPES = {
    "UseCaseActor": ElementKind.ACTOR,
    "UseCase": ElementKind.USE_CASE,
    "UseCaseSystem": ElementKind.SYSTEM,
}
_ELEMENT_TYPE_NAMES = {kind: name for name, kind in _ELEMENT_TYPES.items()}

_RELATION_TYPES = {
    "UseCaseAssociation": RelationKind.ASSOCIATION,
    "UseCaseInclude": RelationKind.INCLUDE,
    "UseCaseExtend": RelationKind.EXTEND,
    "UseCaseGeneralization": RelationKind.GENERALIZATION,
}
_RELATION_TYPE_NAMES = {kind: name for name, kind in _RELATION_TYPES.items()}


@dataclass(frozen=True)
class ParseError:
    code: str
    detail: str
    location: str | None = None


class _Record(dict):
    """Plain dict that remembers which keys appeared more than once."""

    __slots__ = ("duplicate_keys",)

    def __init__(self, pairs: list[tuple[str, object]]) -> None:
        super().__init__(pairs)
        seen: set[str] = set()
        duplicates: list[str] = []
        for key, _ in pairs:
            if key in seen and key not in duplicates:
                duplicates.append(key)
            seen.add(key)
        self.duplicate_keys = duplicates


def parse_document(text: str) -> DiagramDocument | ParseError:
    """Parse the textual document form; returns a ParseError on the first violation."""
    try:
        raw = json.loads(text, object_pairs_hook=_Record)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        return ParseError(MALFORMED_INPUT, f"not valid JSON: {exc}")

    if not isinstance(raw, dict):
        return ParseError(MALFORMED_INPUT, "top level must be an object")
    version = raw.get("version")
    notation = raw.get("type")
    if not isinstance(version, str):
        return ParseError(MALFORMED_INPUT, "missing or non-string 'version'")
    if not isinstance(notation, str):
        return ParseError(MALFORMED_INPUT, "missing or non-string 'type'")
    if notation != NOTATION:
        return ParseError(UNKNOWN_NOTATION, f"unsupported notation {notation!r}")
    elements_map = raw.get("elements")
    relations_map = raw.get("relationships")
    if not isinstance(elements_map, dict):
        return ParseError(MALFORMED_INPUT, "missing or non-object 'elements'")
    if not isinstance(relations_map, dict):
        return ParseError(MALFORMED_INPUT, "missing or non-object 'relationships'")

    if isinstance(elements_map, _Record) and elements_map.duplicate_keys:
        dup = elements_map.duplicate_keys[0]
        return ParseError(DUPLICATE_ID, f"element id {dup!r} defined twice", dup)
    if isinstance(relations_map, _Record) and relations_map.duplicate_keys:
        dup = relations_map.duplicate_keys[0]
        return ParseError(DUPLICATE_ID, f"relationship id {dup!r} defined twice", dup)

    elements: list[DiagramElement] = []
    for element_id in sorted(elements_map):
        record = elements_map[element_id]
        parsed = _parse_element(element_id, record)
        if isinstance(parsed, ParseError):
            return parsed
        elements.append(parsed)

    element_kinds = {element.id: element.kind for element in elements}
    for element in elements:
        if element.owner is None:
            continue
        owner_kind = element_kinds.get(element.owner)
        if owner_kind is None:
            return ParseError(
                DANGLING_REFERENCE,
                f"owner {element.owner!r} of element {element.id!r} does not exist",
                element.id,
            )
        if owner_kind is not ElementKind.SYSTEM:
            return ParseError(
                DANGLING_REFERENCE,
                f"owner {element.owner!r} of element {element.id!r} is not a System",
                element.id,
            )

    relations: list[DiagramRelation] = []
    for relation_id in sorted(relations_map):
        record = relations_map[relation_id]
        parsed = _parse_relation(relation_id, record, element_kinds)
        if isinstance(parsed, ParseError):
            return parsed
        relations.append(parsed)

    extra = {
        key: value
        for key, value in raw.items()
        if key not in ("version", "type", "elements", "relationships")
    }
    return DiagramDocument(
        version=version,
        notation=notation,
        elements=tuple(elements),
        relations=tuple(relations),
        extra=extra,
    )


def _parse_element(element_id: str, record: object) -> DiagramElement | ParseError:
    if not isinstance(record, dict):
        return ParseError(MALFORMED_INPUT, f"element {element_id!r} is not an object", element_id)
    if record.get("id") != element_id:
        return ParseError(
            MALFORMED_INPUT, f"element {element_id!r} has a mismatched 'id' field", element_id
        )
    type_name = record.get("type")
    if not isinstance(type_name, str):
        return ParseError(MALFORMED_INPUT, f"element {element_id!r} has no 'type'", element_id)
    kind = _ELEMENT_TYPES.get(type_name)
    if kind is None:
        return ParseError(
            UNKNOWN_ELEMENT_KIND,
            f"element type {type_name!r} is not part of the use case notation",
            element_id,
        )
    name = record.get("name")
    if not isinstance(name, str):
        return ParseError(
            MALFORMED_INPUT, f"element {element_id!r} has a non-string 'name'", element_id
        )
    owner = record.get("owner")
    if owner is not None and not isinstance(owner, str):
        return ParseError(
            MALFORMED_INPUT, f"element {element_id!r} has a non-string 'owner'", element_id
        )
    extra = {
        key: value
        for key, value in record.items()
        if key not in ("id", "type", "name", "owner")
    }
    return DiagramElement(id=element_id, kind=kind, name=name, owner=owner, extra=extra)


def _parse_relation(
    relation_id: str, record: object, element_kinds: dict[str, ElementKind]
) -> DiagramRelation | ParseError:
    if not isinstance(record, dict):
        return ParseError(
            MALFORMED_INPUT, f"relationship {relation_id!r} is not an object", relation_id
        )
    if record.get("id") != relation_id:
        return ParseError(
            MALFORMED_INPUT,
            f"relationship {relation_id!r} has a mismatched 'id' field",
            relation_id,
        )
    type_name = record.get("type")
    if not isinstance(type_name, str):
        return ParseError(
            MALFORMED_INPUT, f"relationship {relation_id!r} has no 'type'", relation_id
        )
    kind = _RELATION_TYPES.get(type_name)
    if kind is None:
        return ParseError(
            UNKNOWN_RELATION_KIND,
            f"relationship type {type_name!r} is not part of the use case notation",
            relation_id,
        )

    endpoints: list[str] = []
    endpoint_extras: list[dict[str, object]] = []
    for side in ("source", "target"):
        endpoint = record.get(side)
        if not isinstance(endpoint, dict) or not isinstance(endpoint.get("element"), str):
            return ParseError(
                MALFORMED_INPUT,
                f"relationship {relation_id!r} has no {side} element",
                relation_id,
            )
        element_id = endpoint["element"]
        if element_id not in element_kinds:
            return ParseError(
                DANGLING_REFERENCE,
                f"relationship {relation_id!r} {side} element {element_id!r} does not exist",
                relation_id,
            )
        endpoints.append(element_id)
        endpoint_extras.append(
            {key: value for key, value in endpoint.items() if key != "element"}
        )

    if endpoints[0] == endpoints[1]:
        return ParseError(
            SELF_RELATION,
            f"relationship {relation_id!r} connects element {endpoints[0]!r} to itself",
            relation_id,
        )
    extra = {
        key: value
        for key, value in record.items()
        if key not in ("id", "type", "source", "target")
    }
    return DiagramRelation(
        id=relation_id,
        kind=kind,
        source=endpoints[0],
        target=endpoints[1],
        extra=extra,
        source_extra=endpoint_extras[0],
        target_extra=endpoint_extras[1],
    )


def serialize_document(doc: DiagramDocument) -> str:
    """Render a document back to its textual form; inverse of parse_document."""
    elements = {}
    for element in doc.elements:
        record: dict[str, object] = {
            "id": element.id,
            "type": _ELEMENT_TYPE_NAMES[element.kind],
            "name": element.name,
            "owner": element.owner,
        }
        record.update(element.extra)
        elements[element.id] = record
    relationships = {}
    for relation in doc.relations:
        record = {
            "id": relation.id,
            "type": _RELATION_TYPE_NAMES[relation.kind],
            "source": {"element": relation.source, **relation.source_extra},
            "target": {"element": relation.target, **relation.target_extra},
        }
        record.update(relation.extra)
        relationships[relation.id] = record
    payload: dict[str, object] = {
        "version": doc.version,
        "type": doc.notation,
        "elements": elements,
        "relationships": relationships,
    }
    payload.update(doc.extra)
    return json.dumps(payload, indent=2)
