"""Shared fixture builders: documents in the on-disk form and reference solutions."""

from __future__ import annotations

import json
import random

from umlkit.model import (
    ActorActorRel,
    ActorUseCaseRel,
    BossSpec,
    DiagramDocument,
    ElementKind,
    ExerciseSpec,
    RefElement,
    ReferenceSolution,
    UseCaseUseCaseRel,
)
from umlkit.model import RelationKind as RK
from umlkit.parser import parse_document


def element_record(
    element_id: str, type_name: str, name: str, owner: str | None = None, **extra
) -> dict:
    return {"id": element_id, "type": type_name, "name": name, "owner": owner, **extra}


def relation_record(
    relation_id: str, type_name: str, source: str, target: str, **extra
) -> dict:
    return {
        "id": relation_id,
        "type": type_name,
        "source": {"element": source},
        "target": {"element": target},
        **extra,
    }


def document_text(
    elements: list[dict], relations: list[dict] = (), version: str = "3.0.0", **extra
) -> str:
    return json.dumps(
        {
            "version": version,
            "type": "UseCaseDiagram",
            "elements": {record["id"]: record for record in elements},
            "relationships": {record["id"]: record for record in relations},
            **extra,
        }
    )


def parse_ok(text: str) -> DiagramDocument:
    doc = parse_document(text)
    assert isinstance(doc, DiagramDocument), doc
    return doc


# --- the shop exercise: the main fixture used across the suite ------------


def shop_reference() -> ReferenceSolution:
    return ReferenceSolution(
        label="Web shop",
        elements=(
            RefElement("sys_shop", ElementKind.SYSTEM, "Online Shop"),
            RefElement("sys_bank", ElementKind.SYSTEM, "Payment Provider", external=True),
            RefElement("act_customer", ElementKind.ACTOR, "Customer"),
            RefElement("act_premium", ElementKind.ACTOR, "Premium Customer"),
            RefElement(
                "uc_buy",
                ElementKind.USE_CASE,
                "Buy Item",
                alternatives=("Purchase Item",),
                owningSystem="sys_shop",
            ),
            RefElement("uc_pay", ElementKind.USE_CASE, "Pay", owningSystem="sys_shop"),
        ),
        relations=(
            ActorUseCaseRel(actor="act_customer", useCase="uc_buy"),
            UseCaseUseCaseRel(source="uc_buy", target="uc_pay", flavor=RK.INCLUDE),
            ActorUseCaseRel(actor="sys_bank", useCase="uc_pay", supporting=True),
            ActorActorRel(child="act_premium", parent="act_customer"),
        ),
        forbiddenNames=("Do Stuff",),
    )


def shop_elements() -> list[dict]:
    return [
        element_record("e_act_cust", "UseCaseActor", "Customer"),
        element_record("e_act_prem", "UseCaseActor", "Premium Customer"),
        element_record("e_sys_bank", "UseCaseSystem", "Payment Provider"),
        element_record("e_sys_shop", "UseCaseSystem", "Online Shop"),
        element_record("e_uc_buy", "UseCase", "Buy Item", owner="e_sys_shop"),
        element_record("e_uc_pay", "UseCase", "Pay", owner="e_sys_shop"),
    ]


def shop_relations() -> list[dict]:
    return [
        relation_record("r1", "UseCaseAssociation", "e_act_cust", "e_uc_buy"),
        relation_record("r2", "UseCaseInclude", "e_uc_buy", "e_uc_pay"),
        relation_record("r3", "UseCaseAssociation", "e_sys_bank", "e_uc_pay"),
        relation_record("r4", "UseCaseGeneralization", "e_act_prem", "e_act_cust"),
    ]


def clean_shop_text() -> str:
    return document_text(shop_elements(), shop_relations())


def clean_shop_doc() -> DiagramDocument:
    return parse_ok(clean_shop_text())


def shop_exercise(base_xp: int = 100) -> ExerciseSpec:
    return ExerciseSpec(
        exerciseId="shop",
        title="The web shop",
        statement="Model a customer buying items in an online shop.",
        baseXp=base_xp,
        boss=BossSpec(iconId="robot-1", taunt="You shall not model!"),
        solutions=(shop_reference(),),
    )


# --- two more references with clean transcriptions ------------------------


def library_reference() -> ReferenceSolution:
    return ReferenceSolution(
        label="Library",
        elements=(
            RefElement("sys_lib", ElementKind.SYSTEM, "Library"),
            RefElement("act_member", ElementKind.ACTOR, "Member"),
            RefElement("act_librarian", ElementKind.ACTOR, "Librarian"),
            RefElement(
                "uc_borrow", ElementKind.USE_CASE, "Borrow Book", owningSystem="sys_lib"
            ),
            RefElement(
                "uc_return", ElementKind.USE_CASE, "Return Book", owningSystem="sys_lib"
            ),
            RefElement(
                "uc_register",
                ElementKind.USE_CASE,
                "Register Member",
                owningSystem="sys_lib",
            ),
        ),
        relations=(
            ActorUseCaseRel(actor="act_member", useCase="uc_borrow"),
            ActorUseCaseRel(actor="act_member", useCase="uc_return"),
            ActorUseCaseRel(actor="act_librarian", useCase="uc_register"),
            UseCaseUseCaseRel(source="uc_return", target="uc_borrow", flavor=RK.EXTEND),
        ),
    )


def clean_library_text() -> str:
    elements = [
        element_record("l_act_lib", "UseCaseActor", "Librarian"),
        element_record("l_act_mem", "UseCaseActor", "Member"),
        element_record("l_sys", "UseCaseSystem", "Library"),
        element_record("l_uc_borrow", "UseCase", "Borrow Book", owner="l_sys"),
        element_record("l_uc_register", "UseCase", "Register Member", owner="l_sys"),
        element_record("l_uc_return", "UseCase", "Return Book", owner="l_sys"),
    ]
    relations = [
        relation_record("lr1", "UseCaseAssociation", "l_act_mem", "l_uc_borrow"),
        relation_record("lr2", "UseCaseAssociation", "l_act_mem", "l_uc_return"),
        relation_record("lr3", "UseCaseAssociation", "l_act_lib", "l_uc_register"),
        relation_record("lr4", "UseCaseExtend", "l_uc_return", "l_uc_borrow"),
    ]
    return document_text(elements, relations)


def clinic_reference() -> ReferenceSolution:
    return ReferenceSolution(
        label="Clinic",
        elements=(
            RefElement("sys_clinic", ElementKind.SYSTEM, "Clinic"),
            RefElement(
                "sys_insurance", ElementKind.SYSTEM, "Insurance Portal", external=True
            ),
            RefElement("act_patient", ElementKind.ACTOR, "Patient"),
            RefElement(
                "uc_book",
                ElementKind.USE_CASE,
                "Book Appointment",
                alternatives=("Schedule Appointment",),
                owningSystem="sys_clinic",
            ),
            RefElement(
                "uc_claim", ElementKind.USE_CASE, "Submit Claim", owningSystem="sys_clinic"
            ),
        ),
        relations=(
            ActorUseCaseRel(actor="act_patient", useCase="uc_book"),
            ActorUseCaseRel(actor="act_patient", useCase="uc_claim"),
            ActorUseCaseRel(actor="sys_insurance", useCase="uc_claim", supporting=True),
        ),
    )


def clinic_exercise(base_xp: int = 80) -> ExerciseSpec:
    return ExerciseSpec(
        exerciseId="clinic",
        title="The clinic",
        statement="Model a patient booking appointments at a clinic.",
        baseXp=base_xp,
        boss=BossSpec(iconId="robot-2", taunt="Your appointments are mine."),
        solutions=(clinic_reference(),),
    )


def clean_clinic_text() -> str:
    elements = [
        element_record("c_act_pat", "UseCaseActor", "Patient"),
        element_record("c_sys_clinic", "UseCaseSystem", "Clinic"),
        element_record("c_sys_ins", "UseCaseSystem", "Insurance Portal"),
        element_record("c_uc_book", "UseCase", "Book Appointment", owner="c_sys_clinic"),
        element_record("c_uc_claim", "UseCase", "Submit Claim", owner="c_sys_clinic"),
    ]
    relations = [
        relation_record("cr1", "UseCaseAssociation", "c_act_pat", "c_uc_book"),
        relation_record("cr2", "UseCaseAssociation", "c_act_pat", "c_uc_claim"),
        relation_record("cr3", "UseCaseAssociation", "c_sys_ins", "c_uc_claim"),
    ]
    return document_text(elements, relations)


# --- single-violation variants of the clean shop diagram ------------------


def violation_fixtures() -> dict[str, str]:
    """One document per diagnostic rule, each triggering exactly that rule."""
    fixtures: dict[str, str] = {}

    elements = shop_elements()
    elements.append(element_record("z_nameless", "UseCaseActor", ""))
    fixtures["SYN_MISSING_NAME"] = document_text(elements, shop_relations())

    elements = shop_elements()
    elements.append(element_record("z_twin", "UseCaseActor", "Customer"))
    fixtures["SYN_DUPLICATE_NAME"] = document_text(elements, shop_relations())

    elements = shop_elements()
    elements.append(element_record("z_guest", "UseCaseActor", "Guest"))
    relations = shop_relations()
    relations.append(relation_record("z_rel", "UseCaseGeneralization", "z_guest", "e_uc_buy"))
    fixtures["SYN_INVALID_ASSOCIATION"] = document_text(elements, relations)

    elements = shop_elements()
    elements.append(element_record("z_greeter", "UseCaseActor", "Greeter", owner="e_sys_shop"))
    fixtures["SYN_ACTOR_IN_SYSTEM"] = document_text(elements, shop_relations())

    elements = shop_elements()
    elements.append(element_record("z_browse", "UseCase", "Browse Catalog"))
    fixtures["SYN_USECASE_OUTSIDE_SYSTEM"] = document_text(elements, shop_relations())

    elements = [record for record in shop_elements() if record["id"] != "e_act_prem"]
    relations = [record for record in shop_relations() if record["id"] != "r4"]
    fixtures["SEM_MISSING_ELEMENT"] = document_text(elements, relations)

    relations = [record for record in shop_relations() if record["id"] != "r4"]
    fixtures["SEM_MISSING_RELATION"] = document_text(shop_elements(), relations)

    relations = shop_relations()
    relations[1] = relation_record("r2", "UseCaseExtend", "e_uc_buy", "e_uc_pay")
    fixtures["SEM_WRONG_UC_RELATION_TYPE"] = document_text(shop_elements(), relations)

    relations = shop_relations()
    relations[1] = relation_record("r2", "UseCaseInclude", "e_uc_pay", "e_uc_buy")
    fixtures["SEM_WRONG_UC_RELATION_DIRECTION"] = document_text(shop_elements(), relations)

    elements = shop_elements()
    elements[5] = element_record("e_uc_pay", "UseCase", "Pay", owner="e_sys_bank")
    fixtures["SEM_WRONG_SYSTEM"] = document_text(elements, shop_relations())

    elements = shop_elements()
    elements.append(element_record("z_stuff", "UseCase", "Do Stuff", owner="e_sys_shop"))
    fixtures["SEM_FORBIDDEN_NAME"] = document_text(elements, shop_relations())

    relations = shop_relations()
    relations.append(relation_record("z_extra", "UseCaseAssociation", "e_act_cust", "e_uc_pay"))
    fixtures["SEM_EXTRA_RELATION"] = document_text(shop_elements(), relations)

    return fixtures


# --- the two-solution exercise for the argmax criterion -------------------


def argmax_exercise() -> ExerciseSpec:
    partial = ReferenceSolution(
        label="Sparse take",
        elements=(
            RefElement("p_cust", ElementKind.ACTOR, "Customer"),
            RefElement("p_shop", ElementKind.SYSTEM, "Shop"),
            RefElement("p_pay", ElementKind.USE_CASE, "Pay", owningSystem="p_shop"),
            RefElement("p_check", ElementKind.USE_CASE, "Checkout", owningSystem="p_shop"),
            RefElement("p_wish", ElementKind.USE_CASE, "Wishlist", owningSystem="p_shop"),
        ),
    )
    rich = ReferenceSolution(
        label="Rich take",
        elements=(
            RefElement("r_cust", ElementKind.ACTOR, "Customer"),
            RefElement("r_admin", ElementKind.ACTOR, "Admin"),
            RefElement("r_shop", ElementKind.SYSTEM, "Shop"),
            RefElement("r_buy", ElementKind.USE_CASE, "Buy", owningSystem="r_shop"),
            RefElement("r_pay", ElementKind.USE_CASE, "Pay", owningSystem="r_shop"),
            RefElement("r_refund", ElementKind.USE_CASE, "Refund", owningSystem="r_shop"),
        ),
        relations=(
            ActorUseCaseRel(actor="r_cust", useCase="r_buy"),
            UseCaseUseCaseRel(source="r_buy", target="r_pay", flavor=RK.INCLUDE),
            ActorUseCaseRel(actor="r_admin", useCase="r_refund"),
            ActorUseCaseRel(actor="r_admin", useCase="r_pay"),
        ),
    )
    return ExerciseSpec(
        exerciseId="argmax",
        title="Two ways to model a shop",
        statement="Model the shop; two references exist.",
        baseXp=100,
        boss=BossSpec(iconId="robot-3", taunt="Pick your poison."),
        solutions=(partial, rich),
    )


def argmax_submission_text() -> str:
    elements = [
        element_record("a1", "UseCaseActor", "Customer"),
        element_record("a2", "UseCaseActor", "Admin"),
        element_record("s1", "UseCaseSystem", "Shop"),
        element_record("u1", "UseCase", "Buy", owner="s1"),
        element_record("u2", "UseCase", "Pay", owner="s1"),
        element_record("u3", "UseCase", "Refund", owner="s1"),
    ]
    relations = [
        relation_record("ra", "UseCaseAssociation", "a1", "u1"),
        relation_record("rb", "UseCaseAssociation", "a1", "u2"),
        relation_record("rc", "UseCaseInclude", "u1", "u2"),
        relation_record("rd", "UseCaseAssociation", "a2", "u3"),
    ]
    return document_text(elements, relations)


# --- random generators shared by unit and acceptance tests ----------------


def random_document(rng: random.Random) -> str:
    words = ["alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta"]
    elements = []
    system_ids = []
    for index in range(rng.randrange(0, 9)):
        element_id = f"n{index:02d}"
        type_name = rng.choice(["UseCaseActor", "UseCase", "UseCaseSystem"])
        if type_name == "UseCaseSystem":
            system_ids.append(element_id)
        name = " ".join(rng.sample(words, rng.randrange(0, 3)))
        record = element_record(element_id, type_name, name)
        if type_name == "UseCase" and system_ids and rng.random() < 0.7:
            record["owner"] = rng.choice(system_ids)
        if rng.random() < 0.5:
            record["bounds"] = {
                "x": rng.randrange(0, 500),
                "y": rng.randrange(0, 500),
                "width": rng.randrange(40, 200),
                "height": rng.randrange(30, 120),
            }
        elements.append(record)
    relations = []
    if len(elements) >= 2:
        for index in range(rng.randrange(0, 6)):
            source, target = rng.sample([record["id"] for record in elements], 2)
            record = relation_record(
                f"r{index:02d}",
                rng.choice(
                    [
                        "UseCaseAssociation",
                        "UseCaseInclude",
                        "UseCaseExtend",
                        "UseCaseGeneralization",
                    ]
                ),
                source,
                target,
            )
            if rng.random() < 0.5:
                record["path"] = [
                    {"x": rng.randrange(0, 500), "y": rng.randrange(0, 500)}
                    for _ in range(rng.randrange(1, 4))
                ]
            relations.append(record)
    extra = {"size": {"width": 1000, "height": 700}} if rng.random() < 0.5 else {}
    return document_text(elements, relations, **extra)


def random_clean_document(rng: random.Random) -> str:
    """A generated syntax-clean document: named unique elements, owned use
    cases, only legal relation combinations."""
    actor_names = ["User", "Admin", "Guest", "Operator", "Customer", "Customers"]
    system_names = ["Shop", "Portal", "Billing", "Warehouse"]
    use_case_names = ["Buy", "Pay", "Browse", "Refund", "Register", "Login"]
    elements = []
    systems = []
    actors = []
    use_cases = []
    for index in range(rng.randrange(1, 3)):
        element_id = f"s{index}"
        systems.append(element_id)
        elements.append(
            element_record(element_id, "UseCaseSystem", system_names[index])
        )
    for index in range(rng.randrange(1, 4)):
        element_id = f"a{index}"
        actors.append(element_id)
        elements.append(element_record(element_id, "UseCaseActor", actor_names[index]))
    for index in range(rng.randrange(1, 4)):
        element_id = f"u{index}"
        use_cases.append(element_id)
        elements.append(
            element_record(
                element_id, "UseCase", use_case_names[index], owner=rng.choice(systems)
            )
        )
    relations = []
    counter = 0
    for use_case in use_cases:
        if rng.random() < 0.8:
            other = rng.choice(actors + systems)
            source, target = (other, use_case) if rng.random() < 0.5 else (use_case, other)
            relations.append(
                relation_record(f"r{counter}", "UseCaseAssociation", source, target)
            )
            counter += 1
    if len(use_cases) >= 2 and rng.random() < 0.7:
        source, target = rng.sample(use_cases, 2)
        flavor = rng.choice(["UseCaseInclude", "UseCaseExtend"])
        relations.append(relation_record(f"r{counter}", flavor, source, target))
        counter += 1
    if len(actors) >= 2 and rng.random() < 0.6:
        child, parent = rng.sample(actors, 2)
        relations.append(
            relation_record(f"r{counter}", "UseCaseGeneralization", child, parent)
        )
    return document_text(elements, relations)
