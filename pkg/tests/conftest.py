import json
import os

import pytest

from kwsp import Platform
from kwsp.contextualize import ArticulationRequest
from kwsp.model import ElementKind, Surrogate

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def fixture_text(name: str) -> str:
    with open(os.path.join(FIXTURES, name), "r", encoding="utf-8") as fh:
        return fh.read()


@pytest.fixture
def patient_care_doc() -> str:
    return fixture_text("patient-care.json")


@pytest.fixture
def loan_approval_doc() -> str:
    return fixture_text("loan-approval.json")


@pytest.fixture
def platform(tmp_path) -> Platform:
    return Platform(str(tmp_path / "data"))


@pytest.fixture
def loaded(platform, patient_care_doc) -> Platform:
    platform.register_definition(patient_care_doc)
    return platform


def articulate_simple(
    platform,
    session_id,
    kind=ElementKind.OBSERVATION,
    content="high temperature, headache",
    title="exam findings",
    **kwargs,
):
    return platform.articulate(
        ArticulationRequest(
            session_id=session_id,
            kind=kind,
            content=content,
            surrogate=Surrogate(title=title),
            **kwargs,
        )
    )


@pytest.fixture
def p1_scenario(loaded):
    """One treated patient: observation at examination, supported influenza
    hypothesis at determination, session left open at determination."""
    platform = loaded
    session = platform.workspace.open_session("dr_a", "patient-care", "P1")
    platform.workspace.advance(session.session_id, "examination")
    observation = articulate_simple(platform, session.session_id).element
    platform.workspace.advance(session.session_id, "determination_of_possible_diseases")
    hypothesis = articulate_simple(
        platform,
        session.session_id,
        kind=ElementKind.HYPOTHESIS,
        content="influenza",
        title="possible disease influenza",
        supports=(observation.id,),
    ).element
    return {
        "platform": platform,
        "session": session,
        "observation": observation,
        "hypothesis": hypothesis,
    }
