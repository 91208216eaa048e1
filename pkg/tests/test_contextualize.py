import json

import pytest

from kwsp.contextualize import (
    ArticulationRequest,
    TranscriptionJob,
    segment_document,
    transcribe,
)
from kwsp.errors import (
    AmbiguousIeType,
    DanglingSupport,
    NoCurrentActivity,
    OverlappingSegments,
    SessionClosed,
    UnknownTaskType,
)
from kwsp.model import ElementKind, LinkType, Surrogate, def_node_ref

from .conftest import articulate_simple


class TestArticulate:
    def test_influenza_hypothesis_fully_linked(self, p1_scenario):
        platform = p1_scenario["platform"]
        observation = p1_scenario["observation"]
        hypothesis = p1_scenario["hypothesis"]
        assert hypothesis.activity_node == "determination_of_possible_diseases"
        assert hypothesis.ie_type_node == "list_of_possible_diseases"
        inbound = platform.archive.links_of(
            hypothesis.id, "in", (LinkType.REFERENCE_SUPPORT,)
        )
        assert [l.source for l in inbound] == [observation.id]
        categorized = platform.archive.links_of(
            hypothesis.id, "out", (LinkType.CATEGORIZED_AS,)
        )
        targets = {l.target for l in categorized}
        assert targets == {
            def_node_ref("patient-care", 1, "determination_of_possible_diseases"),
            def_node_ref("patient-care", 1, "list_of_possible_diseases"),
        }

    def test_provenance_carries_session(self, p1_scenario):
        element = p1_scenario["observation"]
        assert element.provenance.session == p1_scenario["session"].session_id
        assert element.provenance.source_document is None
        assert element.provenance.situational_note

    def test_dangling_support_nothing_persisted(self, loaded):
        session = loaded.workspace.open_session("dr_a", "patient-care", "P1")
        loaded.workspace.advance(session.session_id, "examination")
        before = len(loaded.archive.records())
        with pytest.raises(DanglingSupport):
            articulate_simple(loaded, session.session_id, supports=("0" * 26,))
        assert len(loaded.archive.records()) == before

    def test_no_current_activity(self, loaded):
        session = loaded.workspace.open_session("dr_a", "patient-care", "P1")
        with pytest.raises(NoCurrentActivity):
            articulate_simple(loaded, session.session_id)

    def test_closed_session(self, loaded):
        session = loaded.workspace.open_session("dr_a", "patient-care", "P1")
        loaded.workspace.advance(session.session_id, "examination")
        loaded.workspace.complete_session(session.session_id)
        with pytest.raises(SessionClosed):
            articulate_simple(loaded, session.session_id)

    def test_ambiguous_ie_type_without_override(self, platform, patient_care_doc):
        doc = json.loads(patient_care_doc)
        doc["correspondences"].append(["examination", "list_of_possible_diseases"])
        platform.register_definition(json.dumps(doc))
        session = platform.workspace.open_session("dr_a", "patient-care", "P1")
        platform.workspace.advance(session.session_id, "examination")
        with pytest.raises(AmbiguousIeType):
            articulate_simple(platform, session.session_id)
        # explicit override resolves it
        result = articulate_simple(
            platform, session.session_id, ie_type_node="results_of_examination"
        )
        assert result.element.ie_type_node == "results_of_examination"

    def test_satisfies_creates_ds_link(self, p1_scenario):
        platform = p1_scenario["platform"]
        session = p1_scenario["session"]
        hypothesis = p1_scenario["hypothesis"]
        platform.workspace.advance(session.session_id, "verification_of_diagnosis")
        decision = articulate_simple(
            platform,
            session.session_id,
            kind=ElementKind.DECISION,
            content="influenza confirmed",
            title="diagnosis",
            satisfies=(hypothesis.id,),
        ).element
        ds = platform.archive.links_of(
            decision.id, "in", (LinkType.DEMAND_SATISFACTION,)
        )
        assert [l.source for l in ds] == [hypothesis.id]

    def test_every_articulated_element_has_two_categorizations(self, p1_scenario):
        platform = p1_scenario["platform"]
        for element in platform.archive.elements():
            links = platform.archive.links_of(
                element.id, "out", (LinkType.CATEGORIZED_AS,)
            )
            assert len(links) >= 2


class TestSegmentDocument:
    def test_two_paragraphs(self):
        assert segment_document("para1\n\npara2") == ["para1", "para2"]

    def test_empty(self):
        assert segment_document("") == []

    def test_trailing_blank_lines(self):
        text = "first paragraph\n\nsecond one\n\nthird here\n\n\n"
        assert segment_document(text) == ["first paragraph", "second one", "third here"]

    def test_content_preserved(self):
        text = "alpha beta\n\n  gamma  \n\ndelta"
        segments = segment_document(text)
        assert "".join("".join(s.split()) for s in segments) == "".join(text.split())


def job_for(text, segments, task_type="patient-care", **kw):
    return TranscriptionJob(
        source_text=text,
        source_reference="legacy-chart-7",
        task_type=task_type,
        segments=tuple(segments),
        **kw,
    )


class TestTranscribe:
    def test_two_segments_with_rs_link(self, loaded):
        from kwsp.contextualize import Segment

        text = "patient reported fever\n\nconsistent with viral infection"
        job = job_for(
            text,
            [
                Segment(start=0, end=22, kind=ElementKind.OBSERVATION),
                Segment(
                    start=24,
                    end=len(text),
                    kind=ElementKind.FINDING,
                    links=({"type": "RS", "target": 0},),
                ),
            ],
        )
        result = transcribe(loaded.archive, job)
        assert len(result.elements) == 2
        assert len(result.links) == 1
        for element in result.elements:
            stored = loaded.archive.get(element.id)
            assert stored.provenance.source_document == "legacy-chart-7"
            assert stored.provenance.session is None
        link = result.links[0]
        assert link.link_type is LinkType.REFERENCE_SUPPORT
        assert link.source == result.elements[1].id
        assert link.target == result.elements[0].id

    def test_category_nodes_become_links(self, loaded):
        from kwsp.contextualize import Segment

        job = job_for(
            "fever of 39C noted",
            [
                Segment(
                    start=0,
                    end=18,
                    kind=ElementKind.OBSERVATION,
                    category_nodes=("results_of_examination",),
                )
            ],
        )
        result = transcribe(loaded.archive, job)
        links = loaded.archive.links_of(
            result.elements[0].id, "out", (LinkType.CATEGORIZED_AS,)
        )
        assert [l.target for l in links] == [
            def_node_ref("patient-care", 1, "results_of_examination")
        ]

    def test_overlapping_segments(self, loaded):
        from kwsp.contextualize import Segment

        job = job_for(
            "0123456789",
            [
                Segment(start=0, end=6, kind=ElementKind.OBSERVATION),
                Segment(start=4, end=9, kind=ElementKind.FINDING),
            ],
        )
        before = len(loaded.archive.records())
        with pytest.raises(OverlappingSegments):
            transcribe(loaded.archive, job)
        assert len(loaded.archive.records()) == before

    def test_empty_job(self, loaded):
        result = transcribe(loaded.archive, job_for("whatever", []))
        assert result.elements == ()

    def test_unknown_task_type(self, loaded):
        from kwsp.contextualize import Segment

        job = job_for(
            "text body here",
            [Segment(start=0, end=4, kind=ElementKind.OBSERVATION)],
            task_type="nonexistent",
        )
        with pytest.raises(UnknownTaskType):
            transcribe(loaded.archive, job)

    def test_job_file_roundtrip(self, loaded):
        doc = {
            "source": {"text": "fever noted\n\nviral likely", "reference": "doc-9"},
            "task_type": "patient-care",
            "segments": [
                {"start": 0, "end": 11, "kind": "Observation"},
                {
                    "start": 13,
                    "end": 25,
                    "kind": "Hypothesis",
                    "links": [{"type": "DS", "target": 0}],
                },
            ],
        }
        job = TranscriptionJob.from_dict(doc)
        result = transcribe(loaded.archive, job)
        assert [e.kind for e in result.elements] == [
            ElementKind.OBSERVATION,
            ElementKind.HYPOTHESIS,
        ]
        assert result.links[0].link_type is LinkType.DEMAND_SATISFACTION
        assert loaded.archive.audit() == []
