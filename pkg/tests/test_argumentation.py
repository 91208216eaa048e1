import pytest

from kwsp.errors import (
    DanglingEvidence,
    EmptyText,
    NotGrounded,
    SessionClosed,
    UnknownNode,
    UnknownParent,
)
from kwsp.model import ArgumentKind, ArgumentNode, LinkType


@pytest.fixture
def arg_fixture(p1_scenario):
    """Issue 'which disease?' <- Position 'influenza' <- supporting
    Argument evidenced by the exam observation."""
    platform = p1_scenario["platform"]
    service = platform.argumentation
    sid = p1_scenario["session"].session_id
    issue = service.raise_issue(sid, "which disease?")
    position = service.take_position(issue.id, "influenza", sid)
    argument = service.argue(
        position.id,
        "supports",
        "symptoms match influenza",
        sid,
        evidence=(p1_scenario["observation"].id,),
    )
    return {**p1_scenario, "issue": issue, "position": position, "argument": argument}


class TestBuildGraph:
    def test_three_nodes_three_links(self, arg_fixture):
        platform = arg_fixture["platform"]
        nodes = [
            r.body
            for r in platform.archive.records()
            if isinstance(r.body, ArgumentNode)
        ]
        assert [n.node_kind for n in nodes] == [
            ArgumentKind.ISSUE,
            ArgumentKind.POSITION,
            ArgumentKind.ARGUMENT,
        ]
        responds = platform.archive.links_of(
            arg_fixture["issue"].id, "in", (LinkType.RESPONDS_TO,)
        )
        assert [l.source for l in responds] == [arg_fixture["position"].id]
        evidenced = platform.archive.links_of(
            arg_fixture["argument"].id, "out", (LinkType.EVIDENCED_BY,)
        )
        assert [l.target for l in evidenced] == [arg_fixture["observation"].id]
        assert platform.archive.audit() == []

    def test_dangling_evidence_nothing_persisted(self, arg_fixture):
        platform = arg_fixture["platform"]
        before = len(platform.archive.records())
        with pytest.raises(DanglingEvidence):
            platform.argumentation.argue(
                arg_fixture["position"].id,
                "supports",
                "bogus",
                arg_fixture["session"].session_id,
                evidence=("0" * 26,),
            )
        assert len(platform.archive.records()) == before

    def test_position_on_unknown_issue(self, p1_scenario):
        platform = p1_scenario["platform"]
        with pytest.raises(UnknownParent):
            platform.argumentation.take_position(
                "0" * 26, "influenza", p1_scenario["session"].session_id
            )

    def test_empty_text(self, p1_scenario):
        platform = p1_scenario["platform"]
        with pytest.raises(EmptyText):
            platform.argumentation.raise_issue(
                p1_scenario["session"].session_id, "   "
            )

    def test_nodes_carry_session_author_and_instance(self, arg_fixture):
        assert arg_fixture["issue"].author == "dr_a"
        assert arg_fixture["issue"].task_instance == "P1"


class TestVerify:
    def test_grounded_fixture(self, arg_fixture):
        report = arg_fixture["platform"].argumentation.verify(arg_fixture["position"].id)
        assert report.grounded is True
        assert len(report.supports) == 1
        assert report.supports[0]["evidence"] == [arg_fixture["observation"].id]
        assert report.objections == ()

    def test_position_without_arguments(self, arg_fixture):
        platform = arg_fixture["platform"]
        sid = arg_fixture["session"].session_id
        lonely = platform.argumentation.take_position(
            arg_fixture["issue"].id, "common cold", sid
        )
        report = platform.argumentation.verify(lonely.id)
        assert report.grounded is False
        assert report.supports == ()

    def test_unevidenced_support_not_grounded(self, arg_fixture):
        platform = arg_fixture["platform"]
        sid = arg_fixture["session"].session_id
        position = platform.argumentation.take_position(
            arg_fixture["issue"].id, "measles", sid
        )
        platform.argumentation.argue(position.id, "supports", "a hunch", sid)
        assert platform.argumentation.verify(position.id).grounded is False

    def test_objections_reported_not_weighed(self, arg_fixture):
        platform = arg_fixture["platform"]
        sid = arg_fixture["session"].session_id
        platform.argumentation.argue(
            arg_fixture["position"].id, "objects", "no lab confirmation", sid
        )
        report = platform.argumentation.verify(arg_fixture["position"].id)
        assert report.grounded is True
        assert len(report.objections) == 1

    def test_verify_pure(self, arg_fixture):
        platform = arg_fixture["platform"]
        before = len(platform.archive.records())
        first = platform.argumentation.verify(arg_fixture["position"].id)
        second = platform.argumentation.verify(arg_fixture["position"].id)
        assert first == second
        assert len(platform.archive.records()) == before

    def test_unknown_position(self, p1_scenario):
        with pytest.raises(UnknownNode):
            p1_scenario["platform"].argumentation.verify("0" * 26)

    def test_grounded_matches_brute_force(self, arg_fixture):
        platform = arg_fixture["platform"]
        sid = arg_fixture["session"].session_id
        service = platform.argumentation
        # grow a wider graph: extra positions/arguments, some unevidenced
        extra = service.take_position(arg_fixture["issue"].id, "bronchitis", sid)
        service.argue(extra.id, "supports", "plausible", sid)
        evidenced = service.take_position(arg_fixture["issue"].id, "pharyngitis", sid)
        service.argue(
            evidenced.id,
            "supports",
            "throat findings",
            sid,
            evidence=(arg_fixture["observation"].id,),
        )
        links = platform.archive.all_links()
        for position in (arg_fixture["position"], extra, evidenced):
            supports = [
                l.source
                for l in links
                if l.link_type is LinkType.SUPPORTS and l.target == position.id
            ]
            brute = bool(supports) and all(
                any(
                    l.link_type is LinkType.EVIDENCED_BY and l.source == a
                    for l in links
                )
                for a in supports
            )
            assert service.verify(position.id).grounded == brute


class TestConclude:
    def test_decision_with_rs_links(self, arg_fixture):
        platform = arg_fixture["platform"]
        result = platform.argumentation.conclude(
            arg_fixture["position"].id, arg_fixture["session"].session_id
        )
        element = result.element
        assert element.content == "influenza"
        assert element.kind.value == "Decision"
        rs_in = platform.archive.links_of(
            element.id, "in", (LinkType.REFERENCE_SUPPORT,)
        )
        assert [l.source for l in rs_in] == [arg_fixture["observation"].id]
        rs_out = platform.archive.links_of(
            element.id, "out", (LinkType.REFERENCE_SUPPORT,)
        )
        assert [l.target for l in rs_out] == [arg_fixture["position"].id]
        assert platform.archive.audit() == []

    def test_ungrounded_position(self, arg_fixture):
        platform = arg_fixture["platform"]
        sid = arg_fixture["session"].session_id
        lonely = platform.argumentation.take_position(
            arg_fixture["issue"].id, "common cold", sid
        )
        with pytest.raises(NotGrounded):
            platform.argumentation.conclude(lonely.id, sid)

    def test_closed_session(self, arg_fixture):
        platform = arg_fixture["platform"]
        sid = arg_fixture["session"].session_id
        platform.workspace.complete_session(sid)
        with pytest.raises(SessionClosed):
            platform.argumentation.conclude(arg_fixture["position"].id, sid)
