"""IBIS-style argumentation: issues, positions and arguments grounded in
archived elements, plus verification of a position's support."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .archive import Archive
from .contextualize import ArticulationRequest, ArticulationResult, articulate
from .errors import (
    DanglingEvidence,
    EmptyText,
    NotGrounded,
    UnknownNode,
    UnknownParent,
)
from .ids import new_ulid
from .model import (
    ArgumentKind,
    ArgumentNode,
    ElementKind,
    InformationalElement,
    LinkType,
    Surrogate,
    new_link,
    utc_now_iso,
)
from .workspace import WorkspaceEngine


@dataclass(frozen=True)
class VerificationReport:
    position: str
    grounded: bool
    supports: tuple[dict, ...]    # {"argument": id, "text": ..., "evidence": [ids]}
    objections: tuple[dict, ...]

    def to_dict(self) -> dict:
        return {
            "position": self.position,
            "grounded": self.grounded,
            "supports": [dict(s) for s in self.supports],
            "objections": [dict(o) for o in self.objections],
        }


class ArgumentationService:
    def __init__(self, archive: Archive, engine: WorkspaceEngine):
        self.archive = archive
        self.engine = engine

    def _new_node(self, kind: ArgumentKind, text: str, session_id: str) -> ArgumentNode:
        if not text.strip():
            raise EmptyText("argument node text must be non-empty")
        session = self.engine.require_open(session_id)
        return ArgumentNode(
            id=new_ulid(),
            node_kind=kind,
            text=text,
            author=session.worker,
            created_at=utc_now_iso(),
            task_instance=session.task_instance,
        )

    def _require_argument_node(self, ref: str, kind: ArgumentKind, error) -> ArgumentNode:
        body = self.archive.get(ref)
        if not isinstance(body, ArgumentNode) or body.node_kind is not kind:
            raise error(f"no {kind.value} node {ref}")
        return body

    def raise_issue(self, session_id: str, text: str) -> ArgumentNode:
        node = self._new_node(ArgumentKind.ISSUE, text, session_id)
        self.archive.append(node)
        return node

    def take_position(self, issue_id: str, text: str, session_id: str) -> ArgumentNode:
        self._require_argument_node(issue_id, ArgumentKind.ISSUE, UnknownParent)
        node = self._new_node(ArgumentKind.POSITION, text, session_id)
        link = new_link(LinkType.RESPONDS_TO, node.id, issue_id)
        self.archive.append_batch([node, link])
        return node

    def argue(
        self,
        position_id: str,
        stance: str,
        text: str,
        session_id: str,
        evidence: tuple[str, ...] = (),
    ) -> ArgumentNode:
        """Attach a supporting or objecting argument, with evidence links
        into the archive; one atomic append."""
        if stance not in ("supports", "objects"):
            raise UnknownParent(f"stance must be 'supports' or 'objects', got {stance!r}")
        self._require_argument_node(position_id, ArgumentKind.POSITION, UnknownParent)
        for ref in evidence:
            if not isinstance(self.archive.get(ref), InformationalElement):
                raise DanglingEvidence(f"no element {ref}")
        node = self._new_node(ArgumentKind.ARGUMENT, text, session_id)
        link_type = LinkType.SUPPORTS if stance == "supports" else LinkType.OBJECTS_TO
        links = [new_link(link_type, node.id, position_id)]
        links += [new_link(LinkType.EVIDENCED_BY, node.id, ref) for ref in evidence]
        self.archive.append_batch([node] + links)
        return node

    def verify(self, position_id: str) -> VerificationReport:
        """Walk the reasoning structure around a position, read-only.

        grounded = at least one supporting argument exists and every
        supporting argument carries at least one resolvable evidence
        element.
        """
        self._require_argument_node(position_id, ArgumentKind.POSITION, UnknownNode)
        supports: list[dict] = []
        objections: list[dict] = []
        for link in self.archive.links_of(
            position_id, "in", (LinkType.SUPPORTS, LinkType.OBJECTS_TO)
        ):
            argument = self.archive.get(link.source)
            if not isinstance(argument, ArgumentNode):
                continue
            evidence = [
                l.target
                for l in self.archive.links_of(argument.id, "out", (LinkType.EVIDENCED_BY,))
                if isinstance(self.archive.get(l.target), InformationalElement)
            ]
            entry = {"argument": argument.id, "text": argument.text, "evidence": evidence}
            if link.link_type is LinkType.SUPPORTS:
                supports.append(entry)
            else:
                objections.append(entry)
        grounded = bool(supports) and all(s["evidence"] for s in supports)
        return VerificationReport(
            position=position_id,
            grounded=grounded,
            supports=tuple(supports),
            objections=tuple(objections),
        )

    def conclude(self, position_id: str, session_id: str) -> ArticulationResult:
        """Import a grounded position into the workspace as a Decision
        element supported by all its evidence and citing the position."""
        report = self.verify(position_id)
        if not report.grounded:
            raise NotGrounded(f"position {position_id} is not grounded")
        position = self.archive.get(position_id)
        evidence_ids: list[str] = []
        for entry in report.supports:
            for ref in entry["evidence"]:
                if ref not in evidence_ids:
                    evidence_ids.append(ref)
        request = ArticulationRequest(
            session_id=session_id,
            kind=ElementKind.DECISION,
            content=position.text,
            surrogate=Surrogate(title=position.text[:80]),
            supports=tuple(evidence_ids),
            cite_positions=(position_id,),
            note=f"concluded from position {position_id}",
        )
        return articulate(self.engine, self.archive, request)
