"""The two information-producing edge processes: contextualized
articulation (online, inside a session) and transcription (offline, of
legacy documents).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .archive import Archive, RecordBody
from .errors import (
    AmbiguousIeType,
    DanglingSupport,
    DsCycle,
    NoCurrentActivity,
    OverlappingSegments,
    UnknownTaskType,
    ValidationFailed,
)
from .model import (
    ElementKind,
    InformationalElement,
    Link,
    LinkType,
    Provenance,
    Surrogate,
    def_node_ref,
    new_element,
    new_link,
)
from .workspace import WorkspaceEngine

_BLANK_LINE_RE = re.compile(r"\n\s*\n")


@dataclass(frozen=True)
class ArticulationRequest:
    session_id: str
    kind: ElementKind
    content: str
    surrogate: Surrogate
    supports: tuple[str, ...] = ()
    satisfies: tuple[str, ...] = ()
    ie_type_node: Optional[str] = None
    cite_positions: tuple[str, ...] = ()
    note: str = ""


@dataclass(frozen=True)
class ArticulationResult:
    element: InformationalElement
    links: tuple[Link, ...]

    def to_dict(self) -> dict:
        return {
            "element": self.element.to_dict(),
            "links": [l.to_dict() for l in self.links],
        }


def articulate(
    engine: WorkspaceEngine, archive: Archive, request: ArticulationRequest
) -> ArticulationResult:
    """Create one element inside a live session, fully contextualized.

    The element is categorized under the session's current activity and
    its corresponding ie-type node, support/satisfaction links are drawn
    from the cited elements, and everything persists in one atomic batch.
    """
    session = engine.require_open(request.session_id)
    if session.current_activity is None:
        raise NoCurrentActivity(f"session {session.session_id} has no current activity")
    definition = engine.pinned_definition(session)

    info_ids = definition.info_node_ids()
    if request.ie_type_node is not None:
        if request.ie_type_node not in info_ids:
            raise AmbiguousIeType(
                f"override {request.ie_type_node!r} is not an ie-type node"
            )
        ie_type = request.ie_type_node
    else:
        candidates = [
            n
            for n in engine.current_context(session.session_id).corresponding_ie_type_nodes
            if n in info_ids
        ]
        if len(candidates) != 1:
            raise AmbiguousIeType(
                f"activity {session.current_activity!r} corresponds to "
                f"{len(candidates)} ie-type nodes; pass an explicit override"
            )
        ie_type = candidates[0]

    for ref in list(request.supports) + list(request.satisfies):
        body = archive.get(ref)
        if not isinstance(body, InformationalElement):
            raise DanglingSupport(f"no element {ref}")

    element = new_element(
        kind=request.kind,
        content=request.content,
        surrogate=request.surrogate,
        task_type=session.task_type,
        task_instance=session.task_instance,
        provenance=Provenance(
            author=session.worker,
            session=session.session_id,
            situational_note=request.note
            or f"at activity {session.current_activity} of {session.task_instance}",
        ),
        activity_node=session.current_activity,
        ie_type_node=ie_type,
    )
    version = definition.version
    links = [
        new_link(
            LinkType.CATEGORIZED_AS,
            element.id,
            def_node_ref(session.task_type, version, session.current_activity),
        ),
        new_link(
            LinkType.CATEGORIZED_AS,
            element.id,
            def_node_ref(session.task_type, version, ie_type),
        ),
    ]
    links += [
        new_link(LinkType.REFERENCE_SUPPORT, ref, element.id) for ref in request.supports
    ]
    links += [
        new_link(LinkType.DEMAND_SATISFACTION, ref, element.id) for ref in request.satisfies
    ]
    links += [
        new_link(LinkType.REFERENCE_SUPPORT, element.id, pos)
        for pos in request.cite_positions
    ]
    _append_atomically(archive, [element] + links)
    engine.note_element(session.session_id, element.id)
    return ArticulationResult(element=element, links=tuple(links))


def _append_atomically(archive: Archive, bodies: list[RecordBody]) -> None:
    try:
        archive.append_batch(bodies)
    except ValidationFailed as exc:
        if "DsCycle" in exc.message:
            raise DsCycle(exc.message) from exc
        raise


def segment_document(text: str) -> list[str]:
    """Naive segmentation: split at blank-line boundaries, trim, drop
    empty segments."""
    return [part.strip() for part in _BLANK_LINE_RE.split(text) if part.strip()]


@dataclass(frozen=True)
class Segment:
    start: int
    end: int
    kind: ElementKind
    category_nodes: tuple[str, ...] = ()
    links: tuple[dict, ...] = ()  # {"type": "DS"|"RS", "target": segment index}
    title: Optional[str] = None


@dataclass(frozen=True)
class TranscriptionJob:
    source_text: str
    source_reference: str
    task_type: str
    segments: tuple[Segment, ...]
    author: str = "transcriber"

    @staticmethod
    def from_dict(doc: dict) -> "TranscriptionJob":
        return TranscriptionJob(
            source_text=doc["source"]["text"],
            source_reference=doc["source"]["reference"],
            task_type=doc["task_type"],
            author=doc.get("author", "transcriber"),
            segments=tuple(
                Segment(
                    start=int(s["start"]),
                    end=int(s["end"]),
                    kind=ElementKind(s["kind"]),
                    category_nodes=tuple(s.get("category_nodes", [])),
                    links=tuple(s.get("links", [])),
                    title=s.get("title"),
                )
                for s in doc["segments"]
            ),
        )


@dataclass(frozen=True)
class TranscriptionResult:
    elements: tuple[InformationalElement, ...]
    links: tuple[Link, ...]

    def to_dict(self) -> dict:
        return {
            "elements": [e.to_dict() for e in self.elements],
            "links": [l.to_dict() for l in self.links],
        }


def transcribe(archive: Archive, job: TranscriptionJob) -> TranscriptionResult:
    """Move legacy document content into the archive as contextualized
    elements; offline counterpart of articulate (no session, provenance
    cites the source document). Atomic per job."""
    definition = archive.registry.latest(job.task_type)
    if definition is None:
        raise UnknownTaskType(f"no registered task type {job.task_type!r}")
    if not job.segments:
        return TranscriptionResult(elements=(), links=())

    previous_end = 0
    for segment in job.segments:
        if segment.start < previous_end or segment.end <= segment.start:
            raise OverlappingSegments(
                f"segment [{segment.start},{segment.end}) overlaps or is out of order"
            )
        if segment.end > len(job.source_text):
            raise OverlappingSegments(
                f"segment [{segment.start},{segment.end}) exceeds source length"
            )
        previous_end = segment.end

    elements = []
    for i, segment in enumerate(job.segments):
        content = job.source_text[segment.start:segment.end].strip()
        title = segment.title or f"{job.source_reference} segment {i + 1}"
        elements.append(
            new_element(
                kind=segment.kind,
                content=content,
                surrogate=Surrogate(title=title),
                task_type=job.task_type,
                task_instance=f"transcribed:{job.source_reference}",
                provenance=Provenance(
                    author=job.author,
                    source_document=job.source_reference,
                    situational_note=f"transcribed from {job.source_reference}",
                ),
            )
        )

    links = []
    node_ids = definition.all_node_ids()
    for element, segment in zip(elements, job.segments):
        for node in segment.category_nodes:
            if node not in node_ids:
                raise ValidationFailed(f"unknown category node {node!r}")
            links.append(
                new_link(
                    LinkType.CATEGORIZED_AS,
                    element.id,
                    def_node_ref(job.task_type, definition.version, node),
                )
            )
        for spec in segment.links:
            target_index = int(spec["target"])
            if not 0 <= target_index < len(elements):
                raise ValidationFailed(f"link target segment {target_index} out of range")
            link_type = (
                LinkType.DEMAND_SATISFACTION
                if spec["type"] == "DS"
                else LinkType.REFERENCE_SUPPORT
            )
            links.append(new_link(link_type, element.id, elements[target_index].id))

    _append_atomically(archive, list(elements) + links)
    return TranscriptionResult(elements=tuple(elements), links=tuple(links))
