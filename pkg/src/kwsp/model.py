"""Core record vocabulary: informational elements, links, argument nodes.

All types are immutable values; corrections happen by appending a new
record plus a ``supersedes`` link, never by mutation.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from enum import Enum
from typing import Optional

from .errors import EmptyContent, InvalidKind, MissingProvenance
from .ids import new_ulid


class ElementKind(str, Enum):
    """The six generic information containers. Task types alias these in
    their vocabulary but cannot extend the set."""

    OBSERVATION = "Observation"
    FINDING = "Finding"
    ANALYSIS = "Analysis"
    HYPOTHESIS = "Hypothesis"
    DECISION = "Decision"
    PLAN = "Plan"


class ArgumentKind(str, Enum):
    ISSUE = "Issue"
    POSITION = "Position"
    ARGUMENT = "Argument"


class LinkType(str, Enum):
    DEMAND_SATISFACTION = "DemandSatisfaction"
    REFERENCE_SUPPORT = "ReferenceSupport"
    CATEGORIZED_AS = "CategorizedAs"
    CORRESPONDS_TO = "CorrespondsTo"
    SUPERSEDES = "Supersedes"
    RESPONDS_TO = "RespondsTo"
    SUPPORTS = "Supports"
    OBJECTS_TO = "ObjectsTo"
    EVIDENCED_BY = "EvidencedBy"


@dataclass(frozen=True)
class RecordKind:
    """Kind descriptor of a link endpoint, used by the legality table.

    category is one of ``element``, ``definition_node``, ``argument``;
    subtype carries the ElementKind or ArgumentKind name when applicable.
    """

    category: str
    subtype: Optional[str] = None

    @staticmethod
    def element(kind: ElementKind) -> "RecordKind":
        return RecordKind("element", kind.value)

    @staticmethod
    def definition_node() -> "RecordKind":
        return RecordKind("definition_node")

    @staticmethod
    def argument(kind: ArgumentKind) -> "RecordKind":
        return RecordKind("argument", kind.value)


def check_link_legal(link_type: LinkType, source: RecordKind, target: RecordKind) -> bool:
    """Total endpoint-kind legality table for every link type.

    Pure predicate; the archive audits every persisted link against it.
    ReferenceSupport additionally admits element -> Position so that a
    concluded decision can cite the argumentation position it came from.
    """
    s_el = source.category == "element"
    t_el = target.category == "element"
    if link_type is LinkType.DEMAND_SATISFACTION:
        return s_el and t_el
    if link_type is LinkType.REFERENCE_SUPPORT:
        return s_el and (t_el or target == RecordKind.argument(ArgumentKind.POSITION))
    if link_type is LinkType.CATEGORIZED_AS:
        return s_el and target.category == "definition_node"
    if link_type is LinkType.CORRESPONDS_TO:
        return source.category == "definition_node" and target.category == "definition_node"
    if link_type is LinkType.SUPERSEDES:
        return s_el and t_el and source.subtype == target.subtype
    if link_type is LinkType.RESPONDS_TO:
        return source == RecordKind.argument(ArgumentKind.POSITION) and target == RecordKind.argument(ArgumentKind.ISSUE)
    if link_type in (LinkType.SUPPORTS, LinkType.OBJECTS_TO):
        return source == RecordKind.argument(ArgumentKind.ARGUMENT) and target == RecordKind.argument(ArgumentKind.POSITION)
    if link_type is LinkType.EVIDENCED_BY:
        return source == RecordKind.argument(ArgumentKind.ARGUMENT) and t_el
    return False


def utc_now_iso() -> str:
    """UTC ISO-8601 timestamp at millisecond precision."""
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%f")[:-3] + "Z"


DEF_NODE_PREFIX = "def:"


def def_node_ref(task_type: str, version: int, node: str) -> str:
    """Stable identifier for a node inside a registered definition version."""
    return f"{DEF_NODE_PREFIX}{task_type}:{version}:{node}"


def parse_def_node_ref(ref: str) -> Optional[tuple[str, int, str]]:
    if not ref.startswith(DEF_NODE_PREFIX):
        return None
    parts = ref[len(DEF_NODE_PREFIX):].split(":")
    if len(parts) != 3:
        return None
    task_type, version, node = parts
    try:
        return task_type, int(version), node
    except ValueError:
        return None


@dataclass(frozen=True)
class Surrogate:
    """Compact searchable representation of an element."""

    title: str
    terms: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {"title": self.title, "terms": list(self.terms)}

    @staticmethod
    def from_dict(d: dict) -> "Surrogate":
        return Surrogate(title=d["title"], terms=tuple(d.get("terms", ())))


@dataclass(frozen=True)
class Provenance:
    author: str
    session: Optional[str] = None
    source_document: Optional[str] = None
    situational_note: str = ""

    def to_dict(self) -> dict:
        return {
            "author": self.author,
            "session": self.session,
            "source_document": self.source_document,
            "situational_note": self.situational_note,
        }

    @staticmethod
    def from_dict(d: dict) -> "Provenance":
        return Provenance(
            author=d["author"],
            session=d.get("session"),
            source_document=d.get("source_document"),
            situational_note=d.get("situational_note", ""),
        )


@dataclass(frozen=True)
class InformationalElement:
    id: str
    kind: ElementKind
    task_type: str
    task_instance: str
    content: str
    surrogate: Surrogate
    provenance: Provenance
    created_at: str
    activity_node: Optional[str] = None
    ie_type_node: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind.value,
            "task_type": self.task_type,
            "task_instance": self.task_instance,
            "activity_node": self.activity_node,
            "ie_type_node": self.ie_type_node,
            "content": self.content,
            "surrogate": self.surrogate.to_dict(),
            "provenance": self.provenance.to_dict(),
            "created_at": self.created_at,
        }

    @staticmethod
    def from_dict(d: dict) -> "InformationalElement":
        return InformationalElement(
            id=d["id"],
            kind=ElementKind(d["kind"]),
            task_type=d["task_type"],
            task_instance=d["task_instance"],
            activity_node=d.get("activity_node"),
            ie_type_node=d.get("ie_type_node"),
            content=d["content"],
            surrogate=Surrogate.from_dict(d["surrogate"]),
            provenance=Provenance.from_dict(d["provenance"]),
            created_at=d["created_at"],
        )


@dataclass(frozen=True)
class Link:
    id: str
    link_type: LinkType
    source: str
    target: str
    created_at: str
    note: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "link_type": self.link_type.value,
            "source": self.source,
            "target": self.target,
            "created_at": self.created_at,
            "note": self.note,
        }

    @staticmethod
    def from_dict(d: dict) -> "Link":
        return Link(
            id=d["id"],
            link_type=LinkType(d["link_type"]),
            source=d["source"],
            target=d["target"],
            created_at=d["created_at"],
            note=d.get("note"),
        )


def new_link(link_type: LinkType, source: str, target: str, note: Optional[str] = None) -> Link:
    return Link(
        id=new_ulid(),
        link_type=link_type,
        source=source,
        target=target,
        created_at=utc_now_iso(),
        note=note,
    )


@dataclass(frozen=True)
class ArgumentNode:
    id: str
    node_kind: ArgumentKind
    text: str
    author: str
    created_at: str
    task_instance: str

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "node_kind": self.node_kind.value,
            "text": self.text,
            "author": self.author,
            "created_at": self.created_at,
            "task_instance": self.task_instance,
        }

    @staticmethod
    def from_dict(d: dict) -> "ArgumentNode":
        return ArgumentNode(
            id=d["id"],
            node_kind=ArgumentKind(d["node_kind"]),
            text=d["text"],
            author=d["author"],
            created_at=d["created_at"],
            task_instance=d["task_instance"],
        )


@dataclass(frozen=True)
class SessionEvent:
    """Archived workspace event; sessions replay exactly from these."""

    id: str
    session_id: str
    event_type: str  # opened | transition | completed | abandoned
    worker: str
    task_type: str
    definition_version: int
    task_instance: str
    at: str
    from_activity: Optional[str] = None
    to_activity: Optional[str] = None
    deviation: Optional[bool] = None
    note: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "session_id": self.session_id,
            "event_type": self.event_type,
            "worker": self.worker,
            "task_type": self.task_type,
            "definition_version": self.definition_version,
            "task_instance": self.task_instance,
            "from_activity": self.from_activity,
            "to_activity": self.to_activity,
            "deviation": self.deviation,
            "note": self.note,
            "at": self.at,
        }

    @staticmethod
    def from_dict(d: dict) -> "SessionEvent":
        return SessionEvent(
            id=d["id"],
            session_id=d["session_id"],
            event_type=d["event_type"],
            worker=d["worker"],
            task_type=d["task_type"],
            definition_version=d["definition_version"],
            task_instance=d["task_instance"],
            from_activity=d.get("from_activity"),
            to_activity=d.get("to_activity"),
            deviation=d.get("deviation"),
            note=d.get("note"),
            at=d["at"],
        )


@dataclass(frozen=True)
class Violation:
    """Machine-readable invariant violation; data, not an exception."""

    code: str
    field: str
    message: str = ""

    def to_dict(self) -> dict:
        return {"code": self.code, "field": self.field, "message": self.message}


def new_element(
    kind: ElementKind,
    content: str,
    surrogate: Surrogate,
    task_type: str,
    task_instance: str,
    provenance: Provenance,
    activity_node: Optional[str] = None,
    ie_type_node: Optional[str] = None,
) -> InformationalElement:
    """Build a fully populated element with fresh id and timestamp.

    The element is a pure value; persisting it is the archive's job.
    """
    if not isinstance(kind, ElementKind):
        raise InvalidKind(f"not an element kind: {kind!r}")
    if not content.strip():
        raise EmptyContent("element content must be non-empty")
    if not surrogate.title.strip():
        raise EmptyContent("surrogate title must be non-empty")
    if provenance.session is None and provenance.source_document is None:
        raise MissingProvenance("provenance needs a session or a source document")
    return InformationalElement(
        id=new_ulid(),
        kind=kind,
        task_type=task_type,
        task_instance=task_instance,
        activity_node=activity_node,
        ie_type_node=ie_type_node,
        content=content,
        surrogate=surrogate,
        provenance=provenance,
        created_at=utc_now_iso(),
    )


def validate_element(element: InformationalElement, definition) -> list[Violation]:
    """Check element invariants against its task-type definition.

    ``definition`` is the TaskTypeDefinition named by element.task_type.
    Returns violations as data; an empty list means the element is sound.
    """
    violations: list[Violation] = []
    if not element.content.strip():
        violations.append(Violation("EmptyContent", "content"))
    if not element.surrogate.title.strip():
        violations.append(Violation("EmptySurrogateTitle", "surrogate.title"))
    if element.provenance.session is None and element.provenance.source_document is None:
        violations.append(Violation("MissingProvenance", "provenance"))
    if definition is not None:
        if element.activity_node is not None and element.activity_node not in definition.activity_node_ids():
            violations.append(
                Violation("UnknownActivityNode", "activity_node", element.activity_node)
            )
        if element.ie_type_node is not None and element.ie_type_node not in definition.info_node_ids():
            violations.append(
                Violation("UnknownIeTypeNode", "ie_type_node", element.ie_type_node)
            )
    return violations
