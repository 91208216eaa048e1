"""Durable append-only archive of elements, links, definitions, argument
nodes and session events, with derived surrogate indexes.

Storage is a single JSON Lines log; indexes are disposable caches that can
always be rebuilt from the log. Single writer, many readers.
"""

from __future__ import annotations

import json
import os
import re
import threading
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Union

from .definitions import DefinitionRegistry, TaskTypeDefinition, validate_definition
from .errors import (
    DanglingEndpoint,
    DsCycle,
    NonEmptyTarget,
    ParseError,
    StorageFailure,
    UnknownRecord,
    ValidationFailed,
)
from .model import (
    ArgumentNode,
    ElementKind,
    InformationalElement,
    Link,
    LinkType,
    RecordKind,
    SessionEvent,
    Violation,
    check_link_legal,
    parse_def_node_ref,
    validate_element,
)

LOG_FILENAME = "archive.kwsp.jsonl"

RecordBody = Union[InformationalElement, Link, TaskTypeDefinition, ArgumentNode, SessionEvent]

_RECORD_TYPES = {
    InformationalElement: "element",
    Link: "link",
    TaskTypeDefinition: "definition",
    ArgumentNode: "argument",
    SessionEvent: "session_event",
}

_TOKEN_RE = re.compile(r"[^0-9a-z]+")


def extract_terms(*texts: str) -> list[str]:
    """Surrogate term extraction: lowercase, split on non-alphanumerics,
    drop tokens shorter than 2 characters. No stemming."""
    terms = []
    for text in texts:
        for token in _TOKEN_RE.split(text.lower()):
            if len(token) >= 2:
                terms.append(token)
    return terms


@dataclass(frozen=True)
class ArchiveRecord:
    sequence_number: int
    record_type: str
    body: RecordBody

    def to_dict(self) -> dict:
        return {
            "sequence_number": self.sequence_number,
            "record_type": self.record_type,
            "body": self.body.to_dict(),
        }

    def to_line(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @staticmethod
    def from_dict(d: dict) -> "ArchiveRecord":
        rtype = d["record_type"]
        body = d["body"]
        if rtype == "element":
            parsed: RecordBody = InformationalElement.from_dict(body)
        elif rtype == "link":
            parsed = Link.from_dict(body)
        elif rtype == "definition":
            parsed = TaskTypeDefinition.from_dict(body)
        elif rtype == "argument":
            parsed = ArgumentNode.from_dict(body)
        elif rtype == "session_event":
            parsed = SessionEvent.from_dict(body)
        else:
            raise ParseError(f"unknown record_type {rtype!r}")
        return ArchiveRecord(int(d["sequence_number"]), rtype, parsed)


def record_id(body: RecordBody) -> str:
    if isinstance(body, TaskTypeDefinition):
        return f"{body.id}@{body.version}"
    return body.id


class SurrogateIndex:
    """Associative lookups over elements, exactly derivable from the log."""

    def __init__(self):
        self.by_term: dict[str, set[str]] = {}
        self.by_kind: dict[str, set[str]] = {}
        self.by_task_type: dict[str, set[str]] = {}
        self.by_task_instance: dict[str, set[str]] = {}
        self.by_activity: dict[tuple[str, str], set[str]] = {}
        self.by_ie_type: dict[tuple[str, str], set[str]] = {}

    def add(self, element: InformationalElement) -> None:
        eid = element.id
        for term in set(
            extract_terms(
                element.content, element.surrogate.title, *element.surrogate.terms
            )
        ):
            self.by_term.setdefault(term, set()).add(eid)
        self.by_kind.setdefault(element.kind.value, set()).add(eid)
        self.by_task_type.setdefault(element.task_type, set()).add(eid)
        self.by_task_instance.setdefault(element.task_instance, set()).add(eid)
        if element.activity_node:
            self.by_activity.setdefault(
                (element.task_type, element.activity_node), set()
            ).add(eid)
        if element.ie_type_node:
            self.by_ie_type.setdefault(
                (element.task_type, element.ie_type_node), set()
            ).add(eid)

    def snapshot(self) -> dict:
        def freeze(d):
            return {k: frozenset(v) for k, v in d.items() if v}

        return {
            "term": freeze(self.by_term),
            "kind": freeze(self.by_kind),
            "task_type": freeze(self.by_task_type),
            "task_instance": freeze(self.by_task_instance),
            "activity": freeze(self.by_activity),
            "ie_type": freeze(self.by_ie_type),
        }


class Archive:
    """The contextualized-information space: append-only record log.

    Records are never rewritten or deleted; retraction is modeled with
    Supersedes links. All writes go through :meth:`append_batch`, which
    validates the whole batch before any byte hits the log.
    """

    def __init__(self, data_dir: str):
        self.data_dir = data_dir
        os.makedirs(data_dir, exist_ok=True)
        self.log_path = os.path.join(data_dir, LOG_FILENAME)
        self._lock = threading.RLock()
        self._records: list[ArchiveRecord] = []
        self._by_id: dict[str, ArchiveRecord] = {}
        self._links_out: dict[str, list[Link]] = {}
        self._links_in: dict[str, list[Link]] = {}
        self._ds_out: dict[str, set[str]] = {}
        self._elements: list[InformationalElement] = []
        self._index = SurrogateIndex()
        self.registry = DefinitionRegistry()
        self._replay_log()

    # -- loading ---------------------------------------------------------

    def _replay_log(self) -> None:
        if not os.path.exists(self.log_path):
            return
        with open(self.log_path, "r", encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    record = ArchiveRecord.from_dict(json.loads(line))
                except (json.JSONDecodeError, KeyError, ValueError) as exc:
                    raise StorageFailure(
                        f"corrupt log line {line_no}: {exc}"
                    ) from exc
                self._apply(record)

    def _apply(self, record: ArchiveRecord) -> None:
        self._records.append(record)
        body = record.body
        self._by_id[record_id(body)] = record
        if isinstance(body, InformationalElement):
            self._elements.append(body)
            self._index.add(body)
        elif isinstance(body, Link):
            self._links_out.setdefault(body.source, []).append(body)
            self._links_in.setdefault(body.target, []).append(body)
            if body.link_type is LinkType.DEMAND_SATISFACTION:
                self._ds_out.setdefault(body.source, set()).add(body.target)
        elif isinstance(body, TaskTypeDefinition):
            self.registry.register(body)

    # -- kind resolution -------------------------------------------------

    def _resolve_kind(
        self,
        ref: str,
        pending_defs: Optional[dict[str, list[TaskTypeDefinition]]] = None,
    ) -> Optional[RecordKind]:
        """RecordKind of a link endpoint; None when it does not resolve.

        ``pending_defs`` lets links in a batch target nodes of definitions
        appearing earlier in the same batch, before they are registered.
        """
        def_ref = parse_def_node_ref(ref)
        if def_ref is not None:
            task_type, version, node = def_ref
            definition = self.registry.get(task_type, version)
            if definition is None and pending_defs:
                for candidate in pending_defs.get(task_type, ()):
                    if candidate.version == version:
                        definition = candidate
                        break
            if definition is None or node not in definition.all_node_ids():
                return None
            return RecordKind.definition_node()
        record = self._by_id.get(ref)
        if record is None:
            return None
        if isinstance(record.body, InformationalElement):
            return RecordKind.element(record.body.kind)
        if isinstance(record.body, ArgumentNode):
            return RecordKind.argument(record.body.node_kind)
        return None

    def _ds_reaches(self, start: str, goal: str, extra: dict[str, set[str]]) -> bool:
        seen = {start}
        frontier = [start]
        while frontier:
            node = frontier.pop()
            if node == goal:
                return True
            for nxt in self._ds_out.get(node, set()) | extra.get(node, set()):
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        return False

    # -- validation ------------------------------------------------------

    def _validate_batch(self, bodies: list[RecordBody]) -> None:
        pending_ids: set[str] = set()
        pending_kinds: dict[str, RecordKind] = {}
        pending_ds: dict[str, set[str]] = {}
        pending_defs: dict[str, list[TaskTypeDefinition]] = {}
        for body in bodies:
            rid = record_id(body)
            if rid in self._by_id or rid in pending_ids:
                raise ValidationFailed(f"duplicate record id {rid}")
            pending_ids.add(rid)
            if isinstance(body, InformationalElement):
                pending_kinds[rid] = RecordKind.element(body.kind)
                violations = self._element_violations(
                    body, pending_defs.get(body.task_type, ())
                )
                if violations:
                    raise ValidationFailed(
                        "; ".join(v.code for v in violations),
                        violations=[v.code for v in violations],
                    )
            elif isinstance(body, ArgumentNode):
                pending_kinds[rid] = RecordKind.argument(body.node_kind)
                if not body.text.strip():
                    raise ValidationFailed("EmptyText")
            elif isinstance(body, TaskTypeDefinition):
                violations = validate_definition(body)
                if violations:
                    raise ValidationFailed(
                        "; ".join(v.code for v in violations),
                        violations=[v.code for v in violations],
                    )
                prior = self.registry.latest(body.id)
                if prior is not None and body.version <= prior.version:
                    raise ValidationFailed(
                        f"definition {body.id} version {body.version} "
                        f"not above registered {prior.version}"
                    )
                pending_defs.setdefault(body.id, []).append(body)
            elif isinstance(body, Link):
                if body.source == body.target:
                    raise ValidationFailed("link endpoints must differ")
                source_kind = (
                    self._resolve_kind(body.source, pending_defs)
                    or pending_kinds.get(body.source)
                )
                target_kind = (
                    self._resolve_kind(body.target, pending_defs)
                    or pending_kinds.get(body.target)
                )
                if source_kind is None:
                    raise DanglingEndpoint(f"unknown link source {body.source}")
                if target_kind is None:
                    raise DanglingEndpoint(f"unknown link target {body.target}")
                if not check_link_legal(body.link_type, source_kind, target_kind):
                    raise ValidationFailed(
                        f"illegal {body.link_type.value} link "
                        f"{source_kind.category}->{target_kind.category}"
                    )
                if body.link_type is LinkType.DEMAND_SATISFACTION:
                    if self._ds_reaches(body.target, body.source, pending_ds):
                        raise ValidationFailed("DsCycle", link=body.id)
                    pending_ds.setdefault(body.source, set()).add(body.target)

    def _element_violations(
        self,
        element: InformationalElement,
        extra_definitions: Iterable[TaskTypeDefinition] = (),
    ) -> list[Violation]:
        violations = validate_element(element, None)
        if element.activity_node is not None or element.ie_type_node is not None:
            versions = list(self.registry.versions(element.task_type)) + list(
                extra_definitions
            )
            if element.activity_node is not None and not any(
                element.activity_node in d.activity_node_ids() for d in versions
            ):
                violations.append(
                    Violation("UnknownActivityNode", "activity_node", element.activity_node)
                )
            if element.ie_type_node is not None and not any(
                element.ie_type_node in d.info_node_ids() for d in versions
            ):
                violations.append(
                    Violation("UnknownIeTypeNode", "ie_type_node", element.ie_type_node)
                )
        return violations

    # -- writes ----------------------------------------------------------

    def append(self, body: RecordBody) -> int:
        """Append one validated record; returns its sequence number."""
        return self.append_batch([body])[0]

    def append_batch(self, bodies: list[RecordBody]) -> list[int]:
        """Atomically append a batch: either all records persist or none.

        The whole batch is validated (including links to records earlier in
        the same batch) before any write; the log line block is flushed and
        fsynced before returning, so an acknowledged append survives a kill.
        """
        with self._lock:
            self._validate_batch(list(bodies))
            first_seq = len(self._records) + 1
            records = [
                ArchiveRecord(first_seq + i, _RECORD_TYPES[type(body)], body)
                for i, body in enumerate(bodies)
            ]
            data = "".join(r.to_line() + "\n" for r in records)
            try:
                with open(self.log_path, "a", encoding="utf-8") as fh:
                    fh.write(data)
                    fh.flush()
                    os.fsync(fh.fileno())
            except OSError as exc:
                raise StorageFailure(str(exc)) from exc
            for record in records:
                self._apply(record)
            return [r.sequence_number for r in records]

    # -- reads -----------------------------------------------------------

    def get(self, ref: str) -> Optional[RecordBody]:
        record = self._by_id.get(ref)
        return record.body if record else None

    def require(self, ref: str) -> RecordBody:
        body = self.get(ref)
        if body is None:
            raise UnknownRecord(f"no record {ref}")
        return body

    def has(self, ref: str) -> bool:
        return ref in self._by_id

    def records(self) -> list[ArchiveRecord]:
        with self._lock:
            return list(self._records)

    def elements(self) -> list[InformationalElement]:
        with self._lock:
            return list(self._elements)

    def session_events(self) -> list[SessionEvent]:
        return [r.body for r in self.records() if isinstance(r.body, SessionEvent)]

    def element_order(self) -> dict[str, int]:
        return {e.id: i for i, e in enumerate(self.elements())}

    def query_surrogates(self, filter: Optional[dict] = None) -> list[str]:
        """Element ids matching every clause, creation-ascending.

        Clauses: terms (list, all must hit), task_type, activity_node,
        ie_type_node, kind, task_instance. An empty filter matches all.
        """
        filter = dict(filter or {})
        with self._lock:
            candidate_sets: list[set[str]] = []
            if "terms" in filter:
                for raw in filter.pop("terms") or []:
                    matched: set[str] = set()
                    for term in extract_terms(raw):
                        matched |= self._index.by_term.get(term, set())
                    candidate_sets.append(matched)
            if "kind" in filter:
                kind = filter.pop("kind")
                key = kind.value if isinstance(kind, ElementKind) else str(kind)
                candidate_sets.append(set(self._index.by_kind.get(key, set())))
            if "task_type" in filter:
                candidate_sets.append(
                    set(self._index.by_task_type.get(filter.pop("task_type"), set()))
                )
            if "task_instance" in filter:
                candidate_sets.append(
                    set(self._index.by_task_instance.get(filter.pop("task_instance"), set()))
                )
            activity = filter.pop("activity_node", None)
            ie_type = filter.pop("ie_type_node", None)
            if activity is not None:
                candidate_sets.append(
                    {
                        eid
                        for (tt, node), ids in self._index.by_activity.items()
                        if node == activity
                        for eid in ids
                    }
                )
            if ie_type is not None:
                candidate_sets.append(
                    {
                        eid
                        for (tt, node), ids in self._index.by_ie_type.items()
                        if node == ie_type
                        for eid in ids
                    }
                )
            if filter:
                raise ValidationFailed(f"unknown filter clauses: {sorted(filter)}")
            if candidate_sets:
                result = set.intersection(*candidate_sets)
            else:
                result = {e.id for e in self._elements}
            order = {e.id: i for i, e in enumerate(self._elements)}
            return sorted(result, key=order.__getitem__)

    def links_of(
        self,
        ref: str,
        direction: str = "both",
        types: Optional[Iterable[LinkType]] = None,
    ) -> list[Link]:
        """Persisted links touching ``ref``, creation-ascending."""
        if direction not in ("out", "in", "both"):
            raise ValidationFailed(f"bad direction {direction!r}")
        if not self.has(ref) and self._resolve_kind(ref) is None:
            raise UnknownRecord(f"no record {ref}")
        wanted = set(types) if types is not None else None
        with self._lock:
            links: list[Link] = []
            if direction in ("out", "both"):
                links.extend(self._links_out.get(ref, []))
            if direction in ("in", "both"):
                links.extend(self._links_in.get(ref, []))
            if wanted is not None:
                links = [l for l in links if l.link_type in wanted]
            links.sort(key=lambda l: (l.created_at, l.id))
            return links

    def all_links(self) -> list[Link]:
        return [r.body for r in self.records() if isinstance(r.body, Link)]

    # -- export / import -------------------------------------------------

    def export_stream(self) -> Iterator[str]:
        """All records in sequence order as JSON Lines (with newline)."""
        for record in self.records():
            yield record.to_line() + "\n"

    def import_stream(self, lines: Iterable[str]) -> int:
        """Load an export into this (empty) archive.

        The whole stream is parsed and validated before anything persists;
        on any error the archive is left empty.
        """
        with self._lock:
            if self._records:
                raise NonEmptyTarget("import target archive is not empty")
            bodies: list[RecordBody] = []
            expected_seq = 1
            for line_no, line in enumerate(lines, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    record = ArchiveRecord.from_dict(json.loads(line))
                except (json.JSONDecodeError, KeyError, ValueError, ParseError) as exc:
                    raise ParseError(f"line {line_no}: {exc}") from exc
                if record.sequence_number != expected_seq:
                    raise ParseError(
                        f"line {line_no}: sequence {record.sequence_number}, "
                        f"expected {expected_seq}"
                    )
                expected_seq += 1
                bodies.append(record.body)
            if not bodies:
                return 0
            try:
                self.append_batch(bodies)
            except (ValidationFailed, DanglingEndpoint) as exc:
                self._reset()
                raise ParseError(f"invalid stream: {exc.message}") from exc
            return len(bodies)

    def _reset(self) -> None:
        self._records.clear()
        self._by_id.clear()
        self._links_out.clear()
        self._links_in.clear()
        self._ds_out.clear()
        self._elements.clear()
        self._index = SurrogateIndex()
        self.registry = DefinitionRegistry()
        if os.path.exists(self.log_path):
            os.remove(self.log_path)

    # -- audits ----------------------------------------------------------

    def rebuild_index(self) -> SurrogateIndex:
        """Fresh index built from the log alone; must equal the live one."""
        index = SurrogateIndex()
        for element in self.elements():
            index.add(element)
        return index

    def audit(self) -> list[Violation]:
        """Full-archive integrity audit.

        Checks: link endpoints resolve; every link satisfies the legality
        table; DS edges are acyclic (full DFS); Supersedes preserves kind;
        every element has complete provenance.
        """
        violations: list[Violation] = []
        with self._lock:
            for link in self.all_links():
                source_kind = self._resolve_kind(link.source)
                target_kind = self._resolve_kind(link.target)
                if source_kind is None:
                    violations.append(Violation("DanglingEndpoint", "source", link.id))
                    continue
                if target_kind is None:
                    violations.append(Violation("DanglingEndpoint", "target", link.id))
                    continue
                if not check_link_legal(link.link_type, source_kind, target_kind):
                    violations.append(Violation("IllegalLink", "link_type", link.id))
            ds_edges = [
                (l.source, l.target)
                for l in self.all_links()
                if l.link_type is LinkType.DEMAND_SATISFACTION
            ]
            if _has_cycle(ds_edges):
                violations.append(Violation("DsCycle", "links"))
            for element in self._elements:
                if (
                    element.provenance.session is None
                    and element.provenance.source_document is None
                ):
                    violations.append(Violation("MissingProvenance", "provenance", element.id))
        return violations


def _has_cycle(edges: list[tuple[str, str]]) -> bool:
    adjacency: dict[str, list[str]] = {}
    for s, t in edges:
        adjacency.setdefault(s, []).append(t)
    WHITE, GREY, BLACK = 0, 1, 2
    color: dict[str, int] = {}

    def visit(node: str) -> bool:
        color[node] = GREY
        for nxt in adjacency.get(node, []):
            state = color.get(nxt, WHITE)
            if state == GREY or (state == WHITE and visit(nxt)):
                return True
        color[node] = BLACK
        return False

    return any(color.get(n, WHITE) == WHITE and visit(n) for n in list(adjacency))
