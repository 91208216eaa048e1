"""Task-type guidance artifacts: activity structure, informational
relations, domain vocabulary, and the cross-perspective correspondences.

A definition is immutable once registered; upgrades register a whole new
version, and running task instances keep the version they started under.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .errors import ParseError, UnknownNode, ValidationError
from .model import ElementKind, Violation


@dataclass(frozen=True)
class GraphNode:
    id: str
    label: str
    description: str = ""

    def to_dict(self) -> dict:
        return {"id": self.id, "label": self.label, "description": self.description}


@dataclass(frozen=True)
class ActivityGraph:
    nodes: tuple[GraphNode, ...]
    edges: tuple[tuple[str, str], ...]
    start: tuple[str, ...]
    end: tuple[str, ...]

    def node_ids(self) -> set[str]:
        return {n.id for n in self.nodes}

    def successors(self, node: str) -> list[str]:
        return [t for s, t in self.edges if s == node]

    def has_edge(self, source: str, target: str) -> bool:
        return (source, target) in self.edges

    def to_dict(self) -> dict:
        return {
            "nodes": [n.to_dict() for n in self.nodes],
            "edges": [list(e) for e in self.edges],
            "start": list(self.start),
            "end": list(self.end),
        }


@dataclass(frozen=True)
class IeTypeNode:
    id: str
    label: str
    kind: ElementKind
    description: str = ""

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "label": self.label,
            "kind": self.kind.value,
            "description": self.description,
        }


@dataclass(frozen=True)
class InfoRelationGraph:
    nodes: tuple[IeTypeNode, ...]
    edges: tuple[tuple[str, str, str], ...]  # (source, target, "DS"|"RS")

    def node_ids(self) -> set[str]:
        return {n.id for n in self.nodes}

    def node(self, node_id: str) -> Optional[IeTypeNode]:
        for n in self.nodes:
            if n.id == node_id:
                return n
        return None

    def ds_edges(self) -> list[tuple[str, str]]:
        return [(s, t) for s, t, rel in self.edges if rel == "DS"]

    def to_dict(self) -> dict:
        return {
            "nodes": [n.to_dict() for n in self.nodes],
            "edges": [list(e) for e in self.edges],
        }


@dataclass(frozen=True)
class VocabularyEntry:
    term: str
    definition: str
    synonyms: tuple[str, ...] = ()
    maps_to: tuple[str, ...] = ()

    def matches(self, term: str) -> bool:
        needle = term.casefold()
        return self.term.casefold() == needle or any(
            s.casefold() == needle for s in self.synonyms
        )

    def to_dict(self) -> dict:
        return {
            "term": self.term,
            "definition": self.definition,
            "synonyms": list(self.synonyms),
            "maps_to": list(self.maps_to),
        }


@dataclass(frozen=True)
class TaskTypeDefinition:
    id: str
    name: str
    generic_task_type: str
    application_area: str
    tangible_outcome: str
    activities: ActivityGraph
    info_relations: InfoRelationGraph
    vocabulary: tuple[VocabularyEntry, ...]
    correspondences: tuple[tuple[str, str], ...]
    version: int

    def activity_node_ids(self) -> set[str]:
        return self.activities.node_ids()

    def info_node_ids(self) -> set[str]:
        return self.info_relations.node_ids()

    def all_node_ids(self) -> set[str]:
        return self.activity_node_ids() | self.info_node_ids()

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "generic_task_type": self.generic_task_type,
            "application_area": self.application_area,
            "tangible_outcome": self.tangible_outcome,
            "activities": self.activities.to_dict(),
            "info_relations": self.info_relations.to_dict(),
            "vocabulary": [v.to_dict() for v in self.vocabulary],
            "correspondences": [list(c) for c in self.correspondences],
            "version": self.version,
        }

    @staticmethod
    def from_dict(doc: dict) -> "TaskTypeDefinition":
        try:
            acts = doc["activities"]
            info = doc["info_relations"]
            return TaskTypeDefinition(
                id=doc["id"],
                name=doc["name"],
                generic_task_type=doc["generic_task_type"],
                application_area=doc["application_area"],
                tangible_outcome=doc["tangible_outcome"],
                activities=ActivityGraph(
                    nodes=tuple(
                        GraphNode(n["id"], n.get("label", n["id"]), n.get("description", ""))
                        for n in acts["nodes"]
                    ),
                    edges=tuple((e[0], e[1]) for e in acts.get("edges", [])),
                    start=tuple(acts.get("start", [])),
                    end=tuple(acts.get("end", [])),
                ),
                info_relations=InfoRelationGraph(
                    nodes=tuple(
                        IeTypeNode(
                            n["id"],
                            n.get("label", n["id"]),
                            ElementKind(n["kind"]),
                            n.get("description", ""),
                        )
                        for n in info["nodes"]
                    ),
                    edges=tuple((e[0], e[1], e[2]) for e in info.get("edges", [])),
                ),
                vocabulary=tuple(
                    VocabularyEntry(
                        term=v["term"],
                        definition=v.get("definition", ""),
                        synonyms=tuple(v.get("synonyms", [])),
                        maps_to=tuple(v.get("maps_to", [])),
                    )
                    for v in doc.get("vocabulary", [])
                ),
                correspondences=tuple((c[0], c[1]) for c in doc.get("correspondences", [])),
                version=int(doc["version"]),
            )
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed definition document: {exc}") from exc


def _find_ds_cycle(edges: list[tuple[str, str]]) -> bool:
    adjacency: dict[str, list[str]] = {}
    for s, t in edges:
        adjacency.setdefault(s, []).append(t)
    WHITE, GREY, BLACK = 0, 1, 2
    color: dict[str, int] = {}

    def visit(node: str) -> bool:
        color[node] = GREY
        for nxt in adjacency.get(node, []):
            state = color.get(nxt, WHITE)
            if state == GREY:
                return True
            if state == WHITE and visit(nxt):
                return True
        color[node] = BLACK
        return False

    return any(
        color.get(node, WHITE) == WHITE and visit(node) for node in list(adjacency)
    )


def validate_definition(definition: TaskTypeDefinition) -> list[Violation]:
    """All type invariants, as a violation list (empty means valid)."""
    v: list[Violation] = []
    for name in ("generic_task_type", "application_area", "tangible_outcome"):
        if not getattr(definition, name).strip():
            v.append(Violation("EmptyField", name))
    if definition.version < 1:
        v.append(Violation("BadVersion", "version", str(definition.version)))

    seen: set[str] = set()
    for node_id in [n.id for n in definition.activities.nodes] + [
        n.id for n in definition.info_relations.nodes
    ]:
        if node_id in seen:
            v.append(Violation("DuplicateNode", "nodes", node_id))
        seen.add(node_id)
        if ":" in node_id:
            v.append(Violation("BadNodeId", "nodes", node_id))

    acts = definition.activities
    act_ids = acts.node_ids()
    if not acts.start:
        v.append(Violation("NoStartNode", "activities.start"))
    if not acts.end:
        v.append(Violation("NoEndNode", "activities.end"))
    for node_id in list(acts.start) + list(acts.end):
        if node_id not in act_ids:
            v.append(Violation("UnknownNode", "activities.start/end", node_id))
    for s, t in acts.edges:
        for node_id in (s, t):
            if node_id not in act_ids:
                v.append(Violation("UnknownNode", "activities.edges", node_id))

    # reachability from start nodes
    reachable = set(n for n in acts.start if n in act_ids)
    frontier = list(reachable)
    while frontier:
        node = frontier.pop()
        for nxt in acts.successors(node):
            if nxt in act_ids and nxt not in reachable:
                reachable.add(nxt)
                frontier.append(nxt)
    for node_id in sorted(act_ids - reachable):
        v.append(Violation("UnreachableNode", "activities.nodes", node_id))

    info = definition.info_relations
    info_ids = info.node_ids()
    for s, t, rel in info.edges:
        if rel not in ("DS", "RS"):
            v.append(Violation("BadRelationTag", "info_relations.edges", rel))
        for node_id in (s, t):
            if node_id not in info_ids:
                v.append(Violation("UnknownNode", "info_relations.edges", node_id))
    if _find_ds_cycle(info.ds_edges()):
        v.append(Violation("DsCycle", "info_relations.edges"))

    terms_seen: set[str] = set()
    for entry in definition.vocabulary:
        key = entry.term.casefold()
        if key in terms_seen:
            v.append(Violation("DuplicateTerm", "vocabulary", entry.term))
        terms_seen.add(key)
        for target in entry.maps_to:
            if target not in act_ids and target not in info_ids:
                v.append(Violation("DanglingVocabularyTarget", "vocabulary", target))

    for a, b in definition.correspondences:
        ok = (a in act_ids and b in info_ids) or (a in info_ids and b in act_ids)
        if not ok:
            v.append(Violation("DanglingCorrespondence", "correspondences", f"{a}~{b}"))
    return v


def load_definition(document: str) -> TaskTypeDefinition:
    """Parse and validate a definition file (JSON text)."""
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("definition document must be a JSON object")
    definition = TaskTypeDefinition.from_dict(doc)
    violations = validate_definition(definition)
    if violations:
        raise ValidationError(violations)
    return definition


def serialize_definition(definition: TaskTypeDefinition) -> str:
    return json.dumps(definition.to_dict(), sort_keys=True)


def lookup_term(definition: TaskTypeDefinition, term: str) -> Optional[VocabularyEntry]:
    """Case-insensitive match on the term or any synonym."""
    for entry in definition.vocabulary:
        if entry.matches(term):
            return entry
    return None


def correspondences_of(definition: TaskTypeDefinition, node: str) -> list[str]:
    """Nodes joined to ``node`` by a correspondence, either direction."""
    if node not in definition.all_node_ids():
        raise UnknownNode(f"no node {node!r} in definition {definition.id}")
    paired = []
    for a, b in definition.correspondences:
        if a == node:
            paired.append(b)
        elif b == node:
            paired.append(a)
    return paired


class DefinitionRegistry:
    """All registered definition versions, keyed by (id, version).

    Raw serialized bytes are retained per version so prior versions stay
    byte-identical after upgrades.
    """

    def __init__(self):
        self._versions: dict[str, dict[int, TaskTypeDefinition]] = {}
        self._raw: dict[tuple[str, int], str] = {}

    def register(self, definition: TaskTypeDefinition, raw: Optional[str] = None) -> None:
        by_version = self._versions.setdefault(definition.id, {})
        by_version[definition.version] = definition
        self._raw[(definition.id, definition.version)] = (
            raw if raw is not None else serialize_definition(definition)
        )

    def latest(self, task_type: str) -> Optional[TaskTypeDefinition]:
        by_version = self._versions.get(task_type)
        if not by_version:
            return None
        return by_version[max(by_version)]

    def get(self, task_type: str, version: int) -> Optional[TaskTypeDefinition]:
        return self._versions.get(task_type, {}).get(version)

    def versions(self, task_type: str) -> list[TaskTypeDefinition]:
        by_version = self._versions.get(task_type, {})
        return [by_version[v] for v in sorted(by_version)]

    def raw(self, task_type: str, version: int) -> Optional[str]:
        return self._raw.get((task_type, version))

    def task_types(self) -> list[str]:
        return sorted(self._versions)
