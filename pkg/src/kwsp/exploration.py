"""Search and navigation over the archive: surrogate-filtered TF-IDF
ranking, support/provenance traversal, per-node history, and the
precision/recall instrumentation.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .archive import Archive, extract_terms
from .errors import EmptyDenominator, InvalidLimit, UnknownNode, UnknownRecord
from .model import InformationalElement, Link, LinkType, parse_def_node_ref

SUPPORT_LINK_TYPES = (LinkType.REFERENCE_SUPPORT, LinkType.DEMAND_SATISFACTION)


@dataclass(frozen=True)
class SearchRequest:
    terms: tuple[str, ...]
    filter: dict = field(default_factory=dict)
    limit: int = 10

    def __post_init__(self):
        if self.limit < 1:
            raise InvalidLimit(f"limit must be >= 1, got {self.limit}")


@dataclass(frozen=True)
class RankedResult:
    element_id: str
    score: float
    rank: int

    def to_dict(self) -> dict:
        return {"id": self.element_id, "score": self.score, "rank": self.rank}


def element_terms(element: InformationalElement) -> list[str]:
    return extract_terms(
        element.content, element.surrogate.title, *element.surrogate.terms
    )


def search(archive: Archive, request: SearchRequest) -> list[RankedResult]:
    """TF-IDF ranking over the surrogate-filtered candidate set.

    score(e) = sum over query terms t of tf(t, e) * idf(t) with
    tf = raw term count in content+surrogate and
    idf = ln((N + 1) / (df + 1)) + 1 over the candidate set of size N.
    Zero-scoring elements are dropped; ties break on (created_at, id).
    """
    query_terms = []
    for raw in request.terms:
        query_terms.extend(extract_terms(raw))
    candidate_ids = archive.query_surrogates(dict(request.filter))
    if not candidate_ids or not query_terms:
        return []
    candidates = [archive.get(eid) for eid in candidate_ids]
    term_counts = {e.id: Counter(element_terms(e)) for e in candidates}
    n = len(candidates)
    idf = {}
    for term in set(query_terms):
        df = sum(1 for counts in term_counts.values() if counts[term] > 0)
        idf[term] = math.log((n + 1) / (df + 1)) + 1.0

    scored = []
    for element in candidates:
        counts = term_counts[element.id]
        score = sum(counts[t] * idf[t] for t in query_terms)
        if score > 0:
            scored.append((element, score))
    scored.sort(key=lambda pair: (-pair[1], pair[0].created_at, pair[0].id))
    return [
        RankedResult(element_id=e.id, score=s, rank=i + 1)
        for i, (e, s) in enumerate(scored[: request.limit])
    ]


def support_set(archive: Archive, element_id: str) -> list[str]:
    """Sources of incoming support links (RS and DS), creation-ascending."""
    if archive.get(element_id) is None:
        raise UnknownRecord(f"no record {element_id}")
    links = archive.links_of(element_id, "in", SUPPORT_LINK_TYPES)
    return [l.source for l in links]


@dataclass(frozen=True)
class ProvenanceClosure:
    root: str
    element_ids: tuple[str, ...]
    links: tuple[Link, ...]

    def to_dict(self) -> dict:
        return {
            "root": self.root,
            "elements": list(self.element_ids),
            "links": [l.to_dict() for l in self.links],
        }


def provenance_closure(
    archive: Archive, element_id: str, max_depth: Optional[int] = None
) -> ProvenanceClosure:
    """Everything the element rests on: repeated support_set traversal
    (inbound DS/RS) up to max_depth, with the traversed links."""
    if archive.get(element_id) is None:
        raise UnknownRecord(f"no record {element_id}")
    visited = {element_id}
    ordered = [element_id]
    collected: list[Link] = []
    frontier = [element_id]
    depth = 0
    while frontier and (max_depth is None or depth < max_depth):
        next_frontier = []
        for eid in frontier:
            for link in archive.links_of(eid, "in", SUPPORT_LINK_TYPES):
                collected.append(link)
                if link.source not in visited:
                    visited.add(link.source)
                    ordered.append(link.source)
                    next_frontier.append(link.source)
        frontier = next_frontier
        depth += 1
    return ProvenanceClosure(
        root=element_id, element_ids=tuple(ordered), links=tuple(collected)
    )


def instances_under(archive: Archive, task_type: str, node: str) -> list[str]:
    """All elements CategorizedAs the guidance node, across every task
    instance and definition version, creation-ascending."""
    if not any(
        node in d.all_node_ids() for d in archive.registry.versions(task_type)
    ):
        raise UnknownNode(f"no node {node!r} in task type {task_type!r}")
    matched = set()
    for link in archive.all_links():
        if link.link_type is not LinkType.CATEGORIZED_AS:
            continue
        ref = parse_def_node_ref(link.target)
        if ref is not None and ref[0] == task_type and ref[2] == node:
            matched.add(link.source)
    order = archive.element_order()
    return sorted(matched, key=lambda eid: order.get(eid, -1))


def precision(retrieved: set, relevant: set) -> float:
    if not retrieved:
        raise EmptyDenominator("precision needs a nonempty retrieved set")
    return len(set(retrieved) & set(relevant)) / len(set(retrieved))


def recall(retrieved: set, relevant: set) -> float:
    if not relevant:
        raise EmptyDenominator("recall needs a nonempty relevant set")
    return len(set(retrieved) & set(relevant)) / len(set(relevant))
