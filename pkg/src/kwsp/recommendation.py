"""Advisory hints and warnings: next-activity suggestions, related
historical elements and completeness warnings. Never writes to the
archive."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Optional

from .archive import Archive
from .errors import InvalidLimit, NoCurrentActivity
from .exploration import element_terms
from .model import InformationalElement, LinkType, parse_def_node_ref
from .workspace import WorkspaceEngine


@dataclass(frozen=True)
class Recommendation:
    kind: str  # NextActivity | RelatedElement | CompletenessWarning
    subject: str
    rationale: str
    score: Optional[float] = None

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "subject": self.subject, "rationale": self.rationale}
        if self.score is not None:
            d["score"] = self.score
        return d


class Recommender:
    def __init__(self, archive: Archive, engine: WorkspaceEngine):
        self.archive = archive
        self.engine = engine

    # -- next steps ------------------------------------------------------

    def _completed_session_ids(self, task_type: str) -> set[str]:
        return {
            e.session_id
            for e in self.archive.session_events()
            if e.task_type == task_type and e.event_type == "completed"
        }

    def _transition_counts(self, task_type: str) -> Counter:
        """(from, to) traversal counts across completed sessions."""
        completed = self._completed_session_ids(task_type)
        counts: Counter = Counter()
        for e in self.archive.session_events():
            if (
                e.event_type == "transition"
                and e.task_type == task_type
                and e.session_id in completed
            ):
                counts[(e.from_activity, e.to_activity, bool(e.deviation))] += 1
        return counts

    def next_activities(self, session_id: str) -> list[Recommendation]:
        """Nominal successors ranked by historical traversal frequency,
        followed by historically-observed deviant successors (flagged)."""
        session = self.engine.require_open(session_id)
        definition = self.engine.pinned_definition(session)
        current = session.current_activity
        if current is None:
            nominal = list(definition.activities.start)
        else:
            nominal = definition.activities.successors(current)
        counts = self._transition_counts(session.task_type)

        nominal_weights = {
            node: 1 + counts[(current, node, False)] for node in nominal
        }
        deviant_weights = {}
        for (frm, to, deviant), count in counts.items():
            if deviant and frm == current and to not in nominal:
                deviant_weights[to] = deviant_weights.get(to, 0) + count
        total = sum(nominal_weights.values()) + sum(deviant_weights.values())

        recommendations = []
        for node in sorted(nominal, key=lambda n: (-nominal_weights[n], n)):
            recommendations.append(
                Recommendation(
                    kind="NextActivity",
                    subject=node,
                    score=nominal_weights[node] / total if total else 0.0,
                    rationale=(
                        f"nominal next step; traversed "
                        f"{nominal_weights[node] - 1} time(s) in completed sessions"
                    ),
                )
            )
        for node in sorted(deviant_weights, key=lambda n: (-deviant_weights[n], n)):
            recommendations.append(
                Recommendation(
                    kind="NextActivity",
                    subject=node,
                    score=deviant_weights[node] / total if total else 0.0,
                    rationale=(
                        f"deviation observed {deviant_weights[node]} time(s) "
                        f"in completed sessions; not a nominal edge"
                    ),
                )
            )
        return recommendations

    # -- related history -------------------------------------------------

    def _categorized_under(self, task_type: str, nodes: set[str]) -> set[str]:
        matched = set()
        for link in self.archive.all_links():
            if link.link_type is not LinkType.CATEGORIZED_AS:
                continue
            ref = parse_def_node_ref(link.target)
            if ref is not None and ref[0] == task_type and ref[2] in nodes:
                matched.add(link.source)
        return matched

    def related_elements(self, session_id: str, limit: int = 5) -> list[Recommendation]:
        """Elements from other instances of the same task type under the
        current activity's corresponding ie-type nodes, ranked by TF-IDF
        cosine overlap with this session's recent elements."""
        if limit < 1:
            raise InvalidLimit(f"limit must be >= 1, got {limit}")
        session = self.engine.require_open(session_id)
        if session.current_activity is None:
            raise NoCurrentActivity(f"session {session_id} has no current activity")
        context = self.engine.current_context(session_id)
        nodes = set(context.corresponding_ie_type_nodes)

        candidate_ids = self._categorized_under(session.task_type, nodes)
        candidates = []
        for element in self.archive.elements():
            if element.task_type != session.task_type:
                continue
            if element.task_instance == session.task_instance:
                continue
            if element.id in candidate_ids or (
                element.ie_type_node is not None and element.ie_type_node in nodes
            ):
                candidates.append(element)
        if not candidates:
            return []

        query_counts: Counter = Counter()
        for eid in context.recent_element_ids:
            element = self.archive.get(eid)
            if isinstance(element, InformationalElement):
                query_counts.update(element_terms(element))

        n = len(candidates)
        candidate_counts = {e.id: Counter(element_terms(e)) for e in candidates}
        idf = {}
        for term in query_counts:
            df = sum(1 for c in candidate_counts.values() if c[term] > 0)
            idf[term] = math.log((n + 1) / (df + 1)) + 1.0

        def cosine(counts: Counter) -> float:
            dot = sum(query_counts[t] * idf[t] * counts[t] * idf[t] for t in query_counts)
            if dot == 0:
                return 0.0
            qn = math.sqrt(sum((query_counts[t] * idf[t]) ** 2 for t in query_counts))
            cn = math.sqrt(sum(v * v * idf.get(t, 1.0) ** 2 for t, v in counts.items()))
            return dot / (qn * cn) if qn and cn else 0.0

        order = self.archive.element_order()
        scored = [(e, cosine(candidate_counts[e.id])) for e in candidates]
        overlapping = sorted(
            (pair for pair in scored if pair[1] > 0),
            key=lambda pair: (-pair[1], pair[0].created_at, pair[0].id),
        )
        by_recency = sorted(
            (pair for pair in scored if pair[1] == 0),
            key=lambda pair: -order[pair[0].id],
        )
        ranked = (overlapping + by_recency)[:limit]
        return [
            Recommendation(
                kind="RelatedElement",
                subject=e.id,
                score=s,
                rationale=(
                    f"from instance {e.task_instance}: "
                    + ("term overlap with recent work" if s > 0 else "most recent history")
                ),
            )
            for e, s in ranked
        ]

    # -- completeness ----------------------------------------------------

    def completeness_warnings(self, session_id: str) -> list[Recommendation]:
        """One warning per corresponding ie-type node of a visited
        activity that has no element in this task instance yet."""
        session = self.engine.require_open(session_id)
        definition = self.engine.pinned_definition(session)
        info_ids = definition.info_node_ids()

        produced = set()
        for element in self.archive.elements():
            if (
                element.task_type == session.task_type
                and element.task_instance == session.task_instance
                and element.ie_type_node is not None
            ):
                produced.add(element.ie_type_node)

        warnings = []
        seen = set()
        for activity in session.visited:
            for a, b in definition.correspondences:
                node = None
                if a == activity and b in info_ids:
                    node = b
                elif b == activity and a in info_ids:
                    node = a
                if node is None or node in produced or node in seen:
                    continue
                seen.add(node)
                warnings.append(
                    Recommendation(
                        kind="CompletenessWarning",
                        subject=node,
                        rationale=(
                            f"activity {activity} was visited but no "
                            f"{node} element exists for {session.task_instance}"
                        ),
                    )
                )
        return warnings
