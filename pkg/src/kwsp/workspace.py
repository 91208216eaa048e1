"""Task-instance sessions: situational context, guided progression and
deviation recording.

The activity graph guides but never binds: any transition is permitted,
off-graph ones are flagged and archived, and the espoused-vs-in-use
comparison is available as a per-edge deviation report.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .archive import Archive
from .definitions import TaskTypeDefinition, correspondences_of
from .errors import (
    InstanceBusy,
    SessionClosed,
    UnknownActivity,
    UnknownTaskType,
)
from .ids import new_ulid
from .model import SessionEvent, utc_now_iso

RECENT_ELEMENTS_KEPT = 10


@dataclass(frozen=True)
class TransitionEvent:
    from_activity: Optional[str]
    to_activity: str
    deviation: bool
    at: str
    note: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "from_activity": self.from_activity,
            "to_activity": self.to_activity,
            "deviation": self.deviation,
            "at": self.at,
            "note": self.note,
        }


@dataclass
class WorkspaceSession:
    session_id: str
    worker: str
    task_type: str
    definition_version: int
    task_instance: str
    current_activity: Optional[str] = None
    status: str = "Open"  # Open | Completed | Abandoned
    history: list[TransitionEvent] = field(default_factory=list)
    recent_element_ids: list[str] = field(default_factory=list)
    visited: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "worker": self.worker,
            "task_type": self.task_type,
            "definition_version": self.definition_version,
            "task_instance": self.task_instance,
            "current_activity": self.current_activity,
            "status": self.status,
            "history": [t.to_dict() for t in self.history],
        }


@dataclass(frozen=True)
class SituationalContext:
    task_type: str
    task_instance: str
    current_activity: Optional[str]
    corresponding_ie_type_nodes: tuple[str, ...]
    recent_element_ids: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "task_type": self.task_type,
            "task_instance": self.task_instance,
            "current_activity": self.current_activity,
            "corresponding_ie_type_nodes": list(self.corresponding_ie_type_nodes),
            "recent_element_ids": list(self.recent_element_ids),
        }


class WorkspaceEngine:
    """Owns live sessions; every state change is archived as a SessionEvent
    so a session replays exactly from the log."""

    def __init__(self, archive: Archive):
        self.archive = archive
        self._sessions: dict[str, WorkspaceSession] = {}
        self._open_instances: dict[str, str] = {}  # task_instance -> session_id
        self._rebuild()

    def _rebuild(self) -> None:
        for event in self.archive.session_events():
            self._replay_event(event)

    def _replay_event(self, event: SessionEvent) -> None:
        if event.event_type == "opened":
            session = WorkspaceSession(
                session_id=event.session_id,
                worker=event.worker,
                task_type=event.task_type,
                definition_version=event.definition_version,
                task_instance=event.task_instance,
            )
            self._sessions[session.session_id] = session
            self._open_instances[session.task_instance] = session.session_id
            return
        session = self._sessions.get(event.session_id)
        if session is None:
            return
        if event.event_type == "transition":
            session.history.append(
                TransitionEvent(
                    from_activity=event.from_activity,
                    to_activity=event.to_activity,
                    deviation=bool(event.deviation),
                    at=event.at,
                    note=event.note,
                )
            )
            session.current_activity = event.to_activity
            if event.to_activity not in session.visited:
                session.visited.append(event.to_activity)
        elif event.event_type in ("completed", "abandoned"):
            session.status = "Completed" if event.event_type == "completed" else "Abandoned"
            if self._open_instances.get(session.task_instance) == session.session_id:
                del self._open_instances[session.task_instance]

    # -- session lifecycle ----------------------------------------------

    def open_session(self, worker: str, task_type: str, task_instance: str) -> WorkspaceSession:
        definition = self.archive.registry.latest(task_type)
        if definition is None:
            raise UnknownTaskType(f"no registered task type {task_type!r}")
        busy = self._open_instances.get(task_instance)
        if busy is not None:
            raise InstanceBusy(f"instance {task_instance} has open session {busy}")
        event = SessionEvent(
            id=new_ulid(),
            session_id=new_ulid(),
            event_type="opened",
            worker=worker,
            task_type=task_type,
            definition_version=definition.version,
            task_instance=task_instance,
            at=utc_now_iso(),
        )
        self.archive.append(event)
        self._replay_event(event)
        return self._sessions[event.session_id]

    def get_session(self, session_id: str) -> Optional[WorkspaceSession]:
        return self._sessions.get(session_id)

    def require_open(self, session_id: str) -> WorkspaceSession:
        session = self._sessions.get(session_id)
        if session is None:
            raise SessionClosed(f"no session {session_id}")
        if session.status != "Open":
            raise SessionClosed(f"session {session_id} is {session.status}")
        return session

    def pinned_definition(self, session: WorkspaceSession) -> TaskTypeDefinition:
        definition = self.archive.registry.get(session.task_type, session.definition_version)
        assert definition is not None, "pinned version missing from registry"
        return definition

    def advance(self, session_id: str, to_activity: str, note: Optional[str] = None) -> TransitionEvent:
        session = self.require_open(session_id)
        definition = self.pinned_definition(session)
        if to_activity not in definition.activity_node_ids():
            raise UnknownActivity(f"no activity {to_activity!r} in {session.task_type}")
        from_activity = session.current_activity
        if from_activity is None:
            nominal = to_activity in definition.activities.start
        else:
            nominal = definition.activities.has_edge(from_activity, to_activity)
        event = SessionEvent(
            id=new_ulid(),
            session_id=session.session_id,
            event_type="transition",
            worker=session.worker,
            task_type=session.task_type,
            definition_version=session.definition_version,
            task_instance=session.task_instance,
            from_activity=from_activity,
            to_activity=to_activity,
            deviation=not nominal,
            note=note,
            at=utc_now_iso(),
        )
        self.archive.append(event)
        self._replay_event(event)
        return session.history[-1]

    def current_context(self, session_id: str) -> SituationalContext:
        session = self.require_open(session_id)
        definition = self.pinned_definition(session)
        if session.current_activity is None:
            corresponding: list[str] = []
        else:
            corresponding = correspondences_of(definition, session.current_activity)
        return SituationalContext(
            task_type=session.task_type,
            task_instance=session.task_instance,
            current_activity=session.current_activity,
            corresponding_ie_type_nodes=tuple(corresponding),
            recent_element_ids=tuple(session.recent_element_ids[:RECENT_ELEMENTS_KEPT]),
        )

    def note_element(self, session_id: str, element_id: str) -> None:
        """Record an element produced in this session (newest first)."""
        session = self._sessions.get(session_id)
        if session is None:
            return
        session.recent_element_ids.insert(0, element_id)
        del session.recent_element_ids[RECENT_ELEMENTS_KEPT:]

    def complete_session(self, session_id: str) -> WorkspaceSession:
        return self._close(session_id, "completed")

    def abandon_session(self, session_id: str) -> WorkspaceSession:
        return self._close(session_id, "abandoned")

    def _close(self, session_id: str, event_type: str) -> WorkspaceSession:
        session = self.require_open(session_id)
        event = SessionEvent(
            id=new_ulid(),
            session_id=session.session_id,
            event_type=event_type,
            worker=session.worker,
            task_type=session.task_type,
            definition_version=session.definition_version,
            task_instance=session.task_instance,
            at=utc_now_iso(),
        )
        self.archive.append(event)
        self._replay_event(event)
        return session

    def sessions(self) -> list[WorkspaceSession]:
        return list(self._sessions.values())

    def replay_session(self, session_id: str) -> Optional[WorkspaceSession]:
        """Rebuild one session purely from archived events (fresh object)."""
        scratch = WorkspaceEngine.__new__(WorkspaceEngine)
        scratch.archive = self.archive
        scratch._sessions = {}
        scratch._open_instances = {}
        for event in self.archive.session_events():
            if event.session_id == session_id:
                scratch._replay_event(event)
        return scratch._sessions.get(session_id)

    # -- espoused vs in-use ---------------------------------------------

    def deviation_report(self, task_type: str) -> dict:
        """Per-edge usage summary for one task type.

        Nominal edges (latest definition) each carry a traversal count;
        start entries count session openings into each start node; every
        observed off-graph transition is listed with its count.
        """
        definition = self.archive.registry.latest(task_type)
        if definition is None:
            raise UnknownTaskType(f"no registered task type {task_type!r}")
        nominal_counts: Counter = Counter()
        start_counts: Counter = Counter()
        deviant_counts: Counter = Counter()
        for event in self.archive.session_events():
            if event.event_type != "transition" or event.task_type != task_type:
                continue
            key = (event.from_activity, event.to_activity)
            if event.deviation:
                deviant_counts[key] += 1
            elif event.from_activity is None:
                start_counts[event.to_activity] += 1
            else:
                nominal_counts[key] += 1
        return {
            "task_type": task_type,
            "definition_version": definition.version,
            "nominal_edges": [
                {"from": s, "to": t, "count": nominal_counts.get((s, t), 0)}
                for s, t in definition.activities.edges
            ],
            "start_nodes": [
                {"to": node, "count": start_counts.get(node, 0)}
                for node in definition.activities.start
            ],
            "deviations": [
                {"from": s, "to": t, "count": count}
                for (s, t), count in sorted(
                    deviant_counts.items(), key=lambda kv: (kv[0][0] or "", kv[0][1])
                )
            ],
        }
