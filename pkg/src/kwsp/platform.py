"""Facade wiring the archive and all services over one data directory.

This is the surface the HTTP API and the CLI call into; tests use it to
drive full scenarios without either transport.
"""

from __future__ import annotations

from typing import Optional

from . import exploration
from .archive import Archive
from .argumentation import ArgumentationService
from .contextualize import (
    ArticulationRequest,
    ArticulationResult,
    TranscriptionJob,
    TranscriptionResult,
    articulate,
    transcribe,
)
from .definitions import TaskTypeDefinition, load_definition
from .recommendation import Recommender
from .workspace import WorkspaceEngine


class Platform:
    def __init__(self, data_dir: str):
        self.archive = Archive(data_dir)
        self.workspace = WorkspaceEngine(self.archive)
        self.argumentation = ArgumentationService(self.archive, self.workspace)
        self.recommender = Recommender(self.archive, self.workspace)

    # definitions
    def register_definition(self, document: str) -> TaskTypeDefinition:
        definition = load_definition(document)
        self.archive.append(definition)
        return definition

    def task_types(self) -> list[TaskTypeDefinition]:
        registry = self.archive.registry
        return [registry.latest(tt) for tt in registry.task_types()]

    # contextualization
    def articulate(self, request: ArticulationRequest) -> ArticulationResult:
        return articulate(self.workspace, self.archive, request)

    def transcribe(self, job: TranscriptionJob) -> TranscriptionResult:
        return transcribe(self.archive, job)

    # exploration
    def search(self, request: exploration.SearchRequest) -> list[exploration.RankedResult]:
        return exploration.search(self.archive, request)

    def support_set(self, element_id: str) -> list[str]:
        return exploration.support_set(self.archive, element_id)

    def provenance_closure(
        self, element_id: str, max_depth: Optional[int] = None
    ) -> exploration.ProvenanceClosure:
        return exploration.provenance_closure(self.archive, element_id, max_depth)

    def instances_under(self, task_type: str, node: str) -> list[str]:
        return exploration.instances_under(self.archive, task_type, node)
