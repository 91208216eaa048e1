"""Knowledge work support platform: an append-only archive of granular,
contextualized informational elements plus the definitions and services
(workspace, articulation, transcription, exploration, argumentation,
recommendation) that task-type-specific support systems run on."""

from .platform import Platform

__all__ = ["Platform"]
__version__ = "0.1.0"
