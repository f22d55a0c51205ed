"""Command-line interface for the co-simulation pipeline."""

from .pipeline_cli import PipelineCLI, persist_run

__all__ = [
    "PipelineCLI",
    "persist_run",
]
