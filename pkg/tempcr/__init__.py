"""Temporal containment relation extraction with a shared skip-gram embedding task."""

__version__ = "0.1.0"
