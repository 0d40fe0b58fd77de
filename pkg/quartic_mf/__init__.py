"""Responsibility: Package exports for the quartic_mf CLI entrypoint."""

from .app import main  # Re-export the package main entrypoint.

__all__ = ["main"]
