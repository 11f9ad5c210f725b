"""HTTP service exposing the coordinator and case review API."""

from .app import create_app

__all__ = ["create_app"]
