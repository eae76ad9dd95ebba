"""FastAPI service layer: ``duality.service.app`` is the ASGI application."""

from .app import app, create_app

__all__ = ["app", "create_app"]
