from .app import Settings, create_app, run

__all__ = ["Settings", "create_app", "run"]
