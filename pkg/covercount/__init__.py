"""covercount project package: version, settings and management commands."""

__version__ = "0.1.0"
