from django.apps import AppConfig


class CovercountConfig(AppConfig):
    """Configuration for the covercount app."""
    name = "covercount"
    verbose_name = "covercount"
