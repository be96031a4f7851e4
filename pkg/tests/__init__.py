"""Command-line and end-to-end tests for covercount."""
