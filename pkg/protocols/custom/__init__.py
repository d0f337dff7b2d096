"""Custom trajectory protocol."""
