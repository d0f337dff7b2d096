"""Hopping trajectory protocol."""
