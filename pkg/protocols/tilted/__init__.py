"""Tilted trajectory protocol."""
