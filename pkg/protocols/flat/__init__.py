"""Flat trajectory protocol."""
