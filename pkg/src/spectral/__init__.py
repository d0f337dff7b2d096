"""Characteristic polynomial, eigen-structure and degeneracy classification."""
