"""Core value types: parameters, density matrices, errors."""
