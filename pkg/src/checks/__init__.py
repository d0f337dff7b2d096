"""Invariant suites behind ``hlsim validate``."""
