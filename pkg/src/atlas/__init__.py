"""Exceptional-point atlas: closed forms, numeric scan and their cross-validation."""
