"""Control-protocol plugins: one sub-package per trajectory family."""
