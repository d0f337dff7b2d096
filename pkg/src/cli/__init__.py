"""Command-line interface (``hlsim``)."""
