#!/usr/bin/env python3
"""Run the hlsim CLI from a checkout without installing the package."""

import sys
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.cli.main import main

if __name__ == "__main__":
    sys.exit(main())
