#!/usr/bin/env python
from __future__ import annotations

"""Command-line entry point for the simulator (see `src/cli/main.py`)."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

# Load environment variables from .env if present (developer convenience)
try:
    from dotenv import load_dotenv  # type: ignore

    load_dotenv()
except Exception:
    pass

from src.cli.main import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
