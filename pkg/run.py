#!/usr/bin/env python3
"""Run the slow-fast early-warning toolkit from the repository root."""

import sys

from src.main import main

if __name__ == "__main__":
    sys.exit(main())
