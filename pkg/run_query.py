#!/usr/bin/env python3
"""
RPQ Engine Launcher
Handles proper imports and runs the command-line front end
"""

import sys
import os

# Add project root to Python path
project_root = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, project_root)

from src.cli import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
