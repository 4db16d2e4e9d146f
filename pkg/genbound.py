"""Entry point: ``python genbound.py <command> [flags]``."""

import os
import sys

# Add src directory to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from src.cli import main

if __name__ == '__main__':
    sys.exit(main())
