#!/usr/bin/env python3
"""Main entry point for the l2-box decoder workbench."""

import logging
import sys
from pathlib import Path

# Add the project root to the path before imports
PROJECT_ROOT = Path(__file__).parent
sys.path.insert(0, str(PROJECT_ROOT))

from core.cli import main as cli_main

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
)
logger = logging.getLogger(__name__)


def main() -> None:
    """Main entry point."""
    try:
        sys.exit(cli_main(sys.argv[1:]))
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        sys.exit(130)


if __name__ == "__main__":
    main()
