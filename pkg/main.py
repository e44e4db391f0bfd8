"""Command-line entrypoint."""

import sys

from src.modules.cli.commands import main

if __name__ == "__main__":
    sys.exit(main())
