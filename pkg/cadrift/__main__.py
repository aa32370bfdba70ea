#!/usr/bin/env python
"""Run experiments with ``python -m cadrift``."""
import sys

from cadrift.cli import main

if __name__ == "__main__":
    sys.exit(main())
