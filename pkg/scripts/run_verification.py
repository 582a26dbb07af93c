#!/usr/bin/env python3
"""Run the full verification for all three families and write a report.

Equivalent to ``campedelli verify``; kept as a script so the pipeline can
be launched from a checkout without installing the console entry point.
"""

import sys

from campedelli.cli import main

if __name__ == "__main__":
    sys.exit(main(["verify", *sys.argv[1:]]))
