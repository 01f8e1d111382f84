#!/usr/bin/env python3
"""Entry point for smellscope."""

import sys
from smellscope.__main__ import main

if __name__ == "__main__":
    sys.exit(main())
