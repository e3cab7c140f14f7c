"""Entry point for `python -m calab`."""

import sys

from .cli import main

sys.exit(main())
