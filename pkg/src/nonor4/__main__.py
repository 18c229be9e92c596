"""Allow ``python -m nonor4``."""

import sys

from .cli import main

sys.exit(main())
