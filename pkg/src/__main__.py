"""Run with: python -m src <command> ...  (see python -m src --help)"""

import sys

from .cli import main

sys.exit(main())
