"""Allow ``python -m artinapprox``."""
import sys

from .cli import main

sys.exit(main())
