import sys

from hyperjl.cli import main

sys.exit(main())
