import sys

from subscore.cli import main

sys.exit(main())
