import sys

from effhull.cli import main

sys.exit(main())
