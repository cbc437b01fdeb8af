import sys

from gluecheck.cli import main

sys.exit(main())
