import sys

from qswe.cli import main

sys.exit(main())
