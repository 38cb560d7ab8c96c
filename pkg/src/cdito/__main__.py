import sys

from cdito.cli import main

sys.exit(main())
