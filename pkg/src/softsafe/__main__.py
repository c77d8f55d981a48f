import sys

from softsafe.cli import main

sys.exit(main())
