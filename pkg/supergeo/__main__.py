import sys

from supergeo.cli import main

sys.exit(main())
