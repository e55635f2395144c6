import sys

from infodom.cli import main

sys.exit(main())
