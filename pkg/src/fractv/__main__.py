import sys

from fractv.cli import main

sys.exit(main())
