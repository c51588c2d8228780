import sys

from trunc_hgm.cli import main

sys.exit(main())
