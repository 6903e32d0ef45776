import sys

from orproofs.cli import main

sys.exit(main())
