import sys
from gaprad.cli import main
sys.exit(main())
