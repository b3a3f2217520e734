"""
tailstats.py

Entry point for the tailstats command-line interface (see harness/cli.py).

Usage
-----
    cd tailstats
    python scripts/tailstats.py simulate --model "pareto{alpha=0.5}" --stat T --n 1000,10000
    python scripts/tailstats.py normalizers --model "pareto{alpha=2}" --n 10,100,1000
    python scripts/tailstats.py functionals --model "pareto{alpha=1}" --t 100,10000
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from harness.cli import main

if __name__ == "__main__":
    sys.exit(main())
