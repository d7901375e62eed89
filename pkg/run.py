"""
Orthodual - Startup Script
Runs the command-line interface from the repository root
"""

import sys
from pathlib import Path


def main() -> int:
    root_dir = Path(__file__).parent.absolute()
    backend_dir = root_dir / "backend"
    sys.path.insert(0, str(backend_dir))

    from app.main import main as cli

    return cli(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
