"""
Half-Eigenvalue Solver - Main Entry Point
Dispatches the command-line commands (solve-w, spectrum, annulus, sweep,
validate, oracle-compare).
"""

import sys

from cli.cli_controller import main

if __name__ == "__main__":
    sys.exit(main())
