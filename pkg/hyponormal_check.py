#!/usr/bin/env python3
"""
Hyponormality Check Entry Point
λ-hyponormality, closed range and hypercyclicity certificates for weighted
composition operators on discrete measure spaces and for finite matrices.

Usage:
    python hyponormal_check.py example cycle-demo --analyze
    python hyponormal_check.py analyze system.json --format structured --output report.json
"""

import sys

from cli.commands import main


if __name__ == "__main__":
    sys.exit(main())
