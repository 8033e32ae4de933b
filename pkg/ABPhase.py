#!/usr/bin/env python3
"""
ABPHASE - Main Entry Point
Run this file to use the command line: python ABPhase.py run --scenario fig1 --phi-i 2pi --phi-f 4pi
"""

import os
import sys

# Add ABPHASE package to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from ABPHASE.main import main

if __name__ == "__main__":
    exit_code = main()
    sys.exit(exit_code)
