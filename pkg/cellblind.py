"""
Cellblind command line entry point
Usage: python cellblind.py <command> [options]
"""
import sys
import os

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from src.cli import main

if __name__ == "__main__":
    main()
