"""Scan of the inter-population coupling strength, one process per grid point.

Usage: python scripts/fig3_eps_scan.py [--eps 0,0.01,...] [--workers 4] [--paper-scale] [CLI flags]
"""
import sys

from weakchimera.cli import main

if __name__ == "__main__":
    args = sys.argv[1:]
    if "--out" not in args:
        args += ["--out", "out/fig3"]
    sys.exit(main(["figure", "fig3", *args]))
