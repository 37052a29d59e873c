"""Coupling function with the difference sets of the incoherent and coherent attractors.

Usage: python scripts/fig1_coupling.py [--coupling g_hat_refit] [--out out/fig1] [CLI flags]
"""
import sys

from weakchimera.cli import main

if __name__ == "__main__":
    args = sys.argv[1:]
    if "--out" not in args:
        args += ["--out", "out/fig1"]
    sys.exit(main(["figure", "fig1", *args]))
