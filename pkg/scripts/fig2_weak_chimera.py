"""Two weakly coupled populations: phases, frequencies, Lyapunov exponent, symmetry projection.

Usage: python scripts/fig2_weak_chimera.py [--coupling g_hat_refit] [--horizon 1e4] [CLI flags]
"""
import sys

from weakchimera.cli import main

if __name__ == "__main__":
    args = sys.argv[1:]
    if "--out" not in args:
        args += ["--out", "out/fig2"]
    sys.exit(main(["figure", "fig2", *args]))
