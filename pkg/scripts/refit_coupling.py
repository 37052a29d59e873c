"""Re-derive the modulator coefficients of the ``g_hat_refit`` preset.

The tabulated modulator does not make COHERENT_SEED a relative
equilibrium. This script solves for harmonics 6..24 so that they are one, and
prints the terms in the form used by ``G_TILDE_REFIT_TERMS``. It then checks
the result: residual, collective frequency and transverse eigenvalues.
"""
import argparse

import numpy as np

from weakchimera.coupling import COHERENT_SEED, BumpFunction, CompositeCoupling, G_TILDE_REFIT_TERMS, g_chaos
from weakchimera.equilibria import build, design_local_perturbation


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--slope", type=float, default=2.0, help="target slope magnitude at positive differences")
    p.add_argument("--reg", type=float, default=1e-6, help="ridge weight")
    p.add_argument("--window", type=float, default=0.2, help="largest |difference| in the slope targets")
    args = p.parse_args()

    bump = BumpFunction(2.5, 0.25)
    mod = design_local_perturbation(g_chaos(), COHERENT_SEED, bump, slope=args.slope, reg=args.reg,
                                    window=args.window)
    print("G_TILDE_REFIT_TERMS = (")
    for r, amp, zeta in mod.terms:
        print(f"    ({int(r)}, {amp:.15f}, {zeta:.15f}),")
    print(")")

    eq = build(CompositeCoupling(base=g_chaos(), modulator=mod, bump=bump), COHERENT_SEED)
    print(f"max |residual| = {eq.residual:.3e}")
    print(f"omega*         = {eq.omega_star:.15g}")
    print(f"eigenvalues    = {np.array2string(np.sort_complex(eq.nonzero_eigenvalues()), precision=4)}")
    print(f"stable         = {eq.stable}")
    frozen = np.array([a for _, a, _ in G_TILDE_REFIT_TERMS])
    print(f"max |amp - frozen amp| = {np.max(np.abs(np.array([a for _, a, _ in mod.terms]) - frozen)):.3e}")


if __name__ == "__main__":
    main()
