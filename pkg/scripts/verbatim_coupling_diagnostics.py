"""Diagnostics for the tabulated coupling ``g_hat`` at the coherent seed offsets.

Prints the equilibrium residual at the offsets, runs damped Newton from them,
and reports where it ends up together with the linearization there. A short
integration from the offsets shows where the coherent population actually goes.
"""
import numpy as np

from weakchimera.coupling import COHERENT_SEED, g_hat
from weakchimera.dynamics import NetworkSpec, jacobian
from weakchimera.equilibria import RefinementError, build, refine, residual
from weakchimera.integrate import integrate


def newton_limit(g, alpha, steps=50):
    """Plain Newton without the ordering safeguard of refine()."""
    spec = NetworkSpec.population(g, len(alpha))
    a = np.array(alpha, float)
    for _ in range(steps):
        J = jacobian(spec, a)
        Jr = (J[1:] - J[0])[:, 1:]
        a[1:] -= np.linalg.lstsq(Jr, residual(g, a), rcond=None)[0]
    return a


def main():
    g = g_hat()
    alpha = np.asarray(COHERENT_SEED)
    print(f"offsets          {alpha}")
    print(f"residual         {residual(g, alpha)}")
    try:
        eq = refine(g, alpha)
        print(f"refined offsets  {eq.alpha}  stable={eq.stable}")
    except RefinementError as exc:
        print(f"refine: {exc}")
    a = newton_limit(g, alpha)
    eq = build(g, a)
    print(f"plain Newton     {a}  |residual| {eq.residual:.2e}")
    print(f"eigenvalues      {np.array2string(eq.eigenvalues, precision=4)}")

    traj = integrate(NetworkSpec.population(g, 4), alpha, 500.0)
    rel = np.mod(traj.states - traj.states[:, :1], 2 * np.pi)
    print("offsets along a run from the seed offsets:")
    for t in (0, 10, 50, 100, 500):
        i = int(np.searchsorted(traj.times, t))
        print(f"  t={traj.times[i]:6.1f}  {np.array2string(rel[i], precision=4)}")


if __name__ == "__main__":
    main()
