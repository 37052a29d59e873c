"""Command-line front end.

    weakchimera simulate   [--config PATH] [--out DIR] [--seed N] [--eps E] [--horizon T]
    weakchimera figure {fig1,fig2,fig3} [same flags] [--paper-scale] [--workers N]
    weakchimera scan       [same flags]
    weakchimera equilibrium [--config PATH] [--out DIR]

Exit codes: 0 success, 1 no equilibrium found, 2 configuration error,
3 integration failure (for scans: every row failed).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import svg
from .analysis import (classify, field_along, order_parameter, projection, xi_set, separation_certificate,
                       frequency_vector)
from .config import LONG_HORIZON, ConfigError, ExperimentConfig, load_config
from .coupling import CouplingSpecError, g_chaos
from .dynamics import NetworkSpec
from .equilibria import RefinementError, refine, trivial_symmetry_check
from .experiments import (SCAN_COLUMNS, BootstrapError, bootstrap_incoherent, canonical_point,
                          coherent_offsets, product_initial_state, run, scan_job, summarize_product)
from .integrate import IntegrationError

TWO_PI = 2.0 * math.pi
EXIT_OK, EXIT_NO_EQ, EXIT_CONFIG, EXIT_INTEGRATION = 0, 1, 2, 3


def _parse_eps(text: str) -> tuple[float, ...]:
    vals = tuple(float(t) for t in text.replace(",", " ").split())
    return vals


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI-style config file")
    common.add_argument("--out", help="output directory")
    common.add_argument("--seed", type=int, help="seed for initial conditions")
    common.add_argument("--eps", help="inter-population strength(s), comma separated")
    common.add_argument("--horizon", type=float, help="integration time")
    common.add_argument("--paper-scale", action="store_true", help=f"horizon {LONG_HORIZON:g}")
    common.add_argument("--workers", type=int, help="worker processes for scans (0: one per CPU)")
    common.add_argument("--coupling", help="coupling preset name or file:PATH")
    p = argparse.ArgumentParser(prog="weakchimera", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("simulate", parents=[common], help="integrate one network and classify it")
    fig = sub.add_parser("figure", parents=[common], help="regenerate a figure's data")
    fig.add_argument("which", choices=["fig1", "fig2", "fig3"])
    sub.add_parser("scan", parents=[common], help="epsilon scan of the two-population system")
    sub.add_parser("equilibrium", parents=[common], help="refine the coherent relative equilibrium")
    return p


def resolve_config(args) -> ExperimentConfig:
    cfg = load_config(args.config)
    net, run_, scan = {}, {}, {}
    if args.coupling:
        net["coupling"] = args.coupling
    if args.out:
        run_["out"] = args.out
    if args.seed is not None:
        run_["seed"] = args.seed
    if args.paper_scale:
        run_["horizon"] = LONG_HORIZON
    if args.horizon is not None:
        run_["horizon"] = args.horizon
    if args.eps is not None:
        try:
            grid = _parse_eps(args.eps)
        except ValueError:
            raise ConfigError(f"--eps: cannot parse {args.eps!r}") from None
        if not grid:
            raise ConfigError("--eps: empty grid")
        scan["eps"] = grid
        net["eps"] = grid[0]
    if args.workers is not None:
        scan["workers"] = args.workers
    return cfg.with_overrides(network=net, run=run_, scan=scan)


# -- writers -------------------------------------------------------------------

def _write_csv(path: Path, header, rows) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_cell(v) for v in row])


def _cell(v):
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.15g}"
    return v


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, default=_jsonable) + "\n")


def _jsonable(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer, np.bool_)):
        return o.item()
    raise TypeError(f"cannot serialize {type(o)}")


def _stats_rows(spec: NetworkSpec, traj):
    vel = field_along(spec, traj.states)
    pops = [order_parameter(traj.states, p, spec.n) for p in range(spec.n_populations)]
    for i, t in enumerate(traj.times):
        yield [t] + [r[i] for r in pops] + list(vel[i])


def _stats_header(spec: NetworkSpec):
    return ["t"] + [f"R_{p + 1}" for p in range(spec.n_populations)] + [f"dphi_{k + 1}" for k in range(spec.dim)]


def _out_dir(cfg: ExperimentConfig) -> Path:
    out = Path(cfg.run.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


# -- commands ----------------------------------------------------------------------

def _initial_state(cfg: ExperimentConfig, spec: NetworkSpec):
    init = cfg.run.initial.strip()
    g = cfg.coupling()
    if init == "auto":
        if spec.mode == "product":
            return product_initial_state(cfg, g)
        boot = bootstrap_incoherent(g, spec.n, cfg.run.seed, cfg.run.bootstrap_horizon,
                                    cfg.run.inc_margin, cfg.integrator, cfg.run.bootstrap_min_lyapunov)
        return boot.state, {"bootstrap_tries": boot.tries}
    if init == "random":
        rng = np.random.default_rng(cfg.run.seed)
        return np.concatenate([canonical_point(rng, spec.n) for _ in range(spec.n_populations)]), {}
    try:
        x0 = np.array([float(t) for t in init.replace(",", " ").split()])
    except ValueError:
        raise ConfigError(f"run.initial: expected auto, random or a list of phases, got {init!r}") from None
    if x0.size != spec.dim:
        raise ConfigError(f"run.initial: expected {spec.dim} phases, got {x0.size}")
    return x0, {}


def _spec(cfg: ExperimentConfig) -> NetworkSpec:
    net = cfg.network
    if net.mode == "product":
        return NetworkSpec.product(cfg.coupling(), net.n, net.eps, net.omega)
    return NetworkSpec.population(cfg.coupling(), net.n, net.omega)


def cmd_simulate(cfg: ExperimentConfig) -> int:
    out = _out_dir(cfg)
    spec = _spec(cfg)
    x0, meta = _initial_state(cfg, spec)
    res = run(spec, x0, cfg.run.horizon, cfg.integrator, cfg.run.lyapunov, cfg.run.seed, cfg.analysis.burn_in)
    res.traj.to_csv(out / "trajectory.csv")
    fv = frequency_vector(res.traj, spec, res.burn_in)
    _write_json(out / "frequency.json", fv.to_dict())
    verdict = classify(res.traj, spec, tol=cfg.analysis.freq_tol, burn_in=res.burn_in)
    vd = verdict.to_dict()
    vd["lambda_max"] = res.lambda_max
    vd["initial"] = meta
    _write_json(out / "verdict.json", vd)
    _write_csv(out / "stats.csv", _stats_header(spec), _stats_rows(spec, res.traj))
    if res.lyap is not None:
        _write_csv(out / "lyapunov.csv", ["t", "lambda_max"], zip(res.lyap.renorm_times, res.lyap.running))
    print(f"wrote {out}/trajectory.csv, frequency.json, verdict.json (weak chimera: {verdict.is_weak_chimera})")
    return EXIT_OK


def cmd_figure(cfg: ExperimentConfig, which: str) -> int:
    return {"fig1": _fig1, "fig2": _fig2, "fig3": _fig3}[which](cfg)


def _fig1(cfg: ExperimentConfig) -> int:
    out = _out_dir(cfg)
    g = cfg.coupling()
    n = cfg.network.n
    phi = np.linspace(0.0, TWO_PI, 2001)
    _write_csv(out / "fig1_coupling.csv", ["phi", "g_hat", "g"], zip(phi, g(phi), g_chaos()(phi)))
    boot = bootstrap_incoherent(g, n, cfg.run.seed, cfg.run.bootstrap_horizon, cfg.run.inc_margin, cfg.integrator,
                                cfg.run.bootstrap_min_lyapunov)
    # A_inc samples: continue from the bootstrap state for a while
    res = run(NetworkSpec.population(g, n), boot.state, min(cfg.run.horizon, 2000.0), cfg.integrator, False)
    tail = res.traj.after(res.burn_in).states
    xi_inc = np.sort(np.mod(tail[:, :, None] - tail[:, None, :], TWO_PI)[:, ~np.eye(n, dtype=bool)].ravel())
    alpha, _, note = coherent_offsets(g, cfg.run.coherent)
    xi_coh = np.mod((alpha[:, None] - alpha[None, :])[~np.eye(n, dtype=bool)], TWO_PI)
    _write_csv(out / "fig1_xi_inc.csv", ["xi", "g_hat"], zip(xi_inc[::max(1, xi_inc.size // 5000)],
                                                             g(xi_inc[::max(1, xi_inc.size // 5000)])))
    _write_csv(out / "fig1_xi_coh.csv", ["xi", "g_hat"], zip(np.sort(xi_coh), g(np.sort(xi_coh))))
    X_inc = xi_set(tail, cfg.analysis.xi_pad)
    X_coh = xi_set(alpha[None, :], cfg.analysis.xi_pad)
    cert = separation_certificate(X_inc, X_coh)
    _write_json(out / "fig1.json", {
        "xi_inc_hull": X_inc.to_list() if len(X_inc.arcs) <= 50 else None,
        "xi_inc_within": X_inc.within(0.4, TWO_PI - 0.4),
        "xi_coh": np.sort(xi_coh).tolist(),
        "coherent_offsets": alpha.tolist(),
        "coherent_note": note,
        "separated": cert is not None,
        "Q_inc": cert[0].to_list() if cert else None,
        "Q_coh": cert[1].to_list() if cert else None,
    })
    ixi = xi_inc[::max(1, xi_inc.size // 2000)]
    svg.plot(out / "fig1.svg", [
        svg.Series(phi, g_chaos()(phi), "g", color="#999999"),
        svg.Series(phi, g(phi), cfg.network.coupling),
        svg.Series(ixi, g(ixi), "Xi(A_inc)", kind="scatter"),
        svg.Series(xi_coh, g(xi_coh), "Xi(A_coh)", kind="hollow"),
    ], title="coupling function", xlabel="phi", ylabel="g(phi)")
    print(f"wrote {out}/fig1_*.csv, fig1.json, fig1.svg (separated: {cert is not None})")
    return EXIT_OK


def _fig2(cfg: ExperimentConfig) -> int:
    out = _out_dir(cfg)
    g = cfg.coupling()
    n, eps = cfg.network.n, cfg.network.eps
    spec = NetworkSpec.product(g, n, eps, cfg.network.omega)
    x0, meta = product_initial_state(cfg, g)
    res = run(spec, x0, cfg.run.horizon, cfg.integrator, True, cfg.run.seed, cfg.analysis.burn_in)
    traj = res.traj
    _write_csv(out / "fig2_phases.csv", ["t"] + [f"phi_{k + 1}" for k in range(spec.dim)],
               (np.r_[t, np.mod(x, TWO_PI)] for t, x in zip(traj.times, traj.states)))
    vel = field_along(spec, traj.states)
    _write_csv(out / "fig2_frequencies.csv", ["t"] + [f"dphi_{k + 1}" for k in range(spec.dim)],
               (np.r_[t, v] for t, v in zip(traj.times, vel)))
    _write_csv(out / "fig2_lyapunov.csv", ["t", "lambda_max"], zip(res.lyap.renorm_times, res.lyap.running))
    y1, y2 = projection(traj.states, 0, n), projection(traj.states, 1, n)
    _write_csv(out / "fig2_projection.csv", ["t", "y1_1", "y1_2", "y2_1", "y2_2"],
               (np.r_[t, a, b] for t, a, b in zip(traj.times, y1, y2)))
    _write_csv(out / "stats.csv", _stats_header(spec), _stats_rows(spec, traj))
    row = summarize_product(res, eps, cfg)
    verdict = classify(traj, spec, tol=cfg.analysis.freq_tol, burn_in=res.burn_in)
    _write_json(out / "fig2.json", {"summary": row, "verdict": verdict.to_dict(), "initial": meta})
    last = traj.times >= traj.horizon - 200.0
    svg.plot(out / "fig2_phases.svg",
             [svg.Series(traj.times[last], np.mod(traj.states[last, k], TWO_PI), f"phi_{k + 1}", kind="scatter")
              for k in range(spec.dim)], title=f"phases, eps={eps:g}", xlabel="t", ylabel="phi mod 2pi")
    svg.plot(out / "fig2_lyapunov.svg", [svg.Series(res.lyap.renorm_times, res.lyap.running, "lambda_max")],
             title="maximal Lyapunov exponent", xlabel="t", ylabel="lambda")
    b = traj.times >= res.burn_in
    svg.plot(out / "fig2_projection.svg", [svg.Series(y1[b, 0], y1[b, 1], "population 1", kind="scatter"),
                                           svg.Series(y2[b, 0], y2[b, 1], "population 2", kind="scatter")],
             title="projections y_l", xlabel="sin(phi_3 - phi_1)", ylabel="sin(phi_4 - phi_2)")
    print(f"wrote {out}/fig2_*.csv, fig2.json, fig2_*.svg (class {row['class']}, "
          f"lambda_max {row['lambda_max']:.4g})")
    return EXIT_OK


def run_scan(cfg: ExperimentConfig) -> list[dict]:
    x0, _ = product_initial_state(cfg)
    jobs = [(cfg, eps, x0) for eps in cfg.scan.eps]
    workers = cfg.scan.workers or os.cpu_count() or 1
    workers = min(workers, len(jobs))
    if workers <= 1:
        return [scan_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(scan_job, jobs))


def _write_scan(path: Path, rows: list[dict]) -> None:
    _write_csv(path, SCAN_COLUMNS, ([r.get(c, "") for c in SCAN_COLUMNS] for r in rows))


def cmd_scan(cfg: ExperimentConfig, name: str = "scan") -> int:
    if not cfg.scan.eps:
        raise ConfigError("scan.eps: empty grid")
    out = _out_dir(cfg)
    rows = run_scan(cfg)
    _write_scan(out / f"{name}.csv", rows)
    ok = [r for r in rows if r["status"] == "ok"]
    print(f"wrote {out}/{name}.csv ({len(ok)}/{len(rows)} rows ok)")
    return EXIT_OK if ok else EXIT_INTEGRATION


def _fig3(cfg: ExperimentConfig) -> int:
    code = cmd_scan(cfg, "fig3")
    out = Path(cfg.run.out)
    rows = [r for r in csv.DictReader((out / "fig3.csv").open()) if r["status"] == "ok"]
    if rows:
        eps = np.array([float(r["eps"]) for r in rows])

        def col(c):
            return np.array([float(r[c]) if r[c] not in ("", "nan") else np.nan for r in rows])

        svg.plot(out / "fig3_lyapunov.svg", [svg.Series(eps, col("lambda_max"), "lambda_max", kind="hollow")],
                 title="maximal Lyapunov exponent", xlabel="eps", ylabel="lambda")
        svg.plot(out / "fig3_symmetry.svg", [svg.Series(eps, col("S_1"), "S_1", kind="hollow"),
                                             svg.Series(eps, col("S_2"), "S_2", kind="hollow")],
                 title="ergodic averages", xlabel="eps", ylabel="S")
        svg.plot(out / "fig3_frequencies.svg", [
            svg.Series(eps, col("omega_min_1"), "min Omega pop 1"), svg.Series(eps, col("omega_max_1"), "max Omega pop 1"),
            svg.Series(eps, col("omega_min_2"), "min Omega pop 2"), svg.Series(eps, col("omega_max_2"), "max Omega pop 2"),
        ], title="frequency bands", xlabel="eps", ylabel="Omega")
    return code


def cmd_equilibrium(cfg: ExperimentConfig) -> int:
    out = _out_dir(cfg)
    g = cfg.coupling()
    try:
        eq = refine(g, np.asarray(cfg.run.coherent))
    except RefinementError as exc:
        _write_json(out / "equilibrium.json", {"schema": "weakchimera.equilibrium/1", "error": str(exc),
                                               "seed": list(cfg.run.coherent)})
        print(f"no relative equilibrium: {exc}", file=sys.stderr)
        return EXIT_NO_EQ
    cert = trivial_symmetry_check(eq)
    d = eq.to_dict()
    d["trivial_symmetry"] = {"trivial": cert.trivial, "method": cert.method, "detail": cert.detail}
    _write_json(out / "equilibrium.json", d)
    print(f"alpha = {np.array2string(eq.alpha, precision=10)}, omega* = {eq.omega_star:.10g}, "
          f"stable = {eq.stable}")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        if args.command == "simulate":
            return cmd_simulate(cfg)
        if args.command == "figure":
            return cmd_figure(cfg, args.which)
        if args.command == "scan":
            return cmd_scan(cfg)
        return cmd_equilibrium(cfg)
    except (ConfigError, CouplingSpecError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (IntegrationError, BootstrapError) as exc:
        print(f"integration failed: {exc}", file=sys.stderr)
        return EXIT_INTEGRATION


if __name__ == "__main__":
    sys.exit(main())
