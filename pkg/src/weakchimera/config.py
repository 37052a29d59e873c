"""Experiment configuration: INI-style sections of flat ``key = value`` pairs.

Every key has a default, so an empty file (or no file) is a valid config::

    [network]
    mode = product          # population | product
    n = 4
    coupling = g_hat        # preset name, or file:PATH with a coupling text spec
    eps = 0.01
    omega = 0.0

    [integrator]
    rtol = 1e-9
    atol = 1e-11
    max_step = 0.1
    record_dt = 0.1
    renorm_dt = 1.0

    [analysis]
    burn_in =               # blank: 10% of the horizon, at least 100
    freq_tol =              # blank: max(1e-3, 10 / averaging time)
    deadband = 1e-3
    s_threshold = 0.1
    xi_pad =                # blank: half the largest per-sample step of any difference

    [run]
    seed = 0
    horizon = 10000
    out = out
    initial = auto          # auto | random | explicit phases "0 1.2 2.5 ..."
    lyapunov = true
    bootstrap_horizon = 1000
    bootstrap_min_lyapunov = 0.02   # blank: accept regular attractors too
    inc_margin = 0.4
    coherent = 0 0.0975 0.1253 0.2247

    [scan]
    eps = 0, 0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09, 0.1
    workers = 0             # 0: one per CPU
"""

from __future__ import annotations

import configparser
import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

from .coupling import Coupling, CouplingSpecError, PRESETS, loads, preset
from .integrate import IntegratorConfig

LONG_HORIZON = 2e5
DESK_HORIZON = 1e4


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class NetworkConfig:
    mode: str = "product"
    n: int = 4
    coupling: str = "g_hat"
    eps: float = 0.01
    omega: float = 0.0


@dataclass(frozen=True)
class AnalysisConfig:
    burn_in: float | None = None
    freq_tol: float | None = None
    deadband: float = 1e-3
    s_threshold: float = 0.1
    xi_pad: float | None = None


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    horizon: float = DESK_HORIZON
    out: str = "out"
    initial: str = "auto"
    lyapunov: bool = True
    bootstrap_horizon: float = 1000.0
    bootstrap_min_lyapunov: float | None = 0.02
    inc_margin: float = 0.4
    coherent: tuple[float, ...] = (0.0, 0.0975, 0.1253, 0.2247)


@dataclass(frozen=True)
class ScanConfig:
    eps: tuple[float, ...] = tuple(round(0.01 * i, 2) for i in range(11))
    workers: int = 0


@dataclass(frozen=True)
class ExperimentConfig:
    network: NetworkConfig = field(default_factory=NetworkConfig)
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    analysis: AnalysisConfig = field(default_factory=AnalysisConfig)
    run: RunConfig = field(default_factory=RunConfig)
    scan: ScanConfig = field(default_factory=ScanConfig)

    def coupling(self) -> Coupling:
        return resolve_coupling(self.network.coupling)

    def with_overrides(self, **sections) -> "ExperimentConfig":
        """``with_overrides(run={"horizon": 10.0})`` returns an updated copy."""
        cfg = self
        for sec, values in sections.items():
            if values:
                cfg = dataclasses.replace(cfg, **{sec: _replace(sec, getattr(cfg, sec), values)})
        cfg.validate()
        return cfg

    def validate(self) -> None:
        net = self.network
        if net.mode not in ("population", "product"):
            raise ConfigError(f"network.mode: expected population or product, got {net.mode!r}")
        if net.n < 1:
            raise ConfigError("network.n: must be >= 1")
        if net.eps < 0:
            raise ConfigError("network.eps: must be >= 0")
        resolve_coupling(net.coupling)
        if self.run.horizon <= 0:
            raise ConfigError("run.horizon: must be positive")
        eps = self.scan.eps
        if any(e < 0 for e in eps) or any(b <= a for a, b in zip(eps, eps[1:])):
            raise ConfigError("scan.eps: must be nonnegative and strictly increasing")
        if self.scan.workers < 0:
            raise ConfigError("scan.workers: must be >= 0")


def resolve_coupling(name: str) -> Coupling:
    if name.startswith("file:"):
        path = Path(name[5:])
        try:
            return loads(path.read_text())
        except OSError as exc:
            raise ConfigError(f"network.coupling: cannot read {path}: {exc}") from None
        except CouplingSpecError as exc:
            raise ConfigError(f"network.coupling: {path}: {exc}") from None
    if name not in PRESETS:
        raise ConfigError(f"network.coupling: unknown preset {name!r}; choose from {sorted(PRESETS)}")
    return preset(name)


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_floats(text: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in text.replace(",", " ").split())


def _convert(section: str, key: str, kind, text):
    if not isinstance(text, str):
        return text
    text = text.strip()
    kind = str(kind)
    try:
        if "None" in kind and text == "":
            return None
        if kind.startswith("tuple"):
            return _parse_floats(text)
        if kind.startswith("bool"):
            return _parse_bool(text)
        if kind.startswith("int"):
            return int(text)
        if kind.startswith("float"):
            return float(text)
        return text
    except ValueError as exc:
        raise ConfigError(f"{section}.{key}: {exc}") from None


def _replace(section: str, obj, values: dict):
    kinds = {f.name: f.type for f in dataclasses.fields(obj)}
    out = {}
    for key, text in values.items():
        if key not in kinds:
            raise ConfigError(f"{section}.{key}: unknown key; expected one of {sorted(kinds)}")
        out[key] = _convert(section, key, kinds[key], text)
    try:
        return dataclasses.replace(obj, **out)
    except ValueError as exc:
        raise ConfigError(f"{section}: {exc}") from None


SECTIONS = ("network", "integrator", "analysis", "run", "scan")


def parse_config(text: str) -> ExperimentConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config syntax: {exc}") from None
    sections = {}
    for sec in parser.sections():
        if sec not in SECTIONS:
            raise ConfigError(f"{sec}: unknown section; expected one of {list(SECTIONS)}")
        sections[sec] = dict(parser.items(sec))
    return ExperimentConfig().with_overrides(**sections)


def load_config(path: str | Path | None) -> ExperimentConfig:
    if path is None:
        return ExperimentConfig()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"--config: cannot read {path}: {exc}") from None
    return parse_config(text)
