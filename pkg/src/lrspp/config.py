"""Run configuration: defaults, JSON overrides and validation.

All lengths are meters and frequencies rad/s internally; the CLI accepts
nanometer flags and converts.  Defaults reproduce the reference setup:
prism eps1 = 1.51, wavepacket bandwidth 3.02e13 rad/s, detector efficiency
0.65, frequency window [2e15, 5.4e15] rad/s, strip thickness 10-100 nm and
prism gap 50 nm - 3 um.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, replace

from .coupling import DEFAULT_DELTA_OMEGA, DEFAULT_EPS_PRISM
from .errors import ConfigError
from .materials import DielectricModel, SILVER, surface_plasma_frequency

THREADS_ENV_VAR = "LRSPP_THREADS"


@dataclass(frozen=True)
class GridSpec:
    lo: float
    hi: float
    steps: int

    def points(self) -> list[float]:
        if self.steps == 1:
            return [self.lo]
        return [self.lo + (self.hi - self.lo) * i / (self.steps - 1) for i in range(self.steps)]


@dataclass(frozen=True)
class RunConfig:
    material: DielectricModel = SILVER
    branch: str = "both"  # plus | minus | both
    omega: GridSpec = GridSpec(2e15, 5.4e15, 120)
    d1: GridSpec = GridSpec(10e-9, 100e-9, 60)
    d2: GridSpec = GridSpec(50e-9, 3e-6, 80)
    k: GridSpec = GridSpec(2e6, 1.8e7, 200)
    x: GridSpec = GridSpec(0.0, 10e-6, 50)
    z: GridSpec | None = None
    alphas: tuple[float, ...] = (2.0, 5.0)
    delta_omega: float = DEFAULT_DELTA_OMEGA
    eps_prism: float = DEFAULT_EPS_PRISM
    mu: float = 0.65
    n_photons: int = 1
    threads: int = 1
    out: str | None = None
    format: str = "csv"  # csv | json

    def branches(self) -> list[str]:
        return ["plus", "minus"] if self.branch == "both" else [self.branch]


_GRID_KEYS = ("omega", "d1", "d2", "k", "x")


def _require(cond: bool, key: str, message: str) -> None:
    if not cond:
        raise ConfigError(f"{key}: {message}")


def config_from_dict(raw: dict) -> RunConfig:
    """Build a RunConfig from a flat dict (JSON config or parsed flags)."""
    cfg = RunConfig()
    material = cfg.material
    mat_raw = raw.pop("material", None)
    if mat_raw is not None:
        if not isinstance(mat_raw, dict):
            raise ConfigError("material: expected an object with model overrides")
        try:
            material = DielectricModel(
                plasma_frequency=float(mat_raw.get("plasma_frequency", SILVER.plasma_frequency)),
                damping_rate=float(mat_raw.get("damping_rate", SILVER.damping_rate)),
                real_correction_coeff=float(
                    mat_raw.get("real_correction_coeff", SILVER.real_correction_coeff)
                ),
                imag_correction=float(mat_raw.get("imag_correction", SILVER.imag_correction)),
            )
        except ValueError as exc:
            raise ConfigError(f"material: {exc}") from exc
    updates: dict = {"material": material}
    for key in _GRID_KEYS:
        grid = getattr(cfg, key)
        lo = raw.pop(f"{key}_min", None)
        hi = raw.pop(f"{key}_max", None)
        steps = raw.pop(f"{key}_steps", None)
        if lo is not None or hi is not None or steps is not None:
            grid = GridSpec(
                lo=float(lo) if lo is not None else grid.lo,
                hi=float(hi) if hi is not None else grid.hi,
                steps=int(steps) if steps is not None else grid.steps,
            )
        updates[key] = grid
    if "z_min" in raw or "z_max" in raw or "z_steps" in raw:
        updates["z"] = GridSpec(
            lo=float(raw.pop("z_min", 0.0)),
            hi=float(raw.pop("z_max", 0.0)),
            steps=int(raw.pop("z_steps", 2)),
        )
    for key in ("branch", "delta_omega", "eps_prism", "mu", "n_photons", "threads", "out", "format"):
        if key in raw and raw[key] is not None:
            updates[key] = raw.pop(key)
        else:
            raw.pop(key, None)
    if "alphas" in raw and raw["alphas"] is not None:
        updates["alphas"] = tuple(float(a) for a in raw.pop("alphas"))
    else:
        raw.pop("alphas", None)
    unknown = [k for k in raw if raw[k] is not None]
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return replace(cfg, **updates)


def load_config_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: malformed JSON in {path}: {exc}") from exc
    if not isinstance(payload, dict):
        raise ConfigError("config: top level must be a JSON object")
    return payload


def validate_config(cfg: RunConfig) -> tuple[RunConfig, list[str]]:
    """Normalize and check a configuration.

    Returns the validated config plus warning records (currently only the
    frequency-grid clip against the surface-mode limit).  Raises
    ConfigError naming the offending key otherwise.
    """
    warnings: list[str] = []
    _require(cfg.branch in ("plus", "minus", "both"), "branch", f"must be plus|minus|both, got {cfg.branch!r}")
    _require(cfg.format in ("csv", "json"), "format", f"must be csv|json, got {cfg.format!r}")
    for key in _GRID_KEYS:
        grid: GridSpec = getattr(cfg, key)
        _require(grid.steps >= 2, key, f"needs at least 2 steps, got {grid.steps}")
        _require(grid.lo < grid.hi, key, f"min must be below max, got [{grid.lo!r}, {grid.hi!r}]")
    _require(cfg.x.lo >= 0.0, "x", "distances must be non-negative")
    _require(cfg.d1.lo > 0.0, "d1", "thickness must be positive")
    _require(cfg.d2.lo > 0.0, "d2", "gap must be positive")
    _require(cfg.k.lo > 0.0, "k", "wavevector must be positive")
    _require(cfg.omega.lo > 0.0, "omega", "frequency must be positive")
    _require(cfg.delta_omega > 0.0, "delta_omega", "must be positive")
    _require(cfg.eps_prism > 1.0, "eps_prism", "must exceed 1")
    _require(0.0 <= cfg.mu <= 1.0, "mu", "must lie in [0, 1]")
    _require(cfg.n_photons >= 1, "n_photons", "must be a positive integer")
    _require(cfg.threads >= 1, "threads", "must be a positive integer")
    _require(len(cfg.alphas) > 0, "alphas", "needs at least one amplitude")
    for a in cfg.alphas:
        _require(a > 0.0, "alphas", f"amplitudes must be positive, got {a!r}")

    w_cap = surface_plasma_frequency(cfg.material) * (1.0 - 1e-6)
    omega = cfg.omega
    if omega.hi > w_cap:
        _require(omega.lo < w_cap, "omega", "entire grid above the surface-mode limit")
        omega = GridSpec(omega.lo, w_cap, omega.steps)
        warnings.append(
            f"omega grid clipped to the surface-mode limit {w_cap!r} rad/s"
        )
        cfg = replace(cfg, omega=omega)
    return cfg, warnings


def default_threads() -> int:
    raw = os.environ.get(THREADS_ENV_VAR)
    if raw is None:
        return 1
    try:
        val = int(raw)
    except ValueError as exc:
        raise ConfigError(f"threads: {THREADS_ENV_VAR} must be an integer, got {raw!r}") from exc
    return max(val, 1)
