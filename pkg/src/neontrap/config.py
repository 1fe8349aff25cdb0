"""Strict run-configuration parsing for the sweep CLI.

Config files are INI-style `key = value` sections.  Every physical value
carries an explicit unit string (`L = 10 nm`); unknown sections or keys,
missing units, and malformed values are rejected before any computation.
"""

from __future__ import annotations

import configparser
import hashlib
import math
import os
from dataclasses import dataclass, field

from .tables import emit_quantity, parse_quantity


class ConfigError(ValueError):
    """Invalid or unparseable run configuration."""


# section -> key -> (kind, unit).  kind: float | float_list | int | str | choice
_SCHEMA = {
    "substrate": {
        "type": ("choice", ("superconductor", "dielectric")),
        "eps_b": ("float", None),
    },
    "constants": {
        "eps_neon": ("float", None),
        "barrier_height": ("float", "meV"),
        "cutoff_zc": ("float", "nm"),
    },
    "grid": {
        "n_points": ("int", None),
        "z_max": ("float", "nm"),
        "z_samples": ("int", None),
        "rho_max": ("float", "nm"),
        "n_points_radial": ("int", None),
    },
    "sweep": {
        "L": ("float_list", "nm"),
        "E_ex": ("float_list", "V/m"),
        "L0": ("float", "nm"),
        "delta_L": ("float_list", "nm"),
        "R": ("float_list", "nm"),
        "b": ("float", "nm"),
        "n_knots": ("int", None),
        "alpha_max": ("int", None),
    },
    "growth": {
        "r_c": ("float_list", "nm"),
        "diffusion_time": ("float", "s"),
        "delta_h": ("float", "nm"),
    },
    "output": {
        "path": ("str", None),
        "format": ("choice", ("csv", "json")),
    },
    "parallel": {
        "threads": ("int", None),
    },
}


@dataclass
class RunConfig:
    """Fully resolved configuration; all lengths nm, fields V/m, energies meV."""

    substrate_type: str = "superconductor"
    eps_b: float = 12.0
    eps_neon: float = 1.244
    barrier_height: float = 700.0
    cutoff_zc: float = 0.23
    n_points: int = 8192
    z_max: float = 40.0
    z_samples: int = 400
    rho_max: float | None = None
    n_points_radial: int = 16384
    L: list = field(default_factory=lambda: [10.0])
    E_ex: list = field(default_factory=lambda: [0.0])
    L0: float = 10.0
    delta_L: list = field(default_factory=lambda: [0.5])
    R: list = field(default_factory=lambda: [110.0])
    b: float = 2.0
    n_knots: int = 60
    alpha_max: int = 1
    r_c: list = field(default_factory=lambda: [10.0, -10.0])
    diffusion_time: float = 10e-6
    delta_h: float = 25.0
    out_path: str = "out.csv"
    out_format: str = "csv"
    threads: int = 0

    def effective_threads(self) -> int:
        env = os.environ.get("NEONTRAP_THREADS")
        if env is not None:
            try:
                n = int(env)
            except ValueError as exc:
                raise ConfigError(f"NEONTRAP_THREADS must be an integer, got {env!r}") from exc
            if n > 0:
                return n
        if self.threads > 0:
            return self.threads
        return os.cpu_count() or 1

    def effective_text(self) -> str:
        """Canonical resolved-config echo; also the hash input."""
        def q(v, unit):
            return emit_quantity(v, unit)
        lines = ["[substrate]", f"type = {self.substrate_type}"]
        if self.substrate_type == "dielectric":
            lines.append(f"eps_b = {q(self.eps_b, None)}")
        lines += [
            "",
            "[constants]",
            f"eps_neon = {q(self.eps_neon, None)}",
            f"barrier_height = {q(self.barrier_height, 'meV')}",
            f"cutoff_zc = {q(self.cutoff_zc, 'nm')}",
            "",
            "[grid]",
            f"n_points = {self.n_points}",
            f"z_max = {q(self.z_max, 'nm')}",
            f"z_samples = {self.z_samples}",
            f"rho_max = {'auto' if self.rho_max is None else q(self.rho_max, 'nm')}",
            f"n_points_radial = {self.n_points_radial}",
            "",
            "[sweep]",
            f"L = {', '.join(q(v, 'nm') for v in self.L)}",
            f"E_ex = {', '.join(q(v, 'V/m') for v in self.E_ex)}",
            f"L0 = {q(self.L0, 'nm')}",
            f"delta_L = {', '.join(q(v, 'nm') for v in self.delta_L)}",
            f"R = {', '.join(q(v, 'nm') for v in self.R)}",
            f"b = {q(self.b, 'nm')}",
            f"n_knots = {self.n_knots}",
            f"alpha_max = {self.alpha_max}",
            "",
            "[growth]",
            f"r_c = {', '.join(q(v, 'nm') for v in self.r_c)}",
            f"diffusion_time = {q(self.diffusion_time, 's')}",
            f"delta_h = {q(self.delta_h, 'nm')}",
            "",
            "[output]",
            f"path = {self.out_path}",
            f"format = {self.out_format}",
            "",
            "[parallel]",
            f"threads = {self.threads}",
        ]
        return "\n".join(lines) + "\n"

    def config_hash(self) -> str:
        # neither output destination nor worker count affects the numbers,
        # so the hash covers only the physics-relevant sections
        text = self.effective_text().split("[output]")[0]
        return hashlib.sha256(text.encode()).hexdigest()[:16]


def _parse_value(section: str, key: str, raw: str):
    kind, unit = _SCHEMA[section][key]
    try:
        if kind == "float":
            return parse_quantity(raw, unit)
        if kind == "float_list":
            return [parse_quantity(part, unit) for part in raw.split(",")]
        if kind == "int":
            if not raw.strip().lstrip("+-").isdigit():
                raise ValueError(f"expected an integer, got {raw!r}")
            return int(raw)
        if kind == "choice":
            val = raw.strip()
            if val not in unit:
                raise ValueError(f"expected one of {unit}, got {val!r}")
            return val
        return raw.strip()
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key}: {exc}") from exc


_DEST = {
    ("substrate", "type"): "substrate_type",
    ("substrate", "eps_b"): "eps_b",
    ("output", "path"): "out_path",
    ("output", "format"): "out_format",
    ("parallel", "threads"): "threads",
}


def load_config(path: str) -> RunConfig:
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # keys are case-sensitive (L vs l)
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"malformed config file {path}: {exc}") from exc

    cfg = RunConfig()
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown section [{section}]")
        for key, raw in parser.items(section):
            if key not in _SCHEMA[section]:
                raise ConfigError(f"unknown key {key!r} in section [{section}]")
            dest = _DEST.get((section, key), key)
            setattr(cfg, dest, _parse_value(section, key, raw))
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig):
    if cfg.substrate_type == "dielectric" and cfg.eps_b < 1.0:
        raise ConfigError("eps_b must be >= 1")
    if cfg.eps_neon <= 1.0:
        raise ConfigError("eps_neon must exceed 1")
    if cfg.n_points < 500 or cfg.n_points_radial < 500:
        raise ConfigError("grids need at least 500 points")
    if cfg.z_max <= cfg.cutoff_zc:
        raise ConfigError("z_max must exceed the cutoff distance")
    if any((l <= 0.0 and not math.isinf(l)) for l in cfg.L):
        raise ConfigError("layer thicknesses must be positive (or inf for bulk)")
    if not (0.0 < min(cfg.delta_L) and max(cfg.delta_L) < cfg.L0):
        raise ConfigError("need 0 < delta_L < L0")
    if any(r <= 0.0 for r in cfg.R) or cfg.b <= 0.0:
        raise ConfigError("R and b must be positive")
    if cfg.n_knots < 20:
        raise ConfigError("n_knots must be >= 20")
    if cfg.alpha_max < 1:
        raise ConfigError("alpha_max must be >= 1")
    if any(r == 0.0 for r in cfg.r_c):
        raise ConfigError("curvature radii must be nonzero")
    if cfg.diffusion_time <= 0.0 or cfg.delta_h < 0.0:
        raise ConfigError("diffusion_time must be positive, delta_h non-negative")
    if cfg.threads < 0:
        raise ConfigError("threads must be >= 0 (0 = auto)")
