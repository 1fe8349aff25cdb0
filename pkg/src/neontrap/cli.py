"""Sweep-driving command line interface.

Subcommands: potential-z, ground-sweep, lateral, field-sweep, growth,
verify.  All outputs are deterministic: identical (config, version) pairs
produce byte-identical files regardless of worker count.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import math
import os
import sys

import numpy as np

from . import __version__
from .config import ConfigError, RunConfig, load_config
from .dielectric import (Dielectric, DielectricStack, FieldSpec, Superconductor,
                         external_potential, perpendicular_potential,
                         total_perpendicular_potential)
from .constants import PhysicalConstants
from .growth import (DEFAULT_NEON, diffusion_length, gibbs_thomson_coefficient,
                     gibbs_thomson_shift, gravity_potential_difference)
from .lateral import (PillarProfile, build_energy_curve, field_response,
                      fit_harmonic_field_model, lta_potential, pillar_spectrum,
                      thickness_at)
from .perpendicular import (Grid1D, UnboundStateError, aligned_grid, default_grid,
                            mean_height, perpendicular_gap, solve_perpendicular)
from .tables import ResultTable


class NumericalFailure(RuntimeError):
    """Unrecoverable numerical problem (beyond flagged rows)."""


def _constants(cfg: RunConfig) -> PhysicalConstants:
    return PhysicalConstants(barrier_height=cfg.barrier_height,
                             cutoff_zc=cfg.cutoff_zc,
                             eps_neon_default=cfg.eps_neon)


def _stack(cfg: RunConfig, thickness: float) -> DielectricStack:
    sub = Superconductor() if cfg.substrate_type == "superconductor" \
        else Dielectric(cfg.eps_b)
    return DielectricStack(sub, thickness, eps_neon=cfg.eps_neon)


def _grid(cfg: RunConfig, stack: DielectricStack) -> Grid1D:
    return aligned_grid(max(-stack.thickness_L, -2.0), cfg.z_max, cfg.n_points)


def _base_metadata(cfg: RunConfig, command: str) -> dict:
    return {"tool": "neontrap", "version": __version__, "command": command,
            "config_sha256": cfg.config_hash()}


def _fmt_axis(value: float) -> str:
    return "inf" if math.isinf(value) else f"{value:g}"


def _out_path(cfg: RunConfig, suffix: str = "") -> str:
    stem, ext = os.path.splitext(cfg.out_path)
    return f"{stem}{suffix}{ext}" if suffix else cfg.out_path


def _write(cfg: RunConfig, table: ResultTable, path: str):
    table.write(path, cfg.out_format)


def _write_effective_config(cfg: RunConfig):
    stem, _ = os.path.splitext(cfg.out_path)
    with open(stem + ".effective.ini", "w", newline="\n") as fh:
        fh.write(cfg.effective_text())


def cmd_potential_z(cfg: RunConfig) -> list[str]:
    """Perpendicular potential profile V(z); one file per layer thickness."""
    constants = _constants(cfg)
    written = []
    for L in cfg.L:
        stack = _stack(cfg, L)
        z = np.linspace(cfg.cutoff_zc, cfg.z_max, cfg.z_samples)
        v_perp = np.asarray(perpendicular_potential(stack, z, constants=constants))
        if stack.is_bulk:
            v_ex = np.zeros_like(z)
        else:
            v_ex = np.asarray(external_potential(FieldSpec(cfg.E_ex[0]), L, z,
                                                 eps_neon=cfg.eps_neon))
        table = ResultTable(columns=[("z", "nm"), ("V_perp", "meV"),
                                     ("V_ex", "meV"), ("V_total", "meV")],
                            metadata=_base_metadata(cfg, "potential-z"))
        table.metadata["L_nm"] = _fmt_axis(L)
        for i in range(z.size):
            table.add_row(float(z[i]), float(v_perp[i]), float(v_ex[i]),
                          float(v_perp[i] + v_ex[i]))
        path = _out_path(cfg, f"_L{_fmt_axis(L)}")
        _write(cfg, table, path)
        written.append(path)
    return written


def cmd_ground_sweep(cfg: RunConfig) -> list[str]:
    """W^G, h_e and the perpendicular gap over the (L, E_ex) grid."""
    constants = _constants(cfg)
    points = sorted((L, e) for L in cfg.L for e in cfg.E_ex)

    def solve(point):
        L, e_ex = point
        stack = _stack(cfg, L)
        if stack.is_bulk and e_ex != 0.0:
            return (L, e_ex, math.nan, math.nan, math.nan, False)
        try:
            sol = solve_perpendicular(stack, FieldSpec(e_ex), n_states=2,
                                      grid=_grid(cfg, stack), constants=constants)
            if not sol.is_bound():
                raise UnboundStateError("escaping tail")
            return (L, e_ex, float(sol.energies[0]), mean_height(sol),
                    perpendicular_gap(sol), True)
        except UnboundStateError:
            return (L, e_ex, math.nan, math.nan, math.nan, False)

    results = _parallel_map(solve, points, cfg.effective_threads())
    table = ResultTable(columns=[("L", "nm"), ("E_ex", "V/m"), ("W_G", "meV"),
                                 ("h_e", "nm"), ("gap", "meV"), ("bound", "")],
                        metadata=_base_metadata(cfg, "ground-sweep"))
    for row in results:
        table.add_row(*row)
    path = _out_path(cfg)
    _write(cfg, table, path)
    return [path]


def cmd_lateral(cfg: RunConfig) -> list[str]:
    """Lateral potential profile plus the qubit spectrum per (R, delta_L)."""
    constants = _constants(cfg)
    stack0 = _stack(cfg, cfg.L0)
    field = FieldSpec(cfg.E_ex[0])
    l_lo = cfg.L0 - max(cfg.delta_L) - 0.5
    curve = build_energy_curve(stack0, field, (l_lo, cfg.L0 + 0.5), cfg.n_knots,
                               grid=_grid(cfg, stack0), constants=constants,
                               n_workers=cfg.effective_threads())
    written = []
    spectrum = ResultTable(
        columns=[("R", "nm"), ("delta_L", "nm"), ("alpha", ""),
                 ("U_alpha", "ueV"), ("delta_U", "ueV"), ("rho_e", "nm"),
                 ("rho_e_line", "nm"), ("bound", "")],
        metadata=_base_metadata(cfg, "lateral"))
    for R in sorted(cfg.R):
        for dL in sorted(cfg.delta_L):
            profile = PillarProfile(cfg.L0, dL, R, cfg.b)
            rho_max = cfg.rho_max or max(3.0 * R, R + 200.0)
            rho = np.linspace(rho_max / cfg.z_samples, rho_max, cfg.z_samples)
            v_par = np.asarray(lta_potential(curve, profile, rho,
                                             constants=constants,
                                             warn_on_narrow_step=False))
            prof_table = ResultTable(
                columns=[("rho", "nm"), ("L_rho", "nm"), ("V_par", "meV")],
                metadata=_base_metadata(cfg, "lateral"))
            prof_table.metadata["R_nm"] = f"{R:g}"
            prof_table.metadata["delta_L_nm"] = f"{dL:g}"
            lr = np.asarray(thickness_at(profile, rho))
            for i in range(rho.size):
                prof_table.add_row(float(rho[i]), float(lr[i]), float(v_par[i]))
            path = _out_path(cfg, f"_R{R:g}_dL{dL:g}")
            _write(cfg, prof_table, path)
            written.append(path)

            spec = pillar_spectrum(curve, profile, alpha_max=cfg.alpha_max,
                                   rho_max=cfg.rho_max,
                                   n_points=cfg.n_points_radial,
                                   constants=constants)
            for alpha in range(cfg.alpha_max + 1):
                spectrum.add_row(R, dL, alpha, spec.u_alpha_uev(alpha),
                                 spec.delta_u_uev, spec.rho_e, spec.rho_e_line,
                                 spec.bound)
    path = _out_path(cfg, "_spectrum")
    _write(cfg, spectrum, path)
    written.append(path)
    return written


def cmd_field_sweep(cfg: RunConfig) -> list[str]:
    """Delta U and rho_e versus external field for one pillar geometry."""
    if len(cfg.R) != 1 or len(cfg.delta_L) != 1:
        raise ConfigError("field-sweep needs exactly one R and one delta_L")
    constants = _constants(cfg)
    stack0 = _stack(cfg, cfg.L0)
    profile = PillarProfile(cfg.L0, cfg.delta_L[0], cfg.R[0], cfg.b)
    resp = field_response(stack0, profile, sorted(cfg.E_ex),
                          n_knots=cfg.n_knots, alpha_max=cfg.alpha_max,
                          rho_max=cfg.rho_max, n_points=cfg.n_points_radial,
                          grid=_grid(cfg, stack0), constants=constants,
                          n_workers=cfg.effective_threads())
    table = ResultTable(columns=[("E_ex", "V/m"), ("delta_U", "ueV"),
                                 ("rho_e", "nm"), ("rho_e_line", "nm"),
                                 ("bound", "")],
                        metadata=_base_metadata(cfg, "field-sweep"))
    for r in resp.rows:
        table.add_row(r.e_ex, r.delta_u_uev, r.rho_e, r.rho_e_line, r.bound)
    if resp.asymmetry_ratio is not None:
        table.metadata["slope_neg_ueV_per_V_per_m"] = f"{resp.slope_neg:.6e}"
        table.metadata["slope_pos_ueV_per_V_per_m"] = f"{resp.slope_pos:.6e}"
        table.metadata["asymmetry_ratio"] = f"{resp.asymmetry_ratio:.6f}"
    fit_rows = [(r.e_ex, r.delta_u_uev) for r in resp.rows
                if r.bound and math.isfinite(r.delta_u_uev)]
    if len(fit_rows) >= 2:
        e, du = zip(*fit_rows)
        w0, b1 = fit_harmonic_field_model(e, du)
        model = np.sqrt(np.maximum(np.asarray(w0) ** 2 + b1 * np.asarray(e), 0.0))
        resid = float(np.max(np.abs(model - np.asarray(du))))
        table.metadata["harmonic_fit_hbar_omega0_ueV"] = f"{w0:.6e}"
        table.metadata["harmonic_fit_beta1_ueV2_per_V_per_m"] = f"{b1:.6e}"
        table.metadata["harmonic_fit_max_residual_ueV"] = f"{resid:.6e}"
    path = _out_path(cfg)
    _write(cfg, table, path)
    return [path]


def cmd_growth(cfg: RunConfig) -> list[str]:
    """Gibbs-Thomson, diffusion-length and gravity estimates."""
    mat = DEFAULT_NEON
    table = ResultTable(columns=[("quantity", ""), ("value", ""), ("unit", "")],
                        metadata=_base_metadata(cfg, "growth"))
    table.add_row("gibbs_thomson_coefficient",
                  gibbs_thomson_coefficient(mat), "K nm")
    for r_c in cfg.r_c:
        table.add_row(f"gibbs_thomson_shift_rc_{r_c:g}nm",
                      gibbs_thomson_shift(mat, r_c), "K")
    table.add_row(f"diffusion_length_t_{cfg.diffusion_time:g}s",
                  diffusion_length(mat, cfg.diffusion_time), "nm")
    table.add_row(f"gravity_potential_dh_{cfg.delta_h:g}nm",
                  gravity_potential_difference(mat, cfg.delta_h), "meV")
    path = _out_path(cfg)
    _write(cfg, table, path)
    return [path]


def cmd_verify(cfg: RunConfig, stored_path: str, rtol: float) -> list[str]:
    """Re-run the stored table's command and compare within rtol."""
    with open(stored_path) as fh:
        stored = ResultTable.from_csv(fh.read())
    command = stored.metadata.get("command")
    if command not in _COMMANDS or command == "verify":
        raise ConfigError(f"stored table has no re-runnable command ({command!r})")
    # re-run into the configured output, then compare against the stored file
    paths = _COMMANDS[command](cfg)
    fresh = None
    for path in paths:
        with open(path) as fh:
            candidate = ResultTable.from_csv(fh.read())
        if [c for c in candidate.columns] == [tuple(c) for c in stored.columns]:
            fresh = candidate
            break
    if fresh is None:
        raise NumericalFailure("no regenerated table matches the stored schema")
    if len(fresh.rows) != len(stored.rows):
        raise NumericalFailure(
            f"row count changed: {len(stored.rows)} stored vs {len(fresh.rows)} fresh")
    worst = 0.0
    for i, (a, b) in enumerate(zip(stored.rows, fresh.rows)):
        for va, vb in zip(a, b):
            if isinstance(va, float) and isinstance(vb, float):
                if math.isnan(va) and math.isnan(vb):
                    continue
                err = abs(va - vb) / max(abs(va), abs(vb), 1e-300)
                worst = max(worst, err)
                if err > rtol:
                    raise NumericalFailure(
                        f"row {i}: {va!r} vs {vb!r} differ beyond rtol={rtol}")
            elif va != vb:
                raise NumericalFailure(f"row {i}: {va!r} != {vb!r}")
    print(f"verify OK: {len(stored.rows)} rows, worst relative error {worst:.3e}")
    return []


def _parallel_map(fn, items, n_workers: int):
    """Order-preserving parallel map; determinism is independent of n_workers."""
    if n_workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with concurrent.futures.ThreadPoolExecutor(max_workers=n_workers) as ex:
        return list(ex.map(fn, items))


_COMMANDS = {
    "potential-z": cmd_potential_z,
    "ground-sweep": cmd_ground_sweep,
    "lateral": cmd_lateral,
    "field-sweep": cmd_field_sweep,
    "growth": cmd_growth,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="neontrap",
        description="Electron trapping above finite-thickness solid neon layers")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        _common_flags(p)
    v = sub.add_parser("verify")
    _common_flags(v)
    v.add_argument("stored", help="previously written CSV table to re-check")
    v.add_argument("--rtol", type=float, default=1e-9)
    return parser


def _common_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", help="run configuration file (INI)")
    p.add_argument("--out", help="output path (overrides [output] path)")
    p.add_argument("--format", choices=("csv", "json"),
                   help="output format (overrides [output] format)")
    p.add_argument("--threads", type=int, help="worker count (overrides [parallel])")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else RunConfig()
        if args.out:
            cfg.out_path = args.out
        if args.format:
            cfg.out_format = args.format
        if args.threads is not None:
            if args.threads < 0:
                raise ConfigError("--threads must be >= 0")
            cfg.threads = args.threads
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        if args.command == "verify":
            cmd_verify(cfg, args.stored, args.rtol)
        else:
            paths = _COMMANDS[args.command](cfg)
            _write_effective_config(cfg)
            for path in paths:
                print(path)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (NumericalFailure, UnboundStateError, ValueError, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
