"""Command-line front end: reproducible CSV datasets for every calculator.

Subcommands: sweep-drive, transit, bistability, qfunc, trap, force.
Exit codes: 0 success, 1 numerical failure, 2 usage/config error.

Drive convention used everywhere: n_drive = (E/kappa)^2, the intracavity
photon number of a resonant empty cavity; the semiclassical x axis is
aligned through n_drive = m0 x^2.  Every output file carries a '#' comment
header with the full resolved parameter set, so re-running with the header
values (and seed) reproduces the file byte for byte.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace

import numpy as np

from . import __version__
from .chipcalc import coupling_figures, thermal_tuning, u_trap
from .constants import GAUSS, GAUSS_PER_CM, M_CS
from .hilbert import partial_trace_atom
from .lindblad import SystemParams
from .observables import (count_statistics, dipole_force, heterodyne_amplitude,
                          husimi_q, mean_photon_number)
from .bistability import ob_curve
from .steady import SteadyStateError, solve_auto
from .transit import (ModeProfile, mode_psi, mode_psi_gradient, simple_kick,
                      transit_trace, velocity_kick)

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_USAGE = 2


@dataclass
class RunConfig:
    """Sweep/transit configuration; frequencies are nu/2pi in GHz."""

    g0_ghz: float = 17.0
    kappa_ghz: float = 4.4
    gamma_perp_ghz: float = 2.6e-3
    delta_ghz: float = 10.0
    theta_ghz: float = 10.0
    n_drive: float = 2.0
    drive_min: float = 1e-2
    drive_max: float = 80.0
    drive_points: int = 30
    velocity: float = 2.5e-2          # m/s
    bin_dt: float = 1e-6              # s
    window: float = 10e-6             # s
    mode_fwhm: float = 225e-9         # m
    peak_coupling: float = 1.0
    qfunc_points: int = 161
    z_points: int = 81
    current: float = 1.0              # A
    bias_gauss: float = 10.0          # G
    delta_temp: float = 1e-2          # K
    seed: int = 0
    nmax_cap: int = 400
    jobs: int = 1
    out: str = "-"

    def params(self) -> SystemParams:
        return SystemParams.from_ghz(
            g0=self.g0_ghz, kappa=self.kappa_ghz, gamma_perp=self.gamma_perp_ghz,
            delta=self.delta_ghz, theta=self.theta_ghz,
        ).with_drive_photons(self.n_drive)


def _fmt(v) -> str:
    if isinstance(v, float):
        return "%.12g" % v
    return str(v)


def _header_lines(cfg: RunConfig, extra: dict | None = None) -> list[str]:
    lines = [f"# pbgsim v{__version__}",
             "# drive axis convention: n_drive = (E/kappa)^2 "
             "(empty resonant-cavity photons); semiclassical axis n_drive = m0 x^2",
             "# mode width convention: mode_fwhm is the FWHM of psi(z)"]
    for k, v in asdict(cfg).items():
        if k == "out":   # not a physics parameter; keeps reruns byte-identical
            continue
        lines.append(f"# {k} = {_fmt(v)}")
    for k, v in (extra or {}).items():
        lines.append(f"# {k} = {_fmt(v)}")
    return lines


def _write_csv(path: str, header: list[str], columns: list[str],
               rows: list[list]) -> None:
    text = "\n".join(header) + "\n" + ",".join(columns) + "\n"
    text += "\n".join(",".join(_fmt(v) for v in row) for row in rows)
    text += "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _n_jobs(cfg: RunConfig) -> int:
    cap = os.environ.get("PBGSIM_MAX_WORKERS")
    jobs = cfg.jobs
    if cap is not None:
        jobs = min(jobs, max(1, int(cap)))
    return max(1, jobs)


def _parallel_map(fn, items, jobs: int):
    if jobs <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _sweep_point(args):
    cfg_dict, n_drive = args
    cfg = RunConfig(**cfg_dict)
    p = cfg.params().with_drive_photons(n_drive)
    rho = solve_auto(p, nmax_cap=cfg.nmax_cap)
    stats = count_statistics(rho, p.kappa, 1.0)
    n_atom = mean_photon_number(rho)
    fano = stats.fano if stats.mean_counts > 0 else math.nan
    n_empty = n_drive * p.kappa ** 2 / (p.kappa ** 2 + p.theta ** 2)
    return n_atom, n_empty, fano


def cmd_sweep_drive(cfg: RunConfig) -> int:
    if cfg.drive_min <= 0 or cfg.drive_max < cfg.drive_min or cfg.drive_points < 1:
        print("invalid drive grid", file=sys.stderr)
        return EXIT_USAGE
    grid = np.logspace(math.log10(cfg.drive_min), math.log10(cfg.drive_max),
                       cfg.drive_points)
    p = cfg.params()
    quantum = _parallel_map(_sweep_point,
                            [(asdict(cfg), float(nd)) for nd in grid],
                            _n_jobs(cfg))
    figs = coupling_figures(p.g0, p.kappa, p.gamma_perp)
    xs = np.sqrt(grid / figs.m0)
    curve = ob_curve(list(xs), p)
    rows = []
    for nd, (n_atom, n_empty, fano), (x, roots) in zip(grid, quantum,
                                                       curve.branches):
        sc = [b.n_photons for b in roots]
        st = [int(b.stable) for b in roots]
        sc += [math.nan] * (3 - len(sc))
        st += [-1] * (3 - len(st))
        rows.append([float(nd), n_atom, n_empty, fano,
                     sc[0], st[0], sc[1], st[1], sc[2], st[2]])
    hdr = _header_lines(cfg, {
        "bistable_intervals_n_drive": ";".join(
            f"[{figs.m0 * a * a:.9g},{figs.m0 * b * b:.9g}]"
            for a, b in curve.bistable_intervals),
    })
    _write_csv(cfg.out, hdr,
               ["n_drive", "n_photons_atom", "n_photons_empty", "fano_atom",
                "sc_n_1", "sc_stable_1", "sc_n_2", "sc_stable_2",
                "sc_n_3", "sc_stable_3"], rows)
    return EXIT_OK


def cmd_transit(cfg: RunConfig) -> int:
    p = cfg.params()
    profile = ModeProfile(width=cfg.mode_fwhm)
    trace = transit_trace(p, cfg.velocity, cfg.bin_dt, cfg.window,
                          profile=profile, seed=cfg.seed,
                          peak_coupling=cfg.peak_coupling)
    if trace.n_failed:
        print(f"{trace.n_failed} transit bins failed to solve", file=sys.stderr)
        return EXIT_NUMERICAL
    rows = [[t, e, s, smp, c] for t, e, s, smp, c in
            zip(trace.times, trace.expected, trace.sigma, trace.sampled,
                trace.coupling)]
    _write_csv(cfg.out, _header_lines(cfg),
               ["t_s", "expected_counts_per_bin", "sigma_counts_per_bin",
                "sampled_counts_per_bin", "coupling_frac"], rows)
    return EXIT_OK


def cmd_bistability(cfg: RunConfig) -> int:
    p = cfg.params()
    figs = coupling_figures(p.g0, p.kappa, p.gamma_perp)
    grid = np.logspace(math.log10(cfg.drive_min), math.log10(cfg.drive_max),
                       cfg.drive_points)
    xs = np.sqrt(grid / figs.m0)
    curve = ob_curve(list(xs), p)
    rows = []
    for (x, roots), nd in zip(curve.branches, curve.n_drive):
        for b in roots:
            rows.append([x, float(nd), b.y, b.n_photons, int(b.stable),
                         len(roots)])
    hdr = _header_lines(cfg, {
        "m0": figs.m0, "N0": figs.n0,
        "bistable_intervals_n_drive": ";".join(
            f"[{figs.m0 * a * a:.9g},{figs.m0 * b * b:.9g}]"
            for a, b in curve.bistable_intervals),
    })
    _write_csv(cfg.out, hdr,
               ["x", "n_drive", "y", "n_photons", "stable", "n_roots"], rows)
    return EXIT_OK


def cmd_qfunc(cfg: RunConfig) -> int:
    p = cfg.params()
    rho = solve_auto(p, nmax_cap=cfg.nmax_cap)
    rho_f = partial_trace_atom(rho)
    nbar = mean_photon_number(rho_f)
    radius = 4.0 * math.sqrt(nbar + 1.0)
    grid = husimi_q(rho_f, radius=radius, n_points=cfg.qfunc_points)
    rows = []
    for iy, ai in enumerate(grid.alpha_im):
        for ix, ar in enumerate(grid.alpha_re):
            rows.append([float(ar), float(ai), float(grid.values[iy, ix])])
    _write_csv(cfg.out, _header_lines(cfg, {
        "grid_radius": radius, "normalization": grid.normalization(),
        "n_local_maxima": len(grid.local_maxima()),
    }), ["alpha_re", "alpha_im", "q_value"], rows)
    return EXIT_OK


def cmd_trap(cfg: RunConfig) -> int:
    geom = u_trap(cfg.current, cfg.bias_gauss * GAUSS)
    p = cfg.params()
    figs = coupling_figures(p.g0, p.kappa, p.gamma_perp)
    rows = [[cfg.current, cfg.bias_gauss, geom.height * 1e6,
             geom.gradient / GAUSS_PER_CM,   # T/m -> G/cm
             figs.m0, figs.n0, thermal_tuning(cfg.delta_temp)]]
    _write_csv(cfg.out, _header_lines(cfg),
               ["current_A", "bias_field_G", "height_um", "gradient_G_per_cm",
                "m0", "N0", "thermal_tuning_Hz"], rows)
    return EXIT_OK


def cmd_force(cfg: RunConfig) -> int:
    p = cfg.params()
    profile = ModeProfile(width=cfg.mode_fwhm)
    zs = np.linspace(-3 * profile.sigma, 3 * profile.sigma, cfg.z_points)
    rows = []
    max_acc = 0.0
    for z in zs:
        psi = float(mode_psi(z, profile))
        grad = p.g0 * float(mode_psi_gradient(z, profile))
        rho = solve_auto(p.with_psi(psi), nmax_cap=cfg.nmax_cap)
        f = dipole_force(rho, grad)
        acc = abs(f) / M_CS
        max_acc = max(max_acc, acc)
        rows.append([float(z), psi, grad, f, f / M_CS])
    kick = velocity_kick(max_acc * M_CS, profile.width / 2.0, M_CS)
    _write_csv(cfg.out, _header_lines(cfg, {
        "max_acceleration_m_s2": max_acc,
        "velocity_kick_m_s": kick,
        "simple_kick_m_s": simple_kick(p.g0, M_CS),
    }), ["z_m", "coupling_frac", "g_gradient_rad_s_per_m", "force_N",
         "acceleration_m_s2"], rows)
    return EXIT_OK


_COMMANDS = {
    "sweep-drive": cmd_sweep_drive,
    "transit": cmd_transit,
    "bistability": cmd_bistability,
    "qfunc": cmd_qfunc,
    "trap": cmd_trap,
    "force": cmd_force,
}


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pbgsim",
                                 description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", default=None,
                        help="JSON file with RunConfig keys; flags override")
        sp.add_argument("--out", default=None, help="output CSV path ('-' = stdout)")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--detunings", default=None, metavar="GHZ,GHZ",
                        help="delta,theta as nu/2pi in GHz")
        sp.add_argument("--nmax-cap", type=int, default=None)
        sp.add_argument("--jobs", type=int, default=None)
        sp.add_argument("--n-drive", type=float, default=None)
        sp.add_argument("--drive-min", type=float, default=None)
        sp.add_argument("--drive-max", type=float, default=None)
        sp.add_argument("--drive-points", type=int, default=None)
        sp.add_argument("--velocity", type=float, default=None)
        sp.add_argument("--bin-dt", type=float, default=None)
        sp.add_argument("--window", type=float, default=None)
        sp.add_argument("--mode-fwhm", type=float, default=None)
        sp.add_argument("--peak-coupling", type=float, default=None)
        sp.add_argument("--g0", type=float, default=None, dest="g0_ghz")
        sp.add_argument("--kappa", type=float, default=None, dest="kappa_ghz")
        sp.add_argument("--gamma-perp", type=float, default=None,
                        dest="gamma_perp_ghz")
        sp.add_argument("--current", type=float, default=None)
        sp.add_argument("--bias-gauss", type=float, default=None)
        sp.add_argument("--delta-temp", type=float, default=None)
        sp.add_argument("--qfunc-points", type=int, default=None)
        sp.add_argument("--z-points", type=int, default=None)
    return ap


_FLAG_TO_FIELD = {
    "out": "out", "seed": "seed", "nmax_cap": "nmax_cap", "jobs": "jobs",
    "n_drive": "n_drive", "drive_min": "drive_min", "drive_max": "drive_max",
    "drive_points": "drive_points", "velocity": "velocity", "bin_dt": "bin_dt",
    "window": "window", "mode_fwhm": "mode_fwhm",
    "peak_coupling": "peak_coupling", "g0_ghz": "g0_ghz",
    "kappa_ghz": "kappa_ghz", "gamma_perp_ghz": "gamma_perp_ghz",
    "current": "current", "bias_gauss": "bias_gauss",
    "delta_temp": "delta_temp", "qfunc_points": "qfunc_points",
    "z_points": "z_points",
}


def _resolve_config(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if ns.config:
        with open(ns.config) as fh:
            data = json.load(fh)
        unknown = set(data) - set(asdict(cfg))
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        cfg = replace(cfg, **data)
    overrides = {}
    for flag, fld in _FLAG_TO_FIELD.items():
        val = getattr(ns, flag, None)
        if val is not None:
            overrides[fld] = val
    if ns.detunings is not None:
        try:
            d, t = (float(x) for x in ns.detunings.split(","))
        except ValueError as exc:
            raise ValueError(f"bad --detunings {ns.detunings!r}") from exc
        overrides["delta_ghz"] = d
        overrides["theta_ghz"] = t
    return replace(cfg, **overrides)


def main(argv=None) -> int:
    ap = _build_parser()
    ns = ap.parse_args(argv)
    try:
        cfg = _resolve_config(ns)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[ns.command](cfg)
    except (SteadyStateError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
