"""Command-line front end: reproducible CSV/JSON sweeps over the library.

Every subcommand echoes its full configuration into the artifact header, so
a run is reconstructible from its output alone.  Numbers are printed with
17 significant digits (lossless float round-trip); identical configs give
byte-identical files.

Exit codes: 0 success, 2 usage, 3 bad input (files, ranges, stack schema),
4 numeric failure (band edges, divergences, lost packets).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import __version__
from .arc import (
    band_average_transmission,
    compose_with_arc,
    design_rule_of_thumb,
    stack_phase_time,
)
from .errors import NumericError, ValidationError
from .kard import Band, as_model, band_structure, decompose
from .medium import (
    EnergyGrid,
    StackSpec,
    load_stack,
    representative_stack,
    save_stack,
    stack_to_dict,
)
from .playmodel import PLAY_MODEL, play_eta, play_kard, play_matrix
from .resonance import approx_curves, fit_peak, fit_valley
from .scattering import dwell_time, smith_matrix
from .tdse import (
    evolve,
    free_reference,
    packet_delay,
    plan_run,
    spectral_average,
    stationary_packet_delay,
)
from .timing import bloch_time, free_time, timing_curve, transmission_sweep
from .tmatrix import amplitudes

#: Scan window wide enough to catch the first few minibands of any stack
#: this tool targets; band edges inside it are polished to 1e-12 meV.
_SCAN = (1.0, 300.0, 6000)


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    return str(v)


def _config_header(args: argparse.Namespace) -> list[str]:
    cfg = {
        k: v
        for k, v in vars(args).items()
        if k not in ("func", "command", "arc_command") and not callable(v)
    }
    name = args.command
    if getattr(args, "arc_command", None):
        name = f"{name} {args.arc_command}"
    blob = json.dumps(cfg, sort_keys=True, default=str)
    return [f"# sltime {name} v{__version__}", f"# config: {blob}"]


def _write_csv(
    out: str | None,
    header: list[str],
    columns: Sequence[str],
    rows: Iterable[Sequence],
) -> None:
    lines = list(header)
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    text = "\n".join(lines) + "\n"
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _write_json(out: str | None, payload: dict) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


# --- model/band plumbing shared by the sweep commands -----------------------

def _load_model(args) -> tuple[object, StackSpec | None, int]:
    """Resolve (cell model, stack or None, N) from --stack/--play flags."""
    if getattr(args, "play", False):
        n = args.N if getattr(args, "N", None) else 9
        return PLAY_MODEL, None, n
    stack = load_stack(args.stack)
    n = args.N if getattr(args, "N", None) else stack.replicas
    return as_model(stack.core, stack.outside), stack, n


def _pick_band(model, index: int) -> Band:
    bands = band_structure(model, grid=EnergyGrid.linear(*_SCAN))
    if len(bands) < index:
        raise NumericError(
            f"only {len(bands)} allowed band(s) in the {_SCAN[0]}-{_SCAN[1]} meV window, "
            f"band {index} requested"
        )
    return bands[index - 1]


def _grid_from_args(args, band: Band | None, default_count: int, margin: float = 5e-3) -> EnergyGrid:
    e_min, e_max = args.emin, args.emax
    if e_min is None or e_max is None:
        if band is None:
            raise ValidationError("--emin/--emax required when no band is available")
        lo, hi = band.interior(margin)
        e_min = lo if e_min is None else e_min
        e_max = hi if e_max is None else e_max
    count = args.count if args.count else default_count
    return EnergyGrid.linear(e_min, e_max, count)


# --- subcommands -------------------------------------------------------------

def _cmd_kard(args) -> None:
    model, _, _ = _load_model(args)
    if args.emin is None or args.emax is None:
        lo, hi = (PLAY_MODEL.band if args.play else (_SCAN[0], _SCAN[1]))
        args.emin = lo + 0.05 if args.emin is None else args.emin
        args.emax = hi - 0.05 if args.emax is None else args.emax
    grid = EnergyGrid.linear(args.emin, args.emax, args.count or 1200)
    rows = []
    prev = None
    for E in grid.samples:
        E = float(E)
        p = decompose(model.matrix(E), prev=prev)
        prev = p
        rows.append((E, 0.5 * model.trace(E), p.phi, p.mu, p.chi, p.band))
    _write_csv(args.output, _config_header(args),
               ["E_meV", "cos_phi", "phi", "mu", "chi", "band"], rows)


def _cmd_transmission(args) -> None:
    model, _, n = _load_model(args)
    if args.emin is None or args.emax is None:
        lo, hi = (PLAY_MODEL.band if args.play else (_SCAN[0], _SCAN[1]))
        args.emin = lo + 0.05 if args.emin is None else args.emin
        args.emax = hi - 0.05 if args.emax is None else args.emax
    grid = EnergyGrid.linear(args.emin, args.emax, args.count or 2400)
    sw = transmission_sweep(model, None, n, grid)
    rows = zip(sw.energies, sw.t2, sw.envelope)
    _write_csv(args.output, _config_header(args), ["E_meV", "T_N", "env_min"], rows)


def _cmd_phasetime(args) -> None:
    model, _, n = _load_model(args)
    band = _pick_band(model, args.band)
    grid = _grid_from_args(args, band, default_count=800)
    curve = timing_curve(model, None, n, grid, band=band, h=args.h)
    rows = zip(curve.energies, curve.t2, curve.tau_ph, curve.env_max,
               curve.env_min, curve.tau_bloch_total)
    _write_csv(args.output, _config_header(args),
               ["E_meV", "T_N", "tau_ph_fs", "env_max_fs", "env_min_fs", "bloch_fs"],
               rows)


def _cmd_dwell(args) -> None:
    stack = load_stack(args.stack)
    model = as_model(stack.core, stack.outside)
    band = _pick_band(model, args.band)
    grid = _grid_from_args(args, band, default_count=160)
    rows = []
    for E in grid.samples:
        E = float(E)
        r = dwell_time(stack, E, x_left=args.xl, x_right=args.xr, h=args.h or 1e-3)
        q = smith_matrix(stack, E, h=args.h or 1e-3)
        rows.append((E, r.dwell_time, r.oscillatory_term, r.tau_numeric, q.tau11))
    _write_csv(args.output, _config_header(args),
               ["E_meV", "tau_dwell_fs", "tau_osc_fs", "tau_numeric_fs", "tau11_fs"],
               rows)


def _cmd_resonances(args) -> None:
    model, _, n = _load_model(args)
    band = _pick_band(model, args.band)
    peaks = [fit_peak(model, None, n, m, band=band, h=args.h) for m in range(1, n)]
    valleys = [fit_valley(model, None, n, p, band=band, h=args.h) for p in range(n)]
    rows = []
    for pk in peaks:
        rows.append(("peak", pk.m, pk.E_m, pk.Gamma_m, pk.b_m, math.nan, pk.tau_peak, False))
    for vl in valleys:
        rows.append(("valley", vl.p, vl.E_p, vl.Gamma_p, vl.C_p, vl.D_p,
                     vl.tau_valley, vl.edge_degraded))
    _write_csv(args.output, _config_header(args),
               ["kind", "index", "E_meV", "Gamma_meV", "b_or_C", "D", "tau_fs",
                "edge_degraded"], rows)
    if args.curves:
        grid = _grid_from_args(args, band, default_count=1600)
        ap = approx_curves(model, None, n, band, grid, h=args.h)
        _write_csv(args.curves, _config_header(args),
                   ["E_meV", "T_approx", "tau_approx_fs"],
                   zip(ap.energies, ap.t2, ap.tau_ph))


# --- play-model figure sweeps ------------------------------------------------

def _play_band() -> Band:
    return _pick_band(PLAY_MODEL, 1)


def _eta_n(grid: np.ndarray, n: int) -> np.ndarray:
    """Unwrapped N-cell transmission phase, anchored to N pi/2 at band center."""
    amps = [amplitudes(play_matrix(float(E)).power(n)).t for E in grid]
    eta = np.unwrap(np.angle(amps))
    i0 = int(np.argmin(np.abs(grid - PLAY_MODEL.e_bragg)))
    eta += 2.0 * math.pi * round((0.5 * n * math.pi - eta[i0]) / (2.0 * math.pi))
    return eta


def _play_figure(figure: int, count: int):
    band = _play_band()
    # Margin clears the 5-point derivative stencil (2h = 0.05 meV) at both ends.
    lo, hi = band.interior(5e-3)
    n = 9
    if figure == 1:
        grid = np.linspace(lo, hi, count)
        rows = []
        for E in grid:
            p = play_kard(float(E))
            rows.append((E, math.cos(p.phi), p.phi / (0.5 * math.pi),
                         play_eta(float(E)) / (0.5 * math.pi)))
        return ["E_meV", "cos_phi", "phi_halfpi", "eta_halfpi"], rows
    if figure == 2:
        grid = EnergyGrid.linear(lo, hi, count)
        one = transmission_sweep(PLAY_MODEL, None, 1, grid)
        nine = transmission_sweep(PLAY_MODEL, None, n, grid)
        return (["E_meV", "T_1", "T_9", "env_min"],
                zip(grid.samples, one.t2, nine.t2, nine.envelope))
    if figure == 3:
        grid = EnergyGrid.linear(lo, hi, count)
        curve = timing_curve(PLAY_MODEL, None, n, grid, band=band)
        return (["E_meV", "tau_ph_fs", "env_max_fs", "env_min_fs", "T9"],
                zip(curve.energies, curve.tau_ph, curve.env_max, curve.env_min,
                    curve.t2))
    if figure == 4:
        grid = np.linspace(lo, PLAY_MODEL.e_bragg, count)
        eta = _eta_n(grid, n)
        rows = []
        for E, e9 in zip(grid, eta):
            p = play_kard(float(E))
            rows.append((E, n * p.phi / math.pi, e9 / math.pi))
        return ["E_meV", "Nphi_over_pi", "eta9_over_pi"], rows
    if figure == 5:
        grid = EnergyGrid.linear(lo, hi, count)
        nine = transmission_sweep(PLAY_MODEL, None, n, grid)
        ap = approx_curves(PLAY_MODEL, None, n, band, grid)
        return (["E_meV", "T_9", "T_approx"],
                zip(grid.samples, nine.t2, ap.t2))
    if figure == 6:
        grid = EnergyGrid.linear(lo, hi, count)
        curve = timing_curve(PLAY_MODEL, None, n, grid, band=band)
        ap = approx_curves(PLAY_MODEL, None, n, band, grid)
        return (["E_meV", "tau_ph_fs", "tau_approx_fs", "env_max_fs"],
                zip(curve.energies, curve.tau_ph, ap.tau_ph, curve.env_max))
    raise ValidationError(f"playmodel has figures 1-6, got {figure}")


def _cmd_playmodel(args) -> None:
    columns, rows = _play_figure(args.figure, args.count or 1200)
    _write_csv(args.output, _config_header(args), columns, rows)


# --- arc ----------------------------------------------------------------------

def _cmd_arc_design(args) -> None:
    stack = load_stack(args.stack)
    if stack.left_arc is not None or stack.right_arc is not None:
        raise ValidationError("stack already carries end cells; design from the bare core")
    band = _pick_band(as_model(stack.core, stack.outside), args.band)
    design = design_rule_of_thumb(stack.core, stack.outside, band)
    dressed = dataclasses.replace(stack, left_arc=design.arc_cell, right_arc=design.arc_cell)
    save_stack(dressed, args.output)
    _write_json("-", {
        "written": str(args.output),
        "target_energy_meV": design.target_energy,
        "achieved_phi_a": design.achieved_phi_a,
        "achieved_mu_a": design.achieved_mu_a,
        "arc_cell": stack_to_dict(dressed)["left_arc"],
    })


def _cmd_arc_evaluate(args) -> None:
    stack = load_stack(args.stack)
    band = _pick_band(as_model(stack.core, stack.outside), args.band)
    bare = dataclasses.replace(stack, left_arc=None, right_arc=None)
    grid = EnergyGrid.linear(*band.interior(1e-6), args.count or 2048)
    summary = {
        "band_lower_meV": band.lower,
        "band_upper_meV": band.upper,
        "avg_T": band_average_transmission(stack, band, grid),
        "avg_T_core_only": band_average_transmission(bare, band, grid),
        "has_arcs": stack.left_arc is not None,
    }
    _write_json(args.output, summary)
    if args.csv:
        rows = []
        for E in grid.samples:
            E = float(E)
            t_bare = abs(amplitudes(compose_with_arc(bare, E)).t) ** 2
            t_full = abs(amplitudes(compose_with_arc(stack, E)).t) ** 2
            rows.append((E, t_bare, t_full))
        _write_csv(args.csv, _config_header(args), ["E_meV", "T_core", "T_stack"], rows)


# --- tdse ----------------------------------------------------------------------

def _tdse_predictions(stack: StackSpec, packet, band: Band, x_sep, x_d, t_max) -> dict:
    lo, hi = band.interior(5e-3)
    curve = timing_curve(stack.core, stack.outside, stack.replicas,
                         EnergyGrid.linear(lo, hi, 1200), band=band)
    bloch = spectral_average(curve.energies, curve.tau_bloch_total, packet, stack.outside)
    packet_pred = stationary_packet_delay(stack, packet, x_sep, x_d, t_max)
    return {"bloch_spectral_fs": bloch, "stationary_packet_fs": packet_pred}


def _cmd_tdse(args) -> None:
    stack = load_stack(args.stack)
    band = _pick_band(as_model(stack.core, stack.outside), 1)
    grid, packet, x_sep, x_d = plan_run(
        stack, args.E0, sigma_x=args.sigma_x, dx=args.dx, dt=args.dt,
        extra_time=args.extra_time,
    )
    if args.x_detector is not None:
        if args.x_detector <= x_sep:
            raise ValidationError(
                f"detector at {args.x_detector} nm must sit beyond the stack "
                f"separator at {x_sep} nm"
            )
        x_d = args.x_detector

    run = evolve(stack, grid, packet, x_sep=x_sep)
    free = evolve(free_reference(stack), grid, packet, x_sep=x_sep)
    result = packet_delay(run, x_d, free)
    preds = _tdse_predictions(stack, packet, band, x_sep, x_d, grid.n_steps * grid.dt)

    series_path = f"{args.output}_series.csv"
    rows = zip(run.times, run.beyond_prob, run.centroid,
               free.beyond_prob, free.centroid)
    _write_csv(series_path, _config_header(args),
               ["t_fs", "beyond_prob", "centroid_nm", "beyond_prob_free",
                "centroid_free_nm"], rows)
    summary = {
        "E0_meV": args.E0,
        "sigma_x_nm": args.sigma_x,
        "dx_nm": args.dx,
        "dt_fs": args.dt,
        "x_separator_nm": x_sep,
        "x_detector_nm": x_d,
        "arrival_detected_fs": result.arrival_detected,
        "arrival_free_fs": result.arrival_free,
        "delay_fs": result.delay,
        "transmitted_fraction": result.transmitted_fraction,
        "norm_drift": run.norm_drift,
        "energy_drift_rel": run.energy_drift,
        "predictions": preds,
        "series": series_path,
    }
    _write_json(f"{args.output}_summary.json", summary)
    _write_json("-", summary)


# --- reproduce ------------------------------------------------------------------

def _rep5_refined_grid(band: Band, peaks) -> EnergyGrid:
    lo, hi = band.interior(5e-3)
    base = np.linspace(lo, hi, 1600)
    pieces = [base]
    for pk in peaks:
        local = np.arange(pk.E_m - 3 * pk.Gamma_m, pk.E_m + 3 * pk.Gamma_m,
                          pk.Gamma_m / 40.0)
        pieces.append(local[(local > lo) & (local < hi)])
    return EnergyGrid(np.unique(np.concatenate(pieces)))


def _cmd_reproduce(args) -> None:
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    k = args.figure
    header = _config_header(args)
    if k <= 6:
        columns, rows = _play_figure(k, args.count or 1200)
        _write_csv(str(outdir / f"fig{k}.csv"), header, columns, rows)
        return

    stack = representative_stack()
    model = as_model(stack.core, stack.outside)
    band = _pick_band(model, 1)
    n = stack.replicas
    if k in (7, 8):
        peaks = [fit_peak(model, None, n, m, band=band) for m in range(1, n)]
        grid = _rep5_refined_grid(band, peaks)
        curve = timing_curve(model, None, n, grid, band=band)
        if k == 7:
            _write_csv(str(outdir / "fig7.csv"), header,
                       ["E_meV", "T_N", "tau_ph_fs", "env_max_fs", "env_min_fs",
                        "bloch_fs"],
                       zip(curve.energies, curve.t2, curve.tau_ph, curve.env_max,
                           curve.env_min, curve.tau_bloch_total))
        else:
            ap = approx_curves(model, None, n, band, grid)
            _write_csv(str(outdir / "fig8.csv"), header,
                       ["E_meV", "tau_ph_fs", "tau_approx_fs", "T_N", "T_approx"],
                       zip(curve.energies, curve.tau_ph, ap.tau_ph, curve.t2, ap.t2))
        return

    # Figure 9: the wave-packet experiment on the ARC-terminated array.
    design = design_rule_of_thumb(stack.core, stack.outside, band)
    dressed = dataclasses.replace(stack, left_arc=design.arc_cell,
                                  right_arc=design.arc_cell)
    curve_grid = EnergyGrid.linear(*band.interior(5e-3), 400)
    curve_rows = []
    for E in curve_grid.samples:
        E = float(E)
        t_full = abs(amplitudes(compose_with_arc(dressed, E)).t) ** 2
        curve_rows.append((
            E, t_full, stack_phase_time(dressed, E),
            n * bloch_time(model, None, E, band=band),
            free_time(dressed.width, E, dressed.outside),
        ))
    _write_csv(str(outdir / "fig9_curve.csv"), header,
               ["E_meV", "T_stack", "tau_ph_fs", "bloch_fs", "free_fs"], curve_rows)

    point_rows = []
    for e0 in (57.0, 58.5, 60.0):
        grid, packet, x_sep, x_d = plan_run(dressed, e0, sigma_x=args.sigma_x)
        run = evolve(dressed, grid, packet, x_sep=x_sep)
        free = evolve(free_reference(dressed), grid, packet, x_sep=x_sep)
        result = packet_delay(run, x_d, free)
        preds = _tdse_predictions(dressed, packet, band, x_sep, x_d,
                                  grid.n_steps * grid.dt)
        point_rows.append((e0, result.delay, preds["bloch_spectral_fs"],
                           preds["stationary_packet_fs"],
                           result.transmitted_fraction))
    _write_csv(str(outdir / "fig9_points.csv"), header,
               ["E0_meV", "delay_fs", "bloch_avg_fs", "packet_pred_fs",
                "transmitted_fraction"], point_rows)


# --- parser --------------------------------------------------------------------

def _add_model_flags(p: argparse.ArgumentParser, play_ok: bool = True) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--stack", help="stack JSON file")
    if play_ok:
        src.add_argument("--play", action="store_true",
                         help="use the closed-form single-band model")
    p.add_argument("--N", type=int, default=None,
                   help="number of cells (default: stack replicas, or 9 for --play)")


def _add_sweep_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--emin", type=float, default=None, help="sweep start (meV)")
    p.add_argument("--emax", type=float, default=None, help="sweep end (meV)")
    p.add_argument("--count", type=int, default=None, help="number of samples")
    p.add_argument("--band", type=int, default=1, help="allowed-band index (1-based)")
    p.add_argument("--h", type=float, default=None,
                   help="finite-difference step override (meV)")
    p.add_argument("-o", "--output", default=None, help="CSV path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sltime",
        description="transmission, band-structure, and traversal-time sweeps "
                    "for finite superlattices",
    )
    parser.add_argument("--version", action="version", version=f"sltime {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kard", help="single-cell angles (phi, mu, chi) vs energy")
    _add_model_flags(p)
    _add_sweep_flags(p)
    p.set_defaults(func=_cmd_kard)

    p = sub.add_parser("transmission", help="N-cell transmission sweep")
    _add_model_flags(p)
    _add_sweep_flags(p)
    p.set_defaults(func=_cmd_transmission)

    p = sub.add_parser("phasetime", help="phase time with envelopes and Bloch time")
    _add_model_flags(p)
    _add_sweep_flags(p)
    p.set_defaults(func=_cmd_phasetime)

    p = sub.add_parser("dwell", help="dwell-time decomposition over a window")
    p.add_argument("--stack", required=True, help="stack JSON file")
    _add_sweep_flags(p)
    p.add_argument("--xl", type=float, default=None, help="window left edge (nm)")
    p.add_argument("--xr", type=float, default=None, help="window right edge (nm)")
    p.set_defaults(func=_cmd_dwell)

    p = sub.add_parser("resonances", help="peak/valley fit tables")
    _add_model_flags(p)
    _add_sweep_flags(p)
    p.add_argument("--curves", default=None,
                   help="also write the piecewise approximation sweep here")
    p.set_defaults(func=_cmd_resonances)

    p = sub.add_parser("playmodel", help="closed-form model figure sweeps")
    p.add_argument("--figure", type=int, required=True, choices=[1, 2, 3, 4, 5, 6])
    p.add_argument("--count", type=int, default=None)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_playmodel)

    p = sub.add_parser("arc", help="anti-reflection end-cell design/evaluation")
    arcsub = p.add_subparsers(dest="arc_command", required=True)
    d = arcsub.add_parser("design", help="design matching end cells for a bare stack")
    d.add_argument("--stack", required=True)
    d.add_argument("--band", type=int, default=1)
    d.add_argument("-o", "--output", required=True, help="dressed stack JSON path")
    d.set_defaults(func=_cmd_arc_design)
    e = arcsub.add_parser("evaluate", help="band-average transmission with/without end cells")
    e.add_argument("--stack", required=True)
    e.add_argument("--band", type=int, default=1)
    e.add_argument("--count", type=int, default=None)
    e.add_argument("--csv", default=None, help="also write a T(E) sweep here")
    e.add_argument("-o", "--output", default=None, help="JSON summary path (default stdout)")
    e.set_defaults(func=_cmd_arc_evaluate)

    p = sub.add_parser("tdse", help="wave-packet run with delay extraction")
    p.add_argument("--stack", required=True)
    p.add_argument("--E0", type=float, required=True, help="packet central energy (meV)")
    p.add_argument("--sigma-x", type=float, default=60.0, help="packet width (nm)")
    p.add_argument("--dx", type=float, default=0.25, help="grid spacing (nm)")
    p.add_argument("--dt", type=float, default=1.0, help="time step (fs)")
    p.add_argument("--x-detector", type=float, default=None,
                   help="centroid detector position (nm; default from planner)")
    p.add_argument("--extra-time", type=float, default=0.0,
                   help="extend the run window (fs); needed at narrow resonances")
    p.add_argument("-o", "--output", default="tdse_run",
                   help="artifact prefix (writes PREFIX_series.csv, PREFIX_summary.json)")
    p.set_defaults(func=_cmd_tdse)

    p = sub.add_parser("reproduce", help="emit the CSVs behind one of the nine figures")
    p.add_argument("--figure", type=int, required=True,
                   choices=[1, 2, 3, 4, 5, 6, 7, 8, 9])
    p.add_argument("--count", type=int, default=None)
    p.add_argument("--sigma-x", type=float, default=90.0,
                   help="packet width for figure 9 (nm)")
    p.add_argument("--outdir", default="figures")
    p.set_defaults(func=_cmd_reproduce)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
