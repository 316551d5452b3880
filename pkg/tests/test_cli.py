"""Command-line contract: exit codes, header format, precision, determinism.

Everything runs in-process through ``main`` so coverage tools see it and the
tests stay fast; the slow wave-packet subcommand is exercised end to end by
the acceptance suite instead.
"""

import json
import math

import numpy as np
import pytest

from sltime.cli import main
from sltime.kard import as_model, decompose
from sltime.medium import Layer, load_stack, representative_cell
from sltime.resonance import fit_peak

STACK = "stacks/rep5.json"
OUT = Layer(9.5, 0.0, 0.067)


def _read_csv(path):
    return np.genfromtxt(path, delimiter=",", names=True, dtype=None,
                         encoding="utf8", skip_header=2)


def test_no_arguments_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_bad_figure_choice_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["playmodel", "--figure", "7"])
    assert exc.value.code == 2


def test_missing_stack_file_exits_3_and_names_path(capsys, tmp_path):
    code = main(["transmission", "--stack", str(tmp_path / "nope.json")])
    assert code == 3
    assert "nope.json" in capsys.readouterr().err


def test_unreachable_band_exits_4(capsys):
    code = main(["resonances", "--play", "--band", "2"])
    assert code == 4
    assert "band" in capsys.readouterr().err


def test_header_format_and_byte_identical_reruns(tmp_path):
    out = tmp_path / "sweep.csv"
    argv = ["transmission", "--stack", STACK, "--emin", "52", "--emax", "64",
            "--count", "50", "-o", str(out)]
    assert main(argv) == 0
    first = out.read_bytes()
    assert main(argv) == 0
    assert out.read_bytes() == first

    lines = first.decode().splitlines()
    assert lines[0] == "# sltime transmission v0.1.0"
    assert lines[1].startswith("# config: ")
    cfg = json.loads(lines[1][len("# config: "):])
    assert cfg["stack"] == STACK and cfg["count"] == 50
    assert lines[2] == "E_meV,T_N,env_min"
    assert len(lines) == 3 + 50


def test_csv_floats_round_trip_to_full_precision(tmp_path):
    out = tmp_path / "sweep.csv"
    main(["transmission", "--stack", STACK, "--emin", "53", "--emax", "63",
          "--count", "40", "-o", str(out)])
    data = _read_csv(out)
    model = as_model(representative_cell(), OUT)
    for row in data[::7]:
        E = float(row["E_meV"])
        p = decompose(model.matrix(E))
        t2 = 1.0 / (1.0 + math.sinh(p.mu) ** 2 * math.sin(5 * p.phi) ** 2)
        assert float(row["T_N"]) == t2  # 17 significant digits: exact


def test_transmission_shows_four_strong_peaks(tmp_path):
    out = tmp_path / "band1.csv"
    main(["transmission", "--stack", STACK, "--emin", "51.75", "--emax", "65.3",
          "--count", "2400", "-o", str(out)])
    d = _read_csv(out)
    T = d["T_N"]
    interior = (T[1:-1] > T[:-2]) & (T[1:-1] > T[2:]) & (T[1:-1] > 0.9)
    peaks = d["E_meV"][1:-1][interior]
    assert len(peaks) == 4
    assert peaks == pytest.approx([52.81, 55.86, 60.02, 63.80], abs=0.02)


def test_resonance_table_matches_direct_fit(tmp_path, rep_band):
    out = tmp_path / "res.csv"
    assert main(["resonances", "--stack", STACK, "-o", str(out)]) == 0
    d = _read_csv(out)
    kinds = list(d["kind"])
    assert kinds == ["peak"] * 4 + ["valley"] * 5
    fit = fit_peak(representative_cell(), OUT, 5, 1, band=rep_band)
    assert float(d["E_meV"][0]) == pytest.approx(fit.E_m, rel=1e-12)
    assert float(d["Gamma_meV"][0]) == pytest.approx(fit.Gamma_m, rel=1e-12)
    flags = [line.rsplit(",", 1)[1] for line in out.read_text().splitlines()[3:]
             if line.startswith("valley")]
    assert flags == ["true", "false", "false", "false", "true"]


def test_kard_sweep_classifies_gap_rows(tmp_path):
    out = tmp_path / "angles.csv"
    main(["kard", "--stack", STACK, "--emin", "40", "--emax", "70",
          "--count", "300", "-o", str(out)])
    d = _read_csv(out)
    forbidden = d["band"] == "forbidden"
    allowed = d["band"] == "allowed"
    assert forbidden.any() and allowed.any()
    assert np.isnan(d["mu"][forbidden]).all()
    assert np.isfinite(d["mu"][allowed]).all()
    assert np.all(np.abs(d["cos_phi"][forbidden]) > 1.0)


def test_phasetime_columns_and_envelope_ordering(tmp_path):
    out = tmp_path / "pt.csv"
    main(["phasetime", "--stack", STACK, "--count", "120", "-o", str(out)])
    d = _read_csv(out)
    assert d.dtype.names == ("E_meV", "T_N", "tau_ph_fs", "env_max_fs",
                             "env_min_fs", "bloch_fs")
    assert np.all(d["env_max_fs"] >= d["bloch_fs"])
    assert np.all(d["bloch_fs"] >= d["env_min_fs"])


def test_dwell_closed_form_tracks_quadrature(tmp_path):
    out = tmp_path / "dwell.csv"
    code = main(["dwell", "--stack", STACK, "--emin", "56", "--emax", "60",
                 "--count", "5", "-o", str(out)])
    assert code == 0
    d = _read_csv(out)
    assert np.allclose(d["tau_dwell_fs"], d["tau_numeric_fs"], rtol=1e-6)


def test_playmodel_figure_contract(tmp_path):
    out = tmp_path / "fig3.csv"
    assert main(["playmodel", "--figure", "3", "--count", "64", "-o", str(out)]) == 0
    d = _read_csv(out)
    assert d.dtype.names == ("E_meV", "tau_ph_fs", "env_max_fs", "env_min_fs", "T9")
    assert len(d) == 64


def test_arc_design_then_evaluate(tmp_path, capsys):
    dressed_path = tmp_path / "dressed.json"
    assert main(["arc", "design", "--stack", STACK, "-o", str(dressed_path)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["target_energy_meV"] == pytest.approx(57.8777907484534, rel=1e-9)
    assert summary["achieved_phi_a"] == pytest.approx(0.5 * math.pi, abs=1e-6)

    dressed = load_stack(dressed_path)
    assert dressed.left_arc is not None and dressed.right_arc is not None
    assert dressed.left_arc == dressed.right_arc

    # designing again from an already-dressed stack must be refused
    assert main(["arc", "design", "--stack", str(dressed_path),
                 "-o", str(tmp_path / "x.json")]) == 3

    eval_path = tmp_path / "eval.json"
    assert main(["arc", "evaluate", "--stack", str(dressed_path),
                 "-o", str(eval_path)]) == 0
    ev = json.loads(eval_path.read_text())
    assert ev["has_arcs"] is True
    assert ev["avg_T"] == pytest.approx(0.7940166790988143, rel=1e-9)
    assert ev["avg_T_core_only"] == pytest.approx(0.14476127374975292, rel=1e-9)
