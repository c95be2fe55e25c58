"""Command-line surface: artifacts, determinism, option precedence."""

import json

import pytest

from blowlab import acceptance, cli
from blowlab.errors import DomainError
from blowlab.norms import RadialProfile, write_profile_csv


@pytest.fixture()
def outdir(tmp_path, monkeypatch):
    target = tmp_path / "artifacts"
    monkeypatch.setenv("BLOWLAB_OUTDIR", str(target))
    return target


def read_rows(path):
    lines = path.read_text().splitlines()
    body = [l for l in lines if not l.startswith("#")]
    meta = dict(l[2:].split(" = ", 1) for l in lines if l.startswith("#"))
    return body[0].split(","), [l.split(",") for l in body[1:]], meta


def test_presets_mirror_the_acceptance_registry():
    assert set(cli.PRESETS) == set(acceptance.REGISTRY)
    criteria = sorted((p.criterion for p in cli.PRESETS.values()),
                      key=lambda c: int(c[1:]))
    assert criteria == [f"C{i}" for i in range(1, 13)]
    for name, preset in cli.PRESETS.items():
        assert preset.name == name
        assert acceptance.REGISTRY[name][0] == preset.criterion


def test_constants_output(outdir, capsys):
    assert cli.main(["constants", "--alpha", "2", "--d", "5", "--p", "3"]) == 0
    out = capsys.readouterr().out
    assert "s = 1.4142136" in out
    assert "K = 0.531923" in out
    header, rows, meta = read_rows(outdir / "constants.csv")
    assert header == ["alpha", "d", "p", "s", "morrey_norm"]
    assert rows[0][0] == "2.0" and rows[0][1] == "5"
    assert {"K", "q", "sigma_d"} <= set(meta)


def test_config_file_precedence(outdir, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults for a constants run\np = 4\n")
    assert cli.main(["constants", "--config", str(cfg),
                     "--alpha", "2", "--d", "5"]) == 0
    _, rows, _ = read_rows(outdir / "constants.csv")
    assert rows[0][2] == "4.0"                  # config fills the gap
    assert cli.main(["constants", "--config", str(cfg),
                     "--alpha", "2", "--d", "5", "--p", "3"]) == 0
    _, rows, _ = read_rows(outdir / "constants.csv")
    assert rows[0][2] == "3.0"                  # explicit flag wins


def test_kernel_dump(outdir, capsys):
    assert cli.main(["kernel", "--kind", "gaussian", "--t", "1.0"]) == 0
    out = capsys.readouterr().out
    mass = float(next(l for l in out.splitlines()
                      if l.startswith("mass = ")).split(" = ")[1])
    assert abs(mass - 1.0) < 1e-12
    header, rows, meta = read_rows(outdir / "kernel.csv")
    assert header == ["x", "value"]
    assert len(rows) == 1024
    assert meta["kind"] == "gaussian_like"


def test_kernel_radial_profile(outdir):
    assert cli.main(["kernel", "--radial", "--kind", "fractional",
                     "--alpha", "1.0", "--d", "3"]) == 0
    header, rows, _ = read_rows(outdir / "kernel_profile.csv")
    assert header == ["rho", "R"]
    assert len(rows) == 501


def test_kernel_radial_needs_fractional(outdir, capsys):
    assert cli.main(["kernel", "--radial", "--kind", "gaussian"]) == 2
    assert "error:" in capsys.readouterr().err


def test_sweep_is_byte_deterministic(tmp_path, monkeypatch):
    blobs = []
    for sub in ("one", "two"):
        monkeypatch.setenv("BLOWLAB_OUTDIR", str(tmp_path / sub))
        assert cli.main(["sweep-K", "--alpha", "2", "--p", "3",
                         "--d", "400,800"]) == 0
        blobs.append((tmp_path / sub / "sweep_K.csv").read_bytes())
    assert blobs[0] == blobs[1]
    header, rows, _ = read_rows(tmp_path / "one" / "sweep_K.csv")
    assert header == ["quantity", "alpha", "p", "d", "value",
                      "normalized", "t0_or_rho0"]
    assert len(rows) == 2


def test_sweep_L_reports_band(outdir):
    assert cli.main(["sweep-L", "--alpha", "2", "--p", "2",
                     "--d", "400,800"]) == 0
    _, rows, meta = read_rows(outdir / "sweep_L.csv")
    assert len(rows) == 2
    assert "normalized_band_lo" in meta and "normalized_band_hi" in meta


def test_parse_d_values_forms():
    assert cli._parse_d_values("3:5") == [3, 4, 5]
    assert cli._parse_d_values("400,800") == [400.0, 800.0]
    logspaced = cli._parse_d_values("100:1000:3")
    assert logspaced[0] == 100 and logspaced[-1] == 1000
    assert len(logspaced) == 3


def test_criterion_json_summary(outdir, capsys):
    assert cli.main(["criterion", "--profile", "gauss", "--mass", "4",
                     "--p", "2", "--t-count", "12"]) == 0
    lines = capsys.readouterr().out.splitlines()
    summary = json.loads(next(l for l in lines if l.startswith("{")))
    assert summary["classification"] == "criterion_met"
    assert summary["T_star"] > 0
    header, _, _ = read_rows(outdir / "criterion_curve.csv")
    assert header == ["T", "W", "hinv", "ratio"]


def test_criterion_rejects_radial_profile_with_lattice_kernel(outdir, tmp_path,
                                                              capsys):
    prof = tmp_path / "profile.csv"
    import numpy as np
    write_profile_csv(prof, RadialProfile.from_function(
        1, lambda r: np.exp(-r * r), r_min=1e-3, r_max=20.0))
    assert cli.main(["criterion", "--profile", str(prof),
                     "--kernel", "gaussian"]) == 2
    assert "error:" in capsys.readouterr().err


def test_simulate_artifacts(outdir, capsys):
    assert cli.main(["simulate", "--profile", "gauss", "--mass", "2",
                     "--t-end", "0.1", "--dt-init", "1e-3",
                     "--targets", "0.5"]) == 0
    header, _, _ = read_rows(outdir / "trajectory.csv")
    assert header == ["t", "sup_u", "mass", "dt"]
    header, rows, _ = read_rows(outdir / "moment_T0.5.csv")
    assert header == ["t", "W", "F_of_W", "dW_dt_fd"]
    assert rows[-1][3] == ""              # no forward difference at the end
    assert (outdir / "final_state.csv").exists()


def test_selftest_single_preset(outdir, capsys):
    assert cli.main(["selftest", "--only", "constants-closed-forms"]) == 0
    out = capsys.readouterr().out
    assert "C1 constants-closed-forms: PASS" in out
    assert out.strip().endswith("selftest: PASS")
    assert (outdir / "selftest" / "constants-closed-forms" / "manifest.csv").exists()


def test_run_preset_validation(tmp_path):
    with pytest.raises(KeyError):
        cli.run_preset("no-such-preset", outdir=tmp_path)
    with pytest.raises(DomainError):
        cli.run_preset("constants-closed-forms", {"workers": 4},
                       outdir=tmp_path)


def test_manifest_records_configuration(tmp_path):
    cli.run_preset("constants-closed-forms", {"seed": 7}, outdir=tmp_path,
                   echo=lambda *_: None)
    lines = (tmp_path / "constants-closed-forms" / "manifest.csv").read_text()
    assert "# seed = 7" in lines
    assert "# tolerance_version = 1" in lines
    assert "# criterion = C1" in lines


def test_unknown_choice_exits_via_argparse():
    with pytest.raises(SystemExit) as err:
        cli.main(["selftest", "--only", "bogus"])
    assert err.value.code == 2
