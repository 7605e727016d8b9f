"""Exit-status contract, determinism, and file formats of the CLI."""

import json

import pytest

from pdm_dirac.cli import main


def run(args, capsys):
    rc = main(args)
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def test_spectrum_table(capsys):
    rc, out, _ = run(["spectrum", "--eta", "0.5", "--lambda", "1", "--n-max", "3"], capsys)
    assert rc == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,delta1,e_squared,classification,energy_magnitude"
    assert len(lines) == 5
    first = lines[1].split(",")
    assert first[0] == "0"
    assert float(first[2]) == pytest.approx(-4.6213203435596426, rel=1e-12)
    assert first[3] == "Imaginary"


def test_spectrum_exact_rational_row(capsys):
    eta = repr(3.0**0.5 / 2.0)
    rc, out, _ = run(["spectrum", "--eta", eta, "--lambda", "1", "--n-max", "0"], capsys)
    assert rc == 0
    row = out.strip().splitlines()[1].split(",")
    assert float(row[1]) == pytest.approx(-0.5, abs=1e-12)
    assert float(row[2]) == pytest.approx(-1.5, abs=1e-12)


def test_spectrum_json_format(capsys):
    rc, out, _ = run(["spectrum", "--eta", "0.5", "--lambda", "1", "--format", "json"], capsys)
    assert rc == 0
    doc = json.loads(out)
    assert len(doc["entries"]) == 6
    assert doc["entries"][0]["classification"] == "Imaginary"


def test_spectrum_eta_zero_exits_2(capsys):
    rc, _, err = run(["spectrum", "--eta", "0", "--lambda", "1"], capsys)
    assert rc == 2
    assert "EtaZeroDegenerate" in err


def test_bad_parameters_exit_2(capsys):
    rc, _, err = run(["spectrum", "--eta", "1.5", "--lambda", "1"], capsys)
    assert rc == 2
    assert err.startswith("error:")
    rc, _, _ = run(["spectrum", "--eta", "0.5"], capsys)  # missing steepness
    assert rc == 2
    rc, _, _ = run(
        ["spectrum", "--eta", "0.5", "--alpha", "1", "--lambda", "1"], capsys
    )  # both steepness forms
    assert rc == 2


def test_unwritable_output_exits_2(tmp_path, capsys):
    out = tmp_path / "missing_dir" / "s.csv"
    rc, _, err = run(["spectrum", "--eta", "0.5", "--lambda", "1", "--out", str(out)], capsys)
    assert rc == 2
    assert "error" in err
    assert not out.exists()


def test_surface_defaults_shape(tmp_path, capsys):
    out = tmp_path / "surface.csv"
    rc, _, _ = run(["surface", "--out", str(out)], capsys)
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "eta,lambda,f"
    comments = [ln for ln in lines if ln.startswith("#")]
    assert len(comments) == 1  # the skipped eta = 0 gridline
    rows = [ln.split(",") for ln in lines[1:] if not ln.startswith("#")]
    assert len(rows) == 100 * 101
    values = {(r[0], r[1]): float(r[2]) for r in rows}
    # maximum is 0, attained exactly on the lambda = 0 boundary
    assert max(values.values()) == 0.0
    for (eta, lam), v in values.items():
        if float(lam) == 0.0:
            assert v == 0.0
        else:
            assert v < 0.0


def test_surface_degenerate_box_single_row(capsys):
    rc, out, _ = run(
        ["surface", "--box", "0.5,0.5,1,1", "--grid", "2,2", "--out", "-"], capsys
    )
    assert rc == 0
    lines = out.strip().splitlines()
    assert len(lines) == 2
    eta, lam, f = lines[1].split(",")
    assert (eta, lam) == ("0.5", "1")
    assert float(f) == pytest.approx(-4.6213203435596426, rel=1e-12)


def test_surface_interior_box_strictly_negative(tmp_path, capsys):
    out = tmp_path / "s.csv"
    rc, _, _ = run(
        ["surface", "--box=-1,1,1,10", "--grid", "21,11", "--out", str(out)], capsys
    )
    assert rc == 0
    rows = [ln for ln in out.read_text().splitlines()[1:] if not ln.startswith("#")]
    assert max(float(r.split(",")[2]) for r in rows) < 0.0


def test_potential_origin_row(capsys):
    rc, out, _ = run(
        ["potential", "--eta", "0.5", "--alpha", "1", "--N", "3", "--L", "2", "--out", "-"],
        capsys,
    )
    assert rc == 0
    lines = out.strip().splitlines()
    assert lines[0] == "x,mass,im_v,v_eff"
    origin = lines[2].split(",")
    assert [float(v) for v in origin] == [0.0, 1.0, 0.25, 1.0]


def test_potential_hermitian_limit_rows(capsys):
    rc, out, _ = run(
        ["potential", "--eta", "0", "--alpha", "1", "--N", "5", "--out", "-"], capsys
    )
    assert rc == 0
    for line in out.strip().splitlines()[1:]:
        _, mass, im_v, v_eff = (float(v) for v in line.split(","))
        assert im_v == 0.0
        assert mass == 1.0
        assert v_eff == 1.0


def test_dump_config_round_trip(tmp_path, capsys):
    rc, out, _ = run(
        ["verdict", "--eta", "0.5", "--lambda", "1", "--dump-config"], capsys
    )
    assert rc == 0
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(out)
    rc, out2, _ = run(["verdict", "--config", str(cfg_path), "--dump-config"], capsys)
    assert rc == 0
    assert out2 == out


def test_config_and_flags_conflict(tmp_path, capsys):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"eta": 0.5, "lambda": 1.0}))
    rc, _, err = run(
        ["spectrum", "--eta", "0.4", "--lambda", "1", "--config", str(cfg_path)], capsys
    )
    assert rc == 2
    assert "not both" in err


def test_config_subcommand_mismatch(tmp_path, capsys):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"subcommand": "surface", "eta": 0.5, "lambda": 1.0}))
    rc, _, _ = run(["spectrum", "--config", str(cfg_path)], capsys)
    assert rc == 2


def test_config_unknown_keys_rejected(tmp_path, capsys):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"eta": 0.5, "lambda": 1.0, "mystery": 7}))
    rc, _, _ = run(["spectrum", "--config", str(cfg_path)], capsys)
    assert rc == 2


def test_verdict_confirming_run(tmp_path, capsys):
    out = tmp_path / "verdict.json"
    rc, stdout, _ = run(
        [
            "verdict", "--eta", "0.5", "--lambda", "1",
            "--N", "1500", "--grid", "41,41", "--out", str(out),
        ],
        capsys,
    )
    assert rc == 0
    assert "SpectrumImaginaryOrEmpty" in stdout
    doc = json.loads(out.read_text())
    assert doc["statement"] == "SpectrumImaginaryOrEmpty"
    assert doc["error_trail"] == []
    assert doc["evidence"]["certificate_nonnegative_points"] == []
    assert doc["evidence"]["localized_bound_states"] == []
    assert doc["feasibility"]["supremum"]["all_nodes_negative"] is True
    assert doc["feasibility"]["point_certificate"]["sign_verdict"] == "Negative"
    assert doc["feasibility"]["route_agreement"]["ok"] is True
    assert doc["comparison"]["consistent"] is True


def test_verdict_control_well_exits_3(tmp_path, capsys):
    out = tmp_path / "verdict.json"
    rc, stdout, _ = run(
        [
            "verdict", "--eta", "0.5", "--lambda", "1", "--control-well",
            "--N", "1500", "--grid", "21,21", "--out", str(out),
        ],
        capsys,
    )
    assert rc == 3
    assert "SpectrumRealFound" in stdout
    doc = json.loads(out.read_text())
    assert doc["statement"] == "SpectrumRealFound"
    # the dissenting statement must carry its evidence
    states = doc["evidence"]["localized_bound_states"]
    assert len(states) == 1
    assert abs(states[0]["e_squared"]) < 2e-3
    assert states[0]["localization"]["interior_mass_fraction"] >= 0.99


def test_verdict_byte_deterministic(tmp_path, capsys, monkeypatch):
    args = [
        "verdict", "--eta", "0.5", "--lambda", "1",
        "--N", "800", "--grid", "31,31",
    ]
    out_a = tmp_path / "a" / "verdict.json"
    out_b = tmp_path / "b" / "verdict.json"
    out_a.parent.mkdir()
    out_b.parent.mkdir()
    rc, _, _ = run(args + ["--out", str(out_a)], capsys)
    assert rc == 0
    monkeypatch.setenv("PDM_DIRAC_THREADS", "4")
    rc, _, _ = run(args + ["--out", str(out_b)], capsys)
    assert rc == 0
    a = out_a.read_bytes().replace(str(out_a).encode(), b"OUT")
    b = out_b.read_bytes().replace(str(out_b).encode(), b"OUT")
    assert a == b


def test_bad_thread_env_exits_2(capsys, monkeypatch):
    monkeypatch.setenv("PDM_DIRAC_THREADS", "zero")
    rc, _, err = run(["verdict", "--eta", "0.5", "--lambda", "1", "--out", "-"], capsys)
    assert rc == 2
    assert "PDM_DIRAC_THREADS" in err


def test_verdict_physical_parameterization(tmp_path, capsys):
    out = tmp_path / "verdict.json"
    rc, _, _ = run(
        [
            "verdict", "--M0", "1", "--eta", "0.9", "--alpha", "0.2",
            "--N", "1500", "--grid", "21,21", "--out", str(out),
        ],
        capsys,
    )
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["statement"] == "SpectrumImaginaryOrEmpty"
    assert doc["comparison"]["numeric"]["continuum_edge"] == pytest.approx(0.01)
