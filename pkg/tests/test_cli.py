import json

import numpy as np
import pytest

from locent.cli import EXIT_OK, EXIT_USAGE, main


def read_csv(path):
    lines = open(path).read().splitlines()
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return header, rows


def test_scatter_roundtrip_and_determinism(tmp_path):
    out1 = str(tmp_path / "a.csv")
    out2 = str(tmp_path / "b.csv")
    args = ["scatter", "--family", "gw", "--n-qubits", "3", "--samples", "40", "--seed", "9"]
    assert main(args + ["--out", out1]) == EXIT_OK
    assert main(args + ["--out", out2]) == EXIT_OK
    assert open(out1, "rb").read() == open(out2, "rb").read()

    header, rows = read_csv(out1)
    assert header[:14] == list(
        (
            "family",
            "n_qubits",
            "n",
            "m",
            "q",
            "alpha",
            "e_ab",
            "e_a1",
            "e_a2",
            "le",
            "delta1",
            "delta2",
            "seed",
            "state_index",
        )
    )
    assert "upper-curve_margin" in header and "monotonicity_margin" in header
    assert len(rows) == 40
    le = np.array([float(r[header.index("le")]) for r in rows])
    assert (le >= 0).all() and (le <= 1 + 1e-9).all()

    manifest = json.loads(open(out1 + ".manifest.json").read())
    assert manifest["rows"] == 40
    import hashlib

    assert manifest["csv_sha256"] == hashlib.sha256(open(out1, "rb").read()).hexdigest()


def test_scatter_different_seed_changes_data(tmp_path):
    out1 = str(tmp_path / "a.csv")
    out2 = str(tmp_path / "b.csv")
    main(["scatter", "--family", "gw", "--n-qubits", "3", "--samples", "10",
          "--seed", "1", "--out", out1])
    main(["scatter", "--family", "gw", "--n-qubits", "3", "--samples", "10",
          "--seed", "2", "--out", out2])
    assert open(out1).read() != open(out2).read()


def test_scatter_noisy_dephasing(tmp_path):
    out = str(tmp_path / "noisy.csv")
    assert (
        main(
            ["scatter", "--family", "gw", "--n-qubits", "3", "--samples", "25",
             "--seed", "4", "--q", "0.2", "--out", out]
        )
        == EXIT_OK
    )
    header, rows = read_csv(out)
    e_ab = np.array([float(r[header.index("e_ab")]) for r in rows])
    assert (e_ab <= 0.64 + 1e-9).all()  # loss line at (1-q)^2


def test_scatter_dicke_enumerates_sectors(tmp_path):
    out = str(tmp_path / "dicke.csv")
    assert main(["scatter", "--family", "dicke", "--n-qubits", "5", "--out", out]) == EXIT_OK
    header, rows = read_csv(out)
    assert len(rows) == 4  # one record per excitation number 1..N-1
    d1 = [float(r[header.index("delta1")]) for r in rows]
    assert all(v <= 1e-9 for v in d1)  # localization never beats the loss here


def test_table1_small(tmp_path):
    out = str(tmp_path / "t1.csv")
    code = main(["table1", "--cells", "3:1:1", "--q-list", "0.0,0.2",
                 "--samples", "60", "--seed", "5", "--out", out])
    assert code == EXIT_OK
    header, rows = read_csv(out)
    assert len(rows) == 2
    frac = [float(r[header.index("frac_delta1_pos_pct")]) for r in rows]
    assert all(0.0 <= f <= 100.0 for f in frac)
    assert all(r[header.index("n_delta2_violations")] == "0" for r in rows)


def test_noise_curve_matches_scaling_law(tmp_path):
    out = str(tmp_path / "curve.csv")
    code = main(["noise-curve", "--family", "gghz", "--n-qubits", "3",
                 "--q-grid", "0:0.5:6", "--seed", "2", "--out", out])
    assert code == EXIT_OK
    header, rows = read_csv(out)
    le = np.array([float(r[header.index("le")]) for r in rows])
    factor = np.array([float(r[header.index("factor")]) for r in rows])
    qs = np.array([float(r[header.index("q")]) for r in rows])
    assert np.allclose(factor, (1 - qs) ** 3, atol=1e-12)
    assert np.abs(le - factor * le[0]).max() < 1e-8


def test_spin_command_small(tmp_path):
    out = str(tmp_path / "spin.csv")
    code = main(["spin", "--model", "txy", "--gamma", "0.5", "--sites", "6",
                 "--windows", "0.3:0.7:5", "--seed", "3", "--out", out])
    assert code == EXIT_OK
    header, rows = read_csv(out)
    assert len(rows) == 5
    assert "g" in header and "pbc_dev" in header
    fits = json.loads(open(out + ".fit.json").read())
    assert "N=6" in fits and "pooled" in fits
    assert fits["pooled"]["n_points"] == 5


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("seed = 5\nsamples = 12\n# comment line\n")
    out1 = str(tmp_path / "c1.csv")
    assert main(["scatter", "--family", "gw", "--n-qubits", "3",
                 "--config", str(cfg), "--out", out1]) == EXIT_OK
    _, rows = read_csv(out1)
    assert len(rows) == 12
    assert rows[0][12] == "5"  # seed column from config

    out2 = str(tmp_path / "c2.csv")
    assert main(["scatter", "--family", "gw", "--n-qubits", "3", "--config", str(cfg),
                 "--samples", "7", "--out", out2]) == EXIT_OK
    _, rows = read_csv(out2)
    assert len(rows) == 7  # flag wins over config


def test_bad_config_is_usage_error(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("this is not a key value line\n")
    out = str(tmp_path / "x.csv")
    assert main(["scatter", "--family", "gw", "--n-qubits", "3",
                 "--config", str(cfg), "--out", out]) == EXIT_USAGE


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["scatter", "--family", "not-a-family", "--n-qubits", "3"])
    assert exc.value.code == 2


def test_verify_subcommand_passes(capsys):
    assert main(["verify", "--suite", "kraus", "--seed", "2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "[PASS]" in out and "0 failed" in out


def test_scatter_gghz_gain_equals_loss(tmp_path):
    out = str(tmp_path / "gghz.csv")
    assert main(["scatter", "--family", "gghz", "--n-qubits", "4", "--samples", "30",
                 "--seed", "8", "--out", out]) == EXIT_OK
    header, rows = read_csv(out)
    d1 = np.array([float(r[header.index("delta1")]) for r in rows])
    assert np.abs(d1).max() < 1e-8
