import json

import pytest

from bchardy.cli import main
from bchardy.experiments import ConfigError, build_function, fmt, load_config, parse_grid, thread_cap


class TestConfig:
    def test_defaults(self):
        cfg = load_config(None, "verify")
        assert cfg.grid == (64, 512) and cfg.seed == 0

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="unknown config keys: bogus"):
            load_config({"bogus": 1}, "verify")

    def test_unknown_tolerance(self):
        with pytest.raises(ConfigError, match="tolerance"):
            load_config({"tolerances": {"nope": 1.0}}, "verify")

    def test_gamma_range(self):
        with pytest.raises(ConfigError, match="gamma"):
            load_config({"q": 1.5, "gamma": 3.0}, "hilbert")
        with pytest.raises(ConfigError, match="needs the source exponent"):
            load_config({"gamma": 1.5}, "hilbert")
        cfg = load_config({"q": 1.5, "gamma": 2.0}, "hilbert")
        assert cfg.gamma == 2.0

    def test_types(self):
        with pytest.raises(ConfigError):
            load_config({"seed": "x"}, "verify")
        with pytest.raises(ConfigError):
            load_config({"n": 5}, "represent")
        with pytest.raises(ConfigError):
            load_config({"radii": [0.5, 1.0]}, "boundary-scan")
        with pytest.raises(ConfigError):
            load_config({"suites": ["algebra", "nope"]}, "verify")
        with pytest.raises(ConfigError):
            load_config({"experiment": "hilbert"}, "verify")
        with pytest.raises(ConfigError):
            load_config("[1, 2]", "verify")
        with pytest.raises(ConfigError):
            load_config("{not json", "verify")

    def test_hilbert_p(self):
        with pytest.raises(ConfigError):
            load_config({"p": 1.5}, "hilbert")

    def test_grid(self):
        assert parse_grid("32x128") == (32, 128)
        for bad in ("32", "32x100", "2x16"):
            with pytest.raises(ConfigError):
                parse_grid(bad)

    def test_corpus_specs(self):
        f = build_function({"fn": "polynomial", "coeffs": [[1, 0, 2.0, 0.0]]})
        assert f(0.5) == 1.0
        with pytest.raises(ConfigError):
            build_function({"fn": "nope"})
        with pytest.raises(ConfigError):
            build_function({"fn": "monomial", "args": [1], "extra": 2})
        with pytest.raises(ConfigError):
            load_config({"corpus": [{"fn": "TB"}]}, "boundary-scan")

    def test_fmt(self):
        assert fmt(0.1) == "0.10000000000000001"
        assert fmt(True) == "true" and fmt(3) == "3"

    def test_thread_cap(self, monkeypatch):
        monkeypatch.setenv("BCHARDY_THREADS", "3")
        assert thread_cap() == 3
        monkeypatch.setenv("BCHARDY_THREADS", "junk")
        assert thread_cap() == 1


class TestMain:
    def test_config_error_exit_2(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"foo": 1}))
        assert main(["verify", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2
        assert "unknown config keys" in capsys.readouterr().err

    def test_bad_grid_flag(self, tmp_path):
        assert main(["verify", "--grid", "abc", "--out", str(tmp_path / "o")]) == 2

    def test_missing_config_file(self, tmp_path):
        assert main(["verify", "--config", str(tmp_path / "missing.json"), "--out", str(tmp_path)]) == 2

    def test_verify_subset(self, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"suites": ["algebra", "atoms"], "n_items": 20}))
        out = tmp_path / "o"
        assert main(["verify", "--config", str(cfg), "--out", str(out), "--seed", "4"]) == 0
        rep = json.loads((out / "report.json").read_text())
        assert rep["all_pass"] and rep["config"]["seed"] == 4
        assert set(rep["tables"]) == {"algebra", "atoms"}
        assert (out / "algebra.csv").read_text().startswith("check,quantity,value,threshold,verdict")
        assert "runtime_seconds" in json.loads((out / "timing.json").read_text())

    def test_failing_check_exit_1(self, tmp_path):
        cfg = tmp_path / "c.json"
        # an impossible tolerance makes the algebra suite fail
        cfg.write_text(json.dumps({"suites": ["algebra"], "tolerances": {"algebra": 1e-300}}))
        assert main(["verify", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 1

    def test_boundary_scan(self, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"corpus": [{"fn": "monomial", "args": [1]}, {"fn": "constant", "args": [2.0]}],
                                   "radii": [0.9, 0.99]}))
        out = tmp_path / "o"
        assert main(["boundary-scan", "--config", str(cfg), "--out", str(out)]) == 0
        lines = (out / "boundary_scan.csv").read_text().splitlines()
        assert lines[0] == "function,r,error_p" and len(lines) == 5
        # f(z) = z in L^2: error 2 pi (1 - r)^2
        assert abs(float(lines[1].rsplit(",", 1)[1]) - 0.06283185307179586) < 1e-12

    def test_hilbert_parseval(self, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"p": 2, "n_items": 50, "n_points": 3}))
        assert main(["hilbert", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 0

    def test_hilbert_atomic(self, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"p": 0.5, "n_items": 10, "n_points": 3}))
        out = tmp_path / "o"
        assert main(["hilbert", "--config", str(cfg), "--out", str(out)]) == 0
        assert (out / "ratios.csv").exists() and (out / "summary.csv").exists()

    def test_represent_zero_corpus(self, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"corpus": [{"fn": "constant", "args": [0.0]}], "n": 2, "n_points": 5}))
        out = tmp_path / "o"
        assert main(["represent", "--config", str(cfg), "--out", str(out)]) == 0
        rows = (out / "round_trip.csv").read_text().splitlines()[1:]
        assert float(rows[0].split(",")[-2]) == 0.0
