import json

import numpy as np
import pytest

from pdmfactor.cli import main
from pdmfactor.grids import read_csv


def run(args):
    return main(args)


def load_json(path):
    with open(path) as fh:
        return json.load(fh)


class TestConstruct:
    def test_ex1_reference_run(self, tmp_path):
        out = tmp_path / "run"
        code = run(
            [
                "construct", "--model", "ex1", "--alpha", "1", "--n", "1",
                "--beta", "0", "--lambda", "1", "--convention", "paper-ex1",
                "--out", str(out),
            ]
        )
        assert code == 0
        for name in ("W_n.csv", "f_n.csv", "V_n_minus.csv", "V_n_plus.csv",
                     "V_tilde_minus.csv", "result.json"):
            assert (out / name).exists()
        meta = load_json(out / "result.json")
        assert meta["route"] == "bernoulli"
        assert meta["singular"] is False
        vt = read_csv(out / "V_tilde_minus.csv")
        assert not vt.is_singular
        assert np.all(np.isfinite(vt.values))

    def test_ex2_second_level(self, tmp_path):
        out = tmp_path / "run"
        code = run(
            [
                "construct", "--model", "ex2", "--a", "1", "--b", "5", "--c", "4",
                "--n", "2", "--beta", "1", "--out", str(out),
            ]
        )
        assert code == 0
        meta = load_json(out / "result.json")
        assert meta["route"] == "auxiliary"
        assert meta["singular"] is False
        assert meta["states"]["zero_mode"] == "non-normalizable"
        vt = read_csv(out / "V_tilde_minus.csv")
        assert np.all(np.isfinite(vt.values))

    def test_constant_mass_limit_run(self, tmp_path):
        out = tmp_path / "run"
        code = run(
            ["construct", "--model", "ho", "--n", "1", "--beta", "0",
             "--lambda", "1", "--out", str(out)]
        )
        assert code == 0

    def test_bad_flag_combination(self, tmp_path):
        code = run(
            ["construct", "--model", "ho", "--n", "1", "--beta", "1",
             "--lambda", "1", "--out", str(tmp_path)]
        )
        assert code == 2

    def test_determinism_modulo_timestamp(self, tmp_path):
        argv = ["construct", "--model", "ho", "--n", "1", "--beta", "0",
                "--lambda", "1"]
        run(argv + ["--out", str(tmp_path / "a")])
        run(argv + ["--out", str(tmp_path / "b")])
        a = load_json(tmp_path / "a" / "result.json")
        b = load_json(tmp_path / "b" / "result.json")
        a.pop("timestamp")
        b.pop("timestamp")
        assert a == b
        assert (tmp_path / "a" / "f_n.csv").read_bytes() == (
            tmp_path / "b" / "f_n.csv"
        ).read_bytes()


class TestSpectrum:
    def test_ex1_original(self, tmp_path):
        code = run(
            ["spectrum", "--model", "ex1", "--levels", "4", "--out", str(tmp_path)]
        )
        assert code == 0
        data = load_json(tmp_path / "spectrum.json")
        got = np.array(data["eigenvalues"])
        assert np.max(np.abs(got - np.array([1.0, 3.0, 5.0, 7.0]))) <= 1e-3
        assert (tmp_path / "eigenstate_0.csv").exists()

    def test_ex1_deformed(self, tmp_path):
        code = run(
            ["spectrum", "--model", "ex1", "--which", "deformed", "--n", "1",
             "--beta", "0", "--lambda", "1", "--levels", "4", "--out", str(tmp_path)]
        )
        assert code == 0
        data = load_json(tmp_path / "spectrum.json")
        got = np.array(data["eigenvalues"])
        assert np.max(np.abs(got - np.array([-2.0, 0.0, 2.0, 4.0]))) <= 1e-3

    def test_box_sanity(self, tmp_path):
        code = run(["spectrum", "--model", "box", "--levels", "2", "--out", str(tmp_path)])
        assert code == 0
        data = load_json(tmp_path / "spectrum.json")
        ref = np.array([np.pi**2, 4 * np.pi**2])
        assert np.max(np.abs(np.array(data["eigenvalues"]) - ref)) <= 1e-2


class TestVerify:
    def test_ex1_suite_passes(self, tmp_path):
        code = run(
            ["verify", "--model", "ex1", "--n", "1", "--beta", "0",
             "--lambda", "1", "--levels", "5", "--out", str(tmp_path)]
        )
        assert code == 0
        data = load_json(tmp_path / "verify.json")
        assert data["passed"] is True
        assert data["isospectrality"]["max_gap"] <= 1e-3

    def test_singular_lambda_fails(self, tmp_path, capsys):
        code = run(
            ["verify", "--model", "ex1", "--n", "1", "--beta", "0",
             "--lambda", "-0.5", "--out", str(tmp_path)]
        )
        assert code == 1
        assert "singular" in capsys.readouterr().err
        data = load_json(tmp_path / "verify.json")
        assert data["singular"] is True

    def test_constant_mass_suite_passes(self, tmp_path):
        code = run(
            ["verify", "--model", "ho", "--n", "1", "--beta", "0",
             "--lambda", "1", "--out", str(tmp_path)]
        )
        assert code == 0


class TestScan:
    def test_figure_convention(self, tmp_path):
        code = run(
            ["scan", "--model", "ex1", "--n", "1", "--lambda-min", "0",
             "--lambda-max", "1", "--steps", "51", "--convention", "paper-ex1",
             "--out", str(tmp_path)]
        )
        assert code == 0
        data = load_json(tmp_path / "scan.json")
        assert abs(data["critical_lambda"] - 0.5) <= 1e-3

    def test_normalized_window(self, tmp_path):
        code = run(
            ["scan", "--model", "ex1", "--n", "1", "--lambda-min", "-2",
             "--lambda-max", "1", "--steps", "31", "--out", str(tmp_path)]
        )
        assert code == 0
        data = load_json(tmp_path / "scan.json")
        assert len(data["boundaries"]) == 2
        assert abs(data["boundaries"][0] + 1.0) <= 1e-3
        assert abs(data["boundaries"][1]) <= 1e-3

    def test_empty_range(self, tmp_path):
        code = run(
            ["scan", "--model", "ex1", "--n", "1", "--lambda-min", "1",
             "--lambda-max", "0", "--steps", "10", "--out", str(tmp_path)]
        )
        assert code == 2


class TestUsageErrors:
    def test_unknown_model_exits_two(self):
        with pytest.raises(SystemExit) as exc:
            run(["spectrum", "--model", "nope", "--out", "/tmp"])
        assert exc.value.code == 2

    def test_missing_subcommand(self):
        with pytest.raises(SystemExit) as exc:
            run([])
        assert exc.value.code == 2
