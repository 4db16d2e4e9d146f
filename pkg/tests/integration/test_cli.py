"""End-to-end tests of the command-line surface."""

import csv
import io
import json
import math
from pathlib import Path

import pytest

from src.cli import main
from src.cli.main import EXIT_INVALID, EXIT_OK

DATA_DIR = Path(__file__).resolve().parents[2] / "data"


def run_json(capsys, argv):
    code = main(argv)
    return code, json.loads(capsys.readouterr().out)


def sweep_rows(text: str):
    lines = text.splitlines()
    assert lines[0].startswith("# schema:")
    return list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))


@pytest.mark.integration
class TestMeasureCommand:

    def test_joint_information(self, capsys, log2):
        code, report = run_json(capsys, ["--threads", "1", "measure", "--joint", "0.5,0;0,0.5"])
        assert code == EXIT_OK
        assert report['schema'] == "genbound.report/1"
        assert report['information']['mi'] == pytest.approx(log2)
        assert report['information']['lautum'] == "inf"

    def test_divergences(self, capsys):
        code, report = run_json(capsys, ["measure", "--p", "0.5,0.5", "--q", "0.5,0.5", "--alpha", "0.3"])
        assert code == EXIT_OK
        assert report['divergences']['kl'] == pytest.approx(0.0, abs=1e-15)

    def test_missing_inputs(self, capsys):
        assert main(["measure"]) == EXIT_INVALID
        assert capsys.readouterr().out == ""

    def test_p_without_q(self):
        assert main(["measure", "--p", "0.5,0.5"]) == EXIT_INVALID

    def test_invalid_alpha(self):
        assert main(["measure", "--p", "1,0", "--q", "0.5,0.5", "--alpha", "1.0"]) == EXIT_INVALID

    def test_ragged_joint(self):
        assert main(["measure", "--joint", "0.5,0.2;0.3"]) == EXIT_INVALID


@pytest.mark.integration
class TestSweepCommand:

    def test_single_point(self, capsys):
        code = main(["--threads", "1", "sweep", "--t-grid", "0.5", "--alphas", "0.5", "--mc", "20000"])
        assert code == EXIT_OK
        rows = sweep_rows(capsys.readouterr().out)
        assert len(rows) == 1
        assert list(rows[0]) == ["t", "gen_true", "gen_se", "bound_mi", "bound_js_0.50", "bound_renyi_0.50"]
        assert float(rows[0]["t"]) == 0.5

    def test_output_file(self, tmp_path):
        target = tmp_path / "sweep.csv"
        code = main(["sweep", "--t-grid", "0.25,0.5", "--alphas", "0.5", "--mc", "20000",
                     "--output", str(target)])
        assert code == EXIT_OK
        assert len(sweep_rows(target.read_text(encoding="utf-8"))) == 2

    def test_reproducible(self, capsys):
        argv = ["sweep", "--t-grid", "0.3", "--alphas", "0.5", "--mc", "20000", "--seed", "9"]
        main(argv)
        first = capsys.readouterr().out
        main(["--threads", "2"] + argv)
        assert capsys.readouterr().out == first

    def test_t_outside_range(self):
        assert main(["sweep", "--t-grid", "0.7", "--mc", "20000"]) == EXIT_INVALID

    def test_non_positive_variance(self):
        assert main(["sweep", "--sigma2", "0", "--mc", "20000"]) == EXIT_INVALID

    def test_bad_alpha_list(self):
        with pytest.raises(SystemExit) as info:
            main(["sweep", "--alphas", "a,b"])
        assert info.value.code == 2

    @pytest.mark.slow
    def test_js_bound_finite_where_mi_blows_up(self, capsys):
        code = main(["sweep", "--t-grid", "0.005,0.5", "--alphas", "0.5", "--mc", "200000"])
        assert code == EXIT_OK
        small, symmetric = sweep_rows(capsys.readouterr().out)
        for row in (small, symmetric):
            gen, se = float(row["gen_true"]), float(row["gen_se"])
            for column in ("bound_mi", "bound_js_0.50", "bound_renyi_0.50"):
                assert float(row[column]) >= gen - 3 * se
        assert float(small["bound_js_0.50"]) < float(small["bound_mi"])
        assert math.isfinite(float(small["bound_renyi_0.50"]))


@pytest.mark.integration
class TestVerifyCommand:

    def test_zero_cases(self, capsys):
        assert main(["verify", "--cases", "0"]) == EXIT_INVALID
        assert capsys.readouterr().out == ""

    def test_small_run(self, capsys):
        code, report = run_json(capsys, ["--threads", "1", "verify", "--cases", "3", "--seed", "4",
                                         "--skip-rate"])
        assert code == EXIT_OK
        assert report['passed'] is True
        assert report['seed'] == 4 and report['cases'] == 3

    def test_byte_identical_across_threads(self, capsys):
        main(["--threads", "1", "verify", "--cases", "3", "--seed", "8", "--skip-rate"])
        first = capsys.readouterr().out
        main(["--threads", "4", "verify", "--cases", "3", "--seed", "8", "--skip-rate"])
        assert capsys.readouterr().out == first

    def test_negative_threads(self):
        assert main(["--threads", "-1", "verify", "--cases", "1"]) == EXIT_INVALID

    @pytest.mark.slow
    def test_full_run(self, capsys):
        code, report = run_json(capsys, ["verify", "--cases", "100", "--seed", "42"])
        assert code == EXIT_OK
        assert report['max_identity_residual'] <= 1e-9
        assert report['suites']['rate']['failed'] == 0


@pytest.mark.integration
class TestErmCommand:

    def test_bundled_instance(self, capsys):
        code, report = run_json(capsys, ["erm", str(DATA_DIR / "two_hypothesis.json")])
        assert code == EXIT_OK
        assert report['regularizer'] == "js(0.50)"
        assert report['max_certificate'] <= 1e-8
        assert len(report['posteriors']) == 8

    def test_renyi_regularizer(self, capsys):
        code, report = run_json(capsys, ["erm", str(DATA_DIR / "two_hypothesis.json"),
                                         "--reg", "renyi", "--alpha", "0.3"])
        assert code == EXIT_OK
        assert report['regularizer'] == "renyi(0.30)"

    @pytest.mark.parametrize("reg,alpha", [("renyi", "0.999"), ("renyi", "0.001"), ("js", "0.999")])
    def test_extreme_orders_converge(self, capsys, reg, alpha):
        code, report = run_json(capsys, ["erm", str(DATA_DIR / "two_hypothesis.json"),
                                         "--reg", reg, "--alpha", alpha])
        assert code == EXIT_OK
        assert report['max_certificate'] <= 1e-8

    def test_missing_instance(self, tmp_path):
        assert main(["erm", str(tmp_path / "none.json")]) == EXIT_INVALID

    def test_malformed_instance(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({'mu': [0.5, 0.5], 'loss': [[0, 1, 2]], 'n': 1, 'beta': 1.0}), encoding="utf-8")
        assert main(["erm", str(path)]) == EXIT_INVALID


@pytest.mark.integration
class TestRateCommand:

    def test_small_grid(self, capsys):
        code, report = run_json(capsys, ["--threads", "1", "rate", "--ns", "8,16,32,64"])
        assert code == EXIT_OK
        assert [fit['label'] for fit in report['fits']] == ["js(0.50)", "renyi(0.50)"]
        assert report['excess_risk']['slope'] == pytest.approx(-0.5, abs=0.05)

    def test_bad_ns(self):
        with pytest.raises(SystemExit):
            main(["rate", "--ns", "0,4"])
