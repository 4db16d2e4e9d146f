"""Unit tests for the sweep, ERM, rate and verification services."""

import json
import math
from pathlib import Path

import pytest

from src.core import gaussian
from src.exceptions import InstanceFormatError, NumericalAccuracyError, ValidationError
from src.models.toy import ToyConfig, ToySweepRow
from src.services import ERMService, RateService, SuiteResult, SweepService, VerificationService

DATA_DIR = Path(__file__).resolve().parents[2] / "data"


@pytest.mark.unit
class TestSweepService:
    """Test cases for the Gaussian sweep."""

    def setup_method(self):
        self.base = ToyConfig(mc_samples=20_000, seed=5)

    def test_rows_follow_grid(self, test_config):
        rows = SweepService(test_config).run(self.base, [0.2, 0.5], alphas=[0.5], method="mc")
        assert [row.t for row in rows] == [0.2, 0.5]
        assert set(rows[0].bound_js) == {0.5}

    def test_rejects_t_outside_range(self, test_config):
        with pytest.raises(ValidationError):
            SweepService(test_config).run(self.base, [0.0], alphas=[0.5])

    def test_crossover(self):
        rows = [
            ToySweepRow(0.1, 0.0, 0.0, 2.0, {0.5: 1.0}, {0.5: 1.0}),
            ToySweepRow(0.3, 0.0, 0.0, 0.5, {0.5: 0.8}, {0.5: 0.8}),
        ]
        assert SweepService.crossover(rows, 0.5) == 0.3
        assert SweepService.crossover(rows[:1], 0.5) is None

    def test_quadrature_settings_reach_the_sweep(self, test_config, monkeypatch):
        seen = {}

        def fake_sweep(base, t_grid, alphas, method, threads, nodes, tolerance):
            seen.update(nodes=nodes, tolerance=tolerance)
            return []

        monkeypatch.setattr(gaussian, "toy_sweep", fake_sweep)
        test_config.monte_carlo.hermite_nodes = 24
        test_config.monte_carlo.quadrature_tolerance = 1e-4
        SweepService(test_config).run(self.base, [0.5], alphas=[0.5], method="quadrature")
        assert seen == {'nodes': 24, 'tolerance': 1e-4}

    def test_quadrature_tolerance_enforced(self, test_config):
        test_config.monte_carlo.hermite_nodes = 12
        test_config.monte_carlo.quadrature_tolerance = 1e-300
        with pytest.raises(NumericalAccuracyError):
            SweepService(test_config).run(self.base, [0.5], alphas=[0.5], method="quadrature")

    @pytest.mark.slow
    def test_default_grid_ordering_and_crossover(self, test_config):
        rows = SweepService(test_config).run(ToyConfig(mc_samples=200_000, seed=42),
                                             alphas=(0.25, 0.5, 0.75), method="mc")
        assert [row.t for row in rows] == gaussian.default_t_grid()
        for row in rows:
            assert row.bound_js[0.75] < row.bound_mi, row.t
            for a in (0.25, 0.5, 0.75):
                assert row.bound_renyi[a] >= row.bound_mi, (row.t, a)
            lowest = min([row.bound_mi, *row.bound_js.values(), *row.bound_renyi.values()])
            assert lowest >= row.gen_true - 3.0 * row.gen_se, row.t

        crossing = SweepService.crossover(rows, 0.5)
        assert crossing is not None and 0.15 <= crossing <= 0.35


@pytest.mark.unit
class TestERMService:
    """Test cases for instance loading and the regularized solve."""

    def setup_method(self):
        self.service = ERMService()
        self.service.config.runtime.threads = 1

    def test_load_bundled_instance(self):
        instance = self.service.load_instance(str(DATA_DIR / "two_hypothesis.json"))
        assert instance.n == 3 and instance.beta == 2.0
        assert instance.mu.mass.tolist() == [0.3, 0.7]

    def test_missing_file(self, tmp_path):
        with pytest.raises(InstanceFormatError) as info:
            self.service.load_instance(str(tmp_path / "absent.json"))
        assert info.value.path.endswith("absent.json")

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(InstanceFormatError):
            self.service.load_instance(str(path))

    def test_non_object(self, tmp_path):
        path = tmp_path / "list.json"
        path.write_text(json.dumps([1, 2]), encoding="utf-8")
        with pytest.raises(InstanceFormatError):
            self.service.load_instance(str(path))

    @pytest.mark.parametrize("reg", ["js", "renyi"])
    def test_run_bundled_instance(self, reg):
        instance = self.service.load_instance(str(DATA_DIR / "two_hypothesis.json"))
        result = self.service.run(instance, reg=reg, alpha=0.5)

        assert result['regularizer'] == f"{reg}(0.50)"
        assert result['max_certificate'] <= 1e-8
        assert len(result['posteriors']) == 8
        for entry in result['posteriors']:
            assert sum(entry['posterior']) == pytest.approx(1.0, abs=1e-12)
            assert entry['boundary_mass'] > 0

        assert result['excess_risk'] >= -1e-12
        for label, bound in result['gen_bounds'].items():
            assert len(bound['information']) == 3
            assert bound['bound'] >= abs(result['exact_gen']) - 1e-12, label

    def test_unknown_regularizer(self, bit_learner):
        with pytest.raises(ValidationError):
            self.service.run(bit_learner, reg="mi")


@pytest.mark.unit
class TestRateService:
    """Test cases for log-log slope fits."""

    def test_excess_risk_slope(self):
        fit = RateService().excess_risk_slope(alpha=0.5)
        assert fit.slope == pytest.approx(-0.5, abs=0.05)
        assert fit.to_dict()['label'] == "excess_js(0.50)"

    @pytest.mark.slow
    def test_bound_slopes(self):
        fits = RateService().bound_slopes(alphas=(0.5,), threads=1)
        assert [f.label for f in fits] == ["js(0.50)", "renyi(0.50)"]
        for fit in fits:
            assert fit.slope == pytest.approx(-0.5, abs=0.1)


@pytest.mark.unit
class TestSuiteResult:
    """Tally bookkeeping."""

    def test_record_keeps_first_counterexample(self):
        result = SuiteResult("demo")
        result.record(True, 1e-13)
        result.record(False, 0.5, case=lambda: {'case': 1})
        result.record(False, 0.1, case=lambda: {'case': 2})
        assert (result.passed, result.failed) == (1, 2)
        assert result.counterexample == {'case': 1}
        assert result.max_residual == 0.5
        assert not result.ok

    def test_infinite_residual_ignored(self):
        result = SuiteResult("demo")
        result.record(True, math.inf)
        assert result.max_residual == 0.0

    def test_merge(self):
        total, part = SuiteResult("demo"), SuiteResult("demo")
        part.record(False, 0.2, case=lambda: {'case': 3})
        total.merge(part)
        assert total.failed == 1 and total.counterexample == {'case': 3}

    def test_case_is_keyword_only(self):
        result = SuiteResult("demo")
        with pytest.raises(TypeError):
            result.record(False, 0.0, lambda: {'case': 4})

    def test_ordering_failure_without_residual(self):
        result = SuiteResult("demo")
        result.record(False, case=lambda: {'case': 5})
        assert result.failed == 1 and result.max_residual == 0.0
        assert result.counterexample == {'case': 5}


@pytest.mark.unit
class TestVerificationService:
    """Test cases for the verification suites."""

    def setup_method(self):
        self.service = VerificationService()
        self.service.config.runtime.threads = 1

    def test_small_run_passes(self):
        report = self.service.run(cases=4, seed=0, include_rate=False)
        assert report['passed'] is True
        assert set(report['suites']) == {'identity', 'inequality', 'soundness', 'constant'}
        assert report['max_identity_residual'] <= 1e-9

    def test_deterministic_and_thread_independent(self):
        first = self.service.run(cases=3, seed=11, threads=1, include_rate=False)
        second = self.service.run(cases=3, seed=11, threads=3, include_rate=False)
        assert first == second

    def test_zero_cases_rejected(self):
        with pytest.raises(ValidationError):
            self.service.run(cases=0, seed=0)

    def test_constant_suite(self):
        assert self.service.constant_suite().ok

    def test_legendre_settings_reach_the_soundness_suite(self):
        self.service.config.numerics.legendre_grid_points = 2
        with pytest.raises(ValidationError):
            self.service.soundness_suite(1, seed=0, threads=1)
