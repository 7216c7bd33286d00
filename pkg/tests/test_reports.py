import json
import math

import pytest

from qdel.deletion import optimal_quality
from qdel.errors import UnsupportedFormatError
from qdel.fidelity import fidelity_report
from qdel.hilbert import basis_ket, ket
from qdel.machines import classify_deleter, swap_deleter
from qdel.nogo import nonorthogonal_constraints
from qdel.reports import (
    RunManifest,
    ToleranceConfig,
    default_seed,
    emit_report,
    sub_seed,
)
from qdel.signalling import signalling_distance

INV_SQRT2 = 1.0 / math.sqrt(2.0)


class TestToleranceConfig:
    def test_defaults(self):
        config = ToleranceConfig()
        assert config.algebraic_tol == 1e-12
        assert config.eigen_tol == 1e-10
        assert config.grid_step == 1e-4

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            ToleranceConfig(algebraic_tol=0.0)

    def test_rejects_inverted_ordering(self):
        with pytest.raises(ValueError):
            ToleranceConfig(algebraic_tol=1e-8, eigen_tol=1e-10)


class TestSeeds:
    def test_default_seed_env_override(self, monkeypatch):
        monkeypatch.delenv("QDEL_SEED", raising=False)
        assert default_seed() == 0
        monkeypatch.setenv("QDEL_SEED", "42")
        assert default_seed() == 42

    def test_sub_seed_is_stable_and_distinct(self):
        a = sub_seed(0, "machines", "classify")
        assert a == sub_seed(0, "machines", "classify")
        assert a != sub_seed(0, "machines", "witness")
        assert a != sub_seed(1, "machines", "classify")
        assert 0 <= a < 2**63


class TestQualityEmission:
    def test_json_schema(self):
        report = optimal_quality(2, 1)
        payload = json.loads(emit_report(report, "json"))
        assert set(payload) == {"n", "m", "min_bound", "formula_value", "agreement"}
        assert payload["formula_value"] == report.formula_value
        assert payload["min_bound"] == report.min_bound

    def test_csv_is_the_bound_curve(self):
        report = optimal_quality(2, 1)
        lines = emit_report(report, "csv").strip().split("\n")
        assert lines[0] == "alpha_sq,bound"
        assert len(lines) == 1 + report.bound_curve.shape[0]
        x, val = lines[1].split(",")
        assert float(x) == 0.0 and float(val) == 1.0

    def test_table_contains_fields(self):
        text = emit_report(optimal_quality(2, 1), "table")
        assert "formula_value" in text and "agreement" in text

    def test_determinism(self):
        one = emit_report(optimal_quality(3, 2), "json")
        two = emit_report(optimal_quality(3, 2), "json")
        assert one == two


class TestFidelityEmission:
    def test_round_trip_values(self):
        report = fidelity_report(0.5, n_theta=16, n_phi=16)
        payload = json.loads(emit_report(report, "json"))
        assert payload["f_b"] == report.f_b
        assert payload["avg_f_a"] == report.avg_f_a

    def test_csv_single_row(self):
        report = fidelity_report(0.5, n_theta=16, n_phi=16)
        lines = emit_report(report, "csv").strip().split("\n")
        assert lines[0].startswith("alpha_sq,")
        assert len(lines) == 2

    def test_table_columns_align(self):
        report = fidelity_report(0.5, n_theta=16, n_phi=16)
        lines = emit_report(report, "table").strip().split("\n")
        assert len(lines) == 6
        values = {line.split()[0] for line in lines}
        assert {"alpha_sq", "f_b", "f_a", "avg_f_b", "avg_f_a", "quadrature_error"} == values


class TestConstraintEmission:
    def make_report(self):
        return nonorthogonal_constraints(
            basis_ket([2], 0), ket([INV_SQRT2, INV_SQRT2], [2]), basis_ket([2], 0)
        )

    def test_json_complex_pairs(self):
        payload = json.loads(emit_report(self.make_report(), "json"))
        assert payload["satisfiable"] is False
        assert len(payload["constraints"]) == 5
        lhs = payload["constraints"][0]["lhs"]
        assert isinstance(lhs, list) and len(lhs) == 2

    def test_csv_rows(self):
        lines = emit_report(self.make_report(), "csv").strip().split("\n")
        assert len(lines) == 6


class TestSignallingEmission:
    def test_json_contains_matrices(self):
        report = signalling_distance(0.0, math.pi / 4)
        payload = json.loads(emit_report(report, "json"))
        assert payload["distance_with"] == report.distance_with
        entries = payload["rho_with_deletion"][0]["entries"]
        assert len(entries) == 4 and len(entries[0]) == 4

    def test_csv_unsupported(self):
        report = signalling_distance(0.0, math.pi / 4)
        with pytest.raises(UnsupportedFormatError):
            emit_report(report, "csv")


class TestVerdictEmission:
    def test_csv_per_sample(self):
        verdict = classify_deleter(swap_deleter(2), samples=5, seed=1)
        lines = emit_report(verdict, "csv").strip().split("\n")
        assert lines[0] == "sample,residual,ancilla_error"
        assert len(lines) == 6

    def test_json_kind(self):
        verdict = classify_deleter(swap_deleter(2), samples=5, seed=1)
        payload = json.loads(emit_report(verdict, "json"))
        assert payload["kind"] == "SwapLike"


class TestEmissionErrors:
    def test_unknown_format(self):
        with pytest.raises(UnsupportedFormatError):
            emit_report(optimal_quality(2, 1), "yaml")

    def test_unknown_report_type(self):
        with pytest.raises(UnsupportedFormatError):
            emit_report({"not": "a report"}, "json")


class TestRunManifest:
    def test_serialization(self):
        manifest = RunManifest(seed=7, command="qdel quality --n 2 --m 1")
        payload = manifest.to_json()
        assert payload["seed"] == 7
        assert payload["config"]["algebraic_tol"] == 1e-12
        assert payload["version"]

    def test_identical_manifests_reproduce_identical_reports(self):
        seed = sub_seed(RunManifest(seed=5).seed, "machines", "classify")
        one = classify_deleter(swap_deleter(2), samples=10, seed=seed)
        two = classify_deleter(swap_deleter(2), samples=10, seed=seed)
        assert emit_report(one, "json") == emit_report(two, "json")
