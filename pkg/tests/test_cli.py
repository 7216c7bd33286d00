import json

import pytest

from qdel.cli import main
from qdel.machines import machine_to_json, qudit_pair_deleter, swap_deleter


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestQuality:
    def test_two_to_one(self, capsys):
        code, out, _ = run(capsys, "quality", "--n", "2", "--m", "1")
        assert code == 0
        payload = json.loads(out)
        assert payload["formula_value"] == pytest.approx(0.70711, abs=1e-5)

    def test_curve_csv(self, capsys):
        code, out, _ = run(capsys, "quality", "--n", "2", "--m", "1", "--curve")
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "alpha_sq,bound"
        assert len(lines) == 10002

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "report.json"
        code, out, _ = run(capsys, "quality", "--n", "3", "--m", "2", "--out", str(target))
        assert code == 0 and out == ""
        assert json.loads(target.read_text())["n"] == 3

    def test_bad_n_m_is_a_usage_error(self, capsys):
        with pytest.raises(SystemExit) as err:
            run(capsys, "quality", "--n", "1", "--m", "2")
        assert err.value.code == 2


class TestFidelity:
    def test_average_grid(self, capsys):
        code, out, _ = run(capsys, "fidelity", "--average", "--grid", "64x64")
        assert code == 0
        payload = json.loads(out)
        assert payload["avg_f_b"] == pytest.approx(5.0 / 6.0, abs=1e-6)
        assert payload["avg_f_a"] == pytest.approx(2.0 / 3.0, abs=1e-6)

    def test_pointwise(self, capsys):
        code, out, _ = run(capsys, "fidelity", "--alpha-sq", "0.5")
        payload = json.loads(out)
        assert code == 0
        assert payload["f_b"] == pytest.approx(0.75, abs=1e-12)
        assert payload["f_a"] == pytest.approx(0.5, abs=1e-12)

    def test_sweep_csv(self, capsys):
        code, out, _ = run(capsys, "fidelity", "--sweep", "11")
        lines = out.strip().split("\n")
        assert code == 0
        assert lines[0] == "alpha_sq,f_a,f_b"
        assert len(lines) == 12

    def test_alpha_sq_validated_before_computation(self, capsys):
        with pytest.raises(SystemExit) as err:
            run(capsys, "fidelity", "--alpha-sq", "1.5")
        assert err.value.code == 2


class TestNogo:
    def test_overlap_report(self, capsys):
        code, out, _ = run(capsys, "nogo", "--overlap", "0.7071067811865476")
        payload = json.loads(out)
        assert code == 0
        assert payload["satisfiable"] is False
        assert payload["constraints"][0]["residual"] == pytest.approx(
            abs(0.5 - 2.0 ** -0.5), abs=1e-12
        )

    def test_sweep_csv(self, capsys):
        code, out, _ = run(capsys, "nogo", "--sweep", "21")
        lines = out.strip().split("\n")
        assert code == 0
        assert lines[0] == "s,max_residual"
        first = lines[1].split(",")
        last = lines[-1].split(",")
        assert float(first[1]) == pytest.approx(1.0, abs=1e-12)
        assert float(last[1]) == 0.0


class TestSignal:
    def test_distances(self, capsys):
        code, out, _ = run(capsys, "signal", "--theta1", "0", "--theta2", "0.7853981633974483")
        payload = json.loads(out)
        assert code == 0
        assert payload["distance_with"] == pytest.approx(0.25, abs=1e-12)
        assert payload["distance_without"] < 1e-12

    def test_degree_suffix(self, capsys):
        code, out, _ = run(capsys, "signal", "--theta1", "45deg", "--theta2", "0.7853981633974483")
        payload = json.loads(out)
        assert code == 0
        assert payload["distance_with"] < 1e-12  # 45deg == pi/4

    def test_sweep(self, capsys):
        code, out, _ = run(capsys, "signal", "--sweep", "11")
        lines = out.strip().split("\n")
        assert code == 0
        assert lines[0] == "theta,trace_distance_vs_theta0"
        assert len(lines) == 12
        assert float(lines[1].split(",")[1]) == pytest.approx(0.0, abs=1e-12)


class TestDeleteDemo:
    def test_balanced_residual_positive(self, capsys):
        code, out, _ = run(capsys, "delete-demo", "--dim", "2", "--alpha-sq", "0.5")
        payload = json.loads(out)
        assert code == 0
        assert payload["residual"] > 0.01
        assert payload["deletes_exactly"] is False

    def test_basis_state_deletes(self, capsys):
        code, out, _ = run(capsys, "delete-demo", "--dim", "3", "--alpha-sq", "1.0")
        payload = json.loads(out)
        assert code == 0
        assert payload["deletes_exactly"] is True


class TestVerify:
    def write_machine(self, tmp_path, machine):
        path = tmp_path / "machine.json"
        path.write_text(json.dumps(machine_to_json(machine)))
        return str(path)

    def test_swap_machine_verifies(self, capsys, tmp_path):
        path = self.write_machine(tmp_path, swap_deleter(2))
        code, out, _ = run(capsys, "verify", "--machine", path, "--alphabet", "0,1,+")
        payload = json.loads(out)
        assert code == 0
        assert payload["is_isometry"] is True
        assert payload["max_gram_residual"] < 1e-12

    def test_pair_deleter_is_not_an_isometry(self, capsys, tmp_path):
        path = self.write_machine(tmp_path, qudit_pair_deleter(2))
        code, out, _ = run(capsys, "verify", "--machine", path)
        payload = json.loads(out)
        assert code == 0
        assert payload["is_isometry"] is False

    def test_corrupt_machine_is_a_numeric_error(self, capsys, tmp_path):
        payload = machine_to_json(swap_deleter(2))
        payload["rules"] = payload["rules"][:-1]
        path = tmp_path / "broken.json"
        path.write_text(json.dumps(payload))
        code, _, err = run(capsys, "verify", "--machine", str(path))
        assert code == 3
        assert "error" in err


class TestUsageErrors:
    def test_unknown_subcommand(self, capsys):
        with pytest.raises(SystemExit) as err:
            run(capsys, "explode")
        assert err.value.code == 2

    def test_missing_subcommand(self, capsys):
        with pytest.raises(SystemExit) as err:
            run(capsys)
        assert err.value.code == 2


class TestManifest:
    def test_manifest_goes_to_stderr(self, capsys):
        code, out, err = run(
            capsys, "quality", "--n", "2", "--m", "1", "--seed", "9", "--manifest"
        )
        assert code == 0
        manifest = json.loads(err)
        assert manifest["seed"] == 9
        assert "quality" in manifest["command"]
        json.loads(out)  # report still parses
