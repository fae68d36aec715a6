import csv
import io
import json
import math
import subprocess
import sys

import pytest
from scipy import integrate

from fracdirac.cli import main
from fracdirac.kernel import heat_kernel


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestKernel:
    def test_origin_value(self, capsys):
        code, out, _ = run(["kernel", "--alpha", "2", "--n", "1", "--r", "0"], capsys)
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert float(rows[0]["re_K"]) == pytest.approx(1 / math.sqrt(4 * math.pi), rel=1e-15)
        assert rows[0]["method"] == "wright"

    def test_several_radii_and_methods(self, capsys):
        for method in ("wright", "quadrature", "mellin"):
            code, out, _ = run(["kernel", "--alpha", "2", "--n", "3", "--r", "0.5", "1.5",
                                "--method", method], capsys)
            assert code == 0
            rows = list(csv.DictReader(io.StringIO(out)))
            assert [float(r["r"]) for r in rows] == [0.5, 1.5]
            for r in rows:
                assert float(r["re_K"]) == pytest.approx(heat_kernel(3, float(r["r"]), 1.0), rel=1e-9)
                assert r["method"] == method

    def test_complex_tau(self, capsys):
        code, out, _ = run(["kernel", "--alpha", "3", "--n", "1", "--r", "1", "--tau-re", "0.8",
                            "--tau-im", "0.6"], capsys)
        assert code == 0 and float(next(csv.DictReader(io.StringIO(out)))["im_K"]) != 0

    def test_alpha_below_window(self, capsys):
        code, _, err = run(["kernel", "--alpha", "1.5", "--n", "1", "--r", "1"], capsys)
        assert code == 2 and "m >= 1" in err

    def test_stable_range_opt_in(self, capsys):
        code, out, _ = run(["kernel", "--alpha", "1.5", "--n", "1", "--r", "1", "--allow-m0"], capsys)
        assert code == 0
        val, _ = integrate.quad(lambda u: math.exp(-u ** 1.5) * math.cos(u), 0, 60, limit=400, epsabs=1e-14)
        assert float(next(csv.DictReader(io.StringIO(out)))["re_K"]) == pytest.approx(val / math.pi, rel=1e-10)

    def test_left_half_plane_tau(self, capsys):
        code, _, _ = run(["kernel", "--alpha", "3", "--n", "1", "--r", "1", "--tau-re", "-1"], capsys)
        assert code == 2

    def test_tolerance_breach_exit_code(self, capsys):
        code, _, err = run(["kernel", "--alpha", "3", "--n", "1", "--r", "1", "--method", "mellin",
                            "--tol", "1e-30"], capsys)
        assert code == 1 and "not converged" in err


class TestSolution:
    def test_csv_layout(self, capsys):
        code, out, _ = run(["solution", "--alpha", "2.5", "--theta", "0.5", "--grid-N", "16",
                            "--grid-L", "8"], capsys)
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["x1", "re_1", "im_1", "re_e1", "im_e1"]
        assert len(rows) == 17

    def test_json_output_file(self, tmp_path, capsys):
        path = tmp_path / "phi.json"
        code, _, _ = run(["solution", "--alpha", "3", "--theta", "1", "--n", "2", "--grid-N", "8",
                          "--out", str(path)], capsys)
        assert code == 0
        doc = json.loads(path.read_text())
        assert doc["blades"] == ["1", "e1", "e2", "e1e2"]
        assert len(doc["coords"]) == 64 and len(doc["coefficients"]["e1"]["re"]) == 64

    def test_spectral_space_at_time_zero(self, capsys):
        code, out, _ = run(["solution", "--alpha", "2.5", "--theta", "0.5", "--t", "0", "--grid-N", "8",
                            "--space", "spectral", "--format", "json"], capsys)
        assert code == 0
        doc = json.loads(out)
        assert set(doc["coefficients"]["1"]["re"]) == {1.0}
        assert set(doc["coefficients"]["e1"]["re"]) == {0.0}

    @pytest.mark.parametrize("path", ["projection", "singular"])
    def test_alternative_paths(self, path, capsys):
        code, out, _ = run(["solution", "--alpha", "2.5", "--theta", "0.5", "--grid-N", "64",
                            "--grid-L", "16", "--path", path], capsys)
        assert code == 0 and len(out.splitlines()) == 65

    def test_window_violation(self, capsys):
        code, _, err = run(["solution", "--alpha", "2.5", "--theta", "0.7"], capsys)
        assert code == 2 and "window" in err

    def test_odd_grid(self, capsys):
        code, _, _ = run(["solution", "--alpha", "3", "--grid-N", "15"], capsys)
        assert code == 2

    def test_spectral_space_needs_spectral_path(self, capsys):
        code, _, _ = run(["solution", "--alpha", "3", "--space", "spectral", "--path", "projection"], capsys)
        assert code == 2


class TestVerify:
    def test_all_suites_pass_on_defaults(self, capsys):
        code, out, _ = run(["verify", "--suite", "all"], capsys)
        doc = json.loads(out)
        assert code == 0 and doc["passed"]
        kinds = {c["check"] for c in doc["checks"]}
        assert {"pde_residual", "spectral_ode_residual", "semigroup", "delta_initial_condition",
                "kernel_crosscheck", "odd_order_reference"} <= kinds

    def test_impossible_tolerance_fails(self, capsys):
        code, out, _ = run(["verify", "--suite", "residual", "--pde-tol", "1e-15"], capsys)
        assert code == 1 and not json.loads(out)["passed"]

    def test_global_tolerance_override(self, capsys):
        code, _, _ = run(["verify", "--suite", "airy", "--tol", "1e-20"], capsys)
        assert code == 1


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "fracdirac", "kernel", "--alpha", "4", "--n", "2",
                          "--r", "0"], capture_output=True, text=True, check=False)
    assert res.returncode == 0
    want = math.gamma(0.5) / (8 * math.pi)
    assert float(res.stdout.splitlines()[1].split(",")[1]) == pytest.approx(want, rel=1e-15)
