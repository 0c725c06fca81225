import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from chebqr.chebtech import write_coeffs
from chebqr.cli import filter_real_roots, main, residual_ok, zeros


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


class TestFilter:
    def test_keeps_real_interval(self):
        eigs = [0.5, 0.5 + 1e-9j, 1.0 + 1e-9, -1.5, 0.2 + 0.1j, -1.0 - 1e-12j]
        np.testing.assert_array_equal(filter_real_roots(eigs), [-1.0, 0.5, 1.0])

    def test_edge_tolerance_scales(self):
        assert len(filter_real_roots([1 + 5e-9])) == 1
        assert len(filter_real_roots([1 + 5e-8])) == 0

    def test_sorted(self):
        r = filter_real_roots(np.random.default_rng(0).uniform(-1, 1, 20))
        assert np.all(np.diff(r) > 0)


class TestZeros:
    def test_quadratic(self):
        rep = zeros("x^2 - 1/4")
        np.testing.assert_allclose(rep.real_roots, [-0.5, 0.5], atol=1e-14)
        assert rep.stability == "ok"

    def test_oscillatory(self):
        rep = zeros("exp(x)*sin(800*x)")
        k = np.arange(-254, 255)
        assert len(rep.real_roots) == len(k)
        assert np.abs(rep.real_roots - k * np.pi / 800).max() <= 1e-10
        assert np.all(residual_ok(rep.coeffs, rep.real_roots))

    def test_coefficient_input(self):
        rep = zeros(np.array([0.0, 0.0, 0.0, 1.0]))
        np.testing.assert_allclose(rep.real_roots, np.sort(np.cos(np.pi * np.array([1, 3, 5]) / 6)),
                                   atol=1e-14)

    def test_degree_one(self):
        rep = zeros("2*x - 1")
        np.testing.assert_allclose(rep.real_roots, [0.5], atol=1e-15)
        assert rep.degree == 1 and rep.notes

    def test_constant(self):
        rep = zeros("3")
        assert rep.degree == 0 and len(rep.real_roots) == 0 and rep.notes

    def test_callable(self):
        rep = zeros(np.cos)
        np.testing.assert_allclose(rep.real_roots, [], atol=0)
        rep = zeros(lambda x: np.cos(10 * x), all_eigenvalues=True)
        assert len(rep.real_roots) == 6 and len(rep.all_eigenvalues) == rep.degree

    def test_threshold_configurable(self):
        assert zeros("x^3 - x/2", suspect_threshold=0.0).stability == "suspect"

    def test_polynomial_reconstruction(self):
        from chebqr.chebtech import roots_to_cheb
        from chebqr.oracle import backward_error_coeffs
        c = np.random.default_rng(4).standard_normal(41)
        rep = zeros(c, all_eigenvalues=True)
        assert rep.gamma_hat <= 1e2
        chat = roots_to_cheb(rep.all_eigenvalues, normalize=True)
        assert backward_error_coeffs(c / c[-1], chat).B <= 1e-9


class TestMain:
    def test_text(self, capsys):
        code, out, _ = run(["zeros", "x^2 - 1/4"], capsys)
        assert code == 0
        assert "stability: ok" in out
        assert "5.0000000000000000e-01" in out

    def test_json(self, capsys):
        code, out, _ = run(["zeros", "x^2 - 1/4", "--json", "--all"], capsys)
        d = json.loads(out)
        assert code == 0
        assert d["schema"] == "chebqr.report/1"
        assert d["stability"] == "ok"
        assert len(d["real_roots"]) == 2 and len(d["all_eigenvalues"]) == 2

    def test_csv(self, capsys):
        code, out, _ = run(["zeros", "x^3 - x/4", "--csv"], capsys)
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0 and len(rows) == 3
        assert float(rows[1]["root"]) == pytest.approx(0.0, abs=1e-15)

    def test_parse_error(self, capsys):
        code, _, err = run(["zeros", "sin(x"], capsys)
        assert code == 2 and "byte 5" in err

    def test_needs_one_source(self, capsys):
        assert run(["zeros"], capsys)[0] == 2

    def test_coeffs_file(self, tmp_path, capsys):
        p = tmp_path / "c.txt"
        write_coeffs(p, [0.5, 0.0, 1.0])
        code, out, _ = run(["zeros", "--coeffs", str(p), "--json"], capsys)
        assert code == 0
        np.testing.assert_allclose(json.loads(out)["real_roots"], [-0.5, 0.5], atol=1e-15)

    @pytest.mark.parametrize("text", ["abc\n", "0\n0\n", ""])
    def test_bad_file(self, tmp_path, capsys, text):
        p = tmp_path / "c.txt"
        p.write_text(text)
        assert run(["eig", "--coeffs", str(p)], capsys)[0] == 4
        if text != "0\n0\n":
            assert run(["zeros", "--coeffs", str(p)], capsys)[0] == 4

    def test_missing_file(self, tmp_path, capsys):
        assert run(["eig", "--coeffs", str(tmp_path / "none")], capsys)[0] == 4

    def test_eig(self, tmp_path, capsys):
        p = tmp_path / "c.txt"
        write_coeffs(p, [1.0, -2.0, 0.5, 3.0, 1.0])
        code, out, _ = run(["eig", "--coeffs", str(p), "--json", "--all"], capsys)
        d = json.loads(out)
        assert code == 0 and d["degree"] == 4
        z = np.array([complex(a, b) for a, b in d["eigenvalues"]])
        assert np.min(np.abs(z - 0.90251977349065435)) < 1e-13
        assert "diagnostics" in d

    def test_eig_text_and_csv(self, tmp_path, capsys):
        p = tmp_path / "c.txt"
        write_coeffs(p, [1.0 + 1j, 0.0, 1.0])
        code, out, _ = run(["eig", "--coeffs", str(p)], capsys)
        assert code == 0 and out.startswith("degree      2")
        code, out, _ = run(["eig", "--coeffs", str(p), "--csv"], capsys)
        assert code == 0 and out.splitlines()[0] == "index,real,imag"

    def test_convergence_failure(self, capsys, monkeypatch):
        import chebqr.cli as cli
        from chebqr.qrcore import ConvergenceError

        def boom(*a, **k):
            raise ConvergenceError("no convergence", None)

        monkeypatch.setattr(cli, "parallel_eigenvalues", boom)
        assert run(["zeros", "x^3 - x/4"], capsys)[0] == 3

    def test_bench(self, capsys):
        code, out, _ = run(["bench", "--degrees", "16,32", "--json"], capsys)
        rows = [json.loads(line) for line in out.splitlines()]
        assert code == 0 and [r["degree"] for r in rows] == [16, 32]
        assert run(["bench", "--degrees", "16", "--no-aed", "--csv"], capsys)[0] == 0
        assert run(["bench", "--degrees", "a,b"], capsys)[0] == 2

    def test_seed_env(self, monkeypatch, capsys):
        monkeypatch.setenv("CHEBQR_SEED", "7")
        a = run(["bench", "--degrees", "20", "--json"], capsys)[1]
        b = run(["bench", "--degrees", "20", "--json"], capsys)[1]
        ga = json.loads(a)["gamma_hat"]
        assert ga == json.loads(b)["gamma_hat"]

    def test_module_entry(self):
        res = subprocess.run([sys.executable, "-m", "chebqr", "zeros", "x", "--json"],
                             capture_output=True, text=True, check=False)
        assert res.returncode == 0
        assert json.loads(res.stdout)["real_roots"] == [0.0]
