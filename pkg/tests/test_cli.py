import json
import math
import subprocess
import sys

import numpy as np
import pytest

from bosonspec import cli


def form_json(A, Bp, Bm):
    c = lambda z: [complex(z).real, complex(z).imag]
    return json.dumps({"A": c(A), "Bp": c(Bp), "Bm": c(Bm)})


def nd_json(A, Bp, Bm):
    c = lambda M: [[[complex(z).real, complex(z).imag] for z in row] for row in np.asarray(M)]
    return json.dumps({"N": len(A), "A": c(A), "Bp": c(Bp), "Bm": c(Bm)})


@pytest.fixture
def run(tmp_path, capsys):
    def go(*argv, stdin=None):
        args = list(argv)
        if stdin is not None:
            p = tmp_path / "in.json"
            p.write_text(stdin)
            args += ["--input", str(p)]
        code = cli.main(args)
        out = capsys.readouterr()
        return code, out.out, out.err

    return go


def cplx(pair):
    return complex(*pair)


class TestClassify:
    def test_region_one(self, run):
        code, out, _ = run("classify", stdin=form_json(1, 0.5, 0.5))
        rec = json.loads(out)
        assert code == 0
        assert rec["region"]["label"] == "I"
        assert abs(cplx(rec["lambda"]) - math.sqrt(0.75)) < 1e-15
        c = rec["coefficients"]
        assert abs(cplx(c["det"]) - 1) < 1e-12

    def test_nondiag(self, run):
        code, out, _ = run("classify", stdin=form_json(1, 0.5, 2))
        assert code == 0
        assert json.loads(out)["region"]["label"] == "NonDiagII"

    @pytest.mark.parametrize("text", ["{not json", '{"A": [1, 0]}', '{"A":[1,0],"Bp":"x","Bm":[0,0]}'])
    def test_malformed(self, run, text):
        code, out, err = run("classify", stdin=text)
        assert code == 2 and out == "" and "input error" in err

    def test_missing_file(self, run):
        code, _, err = run("classify", "--input", "/nonexistent/form.json")
        assert code == 2

    def test_unknown_command(self, run):
        code, _, _ = run("frobnicate")
        assert code == 2

    def test_deterministic(self, run):
        a = run("classify", stdin=form_json(1, 0.3 + 0.2j, 0.4 - 0.1j))[1]
        b = run("classify", stdin=form_json(1, 0.3 + 0.2j, 0.4 - 0.1j))[1]
        assert a == b


class TestSweep:
    def test_csv(self, run, tmp_path):
        out = tmp_path / "map.csv"
        code, _, _ = run("sweep", "--grid", "21", "--workers", "2", "--out", str(out))
        rows = out.read_text().splitlines()
        assert code == 0
        assert rows[0] == "bp,bm,code,lambda_re,lambda_im"
        assert len(rows) == 21 * 21 + 1
        # floats round-trip exactly
        p, q, c, lr, li = rows[5].split(",")
        assert complex(float(lr), float(li)) == np.sqrt(1 - float(p) * float(q) + 0j)

    def test_bad_config(self, run):
        code, _, err = run("sweep", "--grid", "1")
        assert code == 2 and "grid" in err
        assert run("sweep", "--range", "3", "1")[0] == 2

    def test_modulus_plane(self, run):
        code, out, _ = run("sweep", "--plane", "modulus", "--theta", str(math.pi / 2), "--range", "0", "4", "--grid", "41")
        rows = [r.split(",") for r in out.splitlines()[1:]]
        for p, q, c, *_ in rows:
            d = abs(float(p) - float(q)) - 2
            if abs(d) > 0.2:
                assert (int(c) == 1) == (d < 0)

    def test_timing_flag(self, run):
        code, out, err = run("--timing", "sweep", "--grid", "5")
        assert "wall time" in err
        assert "wall time" not in run("sweep", "--grid", "5")[2]


class TestSpectrum:
    def test_oscillator(self, run):
        code, out, _ = run("spectrum", "--k", "3", "--cutoff", "20", stdin=form_json(1, 0, 0))
        rec = json.loads(out)
        assert [cplx(z) for z in rec["levels_H"]] == [0.5, 1.5, 2.5]
        assert rec["oracle"]["max_deviation"] < 1e-14

    def test_swanson(self, run):
        rec = json.loads(run("spectrum", stdin=form_json(1, 0.5, 0.3))[1])
        assert abs(cplx(rec["lambda"]) - math.sqrt(0.85)) < 1e-15
        assert rec["oracle"]["max_deviation"] < 1e-6

    def test_region_two(self, run):
        rec = json.loads(run("spectrum", stdin=form_json(1, 0.1, 5))[1])
        assert rec["region"] == "II"
        assert "continuous" in rec["statement"]
        assert abs(cplx(rec["negative_band"][0]) + math.sqrt(0.5) / 2) < 1e-15

    def test_region_three(self, run):
        rec = json.loads(run("spectrum", stdin=form_json(1, 5, 0.1))[1])
        assert rec["region"] == "III"
        assert rec["statement"] == "no convergent eigenstates of H; adjoint continuous"


class TestWavefunction:
    def parse(self, out):
        lines = out.splitlines()
        header = json.loads(lines[0][2:])
        assert lines[1] == "x,re,im"
        data = np.array([[float(v) for v in ln.split(",")] for ln in lines[2:]])
        return header, data

    def test_gaussian(self, run):
        code, out, _ = run("wavefunction", "--family", "vacuum_b", stdin=form_json(1, 0, 0))
        header, data = self.parse(out)
        assert code == 0 and data.shape == (1001, 3)
        x = data[:, 0]
        ref = np.pi**-0.25 * np.exp(-x * x / 2)
        assert np.max(np.abs(data[:, 1] - ref)) < 1e-15
        assert header["residual"]["max_rel_residual"] <= 1e-12

    def test_continuous(self, run):
        code, out, _ = run(
            "wavefunction", "--family", "continuous_b", "--param", "0.5+0.3j", stdin=form_json(1, 0.1, 5)
        )
        header, _ = self.parse(out)
        assert code == 0
        assert header["residual"]["max_rel_residual"] <= 1e-6
        assert header["bounded"]

    def test_domain_mismatch(self, run):
        code, out, err = run(
            "wavefunction", "--family", "continuous_b", "--param", "0.5", stdin=form_json(1, 0.5, 0.3)
        )
        assert code == 3 and out == ""
        assert "not bounded" in err

    def test_bad_param(self, run):
        assert run("wavefunction", "--family", "excited_b", "--param", "1.5", stdin=form_json(1, 0.5, 0.3))[0] == 2
        assert run("wavefunction", "--family", "excited_b", "--param", "abc", stdin=form_json(1, 0.5, 0.3))[0] == 2


class TestND:
    def test_uncoupled(self, run):
        code, out, _ = run("nd", stdin=nd_json(np.diag([1, 1]), np.diag([0.5, 0.1]), np.diag([0.3, 5])))
        rec = json.loads(out)
        assert code == 0
        lams = sorted(cplx(l).real for l in rec["decomposition"]["lambdas"])
        assert np.allclose(lams, sorted([math.sqrt(0.85), math.sqrt(0.5)]), atol=1e-14)

    def test_hermitian_oracle(self, run):
        A = [[1.0, 0.2], [0.2, 1.5]]
        B = [[0.1, 0.05], [0.05, 0.2]]
        code, out, _ = run("nd", "--cutoff", "20", stdin=nd_json(A, B, B))
        rec = json.loads(out)
        assert code == 0 and rec["oracle"]["max_deviation"] < 1e-6

    def test_nondiagonalizable(self, run):
        code, out, _ = run("nd", stdin=nd_json([[1]], [[0.5]], [[2]]))
        rec = json.loads(out)
        assert code == 4
        assert rec["decomposition"]["diagonalizable"] is False
        assert "jordan_info" in rec["decomposition"]

    def test_bad_input(self, run):
        assert run("nd", stdin='{"N": 2, "A": [[[1,0]]]}')[0] == 2


class TestVerify:
    def test_hermitian(self, run):
        code, out, _ = run("verify", stdin=form_json(1, 0.6, 0.6))
        rec = json.loads(out)
        assert code == 0 and rec["pass"]
        assert {c["invariant"] for c in rec["checks"]} >= {"det_equals_one", "biorthogonality_n3", "fock_oracle_levels"}

    def test_region_two(self, run):
        code, out, _ = run("verify", stdin=form_json(1, 0.1, 5))
        rec = json.loads(out)
        assert code == 0 and rec["region"] == "II"
        names = {c["invariant"] for c in rec["checks"]}
        assert "vacuum_series_verdicts" in names
        assert any(n.startswith("residual_continuous_b") for n in names)

    def test_corrupted_coefficients(self, run):
        obj = json.loads(form_json(1, 0.5, 0.3))
        obj["coeffs"] = {"u": [1.2, 0], "v": [0.3, 0], "u_bar": [1.0, 0], "v_bar": [0.1, 0]}
        code, out, _ = run("verify", stdin=json.dumps(obj))
        rec = json.loads(out)
        assert code == 1
        failed = [c["invariant"] for c in rec["checks"] if not c["pass"]]
        assert "det_equals_one" in failed


def test_console_entry_point(tmp_path):
    p = tmp_path / "f.json"
    p.write_text(form_json(1, 0.5, 0.5))
    r = subprocess.run([sys.executable, "-m", "bosonspec.cli", "classify", "--input", str(p)], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["region"]["label"] == "I"
    r = subprocess.run([sys.executable, "-m", "bosonspec.cli", "classify"], input="[", capture_output=True, text=True)
    assert r.returncode == 2
