"""
Command-line front end.

Exit codes: 0 ok, 1 verification failure, 2 input error, 3 family/region
mismatch, 4 non-diagonalizable form.

Region codes in sweep output: 1 = I, 2 = II, 3 = III, -1 = border I-II,
-2 = border I-III, -3 = non-diagonalizable inside II, -4 = non-diagonalizable
inside III, -5 = both ratios at one (critical), 0 = zero form.
"""

import argparse
import json
import sys
import time

import numpy as np

from . import fock
from . import multimode as mm
from . import quadrature as qd
from . import wavefunctions as wf
from .forms import MultiModeForm, OneModeForm, _pair
from .normal_modes import (
    BogoliubovCoeffs,
    NonDiagonalizableError,
    Region,
    bogoliubov,
    classify,
    lambda_of,
    transform_form,
)
from .sweep import SweepConfig, default_workers, run_sweep

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_DOMAIN, EXIT_NONDIAG = 0, 1, 2, 3, 4


class InputError(ValueError):
    pass


# -- io helpers -----------------------------------------------------------------


def jsonable(obj):
    """Recursively turn complex numbers into [re, im] and numpy types into Python ones."""
    if isinstance(obj, (complex, np.complexfloating)):
        z = complex(obj)
        return [z.real, z.imag]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return [jsonable(x) for x in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value
    return obj


def dumps(obj):
    return json.dumps(jsonable(obj), indent=2, sort_keys=True) + "\n"


def read_json(path):
    try:
        text = sys.stdin.read() if path in (None, "-") else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise InputError(f"cannot read input: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from exc


def write_out(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def load_form(path):
    obj = read_json(path)
    try:
        return OneModeForm.from_json(obj), obj
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from exc


def parse_complex(text):
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise InputError(f"not a complex number: {text!r}") from exc


def coeff_json(b):
    return {"u": b.u, "v": b.v, "u_bar": b.u_bar, "v_bar": b.v_bar, "det": b.det()}


# -- commands -------------------------------------------------------------------


def _phase_free(form):
    g = form.a_coeff / abs(form.a_coeff) if form.a_coeff != 0 else 1.0 + 0j
    return g, OneModeForm(form.a_coeff / g, form.b_plus / g, form.b_minus / g)


def classification_record(form, tol):
    rc = classify(form, tol)
    g, f1 = _phase_free(form)
    rec = {"form": form.to_json(), "region": rc.to_json(), "lambda": g * lambda_of(f1), "phase": g}
    try:
        rec["coefficients"] = coeff_json(bogoliubov(f1, tol))
    except NonDiagonalizableError as exc:
        rec["note"] = str(exc)
    return rec


def cmd_classify(args):
    form, _ = load_form(args.input)
    write_out(args.out, dumps(classification_record(form, args.tol)))
    return EXIT_OK


def cmd_sweep(args):
    try:
        lo, hi = args.range if args.range else ((-4.0, 4.0) if args.plane == "real" else (0.0, 40.0))
        cfg = SweepConfig(args.plane, args.A, lo, hi, args.grid, args.theta, args.tol)
    except (ValueError, TypeError) as exc:
        raise InputError(f"bad sweep config: {exc}") from exc
    workers = args.workers if args.workers else default_workers()
    res = run_sweep(cfg, workers)
    write_out(args.out, res.to_csv())
    return EXIT_OK


def spectrum_record(form, k, cutoff, tol):
    rc = classify(form, tol)
    g, f1 = _phase_free(form)
    rec = {"form": form.to_json(), "region": rc.label.value}
    n = np.arange(k)
    if rc.label is Region.ZERO_FORM:
        rec["statement"] = "zero form: H = 0"
        return rec
    try:
        lam = g * bogoliubov(f1, tol).lam
    except NonDiagonalizableError:
        rec["statement"] = "lambda = 0: H is not diagonalizable; see the coherent-state family"
        return rec
    rec["lambda"] = lam
    if rc.label in (Region.I, Region.BORDER_I_II, Region.BORDER_I_III):
        rec["levels_H"] = lam * (n + 0.5)
        rec["levels_H_dag"] = lam.conjugate() * (n + 0.5)
        if rc.label is Region.I:
            cmp = fock.compare_spectrum(form, cutoff, k)
            rec["oracle"] = {
                "cutoff": cutoff,
                "matched": cmp["matched"],
                "max_deviation": cmp["max_deviation"],
                "max_drift": cmp["max_drift"],
                "unstable": cmp["unstable"],
            }
        else:
            rec["statement"] = "border: one vacuum is not normalizable; biorthogonal pairing kept as a limit"
    elif rc.label is Region.II:
        rec["statement"] = (
            "H has a continuous spectrum: each complex E carries two independent bounded "
            "eigenfunctions; the band -lambda (n + 1/2) is listed below"
        )
        rec["negative_band"] = -lam * (n + 0.5)
    elif rc.label is Region.III:
        rec["statement"] = "no convergent eigenstates of H; adjoint continuous"
    else:
        rec["statement"] = "critical point: both coefficient ratios have unit modulus"
    return rec


def cmd_spectrum(args):
    form, _ = load_form(args.input)
    write_out(args.out, dumps(spectrum_record(form, args.k, args.cutoff, args.tol)))
    return EXIT_OK


def cmd_wavefunction(args):
    form, _ = load_form(args.input)
    if args.family not in wf.FAMILIES:
        raise InputError(f"unknown family {args.family!r}; choose from {', '.join(wf.FAMILIES)}")
    param = parse_complex(args.param)
    if args.family in ("vacuum_b", "vacuum_bbar", "excited_b", "excited_bbar", "negative_band"):
        if param.imag != 0 or param.real != int(param.real) or param.real < 0:
            raise InputError("this family takes a non-negative integer level")
        param = int(param.real)
    spec = wf.WaveSpec(args.family, form, param)
    x = np.linspace(-args.xmax, args.xmax, args.grid)
    psi = wf.evaluate(spec, x, tol=args.tol)
    grid = qd.QuadratureGrid(args.xmax, args.grid, "uniform-trapezoid")
    rep = qd.schrodinger_residual(spec, grid=grid, tol=args.tol)
    header = {
        "family": args.family,
        "param": complex(param),
        "form": form.to_json(),
        "energy": rep.energy,
        "residual": rep.to_json(),
        "bounded": wf.is_bounded(spec, args.tol),
    }
    lines = ["# " + json.dumps(jsonable(header), sort_keys=True), "x,re,im"]
    lines += [f"{float(xi)!r},{float(p.real)!r},{float(p.imag)!r}" for xi, p in zip(x, psi)]
    write_out(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def nd_record(form, cutoff=None, levels=6):
    d = mm.decompose(form)
    rec = {"N": form.n_modes, "decomposition": d.to_json()}
    if d.diagonalizable and cutoff and form.n_modes <= 3:
        ev = fock.eigen_truncated_nd(form, cutoff)
        target = fock.ladder_levels(d.lambdas, levels)
        matched = np.array([ev[np.argmin(np.abs(ev - t))] for t in target])
        rec["oracle"] = {
            "cutoff": cutoff,
            "targets": target,
            "matched": matched,
            "max_deviation": float(np.max(np.abs(matched - target))),
        }
    return d, rec


def cmd_nd(args):
    obj = read_json(args.input)
    try:
        form = MultiModeForm.from_json(obj)
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from exc
    d, rec = nd_record(form, args.cutoff)
    write_out(args.out, dumps(rec))
    return EXIT_OK if d.diagonalizable else EXIT_NONDIAG


# -- verify ---------------------------------------------------------------------


def _given_coeffs(obj, lam):
    c = obj.get("coeffs") if isinstance(obj, dict) else None
    if c is None:
        return None
    try:
        return BogoliubovCoeffs(_pair(c["u"]), _pair(c["v"]), _pair(c["u_bar"]), _pair(c["v_bar"]), lam)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed coeffs: {exc!r}") from exc


def verify_suite(form, obj=None, tol=1e-9, cutoff=150):
    """Run the invariant checks that apply to ``form``; returns a list of records."""
    out = []

    def check(name, value, limit, ok=None):
        ok = bool(value <= limit) if ok is None else bool(ok)
        out.append({"invariant": name, "value": value, "limit": limit, "pass": ok})

    rc = classify(form, tol)
    g, f1 = _phase_free(form)
    try:
        b0 = bogoliubov(f1, tol)
    except NonDiagonalizableError:
        out.append({"invariant": "diagonalizable", "value": False, "limit": None, "pass": True, "note": "lambda = 0"})
        return rc, out
    b = _given_coeffs(obj, b0.lam) or b0
    check("det_equals_one", abs(b.det() - 1), 1e-10)
    t = transform_form(f1, b)
    scale = abs(f1.a_coeff) + abs(f1.b_plus) + abs(f1.b_minus)
    check("transformed_offdiagonal", max(abs(t.b_plus_prime), abs(t.b_minus_prime)) / scale, 1e-10)
    check("transformed_diagonal", abs(t.a_prime - b.lam) / scale, 1e-10)
    r1, r2 = b0.ratios()
    A = f1.a_coeff
    check("ratio_formula", abs(r1 - abs(f1.b_plus) / abs(A + b0.lam)) + abs(r2 - abs(f1.b_minus) / abs(A + b0.lam)), 1e-12)
    ov = qd.overlap_convergence(form)
    check("overlap_ratio_le_one", ov["ratio"], 1 + 1e-12)
    if ov.get("finite"):
        check("overlap_series_closed_form", ov["series_rel_err"], 1e-10)

    verdicts = {w: fock.vacuum_series(w, b0, 60).verdict for w in ("b", "b_bar", "b_dagger_bar")}
    expect = {
        Region.I: ("convergent", "convergent", "divergent"),
        Region.II: ("convergent", "divergent", "convergent"),
        Region.III: ("divergent", "convergent", "divergent"),
    }.get(rc.label)
    if expect is not None:
        got = tuple(verdicts[w] for w in ("b", "b_bar", "b_dagger_bar"))
        out.append({"invariant": "vacuum_series_verdicts", "value": got, "limit": expect, "pass": got == expect})

    grid = qd.QuadratureGrid(5.0, 1001, "uniform-trapezoid")

    def resid(spec):
        return qd.schrodinger_residual(spec, grid=grid, tol=tol).max_rel_residual

    if rc.label is Region.I:
        for n in range(4):
            check(f"residual_excited_b_{n}", resid(wf.WaveSpec("excited_b", form, n)), 1e-8)
            check(f"residual_excited_bbar_{n}", resid(wf.WaveSpec("excited_bbar", form, n)), 1e-8)
        G = qd.biorthogonal_matrix(form, 3)
        check("biorthogonality_n3", float(np.max(np.abs(G - np.eye(4)))), 1e-8)
        cmp = fock.compare_spectrum(form, cutoff, 3)
        check("fock_oracle_levels", cmp["max_deviation"], 1e-6)
    elif rc.label is Region.II:
        for nu in (0.5 + 0.3j, -1.2 + 0.7j):
            for fam in ("continuous_b", "continuous_bbar_dag"):
                spec = wf.WaveSpec(fam, form, nu)
                check(f"residual_{fam}_{nu}", resid(spec), 1e-6)
                out.append({"invariant": f"bounded_{fam}_{nu}", "value": True, "limit": None, "pass": wf.is_bounded(spec, tol)})
        for n in range(3):
            check(f"residual_negative_band_{n}", resid(wf.WaveSpec("negative_band", form, n)), 1e-8)
    elif rc.label is Region.III:
        check("residual_excited_bbar_0", resid(wf.WaveSpec("excited_bbar", form, 0)), 1e-8)
    return rc, out


def cmd_verify(args):
    form, obj = load_form(args.input)
    rc, checks = verify_suite(form, obj, args.tol, args.cutoff)
    ok = all(c["pass"] for c in checks)
    write_out(args.out, dumps({"region": rc.label.value, "checks": checks, "pass": ok}))
    return EXIT_OK if ok else EXIT_VERIFY


# -- entry point ----------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(
        prog="bosonspec",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("--timing", action="store_true", help="report wall time on stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, input_=True):
        if input_:
            sp.add_argument("--input", default="-", help="JSON file, or - for stdin")
        sp.add_argument("--out", default="-", help="output file, or - for stdout")
        sp.add_argument("--tol", type=float, default=1e-9)

    sp = sub.add_parser("classify", help="region, lambda and Bogoliubov coefficients of a one-mode form")
    common(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("sweep", help="CSV region map bp,bm,code,lambda_re,lambda_im")
    common(sp, input_=False)
    sp.add_argument("--plane", choices=("real", "modulus"), default="real")
    sp.add_argument("--A", type=float, default=1.0)
    sp.add_argument("--range", type=float, nargs=2, metavar=("LO", "HI"))
    sp.add_argument("--grid", type=int, default=201)
    sp.add_argument("--theta", type=float, default=0.0, help="common phase of B+- in the modulus plane")
    sp.add_argument("--workers", type=int, default=0, help="worker processes (default: BOSONSPEC_WORKERS or all cores)")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("spectrum", help="analytic levels plus truncated-Fock comparison")
    common(sp)
    sp.add_argument("--k", type=int, default=5)
    sp.add_argument("--cutoff", type=int, default=300)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("wavefunction", help="CSV samples x,re,im after a JSON header line")
    common(sp)
    sp.add_argument("--family", required=True, choices=wf.FAMILIES)
    sp.add_argument("--param", default="0", help="level, complex order nu or coherent amplitude")
    sp.add_argument("--grid", type=int, default=1001)
    sp.add_argument("--xmax", type=float, default=5.0)
    sp.set_defaults(func=cmd_wavefunction)

    sp = sub.add_parser("nd", help="N-mode normal-mode decomposition")
    common(sp)
    sp.add_argument("--cutoff", type=int, default=0, help="per-mode cutoff of the Fock oracle (0: skip)")
    sp.set_defaults(func=cmd_nd)

    sp = sub.add_parser("verify", help="run the invariant suite for one form")
    common(sp)
    sp.add_argument("--cutoff", type=int, default=150)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_INPUT
    t0 = time.perf_counter()
    try:
        code = args.func(args)
    except InputError as exc:
        print(f"bosonspec: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except wf.DomainError as exc:
        print(f"bosonspec: family not valid here: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (NonDiagonalizableError, wf.DegenerateError) as exc:
        print(f"bosonspec: {exc}", file=sys.stderr)
        return EXIT_NONDIAG if isinstance(exc, NonDiagonalizableError) else EXIT_DOMAIN
    if args.timing:
        print(f"wall time {time.perf_counter() - t0:.3f} s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
