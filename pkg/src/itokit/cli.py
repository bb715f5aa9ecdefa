"""Command-line interface: ``itokit <command> [options]``.

Exit codes: 0 when every check passes, 1 on a verification failure, 2 on
usage or input errors. Diagnostics go to stderr; reports go to stdout or
``--out``.
"""

import argparse
import os
import sys
import warnings

import numpy as np

from . import __version__
from .algebra import DEFAULT_TOL, check_axioms
from .catalog import STANDARD_NAMES, build_periodic_wiener, build_standard, verify_mode_realization
from .decomposition import classify, decompose, thermal_split, vacuum_split
from .errors import (
    AliasingError,
    DocumentError,
    ItoError,
    NoQuotientIdentityError,
    NotFaithfulError,
    ParameterError,
    PresentationError,
)
from .fock import ToyFockConfig, simulate_process, verify_ito_table
from .groups import build_group_poisson, builtin_group, convolution_checks, delta_function, spectral_decompose
from .io import complex_to_json, dumps, emit_algebra, parse_algebra
from .representation import fundamental_matrix, gns_build, homomorphism_residual, minkowski_metric, null_ideal

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def resolve_tol(cli_tol):
    """``--tol`` beats ``ITOKIT_TOL`` beats the default."""
    if cli_tol is not None:
        return float(cli_tol)
    env = os.environ.get("ITOKIT_TOL")
    if env:
        try:
            return float(env)
        except ValueError:
            raise UsageError(f"ITOKIT_TOL={env!r} is not a number") from None
    return DEFAULT_TOL


def _load(args, tol):
    if not args.input:
        raise UsageError("--input is required")
    try:
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc.strerror}") from None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return parse_algebra(text, tol=tol)


def _describe(alg, v, digits=12):
    """Human-readable ``2 d_w - 1j e`` for a coefficient vector."""
    terms = []
    for lab, c in zip(alg.labels, np.asarray(v)):
        c = complex(round(c.real, digits), round(c.imag, digits))
        if c == 0:
            continue
        if c == 1:
            terms.append(lab)
        elif c.imag == 0:
            terms.append(f"{c.real:g} {lab}")
        else:
            terms.append(f"({c.real:g}{c.imag:+g}j) {lab}")
    return " + ".join(terms) or "0"


def _rep_or_fail(alg):
    try:
        return gns_build(alg)
    except NotFaithfulError as exc:
        raise _Fail(str(exc)) from None


class _Fail(Exception):
    pass


# Commands: each returns (report dict, passed flag, text lines) ---------------------


def cmd_check(args, tol):
    alg = _load(args, tol)
    rep = alg.report or check_axioms(alg)
    report = {
        "passed": rep.passed,
        "violations": [{"axiom": v.axiom, "witness": list(v.witness), "residual": v.residual} for v in rep.violations],
        "residuals": rep.residuals,
    }
    lines = ["axioms: pass" if rep.passed else "axioms: FAIL"]
    lines += [f"  {v.axiom}: residual {v.residual:.3g} at {v.witness}" for v in rep.violations]
    return report, rep.passed, lines


def cmd_gns(args, tol):
    alg = _load(args, tol)
    ideal = null_ideal(alg)
    if ideal.dim:
        report = {"faithful": False, "null_ideal": complex_to_json(ideal.vectors.T)}
        lines = [f"not faithful: null_ideal has dimension {ideal.dim}"]
        lines += ["  " + _describe(alg, v) for v in ideal]
        return report, False, lines
    rep = _rep_or_fail(alg)
    report = {
        "faithful": True,
        "gns_dim": rep.gns_dim,
        "quadruples": {
            lab: {
                "l": complex_to_json(rep.state[i]),
                "k": complex_to_json(rep.kets[i]),
                "kdag": complex_to_json(rep.bras[i]),
                "A": complex_to_json(rep.ops[i]),
            }
            for i, lab in enumerate(alg.labels)
        },
        "residuals": rep.residuals,
    }
    lines = [f"gns_dim: {rep.gns_dim}"]
    for i, lab in enumerate(alg.labels):
        lines.append(f"  {lab}: l={rep.state[i]:.6g} k={np.round(rep.kets[i], 12)} A={np.round(rep.ops[i], 12).tolist()}")
    return report, True, lines


def cmd_represent(args, tol):
    alg = _load(args, tol)
    rep = _rep_or_fail(alg)
    mats = {lab: fundamental_matrix(rep, alg.basis(i)) for i, lab in enumerate(alg.labels)}
    hom = adj = 0.0
    for i in range(alg.dim):
        for j in range(alg.dim):
            p, a = homomorphism_residual(rep, alg.basis(i), alg.basis(j))
            hom, adj = max(hom, p), max(adj, a)
    passed = hom <= tol * alg.scale**2 and adj <= tol * alg.scale
    report = {
        "metric": complex_to_json(minkowski_metric(rep.gns_dim)),
        "matrices": {lab: complex_to_json(M) for lab, M in mats.items()},
        "residuals": {"homomorphism": hom, "adjoint": adj},
        "passed": passed,
    }
    lines = []
    for lab, M in mats.items():
        lines.append(f"{lab}:")
        lines += ["  " + " ".join(f"{_short(z):>10}" for z in row) for row in M]
    lines.append(f"homomorphism residual {hom:.3g}, adjoint residual {adj:.3g}")
    return report, passed, lines


def _short(z):
    z = complex(round(z.real, 12), round(z.imag, 12))
    return f"{z.real:g}" if z.imag == 0 else f"{z.real:g}{z.imag:+g}j"


def _decomposition_report(alg, d):
    return {
        "brownian": [complex_to_json(b) for b in d.brownian_basis],
        "levy": [complex_to_json(c) for c in d.levy_basis],
        "brownian_terms": [_describe(alg, b) for b in d.brownian_basis],
        "levy_terms": [_describe(alg, c) for c in d.levy_basis],
        "e": None if d.e is None else complex_to_json(d.e),
        "E": complex_to_json(d.E),
        "residuals": d.residuals,
        "passed": d.passed,
    }


def cmd_decompose(args, tol):
    alg = _load(args, tol)
    rep = _rep_or_fail(alg)
    try:
        if args.method == "vacuum":
            d = vacuum_split(alg)
        elif args.method == "thermal":
            d = thermal_split(alg)
        else:
            d = decompose(alg, rep)
    except NoQuotientIdentityError as exc:
        raise _Fail(str(exc)) from None
    except PresentationError as exc:
        raise UsageError(f"--method {args.method}: {exc}") from None
    report = _decomposition_report(alg, d)
    lines = [
        "brownian=[" + ", ".join(report["brownian_terms"]) + "]",
        "levy=[" + ", ".join(report["levy_terms"]) + "]",
        f"orthogonality residual {d.residuals['orthogonality']:.3g}",
    ]
    return report, d.passed, lines


def cmd_classify(args, tol):
    alg = _load(args, tol)
    rep = _rep_or_fail(alg)
    c = classify(alg, rep)
    report = {
        "kind": c.kind.value,
        "vacuum": c.vacuum_flag,
        "thermal": c.thermal_flag,
        "two_dim_type": None if c.two_dim_type is None else c.two_dim_type.value,
    }
    lines = [f"kind: {c.kind.value}", f"vacuum: {c.vacuum_flag}", f"thermal: {c.thermal_flag}"]
    if c.two_dim_type is not None:
        lines.append(f"two_dim_type: {c.two_dim_type.value}")
    return report, True, lines


def _parse_params(items):
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"parameter {item!r} must look like key=value")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _parse_lambda(text, G):
    if text in (None, "", "delta"):
        return delta_function(G)
    try:
        vals = [complex(s.replace(" ", "")) for s in text.split(",")]
    except ValueError:
        raise UsageError(f"cannot parse lambda values {text!r}") from None
    if len(vals) != G.order:
        raise UsageError(f"lambda needs {G.order} values, got {len(vals)}")
    return np.array(vals)


def _periodic_from_params(params, tol):
    K = int(params.pop("K", 0))
    rho = {}
    for k in range(1, K + 1):
        key = f"rho_{k}"
        if key not in params:
            raise UsageError(f"periodic_wiener needs {key}")
        rho[k] = float(params.pop(key))
    if params:
        raise UsageError(f"unknown parameters {sorted(params)}")
    return build_periodic_wiener(K, rho, tol=tol)


def cmd_catalog(args, tol):
    params = _parse_params(args.param)
    name = args.name
    if name == "periodic_wiener":
        alg = _periodic_from_params(params, tol)
    elif name == "group_poisson":
        G, _ = builtin_group(params.pop("group", "Z2"))
        lam = _parse_lambda(params.pop("lambda", "delta"), G)
        if params:
            raise UsageError(f"unknown parameters {sorted(params)}")
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            alg = build_group_poisson(G, lam, tol=tol)
    else:
        alg = build_standard(name, {k: float(v) for k, v in params.items()}, tol=tol)
    return emit_algebra(alg)


def cmd_group(args, tol):
    G, irreps = builtin_group(args.group)
    lam = _parse_lambda(args.lam, G)
    if args.action == "convolution":
        r = convolution_checks(G, lam, tol)
        report = {
            "convolution": complex_to_json(r.convolution),
            "self_inverse": r.self_inverse,
            "self_inverse_residual": r.self_inverse_residual,
            "positive_definite": r.positive_definite,
            "min_eigenvalue": r.min_eigenvalue,
            "hermitian_residual": r.hermitian_residual,
        }
        lines = [
            f"self-inverse: {'pass' if r.self_inverse else 'FAIL'} (residual {r.self_inverse_residual:.3g})",
            f"positive definite: {'pass' if r.positive_definite else 'FAIL'} (min eigenvalue {r.min_eigenvalue:.3g})",
        ]
        return report, r.passed, lines
    s = spectral_decompose(G, irreps, lam, tol)
    passed = s.residual <= tol and s.hermitian_residual <= tol
    report = {
        "irreps": [ir.label for ir in irreps],
        "rho": [complex_to_json(r) for r in s.rhos],
        "residual": s.residual,
        "hermitian_residual": s.hermitian_residual,
        "min_eigenvalues": s.min_eigenvalues,
    }
    lines = [
        f"{ir.label}: rho = [" + "; ".join(" ".join(_short(z) for z in row) for row in r) + "]"
        for ir, r in zip(irreps, s.rhos)
    ]
    lines.append(f"reconstruction residual {s.residual:.3g}")
    return report, passed, lines


def cmd_fock(args, tol):
    if args.action == "modes":
        rho = {k: float(v) for k, v in _parse_params(args.param).items()}
        rho = {int(k.split("_")[1]): v for k, v in rho.items()}
        try:
            r = verify_mode_realization(args.K, rho, args.N)
            aliasing = None
        except AliasingError as exc:
            r, aliasing = exc.report, str(exc)
        report = {
            "K": r.K,
            "N": r.N,
            "grid": complex_to_json(r.grid),
            "residual": r.residual,
            "aliased_pairs": [list(p) for p in r.aliased_pairs],
        }
        lines = [f"residual {r.residual:.3g}"]
        if aliasing:
            lines.append(f"aliasing: {aliasing}")
        return report, aliasing is None and r.residual <= max(tol, 1e-12), lines

    alg = _load(args, tol)
    rep = _rep_or_fail(alg)
    if args.action == "simulate":
        a = alg.basis(args.element)
        cfg = ToyFockConfig(args.h, args.steps, rep.gns_dim)
        states = simulate_process(rep, a, cfg)
        l = rep.l(a)
        means = [s.vacuum_mean for s in states]
        dev = max(abs(mu - (j + 1) * cfg.h * l) for j, mu in enumerate(means))
        report = {
            "element": args.element,
            "h": cfg.h,
            "steps": cfg.N,
            "means": complex_to_json(means),
            "second_moment": complex_to_json(states[-1].moment(2)),
            "mean_deviation": dev,
        }
        lines = [f"step {j + 1}: mean {_short(mu)}" for j, mu in enumerate(means)]
        lines.append(f"second moment at step {cfg.N}: {_short(states[-1].moment(2))}")
        return report, dev <= 1e-12, lines
    # ito
    labels = [args.a] if args.a else list(alg.labels)
    labels_b = [args.b] if args.b else list(alg.labels)
    rows = []
    ok = True
    for la in labels:
        for lb in labels_b:
            r = verify_ito_table(rep, alg.basis(la), alg.basis(lb), args.h)
            ok = ok and r.passed
            rows.append({"a": la, "b": lb, "deviation": r.deviation, "deviation_refined": r.deviation_refined,
                         "ratio": None if np.isnan(r.ratio) else r.ratio, "order_two": r.order_two})
    lines = [f"{r['a']} {r['b']}: deviation {r['deviation']:.3g} ratio {r['ratio']}" for r in rows]
    return {"h": args.h, "pairs": rows}, ok, lines


# Parser ---------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the report as JSON")
    common.add_argument("--tol", type=float, default=None, help="tolerance (overrides ITOKIT_TOL)")
    common.add_argument("--out", default=None, help="write the report to this file")

    p = _Parser(prog="itokit", description="Verify, represent and decompose finite-dimensional Ito algebras.")
    p.add_argument("--version", action="version", version=f"itokit {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    for name, help_ in [
        ("check", "verify the algebra axioms"),
        ("gns", "build the fundamental representation"),
        ("represent", "print the triangular matrix of every basis element"),
        ("classify", "Brownian/Levy kind and vacuum/thermal flags"),
    ]:
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("--input", required=True)

    sp = sub.add_parser("decompose", parents=[common], help="Brownian/Levy decomposition")
    sp.add_argument("--input", required=True)
    sp.add_argument("--method", choices=["generic", "vacuum", "thermal"], default="generic")

    sp = sub.add_parser("catalog", parents=[common], help="emit a catalog algebra document")
    sp.add_argument("name", choices=list(STANDARD_NAMES) + ["periodic_wiener", "group_poisson"])
    sp.add_argument("--param", action="append", metavar="KEY=VALUE")

    sp = sub.add_parser("group", parents=[common], help="positive-definite functions on finite groups")
    sp.add_argument("action", choices=["convolution", "spectral"])
    sp.add_argument("--group", default="Z2", help="Z<N> or S3")
    sp.add_argument("--lambda", dest="lam", default="delta", help="'delta' or comma-separated values")

    sp = sub.add_parser("fock", parents=[common], help="toy-Fock simulations and the mode check")
    sp.add_argument("action", choices=["simulate", "ito", "modes"])
    sp.add_argument("--input")
    sp.add_argument("--element", default="d_t")
    sp.add_argument("--steps", type=int, default=8)
    sp.add_argument("--h", type=float, default=0.125)
    sp.add_argument("--a")
    sp.add_argument("--b")
    sp.add_argument("--K", type=int, default=1)
    sp.add_argument("--N", type=int, default=3)
    sp.add_argument("--param", action="append", metavar="rho_k=VALUE")
    return p


COMMANDS = {
    "check": cmd_check,
    "gns": cmd_gns,
    "represent": cmd_represent,
    "decompose": cmd_decompose,
    "classify": cmd_classify,
    "group": cmd_group,
    "fock": cmd_fock,
}


def _write(args, text):
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv=None):
    """Run one command; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required")
        tol = resolve_tol(args.tol)
        if args.command == "catalog":
            _write(args, cmd_catalog(args, tol))
            return EXIT_OK
        report, passed, lines = COMMANDS[args.command](args, tol)
    except UsageError as exc:
        print(f"itokit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DocumentError, ParameterError, KeyError) as exc:
        print(f"itokit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _Fail as exc:
        print(f"itokit: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ItoError as exc:
        print(f"itokit: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    full = {"command": args.command, "tol": tol, "version": __version__, "passed": bool(passed), "result": report}
    if args.json:
        text = dumps(full)
    else:
        text = "\n".join(lines + [f"tol: {tol:g}"]) + "\n"
    _write(args, text)
    return EXIT_OK if passed else EXIT_FAIL


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
