"""Command-line front end: band scans, gap eigenpairs, symbol norms and
verification suites, with CSV/JSON emission.

Exit codes: 0 success, 1 failed verification verdicts, 2 usage or
validation errors.  All floats are printed with 17 significant digits so
identical inputs give byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import gap, verify
from .bands import band_edges, csv_rows, spectral_distance
from .dirac import dirac_eigenfunction, dirac_gap_eigenvalues
from .errors import SpectralDecayError
from .floquet import discriminant, discriminant_derivative
from .potentials import (CompactPerturbation, MatrixPerturbation,
                         load_perturbation, load_potential)
from .symbols import ellipticity_margin, gamma, load_symbol_system


def _f(x: float) -> str:
    return format(float(x), ".17g")


def _load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def _emit(text: str, path: str | None):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _parse_range(spec: str) -> np.ndarray:
    """start:stop:count -> inclusive linspace."""
    try:
        start, stop, count = spec.split(":")
        start, stop, count = float(start), float(stop), int(count)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"range must be start:stop:count, got {spec!r}")
    if count < 1:
        raise argparse.ArgumentTypeError("range count must be >= 1")
    return np.linspace(start, stop, count)


def cmd_bands(args) -> int:
    V = load_potential(_load_json(args.potential))
    bs = band_edges(V, args.lambda_max, grid_step=args.grid_step)
    rows = csv_rows(bs)
    if args.format == "csv":
        lines = ["lambda_edge,kind"]
        lines += [f"{_f(lam)},{kind}" for lam, kind in rows]
        _emit("\n".join(lines) + "\n", args.output)
    else:
        doc = {"lambda0": _f(bs.lambda0), "scan_ceiling": _f(bs.scan_ceiling),
               "incomplete": bs.incomplete,
               "edges": [{"lambda_edge": _f(lam), "kind": kind}
                         for lam, kind in rows],
               "gaps": [[_f(a), _f(b)] for a, b in bs.gaps]}
        _emit(json.dumps(doc, sort_keys=True, indent=2) + "\n", args.output)
    return 0


def cmd_discriminant(args) -> int:
    V = load_potential(_load_json(args.potential))
    lams = args.lambda_range
    header = "lambda,F,Fprime" if args.derivative else "lambda,F"
    lines = [header]
    for lam in lams:
        F = discriminant(V, lam)
        if args.derivative:
            lines.append(f"{_f(lam)},{_f(F)},{_f(discriminant_derivative(V, lam))}")
        else:
            lines.append(f"{_f(lam)},{_f(F)}")
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def cmd_gap_eig(args) -> int:
    V = load_potential(_load_json(args.potential))
    Q = load_perturbation(_load_json(args.perturbation))
    lam = args.lam
    alpha = gap.solve_coupling(V, Q, lam)
    pair = gap.eigenfunction(V, Q, alpha, lam)
    summary = {"lambda": _f(pair.lam), "alpha": _f(pair.alpha),
               "c_plus": _f(pair.c_plus), "c_minus": _f(pair.c_minus),
               "fitted_delta": _f(pair.fitted_delta), "ln_rho": _f(pair.ln_rho)}
    _emit(json.dumps(summary, sort_keys=True, indent=2) + "\n", args.output)
    if args.samples_out:
        lines = ["x,psi"]
        lines += [f"{_f(x)},{_f(p)}" for x, p in zip(pair.xs, pair.psi)]
        _emit("\n".join(lines) + "\n", args.samples_out)
    return 0


def cmd_bs_spectrum(args) -> int:
    V = load_potential(_load_json(args.potential))
    Q = load_perturbation(_load_json(args.perturbation))
    bss = gap.birman_schwinger_spectrum(V, Q, args.lam, grid_size=args.grid_size)
    top = bss.mu[:args.count]
    doc = {"lambda": _f(bss.lam), "grid_size": bss.grid_size,
           "mu": [_f(m) for m in top],
           "alpha": [_f(1.0 / m) for m in top if m != 0.0]}
    _emit(json.dumps(doc, sort_keys=True, indent=2) + "\n", args.output)
    return 0


def cmd_dirac_eig(args) -> int:
    W = MatrixPerturbation.scalar_well(args.depth, tuple(args.support))
    m = args.mass
    lams = dirac_gap_eigenvalues(W, m)
    results = []
    for lam in lams:
        pair = dirac_eigenfunction(W, m, lam)
        results.append({"m": _f(m), "lambda": _f(lam),
                        "rate_exact": _f(pair.rate_exact),
                        "fitted_delta": _f(pair.fitted_delta),
                        "d_lambda": _f(m - abs(lam))})
    _emit(json.dumps({"eigenvalues": results, "count": len(results)},
                     sort_keys=True, indent=2) + "\n", args.output)
    if args.samples_out and results:
        pair = dirac_eigenfunction(W, m, lams[0])
        lines = ["x,re_psi1,im_psi1,re_psi2,im_psi2"]
        for x, (p1, p2) in zip(pair.xs, pair.psi):
            lines.append(",".join([_f(x), _f(p1.real), _f(p1.imag),
                                   _f(p2.real), _f(p2.imag)]))
        _emit("\n".join(lines) + "\n", args.samples_out)
    return 0


def cmd_gamma(args) -> int:
    system = load_symbol_system(_load_json(args.matrices))
    rep = gamma(system)
    margin = ellipticity_margin(system)
    doc = {"gamma": _f(rep.gamma),
           "gamma_argmax": [_f(v) for v in rep.gamma_argmax],
           "ellipticity_margin": _f(margin),
           "elliptic": bool(margin > 1e-10)}
    _emit(json.dumps(doc, sort_keys=True, indent=2) + "\n", args.output)
    return 0


def cmd_verify(args) -> int:
    V = load_potential(_load_json(args.potential)) if args.potential else None
    report = verify.run_suite(args.suite, V)
    _emit(verify.report_json(report), args.output)
    return 1 if verify.has_failure(report) else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="spectral-decay",
        description="Band structure, gap eigenvalues and decay-rate "
                    "verification for 1D periodic Schrodinger and Dirac operators.")
    sub = p.add_subparsers(dest="command", required=True)

    def out(sp):
        sp.add_argument("--output", "-o", default=None,
                        help="output path (default: stdout)")

    sp = sub.add_parser("bands", help="scan band edges and gaps")
    sp.add_argument("--potential", required=True, help="potential JSON path")
    sp.add_argument("--lambda-max", type=float, required=True)
    sp.add_argument("--grid-step", type=float, default=0.05)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    out(sp)
    sp.set_defaults(func=cmd_bands)

    sp = sub.add_parser("discriminant", help="tabulate F(lambda) on a range")
    sp.add_argument("--potential", required=True)
    sp.add_argument("--lambda-range", type=_parse_range, required=True,
                    metavar="START:STOP:COUNT", dest="lambda_range")
    sp.add_argument("--derivative", action="store_true",
                    help="also tabulate dF/dlambda")
    out(sp)
    sp.set_defaults(func=cmd_discriminant)

    sp = sub.add_parser("gap-eig",
                        help="place an eigenvalue at a gap point and report the pair")
    sp.add_argument("--potential", required=True)
    sp.add_argument("--perturbation", required=True)
    sp.add_argument("--lambda", type=float, required=True, dest="lam")
    sp.add_argument("--samples-out", default=None, help="CSV path for x,psi samples")
    out(sp)
    sp.set_defaults(func=cmd_gap_eig)

    sp = sub.add_parser("bs-spectrum", help="Birman-Schwinger spectrum at a gap point")
    sp.add_argument("--potential", required=True)
    sp.add_argument("--perturbation", required=True)
    sp.add_argument("--lambda", type=float, required=True, dest="lam")
    sp.add_argument("--grid-size", type=int, default=2048)
    sp.add_argument("--count", type=int, default=8, help="eigenvalues to report")
    out(sp)
    sp.set_defaults(func=cmd_bs_spectrum)

    sp = sub.add_parser("dirac-eig", help="1D Dirac gap eigenvalues for a scalar well")
    sp.add_argument("--mass", type=float, required=True)
    sp.add_argument("--depth", type=float, required=True,
                    help="well depth w (W = -w*I on the support)")
    sp.add_argument("--support", type=float, nargs=2, default=(-1.0, 1.0),
                    metavar=("A", "B"))
    sp.add_argument("--samples-out", default=None,
                    help="CSV path for samples of the first eigenfunction")
    out(sp)
    sp.set_defaults(func=cmd_dirac_eig)

    sp = sub.add_parser("gamma", help="symbol-norm constant of a first-order system")
    sp.add_argument("--matrices", required=True, help="symbol system JSON path")
    out(sp)
    sp.set_defaults(func=cmd_gamma)

    sp = sub.add_parser("verify", help="run a named verification suite")
    sp.add_argument("--suite", required=True,
                    choices=sorted(verify.SUITES) + ["all"])
    sp.add_argument("--potential", default=None,
                    help="optional potential JSON overriding the suite default")
    out(sp)
    sp.set_defaults(func=cmd_verify)
    return p


def _apply_thread_cap():
    cap = os.environ.get("SPECTRAL_DECAY_THREADS")
    if not cap:
        return
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ[var] = cap
    try:
        import threadpoolctl
        threadpoolctl.threadpool_limits(int(cap))
    except (ImportError, ValueError):
        pass


def main(argv=None) -> int:
    _apply_thread_cap()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors already
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (SpectralDecayError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
