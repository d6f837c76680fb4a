"""Command-line interface.

Every subcommand prints exactly one JSON document on stdout. Exit codes:
0 success, 1 domain error (stdout carries ``{"error": code, "detail": ...}``),
2 usage error.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import math
import sys

import numpy as np

from . import io
from .errors import NoConvergence, SchemaError, SchmidtError
from .majorization import MAJORIZATION_TOL, locc_verdict, to_prob_vector
from .mixed_pure import (
    WITNESS_TOL,
    hermitian_rotate,
    operator_schmidt,
    ppt_test,
    separability_flags,
    witness_test,
)
from .physics import (
    bloch_analyze,
    bloch_from_overlap,
    dirac_analyze,
    dirac_conjecture_scan,
    dirac_maximizer,
    make_bloch_input,
    make_dirac_spinor,
)
from .schmidt import (
    DEFAULT_RANK_TOL,
    decompose_product_sum,
    entanglement_entropy,
    max_entangled,
    reduced_density,
    schmidt_decompose,
)
from .states import MixedPureState, ProductSumState, PureState
from .truncation import converge_schmidt, finite_source, geometric_source, power_law_source

LN2 = math.log(2.0)


class UsageError(Exception):
    pass


def _entropy(value: float, bits: bool) -> dict:
    return {"entropy_bits": value / LN2} if bits else {"entropy_nats": value}


def _floats(v) -> list:
    return io.real_vector_to_json(v)


def schmidt_document(sd) -> dict:
    return {
        "rank": sd.rank,
        "tau": _floats(sd.tau),
        "left": io.matrix_to_json(sd.left),
        "right": io.matrix_to_json(sd.right),
    }


def _load(path, normalize=False, kinds=None):
    state = io.load(path, normalize=normalize)
    if kinds is not None and not isinstance(state, kinds):
        names = {PureState: "pure", ProductSumState: "product_sum", MixedPureState: "mixed_pure"}
        wanted = ", ".join(names[k] for k in kinds)
        raise SchemaError(f"{path}: expected a state of kind {wanted}")
    return state


def _schmidt_of(path, args):
    state = _load(path, args.normalize, (PureState, ProductSumState))
    if isinstance(state, ProductSumState):
        return decompose_product_sum(state, args.rank_tol)
    return schmidt_decompose(state, args.rank_tol)


def cmd_decompose(args):
    return schmidt_document(_schmidt_of(args.state, args))


def cmd_entropy(args):
    return _entropy(entanglement_entropy(_schmidt_of(args.state, args)), args.bits)


def cmd_reduced(args):
    sd = _schmidt_of(args.state, args)
    return {"rho": io.matrix_to_json(reduced_density(sd)), "eigenvalues": _floats(sd.tau**2)}


def cmd_maxent(args):
    state = max_entangled(args.d, args.n)
    doc = io.to_document(state)
    if args.out:
        io.save(state, args.out)
    return doc


def _mixed(path):
    return _load(path, kinds=(MixedPureState,))


def cmd_opschmidt(args):
    osd = operator_schmidt(_mixed(args.state), args.rank_tol)
    if not args.no_hermitian:
        osd = hermitian_rotate(osd)
    return {
        "rank": osd.rank,
        "lambdas": _floats(osd.lambdas),
        "hermitian_factors": osd.hermitian_factors,
        "E": [io.matrix_to_json(e) for e in osd.E],
        "psi": [io.vector_to_json(p) for p in osd.psi],
    }


def _witness_document(rep) -> dict:
    pairings = None
    if rep.witness_pairings is not None:
        pairings = [{"probe": name, "pairing": value} for name, value in rep.witness_pairings]
    return {
        "lambda_sum": rep.lambda_sum,
        "verdict": rep.verdict.value,
        "self_pairing": rep.self_pairing,
        "witness_pairings": pairings,
    }


def _basis_probes(d, n):
    eye_d, eye_n = np.eye(d), np.eye(n)
    for a in range(d):
        for k in range(n):
            yield f"e{a}f{k}", np.outer(eye_d[a], eye_d[a]), eye_n[k]


def cmd_witness(args):
    q = _mixed(args.state)
    osd = hermitian_rotate(operator_schmidt(q, args.rank_tol))
    probes = _basis_probes(q.d, q.n) if args.probes else None
    tol = WITNESS_TOL if args.tol is None else args.tol
    return _witness_document(witness_test(osd, tol, probes))


def cmd_separability(args):
    q = _mixed(args.state)
    tol = WITNESS_TOL if args.tol is None else args.tol
    flags = separability_flags(q, args.rank_tol, tol, args.seed)
    return {
        "nonneg_factor_separable": flags.nonneg_factor_separable.value,
        "low_rank_separable": flags.low_rank_separable.value,
        "ppt": flags.ppt.value,
        "operator_rank": flags.operator_rank,
        "witness": _witness_document(flags.witness),
        "trace_one": q.trace_one,
        "h_purity": q.h_purity,
    }


def cmd_ppt(args):
    return {"ppt": ppt_test(_mixed(args.state), args.rank_tol, args.seed).value}


def cmd_majorize(args):
    sd1 = _schmidt_of(args.state1, args)
    sd2 = _schmidt_of(args.state2, args)
    tol = MAJORIZATION_TOL if args.tol is None else args.tol
    p1, p2 = to_prob_vector(sd1), to_prob_vector(sd2)
    return {
        "verdict": locc_verdict(sd1, sd2, tol).value,
        "lambda_1": _floats(p1.p),
        "lambda_2": _floats(p2.p),
        "prefix_sums_1": _floats(p1.prefix_sums()),
        "prefix_sums_2": _floats(p2.prefix_sums()),
    }


def _float_list(text):
    try:
        return [float(x) for x in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _source(args):
    if args.source == "geometric":
        if args.weights is None or args.ratios is None:
            raise UsageError("geometric source needs --weights and --ratios")
        return geometric_source(args.weights, args.ratios, interleaved=not args.shared)
    if args.source == "power-law":
        if args.weights is None or args.exponents is None:
            raise UsageError("power-law source needs --weights and --exponents")
        return power_law_source(args.weights, args.exponents)
    if args.file is None:
        raise UsageError("finite source needs --file")
    return finite_source(_load(args.file, args.normalize, (PureState,)).coeffs)


def _gap(g):
    return None if g is None or not math.isfinite(g) else g


def _convergence_document(rep) -> dict:
    return {
        "final_n": rep.final_n,
        "rank": rep.schmidt.rank,
        "tau": _floats(rep.schmidt.tau),
        "delta_gap": _gap(rep.delta_gap),
        "weyl_bound": _gap(rep.weyl_bound),
        "bound_certified": rep.bound_certified,
        "rank_certified": rep.rank_certified,
        "iterations": [
            {
                "n": s.n,
                "tau": _floats(s.tau),
                "raw_eigenvalues": _floats(s.raw_eigenvalues),
                "mass": s.mass,
                "gap": _gap(s.gap),
            }
            for s in rep.iterations
        ],
    }


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def _convergence_csv(path, rep):
    d = rep.schmidt.d
    rows = [[s.n, s.mass, "" if s.gap is None else s.gap, *s.tau] for s in rep.iterations]
    _write_csv(path, ["n", "mass", "gap", *[f"tau{a}" for a in range(d)]], rows)


def cmd_converge(args):
    src = _source(args)
    tol = 1e-10 if args.tol is None else args.tol
    try:
        rep = converge_schmidt(src, tol, args.n0, args.n_max, args.rank_tol)
    except NoConvergence as exc:
        if args.out and exc.report is not None:
            _convergence_csv(args.out, exc.report)
        exc.document = _convergence_document(exc.report) if exc.report is not None else None
        raise
    if args.out:
        _convergence_csv(args.out, rep)
    return _convergence_document(rep)


def _parse_sweep(text):
    try:
        start, step, end = (float(x) for x in text.split(":"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"--sweep expects start:step:end, got {text!r}") from exc
    if step <= 0 or end < start:
        raise argparse.ArgumentTypeError("--sweep needs step > 0 and end >= start")
    count = int(math.floor((end - start) / step + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(count)]


def _bloch_document(rep, bits) -> dict:
    return {
        "sigma": io.complex_to_json(rep.sigma),
        "delta": rep.delta,
        "rho": io.matrix_to_json(rep.rho),
        "eigenvalues": _floats(rep.eigenvalues),
        **_entropy(rep.entropy, bits),
        "regime": rep.regime.value,
    }


def cmd_bloch(args):
    if args.theta1 or args.theta2:
        if not (args.theta1 and args.theta2):
            raise UsageError("--theta1 and --theta2 must be given together")
        if args.sweep:
            raise UsageError("--sweep works with --c1 only")
        t1 = _load(args.theta1, True, (PureState,))
        t2 = _load(args.theta2, True, (PureState,))
        if t1.d != 1 or t2.d != 1:
            raise SchemaError("orbital factor files must be pure states with d = 1")
        c2 = math.sqrt(max(0.0, 1.0 - args.c1**2))
        return _bloch_document(bloch_analyze(make_bloch_input(args.c1, c2, t1.coeffs[0], t2.coeffs[0])), args.bits)
    if args.sweep:
        reports = [bloch_analyze(bloch_from_overlap(args.c1, s)) for s in args.sweep]
        if args.out:
            key = "entropy_bits" if args.bits else "entropy_nats"
            scale = 1 / LN2 if args.bits else 1.0
            _write_csv(
                args.out,
                ["sigma", "delta", key, "regime"],
                [[r.sigma.real, r.delta, r.entropy * scale, r.regime.value] for r in reports],
            )
        return {
            "c1": args.c1,
            "sweep": [
                {
                    "sigma": io.complex_to_json(r.sigma),
                    "delta": r.delta,
                    **_entropy(r.entropy, args.bits),
                    "regime": r.regime.value,
                }
                for r in reports
            ],
        }
    sigma = complex(args.sigma, args.sigma_im)
    return _bloch_document(bloch_analyze(bloch_from_overlap(args.c1, sigma)), args.bits)


def cmd_dirac(args):
    state = _load(args.state, args.normalize, (PureState,))
    rep = dirac_analyze(make_dirac_spinor(state.coeffs), args.rank_tol)
    return {
        "rank": rep.schmidt.rank,
        "tau": _floats(rep.schmidt.tau),
        **_entropy(rep.entropy, args.bits),
        "gram": io.matrix_to_json(rep.gram),
        "diagonal_gram": rep.diagonal_gram,
    }


def cmd_dirac_scan(args):
    include = [dirac_maximizer(args.n)] if args.include_maximizer else []
    res = dirac_conjecture_scan(args.samples, args.n, args.seed, include)
    scale = 1 / LN2 if args.bits else 1.0
    if args.out:
        _write_csv(args.out, ["sample", "entropy"], [[i, e * scale] for i, e in enumerate(res.entropies)])
    unit = "bits" if args.bits else "nats"
    return {
        "samples": args.samples,
        "n": args.n,
        "seed": args.seed,
        f"max_entropy_{unit}": res.max_entropy * scale,
        f"ceiling_{unit}": math.log(4.0) * scale,
        "argmax": io.matrix_to_json(res.argmax.components),
    }


def _seed(text):
    try:
        v = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from exc
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _positive_float(text):
    try:
        v = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from exc
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=_positive_float, default=None)
    common.add_argument("--rank-tol", type=_positive_float, default=DEFAULT_RANK_TOL)
    common.add_argument("--bits", action="store_true", help="report entropies in bits")
    common.add_argument("--seed", type=_seed, default=0)
    common.add_argument("--out", default=None, help="also write a CSV table (or state file) here")
    common.add_argument("--normalize", action="store_true", help="renormalize pure input states")

    parser = argparse.ArgumentParser(prog="schmidt-dinf", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    for name, func, text in (
        ("decompose", cmd_decompose, "Schmidt decomposition of a pure or product-sum state"),
        ("entropy", cmd_entropy, "entanglement entropy"),
        ("reduced", cmd_reduced, "reduced density matrix on C^d"),
    ):
        add(name, func, text).add_argument("state")

    p = add("maxent", cmd_maxent, "maximally entangled state")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)

    p = add("opschmidt", cmd_opschmidt, "operator Schmidt decomposition of a mixed-pure state")
    p.add_argument("state")
    p.add_argument("--no-hermitian", action="store_true", help="skip the Hermitian rotation")
    p = add("witness", cmd_witness, "lambda-sum entanglement witness")
    p.add_argument("state")
    p.add_argument("--probes", action="store_true", help="pair the witness with computational-basis factor probes")
    add("separability", cmd_separability, "sufficient separability conditions").add_argument("state")
    add("ppt", cmd_ppt, "partial transpose test on factor probes").add_argument("state")

    p = add("majorize", cmd_majorize, "LOCC convertibility of two pure states")
    p.add_argument("state1")
    p.add_argument("state2")

    p = add("converge", cmd_converge, "Schmidt data of an infinite coefficient source")
    p.add_argument("--source", choices=("geometric", "power-law", "finite"), required=True)
    p.add_argument("--weights", type=_float_list)
    p.add_argument("--ratios", type=_float_list)
    p.add_argument("--exponents", type=_float_list)
    p.add_argument("--shared", action="store_true", help="geometric rows share all columns")
    p.add_argument("--file", help="pure state file for the finite source")
    p.add_argument("--n0", type=int, default=4)
    p.add_argument("--n-max", type=int, default=1 << 16)

    p = add("bloch", cmd_bloch, "spin-1/2 Bloch state analysis")
    p.add_argument("--c1", type=float, default=1 / math.sqrt(2))
    p.add_argument("--sigma", type=float, default=0.0, help="real part of <theta1|theta2>")
    p.add_argument("--sigma-im", type=float, default=0.0)
    p.add_argument("--theta1", help="pure state file with d = 1 holding theta1")
    p.add_argument("--theta2", help="pure state file with d = 1 holding theta2")
    p.add_argument("--sweep", type=_parse_sweep, help="sigma sweep start:step:end")

    add("dirac", cmd_dirac, "Dirac spinor analysis (pure state file with d = 4)").add_argument("state")
    p = add("dirac-scan", cmd_dirac_scan, "random search for the largest spinor entropy")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--include-maximizer", action="store_true")
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        doc = args.func(args)
    except UsageError as exc:
        parser.print_usage(stderr)
        print(f"{parser.prog}: error: {exc}", file=stderr)
        return 2
    except SchmidtError as exc:
        err = {"error": exc.code, "detail": str(exc)}
        report = getattr(exc, "document", None)
        if report is not None:
            err["report"] = report
        stdout.write(io.dumps(err) + "\n")
        print(f"{exc.code}: {exc}", file=stderr)
        return 1
    except OSError as exc:
        stdout.write(io.dumps({"error": "IOError", "detail": str(exc)}) + "\n")
        print(f"IOError: {exc}", file=stderr)
        return 1
    stdout.write(io.dumps(doc) + "\n")
    return 0


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
