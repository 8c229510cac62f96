"""Command-line front end.

    qmiorder generate ghz --L 4 --out ghz.json
    qmiorder analyze ghz.json --out analysis/ --chi 1,2
    qmiorder cost analysis/qmi.csv analysis/entropies.json --eta 2 --sign +
    qmiorder optimize analysis/qmi.csv analysis/entropies.json --method anneal --seed 1
    qmiorder verify --suite ssa,main-bound --trials 1000 --seed 3
    qmiorder truncate ghz.json --chi 1,2

Exit status is 0 on success, 1 for bad input, 2 when an internal check or a
verification suite fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import io
from .cost import CostInputs, CostReport, cost_report
from .entropy import QmiMatrix, entropy_profile, qmi_matrix
from .models import MODELS, HamiltonianSpec, make_ground_state
from .optimize import OBJECTIVES, AnnealConfig, Objective, anneal, exhaustive, two_opt
from .states import (
    basis_state,
    make_ghz,
    make_product_state,
    make_random_mps,
    make_slater,
    make_w,
    to_mps,
    truncation_profile,
)
from . import verify

KINDS = ("product", "ghz", "w", "slater", "random-mps", "ground-state")


class UserError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # usage mistakes are user errors (status 1), not argparse's default 2
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _sign(text: str) -> int:
    if text in ("+", "+1", "plus"):
        return +1
    if text in ("-", "-1", "minus"):
        return -1
    raise argparse.ArgumentTypeError(f"sign must be + or -, got {text!r}")


def _out_path(args, default: str) -> Path:
    return Path(args.out) if args.out else Path(default)


# -- generate -------------------------------------------------------------------


def cmd_generate(args, argv) -> int:
    inputs = []
    if args.kind == "product":
        if args.plus:
            state = make_product_state(args.L, args.d, [np.ones(args.d)])
        else:
            digits = [int(c) for c in args.digits] if args.digits else [0] * args.L
            if len(digits) != args.L or max(digits) >= args.d:
                raise UserError(f"--digits must be {args.L} digits below d={args.d}")
            state = basis_state(args.L, args.d, digits)
    elif args.kind == "ghz":
        state = make_ghz(args.L, args.d)
    elif args.kind == "w":
        state = make_w(args.L)
    elif args.kind == "slater":
        if not args.coeffs:
            raise UserError("slater needs --coeffs FILE.csv (L rows, N columns)")
        C = io.read_matrix_csv(args.coeffs)
        inputs.append(args.coeffs)
        state = make_slater(C.shape[0], C.shape[1], C)
    elif args.kind == "random-mps":
        state = make_random_mps(args.L, args.d, args.chi, args.seed)
    else:
        spec = HamiltonianSpec(args.model, args.L, J=args.J, g=args.g, h=args.h, delta=args.delta)
        state = make_ground_state(spec)
    out = _out_path(args, f"{args.kind}.json")
    manifest = io.make_manifest("generate", argv, {"seed": args.seed}, inputs)
    io.write_with_sidecar(out, io.dumps(io.state_to_json(state)), manifest)
    print(f"wrote {out} (L={state.L}, d={state.d}, kind={state.kind})")
    return 0


# -- analyze --------------------------------------------------------------------


def cmd_analyze(args, argv) -> int:
    state = io.read_state(args.state)
    outdir = Path(args.out or "analysis")
    manifest = io.make_manifest("analyze", argv, {}, [args.state])
    profiles = []
    for alpha in args.alpha:
        prof = entropy_profile(state, alpha)
        profiles.append(
            {"alpha": alpha, "single_site": prof.single_site.tolist(), "blocks": prof.blocks.tolist()}
        )
    io.write_json(
        outdir / "entropies.json", {"L": state.L, "d": state.d, "unit": "bits", "profiles": profiles}, manifest
    )
    Q = qmi_matrix(state)
    io.write_with_sidecar(outdir / "qmi.csv", Q.to_csv(), manifest)
    io.write_json(outdir / "qmi.json", Q.to_json(), manifest)

    truncation = []
    for chi in args.chi:
        prof = truncation_profile(state, chi)
        truncation.append(
            {
                "chi": chi,
                "cut_errors": prof.cut_errors.tolist(),
                "total": prof.total,
                "realized": prof.realized,
                "sweep_errors": prof.sweep_errors.tolist(),
            }
        )
    io.write_json(outdir / "truncation.json", {"L": state.L, "profiles": truncation}, manifest)

    vn = next((p for p in profiles if p["alpha"] == 1.0), None)
    if vn:
        print("block entropies (bits, alpha=1):", " ".join(f"{x:.6g}" for x in vn["blocks"]))
    for t in truncation:
        print(f"eps^2(chi={t['chi']}) = {t['total']:.17g}")
    print(f"wrote {outdir}/entropies.json, qmi.csv, qmi.json, truncation.json")
    return 0


# -- cost / optimize ------------------------------------------------------------


def _read_qmi(path) -> QmiMatrix:
    path = str(path)
    if path.endswith(".json"):
        with open(path) as fh:
            return QmiMatrix.from_json(json.load(fh))
    return QmiMatrix(io.read_matrix_csv(path))


def _read_entropies(path) -> np.ndarray:
    path = str(path)
    if path.endswith(".json"):
        with open(path) as fh:
            doc = json.load(fh)
        if "profiles" in doc:
            for prof in doc["profiles"]:
                if float(prof["alpha"]) == 1.0:
                    return np.asarray(prof["single_site"], dtype=float)
            raise UserError(f"{path} has no alpha=1 entropy profile")
        if "single_site" in doc:
            return np.asarray(doc["single_site"], dtype=float)
        raise UserError(f"{path} has no single-site entropies")
    return io.read_matrix_csv(path).reshape(-1)


def _cost_inputs(args) -> CostInputs:
    Q = _read_qmi(args.qmi)
    S = _read_entropies(args.entropies)
    if S.size != Q.L:
        raise UserError(f"L mismatch: {Q.L}-site QMI matrix but {S.size} single-site entropies")
    return CostInputs(S, Q)


def cmd_cost(args, argv) -> int:
    inputs = _cost_inputs(args)
    report = cost_report(inputs, eta=args.eta, sign=args.sign, tree=args.tree, ordered=not args.unordered)
    manifest = io.make_manifest("cost", argv, {}, [args.qmi, args.entropies])
    out = _out_path(args, "cost.json" if args.format == "json" else "cost.csv")
    if args.format == "json":
        io.write_json(out, report.to_json(), manifest)
    else:
        io.write_with_sidecar(out, io.csv_text(CostReport.CSV_HEADER, [report.csv_row()]), manifest)
    print(f"idist = {report.idist_value:.17g}")
    print(f"i_mps = {report.i_mps:.17g} bits, i_mps_check = {report.i_mps_check:.17g} bits")
    if report.tree_value is not None:
        print(f"i_tree = {report.tree_value:.17g} bits")
    print(f"wrote {out}")
    return 0


def cmd_optimize(args, argv) -> int:
    inputs = _cost_inputs(args)
    objective = Objective(args.objective, args.eta, args.sign)
    if args.method == "exhaustive":
        report = exhaustive(inputs, objective, max_sites=args.max_sites)
    elif args.method == "two-opt":
        start = None
        if args.start == "identity":
            start = list(range(inputs.L))
        elif args.start and args.start != "random":
            start = _int_list(args.start)
        report = two_opt(inputs, objective, start=start, seed=args.seed, restarts=args.restarts)
    else:
        config = AnnealConfig(
            initial_temperature=args.t0,
            cooling=args.cooling,
            n_temperatures=args.temperatures,
            steps_per_temperature=args.steps,
            restarts=args.restarts,
            seed=args.seed,
            max_evaluations=args.max_evaluations,
            record_trajectory=bool(args.trajectory),
        )
        report = anneal(inputs, objective, config)
    manifest = io.make_manifest("optimize", argv, {"seed": args.seed}, [args.qmi, args.entropies])
    out = _out_path(args, "ordering.json")
    io.write_json(out, report.to_json(), manifest)
    if args.trajectory:
        if args.method == "anneal":
            header, rows = ["step", "temperature", "cost", "accepted"], report.trajectory
        else:
            header = ["restart", "step", "cost"]
            rows = report.trajectory
        io.write_with_sidecar(args.trajectory, io.csv_text(header, rows), manifest)
    print("best ordering:", " ".join(str(p) for p in report.best))
    print(f"cost ({objective.label()}): {report.best_cost:.17g}")
    print(f"wrote {out}")
    return 0


# -- verify / truncate ----------------------------------------------------------


def cmd_verify(args, argv) -> int:
    names = [s.strip() for s in args.suite.split(",") if s.strip()]
    if names == ["all"]:
        names = list(verify.SUITES)
    for name in names:
        if name not in verify.SUITES:
            raise UserError(f"unknown suite {name!r}; choose from {', '.join(verify.SUITES)}")
    states = None
    if args.state:
        states = verify.battery(args.seed) + [(p, io.read_state(p)) for p in args.state]
    results, efficacy = [], []
    for name in names:
        outcome = verify.run_suite(
            name, trials=args.trials, seed=args.seed, states=states, efficacy_L=args.L, efficacy_chi=args.chi
        )
        if isinstance(outcome, dict):
            efficacy.append(outcome)
            _print_efficacy(outcome)
        else:
            results.append(outcome)
            print(outcome.line())
    ok = all(r.passed for r in results)
    manifest = io.make_manifest("verify", argv, {"seed": args.seed}, args.state or [])
    out = _out_path(args, "verify.json" if args.format == "json" else "verify.csv")
    if args.format == "json":
        doc = {"passed": ok, "results": [r.to_json() for r in results], "diagnostics": efficacy}
        io.write_json(out, doc, manifest)
    else:
        rows = [[r.name, r.instances, r.worst_margin, r.passed] for r in results]
        io.write_with_sidecar(out, io.csv_text(["name", "instances", "worst_margin", "passed"], rows), manifest)
        if efficacy:
            io.write_json(Path(str(out) + ".efficacy.json"), {"diagnostics": efficacy}, manifest)
    print(f"wrote {out}")
    return 0 if ok else 2


def _print_efficacy(report: dict) -> None:
    print("efficacy (report only)")
    print(f"{'field':>6} {'objective':<22} {'spearman':>9} {'regret':>12}")
    for case in report["cases"]:
        for row in case["objectives"]:
            rho = "degenerate" if row["spearman"] is None else f"{row['spearman']:.4f}"
            print(f"{case['field']:>6g} {row['objective']:<22} {rho:>9} {row['regret']:>12.4e}")


def cmd_truncate(args, argv) -> int:
    state = io.read_state(args.state)
    profiles = []
    for chi in args.chi:
        prof = truncation_profile(state, chi)
        mps, _ = to_mps(state, chi)
        profiles.append(
            {
                "chi": chi,
                "bond_dims": list(mps.bond_dims),
                "cut_errors": prof.cut_errors.tolist(),
                "total": prof.total,
                "realized": prof.realized,
                "sweep_errors": prof.sweep_errors.tolist(),
            }
        )
        print(f"chi={chi}: eps^2 = {prof.total:.17g}, realized = {prof.realized:.17g}")
    manifest = io.make_manifest("truncate", argv, {}, [args.state])
    out = _out_path(args, "truncation.json" if args.format == "json" else "truncation.csv")
    if args.format == "json":
        io.write_json(out, {"L": state.L, "profiles": profiles}, manifest)
    else:
        rows = [[p["chi"], j + 1, e] for p in profiles for j, e in enumerate(p["cut_errors"])]
        io.write_with_sidecar(out, io.csv_text(["chi", "cut", "eps2"], rows), manifest)
    print(f"wrote {out}")
    return 0


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qmiorder", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, fmt=True):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="output file (directory for analyze)")
        if fmt:
            p.add_argument("--format", choices=("json", "csv"), default="json")

    g = sub.add_parser("generate", help="write a test state as JSON")
    g.add_argument("kind", choices=KINDS)
    g.add_argument("--L", type=int, default=4)
    g.add_argument("--d", type=int, default=2)
    g.add_argument("--chi", type=int, default=2)
    g.add_argument("--digits", help="basis state for product, e.g. 0110")
    g.add_argument("--plus", action="store_true", help="product of uniform superpositions")
    g.add_argument("--coeffs", help="Slater orbital coefficients CSV (L rows, N columns)")
    g.add_argument("--model", choices=MODELS, default="tfim")
    g.add_argument("--J", type=float, default=1.0)
    g.add_argument("--g", type=float, default=1.0)
    g.add_argument("--h", type=float, default=0.0)
    g.add_argument("--delta", type=float, default=1.0)
    common(g, fmt=False)
    g.set_defaults(func=cmd_generate)

    a = sub.add_parser("analyze", help="entropies, QMI matrix and truncation profile of a state")
    a.add_argument("state")
    a.add_argument("--alpha", type=_float_list, default=[0.0, 0.5, 1.0, 2.0])
    a.add_argument("--chi", type=_int_list, default=[1, 2, 4])
    common(a, fmt=False)
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("cost", help="evaluate ordering costs from a QMI matrix and entropies")
    c.add_argument("qmi")
    c.add_argument("entropies")
    c.add_argument("--eta", type=float, default=2.0)
    c.add_argument("--sign", type=_sign, default=+1)
    c.add_argument("--tree", action="store_true")
    c.add_argument("--unordered", action="store_true", help="count each pair once in idist")
    common(c)
    c.set_defaults(func=cmd_cost)

    o = sub.add_parser("optimize", help="search for a low-cost site ordering")
    o.add_argument("qmi")
    o.add_argument("entropies")
    o.add_argument("--method", choices=("exhaustive", "two-opt", "anneal"), default="anneal")
    o.add_argument("--objective", choices=OBJECTIVES, default="idist")
    o.add_argument("--eta", type=float, default=2.0)
    o.add_argument("--sign", type=_sign, default=+1)
    o.add_argument("--restarts", type=int, default=4)
    o.add_argument("--start", help="two-opt start: identity, random, or comma-separated ordering")
    o.add_argument("--t0", type=float, default=None, help="initial temperature (default: automatic)")
    o.add_argument("--cooling", type=float, default=0.92)
    o.add_argument("--temperatures", type=int, default=80)
    o.add_argument("--steps", type=int, default=None, help="moves per temperature (default 10 L)")
    o.add_argument("--max-evaluations", type=int, default=None)
    o.add_argument("--max-sites", type=int, default=9, help="cap for exhaustive search")
    o.add_argument("--trajectory", help="write the search trajectory as CSV")
    common(o, fmt=False)
    o.set_defaults(func=cmd_optimize)

    v = sub.add_parser("verify", help="run inequality checks")
    v.add_argument("--suite", default="all", help=f"comma-separated from {','.join(verify.SUITES)}")
    v.add_argument("--trials", type=int, default=1000)
    v.add_argument("--state", action="append", help="extra state JSON to include in the battery")
    v.add_argument("--L", type=int, default=6, help="chain length for the efficacy diagnostic")
    v.add_argument("--chi", type=int, default=2, help="bond dimension for the efficacy diagnostic")
    common(v)
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("truncate", help="truncation profile of a state at given bond dimensions")
    t.add_argument("state")
    t.add_argument("--chi", type=_int_list, default=[1, 2, 4])
    common(t)
    t.set_defaults(func=cmd_truncate)
    return parser


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, argv)
    except (UserError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (AssertionError, ArithmeticError) as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
