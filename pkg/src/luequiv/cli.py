"""Command line interface.

Exit codes: ``check`` returns 0/1/2 for Equivalent/NotEquivalent/Undecided,
``verify`` and ``indist`` return 0 for a positive answer and 1 otherwise.
Errors: 10 unreadable or malformed input file, 11 dimension mismatch,
12 numerical failure, 13 invalid flags or configuration.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .errors import (
    ConfigInvalid,
    DimensionMismatch,
    NonUnitaryWitness,
    NumericalError,
    StateFileError,
)
from .geometry import RANK_TOL, dimensions_report
from .io import (
    dump_json,
    make_report,
    read_state,
    read_witness,
    state_to_dict,
    verdict_to_dict,
    witness_to_list,
    write_state,
)
from .pipeline import Config, decide_distinguishability, decide_lu_equivalence
from .spectra import EPS_GAP, all_spectral_data, canonicalize, reduced_matrix
from .stabilizer import verify_witness
from .state import ghz_state, random_haar_state, random_product_state, w_state

DEFAULT_SEED = 0

EXIT_PARSE = 10
EXIT_DIMS = 11
EXIT_NUMERIC = 12
EXIT_USAGE = 13


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _dims(text: str) -> list:
    try:
        dims = [int(x) for x in text.replace("x", ",").split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dims {text!r}; use e.g. 2,2,2")
    if not dims or any(d < 2 for d in dims):
        raise argparse.ArgumentTypeError("every dimension must be >= 2")
    return dims


def _config(args) -> Config:
    return Config(
        tol_spec=args.tol_spec,
        tol_eq=args.tol_eq,
        tol_opt=args.tol_opt,
        gap=args.gap,
        restarts=args.restarts,
        seed=args.seed,
    )


def _fmt(xs) -> str:
    return "  ".join(f"{x:.12g}" for x in xs)


def cmd_check(args) -> int:
    v1, v2 = read_state(args.a), read_state(args.b)
    cfg = _config(args)
    print(f"seed: {cfg.seed}")
    verdict = decide_lu_equivalence(v1, v2, cfg)
    print(f"verdict: {verdict.kind}")
    print(f"stage:   {verdict.stage}")
    ev = verdict.evidence
    if "margin" in ev:
        print(f"spectra differ on parties {[k + 1 for k in ev['mismatched_parties']]} "
              f"(max distance {max(ev['spectra_distance']):.3e})")
    if "phase_match" in ev:
        print(f"phase match: {ev['phase_match']['status']} - {ev['phase_match']['detail']}")
    if "search" in ev:
        print(f"block search: {ev['search']['detail']}")
    if "witness_overlap" in ev and verdict.witness is not None:
        print(f"witness overlap: {ev['witness_overlap']:.15f}")
    if args.json:
        dump_json(make_report("check", {"inputs": [args.a, args.b],
                                        "verdict": verdict_to_dict(verdict)},
                              seed=cfg.seed, tolerances=cfg.to_dict()), args.json)
    return verdict.exit_code


def cmd_spectra(args) -> int:
    v = read_state(args.a).normalized()
    spectra = all_spectral_data(v, args.gap)
    table = []
    for s in spectra:
        print(f"party {s.party + 1}: {_fmt(s.eigenvalues)}")
        print("   clusters: " + ", ".join(f"{val:.12g} (x{m})" for val, m in s.clusters))
        table.append({"party": s.party + 1,
                      "eigenvalues": [float(x) for x in s.eigenvalues],
                      "clusters": [[val, m] for val, m in s.clusters]})
    if args.json:
        dump_json(make_report("spectra", {"input": args.a, "spectra": table},
                              tolerances={"gap": args.gap}), args.json)
    return 0


def cmd_canon(args) -> int:
    v = read_state(args.a)
    cf = canonicalize(v, args.gap)
    write_state(cf.state, args.out, label="canonical")
    vn = cf.state.normalized()
    worst = 0.0
    for k in range(v.n_parties):
        c = reduced_matrix(vn, k)
        off = float(np.abs(c - np.diag(np.diag(c))).max())
        worst = max(worst, off)
        print(f"party {k + 1}: diag {_fmt(np.diag(c).real)}")
    print(f"max off-diagonal: {worst:.3e}")
    print(f"wrote {args.out}")
    if args.json:
        dump_json(make_report("canon", {
            "input": args.a,
            "state": state_to_dict(cf.state),
            "transform": witness_to_list(cf.transform),
            "blocks": [list(b) for b in cf.blocks],
            "max_offdiagonal": worst,
        }, tolerances={"gap": args.gap}), args.json)
    return 0


def cmd_dims(args) -> int:
    v = read_state(args.a)
    rep = dimensions_report(v, args.rank_tol, args.gap)
    for key, val in rep.to_dict().items():
        print(f"{key:20s} {val}")
    if args.json:
        dump_json(make_report("dims", {"input": args.a, "dimensions": rep.to_dict()},
                              tolerances={"rank_tol": args.rank_tol, "gap": args.gap}),
                  args.json)
    return 0


def cmd_indist(args) -> int:
    v1, v2 = read_state(args.a), read_state(args.b)
    cfg = Config(tol_spec=args.tol_spec, gap=args.gap)
    res = decide_distinguishability(v1, v2, cfg)
    print(f"locally indistinguishable:         {res.raw_indistinguishable}")
    print(f"canonical forms indistinguishable: {res.canonical_indistinguishable}")
    print(f"reduced-matrix distance per party: {_fmt(res.reduced_distance)}")
    print(f"spectra distance per party:        {_fmt(res.spectra_distance)}")
    if args.json:
        dump_json(make_report("indist", {"inputs": [args.a, args.b], "result": res.to_dict()},
                              tolerances=cfg.to_dict()), args.json)
    return 0 if res.raw_indistinguishable else 1


def cmd_gen(args) -> int:
    dims = args.dims
    if args.kind == "haar":
        v = random_haar_state(dims, args.seed)
    elif args.kind == "product":
        v = random_product_state(dims, args.seed)
    elif args.kind == "ghz":
        v = ghz_state(dims)
    else:
        v = w_state(dims)
    v = v.normalized()
    write_state(v, args.out, label=f"{args.kind} dims={dims} seed={args.seed}")
    print(f"seed: {args.seed}")
    print(f"wrote {args.kind} state with dims {dims} to {args.out}")
    return 0


def cmd_verify(args) -> int:
    v1, v2 = read_state(args.a), read_state(args.b)
    U = read_witness(args.witness)
    try:
        ok = verify_witness(v1, v2, U, args.tol)
    except NonUnitaryWitness as exc:
        print(f"witness rejected: {exc}")
        return 1
    print("witness verifies" if ok else "witness does NOT verify")
    if args.json:
        dump_json(make_report("verify", {"inputs": [args.a, args.b, args.witness],
                                         "verified": ok,
                                         "witness": witness_to_list(U)},
                              tolerances={"tol": args.tol}), args.json)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="luequiv", description="Local-unitary equivalence of multipartite pure states")
    p.add_argument("--version", action="version", version=f"luequiv {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="decide LU-equivalence of two states")
    c.add_argument("a")
    c.add_argument("b")
    c.add_argument("--tol-spec", type=float, default=1e-8)
    c.add_argument("--tol-eq", type=float, default=1e-8)
    c.add_argument("--tol-opt", type=float, default=1e-7)
    c.add_argument("--gap", type=float, default=EPS_GAP)
    c.add_argument("--restarts", type=int, default=20)
    c.add_argument("--seed", type=int, default=DEFAULT_SEED)
    c.add_argument("--json", metavar="OUT")
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("spectra", help="ordered spectra of the reduced matrices")
    s.add_argument("a")
    s.add_argument("--gap", type=float, default=EPS_GAP)
    s.add_argument("--json", metavar="OUT")
    s.set_defaults(func=cmd_spectra)

    s = sub.add_parser("canon", help="write the canonical (diagonal) form")
    s.add_argument("a")
    s.add_argument("--out", required=True)
    s.add_argument("--gap", type=float, default=EPS_GAP)
    s.add_argument("--json", metavar="OUT")
    s.set_defaults(func=cmd_canon)

    s = sub.add_parser("dims", help="orbit / kernel / stabilizer dimensions")
    s.add_argument("a")
    s.add_argument("--rank-tol", type=float, default=RANK_TOL)
    s.add_argument("--gap", type=float, default=EPS_GAP)
    s.add_argument("--json", metavar="OUT")
    s.set_defaults(func=cmd_dims)

    s = sub.add_parser("indist", help="local (in)distinguishability")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--tol-spec", type=float, default=1e-8)
    s.add_argument("--gap", type=float, default=EPS_GAP)
    s.add_argument("--json", metavar="OUT")
    s.set_defaults(func=cmd_indist)

    s = sub.add_parser("gen", help="write a generated state")
    s.add_argument("kind", choices=["haar", "product", "ghz", "w"])
    s.add_argument("--dims", type=_dims, required=True)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("verify", help="check that a witness maps b onto a")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("witness")
    s.add_argument("--tol", type=float, default=1e-6)
    s.add_argument("--json", metavar="OUT")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except StateFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DimensionMismatch as exc:
        print(f"error: dimension mismatch: {exc}", file=sys.stderr)
        return EXIT_DIMS
    except (NumericalError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ConfigInvalid as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
