"""Command-line interface (``gzz``)."""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .bench import DEFAULT_BUDGET, DEFAULT_SAMPLES, MODES, bench
from .bounds import bounds as compute_bounds
from .bounds import conjecture_scan
from .constructions import (
    BlockSpec,
    exclude_qubits,
    synth_blocks,
    synth_subdiagonal,
    twisted_worst_case,
    worst_case_primal,
)
from .errors import ConjectureViolation, GZZError, LPError
from .exact import DEFAULT_CAP, synth_exact
from .hadamard import hadamard_4k, sylvester, to_text
from .heuristic import GENERATORS, default_cache_dir, synth_restricted
from .lp import DEFAULT_TOL, available_backends
from .matrixcore import (
    CouplingMatrix,
    Encoding,
    dumps,
    matrix_to_json,
    quotient,
    read_matrix,
    read_schedule,
    schedule_to_json,
    write_schedule,
)
from .verify import check, phase_distance, reconstruct

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _str_list(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _n_range(text: str) -> list[int]:
    """``7``, ``3-10`` or ``3,5,7``."""
    try:
        if "-" in text:
            a, b = text.split("-", 1)
            return list(range(int(a), int(b) + 1))
        return _int_list(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad n range {text!r}") from None


def _global_flags(p: argparse.ArgumentParser, top: bool) -> None:
    d = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
    p.add_argument("--tol", type=float, default=d(DEFAULT_TOL), help="LP and check tolerance")
    p.add_argument("--seed", type=int, default=d(0))
    p.add_argument("--threads", type=int, default=d(1))
    p.add_argument("--cache-dir", default=d(None), help="restricted-set cache (env GZZ_CACHE_DIR)")
    p.add_argument("--backend", choices=available_backends(), default=d(None),
                   help="simplex kernel")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gzz", description="GZZ gate schedule synthesis")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _global_flags(parser, True)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        p = sub.add_parser(name, **kw)
        _global_flags(p, False)
        return p

    synth = sub.add_parser("synth", help="synthesize a schedule")
    ssub = synth.add_subparsers(dest="method", required=True)

    def sadd(name, **kw):
        p = ssub.add_parser(name, **kw)
        _global_flags(p, False)
        p.add_argument("--out", help="write the schedule JSON here (default stdout)")
        return p

    p = sadd("exact", help="time-optimal LP over all encodings")
    p.add_argument("--target", required=True)
    p.add_argument("--coupling", help="hardware coupling J (default all ones)")
    p.add_argument("--no-certify", action="store_true")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)

    p = sadd("heuristic", help="restricted LP over a polynomial encoding set")
    p.add_argument("--target", required=True)
    p.add_argument("--coupling")
    p.add_argument("--level", type=int, default=2)
    p.add_argument("--generator", choices=GENERATORS, default="sylvester")

    p = sadd("subdiag", help="constant nearest-neighbour chain")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--phi", type=float, default=1.0)

    p = sadd("blocks", help="block-constant coupling")
    p.add_argument("--k", type=_int_list, required=True, help="block sizes, e.g. 2,2,3")
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--phi", type=float, default=1.0)

    p = sadd("exclude", help="exact synthesis on a subset of qubits")
    p.add_argument("--total", type=int, required=True)
    p.add_argument("--exclude", type=_int_list, default=[], help="1-based qubits to leave idle")
    p.add_argument("--target", required=True)
    p.add_argument("--coupling")

    p = add("worstcase", help="explicit optimal schedule for -C m m^T")
    p.add_argument("--n", type=int)
    p.add_argument("--m", help="encoding string such as +-+-+")
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--out")

    p = add("certify", help="check a schedule against J and A")
    p.add_argument("--schedule", required=True)
    p.add_argument("--coupling")
    p.add_argument("--target", required=True)
    p.add_argument("--phases", action="store_true", help="also compare diagonal phases (n <= 14)")

    p = add("bounds", help="gate-time bounds for a target")
    p.add_argument("--target", required=True)
    p.add_argument("--coupling")
    p.add_argument("--exact", action="store_true", help="also solve for the optimum")

    p = add("scan", help="exhaustive scan over +-1 targets")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--force", action="store_true")

    p = add("bench", help="benchmark exact and restricted synthesis")
    p.add_argument("--mode", choices=MODES, default="worstcase")
    p.add_argument("--n", type=_n_range, default=_n_range("3-8"), help="e.g. 3-10 or 4,6,8")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--levels", type=_int_list, default=[2, 3, 4])
    p.add_argument("--generators", type=_str_list, default=list(GENERATORS))
    p.add_argument("--budget", type=float, default=DEFAULT_BUDGET, help="seconds per method")
    p.add_argument("--no-exact", action="store_true")
    p.add_argument("--out", required=True)

    p = add("hadamard", help="print a Hadamard matrix as +/- text")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--generator", choices=GENERATORS, default="fourk")
    return parser


def _load_pair(args) -> tuple[CouplingMatrix, CouplingMatrix]:
    A = read_matrix(args.target)
    J = read_matrix(args.coupling) if args.coupling else CouplingMatrix.ones(A.n)
    return A, J


def _emit_schedule(S, out: str | None, extra: dict | None = None) -> None:
    if out:
        write_schedule(out, S)
        if extra is not None:
            sys.stdout.write(dumps(extra))
    else:
        payload = schedule_to_json(S) if extra is None else {**extra, "schedule": schedule_to_json(S)}
        sys.stdout.write(dumps(payload))


def _result_summary(res, A: CouplingMatrix, J: CouplingMatrix) -> dict:
    summary = {
        "total_time": res.total_time,
        "encoding_cost": res.encoding_cost,
        "optimal": bool(res.optimal),
        "residual": float(np.max(np.abs(reconstruct(res.schedule, J).values - A.values),
                                 initial=0.0)),
    }
    if res.dual_certificate is not None:
        summary["dual"] = {"y": [float(x) for x in res.dual_certificate.y],
                           "value": res.dual_certificate.value}
    return summary


def _cache_dir(args) -> str:
    return args.cache_dir or default_cache_dir()


def cmd_synth(args) -> int:
    if args.method == "exact":
        A, J = _load_pair(args)
        res = synth_exact(quotient(A, J), args.tol, certify=not args.no_certify, cap=args.cap,
                          backend=args.backend)
        _emit_schedule(res.schedule, args.out, _result_summary(res, A, J))
        return EXIT_OK
    if args.method == "heuristic":
        A, J = _load_pair(args)
        res = synth_restricted(quotient(A, J), args.level, args.generator, args.tol,
                               backend=args.backend, cache_dir=_cache_dir(args))
        _emit_schedule(res.schedule, args.out, _result_summary(res, A, J))
        return EXIT_OK
    if args.method == "subdiag":
        _emit_schedule(synth_subdiagonal(args.n, args.c, args.phi), args.out)
        return EXIT_OK
    if args.method == "blocks":
        _emit_schedule(synth_blocks(BlockSpec(tuple(args.k), args.phi, args.c)), args.out)
        return EXIT_OK
    if args.method == "exclude":
        N = args.total
        Z = [z - 1 for z in args.exclude]
        A = read_matrix(args.target)
        J = read_matrix(args.coupling) if args.coupling else CouplingMatrix.ones(N)
        keep = [q for q in range(N) if q not in set(Z)]
        if A.n == N and Z:
            full = A
            A = full.restricted(keep)
            if not full.allclose(A.embedded(N, keep), atol=0.0):
                raise UsageError("target couples excluded qubits")
        inner = lambda M: synth_exact(M, args.tol, backend=args.backend)  # noqa: E731
        _emit_schedule(exclude_qubits(N, A, Z, J, inner=inner), args.out)
        return EXIT_OK
    raise UsageError(f"unknown synth method {args.method}")


def cmd_worstcase(args) -> int:
    if args.m:
        m = Encoding.from_string(args.m)
        if args.n is not None and args.n != m.n:
            raise UsageError("--n disagrees with the length of --m")
        S, _ = twisted_worst_case(m, args.C)
    elif args.n is not None:
        S = worst_case_primal(args.n).scaled(args.C) if args.C != 1.0 else worst_case_primal(args.n)
    else:
        raise UsageError("give --n or --m")
    _emit_schedule(S, args.out)
    return EXIT_OK


def cmd_certify(args) -> int:
    A = read_matrix(args.target)
    try:
        S = read_schedule(args.schedule)
    except (ValueError, KeyError, TypeError) as exc:
        # a schedule file that fails validation is a failed certificate, not a usage error
        sys.stdout.write(dumps({"passed": False, "message": f"invalid schedule: {exc}"}))
        return EXIT_FAIL
    J = read_matrix(args.coupling) if args.coupling else CouplingMatrix.ones(A.n)
    report = check(S, J, A, args.tol).as_dict()
    passed = report["passed"]
    if args.phases and S.n == A.n == J.n:
        dist = phase_distance(reconstruct(S, J), A)
        report["phase_distance"] = dist
        report["phases_ok"] = dist <= 2 * len(A.values) * args.tol + 1e-12
        passed = passed and report["phases_ok"]
    sys.stdout.write(dumps(report))
    return EXIT_OK if passed else EXIT_FAIL


def cmd_bounds(args) -> int:
    A, J = _load_pair(args)
    M = quotient(A, J)
    achieved = synth_exact(M, args.tol, backend=args.backend).total_time if args.exact else None
    sys.stdout.write(dumps(compute_bounds(M, achieved).as_dict()))
    return EXIT_OK


def cmd_scan(args) -> int:
    with open(args.out, "w", newline="") as fh:
        try:
            report = conjecture_scan(args.n, force=args.force, threads=args.threads, out=fh,
                                     tol=args.tol, backend=args.backend)
        except ConjectureViolation as exc:
            sys.stdout.write(dumps({"violation": True, "value": exc.value, "bound": exc.bound,
                                    "matrix": matrix_to_json(exc.matrix)}))
            return EXIT_FAIL
    sys.stdout.write(dumps(report.as_dict()))
    return EXIT_OK


def cmd_bench(args) -> int:
    bad = [g for g in args.generators if g not in GENERATORS]
    if bad:
        raise UsageError(f"unknown generators {bad}")
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    with open(args.out, "w", newline="") as fh:
        rows = bench(args.mode, args.n, args.samples, args.levels, args.generators, args.budget,
                     args.seed, tol=args.tol, threads=args.threads, backend=args.backend,
                     cache_dir=_cache_dir(args), exact=not args.no_exact, out=fh)
    sys.stdout.write(dumps({"rows": len(rows), "out": os.fspath(args.out)}))
    return EXIT_OK


def cmd_hadamard(args) -> int:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        H = sylvester(args.d) if args.generator == "sylvester" else hadamard_4k(args.d)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    sys.stdout.write(to_text(H))
    return EXIT_OK


COMMANDS = {
    "synth": cmd_synth,
    "worstcase": cmd_worstcase,
    "certify": cmd_certify,
    "bounds": cmd_bounds,
    "scan": cmd_scan,
    "bench": cmd_bench,
    "hadamard": cmd_hadamard,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except LPError as exc:
        print(f"gzz: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, GZZError, ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"gzz: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
