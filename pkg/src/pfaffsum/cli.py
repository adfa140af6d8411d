"""Command-line interface: ``pfaffsum <command> ...``.

Exit codes: 0 success, 1 a verification suite failed to certify,
2 invalid input (bad degree matrix, malformed file, size cap exceeded).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .analysis import param_count, scan_conjecture, scan_csv
from .config import Config, ConfigError, load_config
from .degree_matrix import DegreeMatrix, DegreeMatrixError
from .exact_core import DomainError, PrimeField
from .pfaffian import pfaffian, pfaffian_identity_check, random_skew, submaximal_pfaffians
from .polyring import SeededRng, child_seed
from .suites import SUITES
from .terracini import GeneratorSet, estimate_s, lefschetz_surjective


class UsageError(Exception):
    pass


def _parse_ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def _load_json_arg(text: str):
    try:
        raw = text if text.lstrip()[:1] in ("{", "[") else Path(text).read_text()
        return json.loads(raw)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"malformed JSON input {text!r}: {exc}") from exc


def _degree_matrix(args, cfg: Config, required: bool = True) -> DegreeMatrix | None:
    if getattr(args, "diag", None):
        A = DegreeMatrix.from_diagonal(_parse_ints(args.diag))
    elif getattr(args, "A", None):
        obj = _load_json_arg(args.A)
        if isinstance(obj, list):
            obj = {"matrix": obj}
        A = DegreeMatrix.from_json(obj)
    elif required:
        raise UsageError("give a degree matrix with --A (JSON file or literal) or --diag")
    else:
        return None
    if A.m > cfg.max_size:
        raise UsageError(f"matrix size {A.m} exceeds the cap of {cfg.max_size}")
    return A


def _config(args) -> Config:
    cfg = load_config(getattr(args, "config", None))
    over = {}
    if getattr(args, "prime", None) is not None:
        over["prime"] = args.prime
    if getattr(args, "second_prime", None) is not None:
        over["second_prime"] = args.second_prime
    if getattr(args, "seed", None) is not None:
        over["seed"] = args.seed
    return replace(cfg, **over)


def _open_out(path: str | None):
    return open(path, "w") if path else sys.stdout


# --- commands ---------------------------------------------------------------


def cmd_check_a(args, cfg: Config) -> int:
    if args.input:
        obj = _load_json_arg(args.input)
        A = DegreeMatrix.from_json({"matrix": obj} if isinstance(obj, list) else obj)
        if A.m > cfg.max_size:
            raise UsageError(f"matrix size {A.m} exceeds the cap of {cfg.max_size}")
    else:
        A = _degree_matrix(args, cfg)
    ordered, perm = A.order()
    print("valid degree matrix")
    print(A)
    print(f"size {A.m}, trace {A.trace}, diagonal {list(A.diagonal)}")
    print(f"ordered: {A.is_ordered()}; ordering permutation (1-based): {[i + 1 for i in perm]}")
    if A.m % 2 == 0:
        d = A.pfaffian_degree()
        print(f"pfaffian degree {d}")
        degs = sorted({A.submaximal_degree(i, j) for i in range(A.m) for j in range(i + 1, A.m)})
        print(f"submaximal pfaffians: {A.m * (A.m - 1) // 2} of degrees {degs}")
    else:
        degs = sorted({A.erase({i}).trace // 2 for i in range(A.m)})
        print(f"odd size: {A.m} submaximal pfaffians of degrees {degs}")
    if args.json:
        print(json.dumps({**A.to_json(), "ordered": ordered.to_json()["matrix"],
                          "permutation": list(perm)}))
    return 0


def cmd_pfaffian(args, cfg: Config) -> int:
    A = _degree_matrix(args, cfg)
    if A.m % 2:
        raise UsageError(f"pfaffian needs an even-size degree matrix, got size {A.m}")
    fld = PrimeField(cfg.prime)
    rng = SeededRng(cfg.seed)
    M = random_skew(A, args.n, rng.child(0), fld)
    F = pfaffian(M)
    print(f"pfaffian of degree {F.d} (n={args.n}, prime={fld.p}, seed={cfg.seed}):")
    print(F.render())
    if args.submaximal:
        for key, f in submaximal_pfaffians(M).items():
            label = ",".join(str(x + 1) for x in (key if isinstance(key, tuple) else (key,)))
            print(f"  Pf erased ({label}) [deg {f.d}]: {f.render()}")
    check = pfaffian_identity_check(M, args.trials, rng.child(1))
    if check.ok:
        print(f"identity check: ok ({check.trials} random points)")
    else:
        print(f"identity check FAILED at point {check.point}: {check.reason}")
    if args.json_out:
        with open(args.json_out, "w") as fh:
            json.dump({"matrix": M.to_json(), "pfaffian": [int(c) for c in F.coeffs],
                       "seed": cfg.seed}, fh)
    return 0 if check.ok else 1


def cmd_estimate_s(args, cfg: Config) -> int:
    A = _degree_matrix(args, cfg)
    if A.m % 2:
        raise UsageError(f"estimate-s needs an even-size degree matrix, got size {A.m}")
    fld = PrimeField(cfg.prime)
    res = estimate_s(A, args.n, cfg.seed, fld, args.s_max, jobs=args.jobs,
                     include_pfaffian=args.debug_append_pfaffian)
    out = _open_out(args.out)
    try:
        for w in res.witnesses:
            out.write(w.to_json(timing=not args.no_timing) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    msg_stream = sys.stderr if args.out is None else sys.stdout
    if res.s_found is not None:
        print(f"certified over F_{fld.p} at seed {cfg.seed}: s(A) <= {res.s_found}", file=msg_stream)
    else:
        print(f"not certified at this seed/prime up to s = {args.s_max}; "
              f"rank profile {res.rank_profile} of {res.witnesses[-1].target_dim}", file=msg_stream)
    return 0


def cmd_verify(args, cfg: Config) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    ok = True
    for name in names:
        result = SUITES[name](seed=cfg.seed, primes=cfg.primes, jobs=args.jobs)
        print(result.summary())
        if args.out:
            with open(args.out, "a") as fh:
                for case in result.cases:
                    for w in case.witnesses:
                        fh.write(json.dumps({"suite": name, "case": case.label,
                                             **w.to_dict(timing=not args.no_timing)}) + "\n")
        ok &= result.ok
    primes = ", ".join(str(p) for p in cfg.primes)
    if ok:
        print(f"all cases certified over F_p at seed {cfg.seed} for p in {primes}")
    else:
        print(f"some cases not certified at seed {cfg.seed} for p in {primes}")
    return 0 if ok else 1


def _k_range(text: str) -> range:
    for sep in ("..", "-", ":"):
        if sep in text:
            lo, hi = text.split(sep, 1)
            return range(int(lo), int(hi) + 1)
    return range(int(text), int(text) + 1)


def cmd_scan(args, cfg: Config) -> int:
    try:
        ks = _k_range(args.k_range)
    except ValueError as exc:
        raise UsageError(f"bad --k-range {args.k_range!r}") from exc
    if ks.stop - 1 > cfg.max_size // 2:
        raise UsageError(f"k = {ks.stop - 1} gives size {2 * (ks.stop - 1)} above the cap {cfg.max_size}")
    rows = scan_conjecture(ks, args.entry_degree, args.n, cfg.seed, PrimeField(cfg.prime), args.jobs)
    out = _open_out(args.out)
    try:
        out.write(scan_csv(rows))
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_param_count(args, cfg: Config) -> int:
    A = _degree_matrix(args, cfg, required=False)
    if A is None:
        if args.k is None:
            raise UsageError("give --k and --entry, or a degree matrix")
        pc = param_count(args.n, k=args.k, b=args.entry)
    else:
        pc = param_count(args.n, A)
    if args.json:
        print(json.dumps(pc.to_dict()))
    else:
        print(f"{pc.verdict}: expected dim V = {pc.expected_dim_V} vs dim R_{pc.d} = {pc.ambient_N + 1}")
        print(f"  source dimension {pc.dim_V_source}, group correction {pc.group_correction}, "
              f"expected s {pc.expected_s}")
        if pc.caveat:
            print(f"  caveat: {pc.caveat}")
    return 0


def cmd_lefschetz(args, cfg: Config) -> int:
    A = _degree_matrix(args, cfg)
    fld = PrimeField(cfg.prime)
    rng = SeededRng(cfg.seed)
    Ms = [random_skew(A, args.n, rng.child(j), fld) for j in range(args.matrices)]
    G = GeneratorSet.of_submaximal(Ms).up_to(args.d)
    w = lefschetz_surjective(G, args.d, SeededRng(child_seed(cfg.seed, 10**6)), seed=cfg.seed,
                             A=A.to_json()["matrix"], s=args.matrices)
    print(w.to_json(timing=not args.no_timing))
    state = "surjective" if w.full else "not certified surjective at this seed/prime"
    print(f"multiplication by L in degree {args.d}: {state} (rank {w.rank} of {w.target_dim})",
          file=sys.stderr)
    return 0


# --- parser -----------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, matrix: bool = True) -> None:
    p.add_argument("--config", help="key = value config file (prime, second_prime, seed, max_size)")
    p.add_argument("--prime", type=int, help="field characteristic")
    p.add_argument("--seed", type=int, help="random seed")
    if matrix:
        p.add_argument("--A", help="degree matrix as JSON ({'diag': ...} or {'matrix': ...}), file or literal")
        p.add_argument("--diag", help="degree matrix by its diagonal, e.g. 4,2,2,2")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pfaffsum", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-a", help="validate a degree matrix and report its degrees")
    _add_common(p)
    p.add_argument("input", nargs="?", help="JSON file or literal")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check_a)

    p = sub.add_parser("pfaffian", help="pfaffian of a random matrix with an identity check")
    _add_common(p)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--submaximal", action="store_true", help="also print submaximal pfaffians")
    p.add_argument("--json-out", help="write matrix and pfaffian coefficients here")
    p.set_defaults(func=cmd_pfaffian)

    p = sub.add_parser("estimate-s", help="certify an upper bound for s(A)")
    _add_common(p)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--s-max", type=int, default=4)
    p.add_argument("--out", help="JSON-lines output file (default stdout)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--no-timing", action="store_true", help="omit elapsed_s from witnesses")
    p.add_argument("--debug-append-pfaffian", action="store_true",
                   help="also pool the pfaffians themselves (redundant generators)")
    p.set_defaults(func=cmd_estimate_s)

    p = sub.add_parser("verify", help="run a verification suite at two primes")
    _add_common(p, matrix=False)
    p.add_argument("--second-prime", type=int)
    p.add_argument("suite", choices=[*SUITES, "all"])
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="append witnesses as JSON lines")
    p.add_argument("--no-timing", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan-conjecture", help="small-k table for constant matrices")
    _add_common(p, matrix=False)
    p.add_argument("--k-range", default="2..5", help="e.g. 2..6")
    p.add_argument("--entry-degree", type=int, default=1)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="CSV output file (default stdout)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("param-count", help="parameter count against dim R_d")
    _add_common(p)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--k", type=int)
    p.add_argument("--entry", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_param_count)

    p = sub.add_parser("lefschetz", help="surjectivity of multiplication by a general linear form")
    _add_common(p)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--matrices", type=int, default=1)
    p.add_argument("--no-timing", action="store_true")
    p.set_defaults(func=cmd_lefschetz)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        return args.func(args, cfg)
    except (UsageError, ConfigError, DegreeMatrixError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
