"""Command-line front end.

Exit codes: 0 success, 1 a check failed, 2 bad configuration or input,
3 a work or memory budget was exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import checks, counting, expsums, harness, lattice, polyalg
from .errors import ConfigError, DomainError, HypothesisError, ResourceError
from .modmath import Interval

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_RESOURCE = 0, 1, 2, 3


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _fracs(text: str) -> list[Fraction]:
    try:
        return [Fraction(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated rationals, got {text!r}")


def _interval(text: str) -> tuple[int, int]:
    """``a:N`` means {a+1, ..., a+N}."""
    try:
        a, n = text.split(":")
        return int(a), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"interval must look like a:N, got {text!r}")


def _common(parser: argparse.ArgumentParser, p_list: bool = False) -> None:
    parser.add_argument("--p", type=_ints if p_list else int, help="prime modulus" + (" (comma list)" if p_list else ""))
    parser.add_argument("--interval", type=_interval, help="interval a:N = {a+1, ..., a+N}")
    parser.add_argument("--k", type=_ints if p_list else int, default=None)
    parser.add_argument("--n", type=_ints if p_list else int, default=None)
    parser.add_argument("--backend", choices=("dense", "sparse", "auto"), default="auto")
    parser.add_argument("--format", choices=("csv", "json"), default=None)
    parser.add_argument("--out", default=None, help="write output here instead of stdout")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--threads", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="recipsum", description="Reciprocal sumsets and Kloosterman sums modulo a prime.")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("count", help="energy J_2k, ternary or prime-restricted counts")
    _common(c)
    c.add_argument("--kind", choices=("energy", "prime", "ternary", "sumset"), default="energy")
    c.add_argument("--lam", type=int, default=None, help="target residue for --kind ternary")

    e = sub.add_parser("expsum", help="linear / multilinear Kloosterman sums")
    _common(e)
    e.add_argument("--a", type=int, default=None, help="a single frequency; omitted means scan every a")
    e.add_argument("--samples", type=int, default=None, help="scan only this many stratified a values")

    lt = sub.add_parser("lattice", help="box points and successive minima of c.x = 0 mod p")
    _common(lt)
    lt.add_argument("--coeffs", type=_ints, required=True)
    lt.add_argument("--box", type=_fracs, required=True)

    r = sub.add_parser("resultant", help="Sylvester resultant and its size bound")
    _common(r)
    r.add_argument("--P", type=_ints, help="coefficients, highest degree first")
    r.add_argument("--Q", type=_ints, help="coefficients, highest degree first")
    r.add_argument("--N", type=int, default=None)
    r.add_argument("--sigma", type=Fraction, default=Fraction(0))
    r.add_argument("--theta", type=Fraction, default=Fraction(0))
    r.add_argument("--A", type=int, default=None)
    r.add_argument("--solution", type=_ints, default=None, help="print the solution polynomial of a 2k-tuple")

    s = sub.add_parser("sweep", help="run a parameter grid for one theorem id")
    _common(s, p_list=True)
    s.add_argument("--theorem", required=True, choices=harness.THEOREM_IDS)
    s.add_argument("--N", type=_ints, default=None)
    s.add_argument("--offsets", type=_ints, default=None)
    s.add_argument("--xi", type=_floats, default=None)
    s.add_argument("--theta", type=_floats, default=None)
    s.add_argument("--samples", type=int, default=None)
    s.add_argument("--random-coeffs", action="store_true")
    s.add_argument("--c", type=Fraction, default=Fraction(1, 4), help="exponent constant for T4")
    s.add_argument("--no-timing", action="store_true", help="write 0 in the seconds column")

    v = sub.add_parser("verify", help="run a self-check suite")
    _common(v)
    v.add_argument("suite", help="oracle, identities, lattice, weil, transfer or all")

    b = sub.add_parser("bt-report", help="empirical Brun-Titchmarsh constants")
    _common(b)
    b.add_argument("--x", type=int, required=True)
    b.add_argument("--theta", type=_floats, default=None)
    b.add_argument("--q", type=int, default=None, help="use this modulus instead of the prime nearest x^theta")
    b.add_argument("--a", type=int, default=1)
    return ap


def _need(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise ConfigError(f"--{n} is required")


def _emit(args, payload: dict | list, text: str) -> None:
    if args.format == "json":
        out = json.dumps(payload, indent=1, default=str)
    elif args.format == "csv":
        rows = payload if isinstance(payload, list) else [payload]
        keys = list(rows[0].keys()) if rows else []
        out = "\n".join([",".join(keys)] + [",".join(str(r[k]) for k in keys) for r in rows])
    else:
        out = text
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out + "\n")
    else:
        print(out)


def cmd_count(args) -> int:
    _need(args, "p")
    k = args.k or 2
    if args.kind == "prime":
        if args.interval is None:
            raise ConfigError("--interval 0:N is required")
        rep = counting.count_J2k_prime(args.interval[1], k, args.p, args.backend)
        bound = counting.prime_energy_bound(rep.N, k, args.p)
        payload = dict(J=rep.J, N=rep.N, k=k, p=args.p, bound=float(bound), within=rep.J <= bound)
        _emit(args, payload, f"J = {rep.J}  (bound {float(bound):.6g})")
        return EXIT_OK
    _need(args, "interval")
    I = Interval(*args.interval)
    if args.kind == "energy":
        rep = counting.count_J2k(I, k, args.p, args.backend)
        me = rep.measured_exponent
        payload = dict(J=rep.J, N=rep.N, k=k, p=args.p, predicted_exponent=str(rep.predicted_exponent), measured_exponent=me)
        _emit(args, payload, f"J_{2 * k} = {rep.J}\nln J / ln N = {me:.4f}   (general bound exponent {rep.predicted_exponent})")
    elif args.kind == "sumset":
        size = counting.sumset_size(I, k, args.p, args.backend)
        _emit(args, dict(size=size, N=I.length, k=k, p=args.p), f"|k(I^-1)| = {size}")
    else:
        _need(args, "lam")
        cnt, flag = counting.ternary_count(I, args.lam, args.p)
        _emit(args, dict(count=cnt, excluded_lambda=flag), f"count = {cnt}" + ("  (lambda is 0 or in I^-1)" if flag else ""))
    return EXIT_OK


def cmd_expsum(args) -> int:
    _need(args, "p", "interval")
    n = args.n or 1
    I = Interval(*args.interval)
    intervals = [I] * n
    if args.a is not None:
        S = expsums.multilinear(args.a, intervals, None, args.p)
        payload = dict(a=args.a, re=S.re, im=S.im, modulus=S.modulus, normalized=S.normalized)
        _emit(args, payload, f"S = {S.re:.6f} {S.im:+.6f}i   |S| = {S.modulus:.6f}   |S|/terms = {S.normalized:.6f}")
        return EXIT_OK
    if args.samples is None:
        a, m = expsums.max_multilinear_over_a(intervals, None, args.p)
    else:
        best = (0, -1.0)
        for a in expsums.stratified_a(args.p, args.samples, args.seed):
            v = expsums.multilinear(a, intervals, None, args.p).modulus
            if v > best[1]:
                best = (a, v)
        a, m = best
    total = I.length**n
    _emit(args, dict(a_star=a, max_modulus=m, normalized=m / total), f"max |S| = {m:.6f} at a = {a}   (normalized {m / total:.6f})")
    return EXIT_OK


def cmd_lattice(args) -> int:
    _need(args, "p")
    L = lattice.LatticeSpec(tuple(args.coeffs), args.p)
    if len(args.box) != L.dimension:
        raise ConfigError("--box needs one bound per coordinate")
    D = lattice.Box(tuple(args.box))
    rep = lattice.minkowski_check(L, D)
    mins = [str(m) for m in rep.minima]
    payload = dict(
        count=rep.count, minima=mins, count_bound=str(rep.count_bound),
        minima_product=str(rep.minima_product), minima_product_bound=str(rep.minima_product_bound), passed=rep.passed,
    )
    text = "\n".join([
        f"points in box: {rep.count}",
        f"successive minima: {', '.join(mins)}",
        f"count <= prod(2i/lambda_i + 1) = {rep.count_bound}: {rep.count_pass}",
        f"prod min(lambda_i, 1) = {rep.minima_product} <= {rep.minima_product_bound}: {rep.product_pass}",
    ])
    _emit(args, payload, text)
    return EXIT_OK if rep.passed else EXIT_CHECK


def cmd_resultant(args) -> int:
    if args.solution is not None:
        P = polyalg.build_solution_poly(args.solution)
        _emit(args, dict(coeffs_ascending=list(P.coeffs)), repr(P))
        return EXIT_OK
    _need(args, "P", "Q")
    P, Q = polyalg.IntPoly.descending(args.P), polyalg.IntPoly.descending(args.Q)
    if args.N is None:
        res = polyalg.sylvester_resultant(P, Q)
        _emit(args, dict(resultant=str(res)), f"Res = {res}")
        return EXIT_OK
    A = args.A if args.A is not None else 1 + max(abs(c) for c in P.coeffs + Q.coeffs)
    rep = polyalg.resultant_bound_check(P, Q, args.N, args.sigma, args.theta, A)
    payload = dict(resultant=str(rep.resultant), exponent=str(rep.exponent), bound=rep.bound, ratio=rep.ratio, condition=rep.condition)
    _emit(args, payload, f"Res = {rep.resultant}\nN^{rep.exponent} = {rep.bound:.6g}\nratio = {rep.ratio:.6g}  (condition {rep.condition})")
    return EXIT_OK


def cmd_sweep(args) -> int:
    N = list(args.N or [])
    offsets = args.offsets
    if args.interval is not None:
        a, n = args.interval
        N = N or [n]
        offsets = offsets or [a]
    cfg = harness.SweepConfig(
        theorem=args.theorem,
        p=args.p or [],
        N=N,
        k=args.k or [2],
        n=args.n or [2],
        offsets=offsets or [0],
        xi=args.xi or [],
        theta=args.theta or [],
        backend=args.backend,
        seed=args.seed,
        samples=args.samples,
        random_coeffs=args.random_coeffs,
        small_interval_c=args.c,
        threads=args.threads,
        timing=not args.no_timing,
        out=args.out,
        fmt=args.format or "csv",
    )
    cfg.validate()
    if args.out:
        harness.run_sweep(cfg)
    else:
        with harness.RecordWriter(sys.stdout, cfg.fmt) as w:
            for rec in harness.iter_sweep(cfg):
                w.write(rec)
    return EXIT_OK


def cmd_verify(args) -> int:
    ok, results = checks.verify(args.suite, args.seed)
    text = checks.report(results) + f"\n{'all checks passed' if ok else 'SOME CHECKS FAILED'}"
    payload = [dict(check=r.name, passed=r.passed, total=r.total) for r in results]
    _emit(args, payload, text)
    return EXIT_OK if ok else EXIT_CHECK


def cmd_bt(args) -> int:
    if args.q is not None:
        rows = [harness.brun_titchmarsh_row(args.x, args.q, args.a)]
    else:
        rows = harness.brun_titchmarsh_report(args.x, args.theta or [], args.a)
    payload = [dict(x=r.x, theta=r.theta, q=r.q, a=r.a, count=r.count, c_measured=r.c_measured) for r in rows]
    _emit(args, payload, harness.format_bt_table(rows))
    return EXIT_OK if all(r.c_measured > 0 for r in rows) else EXIT_CHECK


COMMANDS = {
    "count": cmd_count,
    "expsum": cmd_expsum,
    "lattice": cmd_lattice,
    "resultant": cmd_resultant,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
    "bt-report": cmd_bt,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ResourceError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ConfigError, DomainError, HypothesisError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
