"""Parameter sweeps that set measured counts and sums against predicted exponents.

Each grid point becomes one ``ResultRecord``.  Records are written in grid
order (even with a worker pool) as CSV or JSON; the first line of either file
is a timestamp, everything after it is a deterministic function of the config.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import counting, expsums
from .errors import ConfigError, DomainError, ResourceError
from .modmath import Interval, euler_phi, is_prime, nearest_prime, prime_count_ap

THEOREM_IDS = (
    "T1", "T2", "T3", "T4", "T5", "T6", "T8", "T9", "T10",
    "T11", "T12", "T13", "T14", "T15", "T17", "BT",
)
COLUMNS = (
    "theorem", "p", "N", "k", "n", "param_extra", "measured",
    "predicted_exponent", "measured_exponent", "regime", "seconds",
)
IN_REGIME = "in-regime"
OUT_OF_REGIME = "out-of-regime"
BT_SIEVE_MAX = 10**8
DEFAULT_SAMPLES = 100

# which grid axes each theorem reads
_ENERGY = {"T1", "T2", "T3", "T4", "T5", "T6"}
_SUMS = {"T8", "T9", "T10", "T11", "T12", "T13", "T14", "T17"}


@dataclass
class SweepConfig:
    theorem: str
    p: list[int] = field(default_factory=list)
    N: list[int] = field(default_factory=list)
    k: list[int] = field(default_factory=lambda: [2])
    n: list[int] = field(default_factory=lambda: [2])
    offsets: list[int] = field(default_factory=lambda: [0])
    xi: list[float] = field(default_factory=list)
    theta: list[float] = field(default_factory=list)
    backend: str = "auto"
    seed: int = 0
    samples: int | None = None  # None: scan every a when p allows it
    random_coeffs: bool = False
    small_interval_c: Fraction = Fraction(1, 4)
    threads: int = 1
    timing: bool = True
    out: str | None = None
    fmt: str = "csv"

    def validate(self) -> None:
        if self.theorem not in THEOREM_IDS:
            raise ConfigError(f"unknown theorem id {self.theorem!r}; expected one of {', '.join(THEOREM_IDS)}")
        if self.backend not in ("auto", "dense", "sparse"):
            raise ConfigError(f"unknown backend {self.backend!r}")
        if self.fmt not in ("csv", "json"):
            raise ConfigError(f"unknown format {self.fmt!r}")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        if self.samples is not None and self.samples < 1:
            raise ConfigError("samples must be >= 1")
        need = {"N": self.N}
        if self.theorem == "BT":
            need["theta"] = self.theta
        elif self.theorem == "T15":
            need["xi"] = self.xi
        else:
            need.update(p=self.p, k=self.k, n=self.n, offsets=self.offsets)
        for name, grid in need.items():
            if not grid:
                raise ConfigError(f"empty {name} grid")
        if self.theorem == "BT":
            for x in self.N:
                if x > BT_SIEVE_MAX:
                    raise ConfigError(f"x={x} exceeds the sieve budget {BT_SIEVE_MAX}")
            for t in self.theta:
                if not 0 < t < 1:
                    raise ConfigError(f"theta={t} outside (0, 1)")
            return
        if self.theorem == "T15":
            if any(N < 2 for N in self.N):
                raise ConfigError("archimedean sums need N >= 2")
            return
        for p in self.p:
            if p < 3 or not is_prime(p):
                raise ConfigError(f"p={p} is not an odd prime")
        for N in self.N:
            if N < 1:
                raise ConfigError(f"N={N} must be >= 1")
        if any(k < 1 for k in self.k) or any(n < 1 for n in self.n):
            raise ConfigError("k and n must be >= 1")

    def points(self) -> list[dict]:
        """The grid in output order."""
        t = self.theorem
        if t == "BT":
            return [dict(x=x, theta=th) for x, th in itertools.product(self.N, self.theta)]
        if t == "T15":
            return [dict(N=N, xi=xi) for N, xi in itertools.product(self.N, self.xi)]
        ks = [3] if t == "T3" else self.k
        ns = self.n if t in _SUMS and t not in ("T9", "T17") else [1]
        offs = [0] if t in ("T5", "T6", "T9", "T17") else self.offsets
        return [
            dict(p=p, N=N, k=k, n=n, offset=a)
            for p, N, k, n, a in itertools.product(self.p, self.N, ks, ns, offs)
        ]


@dataclass
class ResultRecord:
    theorem: str
    p: int
    N: int
    k: int
    n: int
    param_extra: str
    measured: str
    predicted_exponent: str
    measured_exponent: float | None
    regime: str
    seconds: float

    def row(self) -> list[str]:
        out = []
        for f in fields(self):
            v = getattr(self, f.name)
            out.append("" if v is None else repr(v) if isinstance(v, float) else str(v))
        return out

    @classmethod
    def from_row(cls, row: dict) -> "ResultRecord":
        me = row["measured_exponent"]
        return cls(
            theorem=row["theorem"],
            p=int(row["p"]),
            N=int(row["N"]),
            k=int(row["k"]),
            n=int(row["n"]),
            param_extra=row["param_extra"],
            measured=row["measured"],
            predicted_exponent=row["predicted_exponent"],
            measured_exponent=None if me in ("", None) else float(me),
            regime=row["regime"],
            seconds=float(row["seconds"]),
        )

    def as_dict(self) -> dict:
        return asdict(self)


# ---------------------------------------------------------------------------
# helpers


def _log_ratio(value: float, base: float) -> float | None:
    if value <= 0 or base <= 1:
        return None
    return math.log(value) / math.log(base)


def _extra(**kw) -> str:
    return ";".join(f"{k}={v}" for k, v in kw.items())


def _pow_lt(a: int, e: int, b: int, f: int) -> bool:
    """a^e < b^f, in integers."""
    return a**e < b**f


def _interval_ok(p: int, N: int, offset: int) -> bool:
    # a nonzero interval inside [1, p-1]
    return offset >= 0 and offset + N <= p - 1


def _check_interval(p: int, N: int, offset: int) -> Interval:
    if not _interval_ok(p, N, offset):
        raise ConfigError(f"interval ({offset}, {offset}+{N}] does not fit inside [1, p-1] for p={p}")
    return Interval(offset, N)


def _point_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def _energy_record(theorem: str, pt: dict, cfg: SweepConfig) -> dict:
    p, N, k, a = pt["p"], pt["N"], pt["k"], pt["offset"]
    extra: dict = {}
    if theorem == "T6":
        if N >= p:
            raise ConfigError(f"N={N} must be below p={p}")
        rep = counting.count_J2k_prime(N, k, p, cfg.backend)
        bound = counting.prime_energy_bound(N, k, p)
        extra.update(bound=f"{float(bound):.6g}", within=int(rep.J <= bound))
        measured = rep.J
        pred = Fraction(k) if N ** (2 * k - 1) <= p else _log_ratio(float(bound) / (2 * k) ** k, N)
        regime = IN_REGIME
    elif theorem == "T2":
        I = _check_interval(p, N, a)
        measured, lam = counting.max_admissible_ternary(I, p, cfg.backend)
        extra.update(offset=a, **{"lambda": lam})
        pred = Fraction(2, 3)
        regime = IN_REGIME if _pow_lt(N, 46, p, 3) else OUT_OF_REGIME
    else:
        I = Interval(0, N) if theorem == "T5" else Interval(a, N)
        _check_interval(p, I.length, I.offset)
        rep = counting.count_J2k(I, k, p, cfg.backend)
        measured = rep.J
        extra.update(offset=I.offset, backend=rep.extra.get("backend", ""))
        if theorem == "T1":
            pred = counting.symmetric_exponent(k)
            # the N^(2k)/p term takes over once N^(2k/(k+1)) > p
            extra["p_term_dominant"] = int(N ** (2 * k) > p ** (k + 1))
            regime = IN_REGIME
        elif theorem == "T3":
            pred = Fraction(3)
            regime = IN_REGIME if _pow_lt(N, 18, p, 1) else OUT_OF_REGIME
        elif theorem == "T4":
            c = Fraction(cfg.small_interval_c)
            extra["c"] = c
            pred = Fraction(k)
            # N < p^(c/k^2)  <=>  N^(k^2 den) < p^num
            regime = IN_REGIME if _pow_lt(N, k * k * c.denominator, p, c.numerator) else OUT_OF_REGIME
        else:  # T5
            pred = Fraction(k) if N ** (2 * k - 1) <= p else _log_ratio((N ** (2 * k - 1) / p + 1) * N**k, N)
            regime = IN_REGIME
    me = _log_ratio(measured, N) if N > 1 else None
    return dict(
        measured=str(measured),
        predicted_exponent=_fmt_exponent(pred),
        measured_exponent=me,
        regime=regime,
        param_extra=_extra(**extra),
    )


def _fmt_exponent(e) -> str:
    if e is None:
        return ""
    if isinstance(e, Fraction):
        return str(e)
    return repr(float(e))


def _scan_max(intervals: list[Interval], coeffs, p: int, samples: int | None, seed: int):
    """(a*, max |S|, scan label) over a in [1, p-1], full scan when affordable."""
    if samples is None and p <= counting.DENSE_P_MAX:
        a, m = expsums.max_multilinear_over_a(intervals, coeffs, p)
        return a, m, "full"
    s = samples if samples is not None else DEFAULT_SAMPLES
    best = (0, -1.0)
    for a in expsums.stratified_a(p, s, seed):
        m = expsums.multilinear(a, intervals, coeffs, p).modulus
        if m > best[1]:
            best = (a, m)
    return best[0], best[1], f"sampled:{s}"


def _sum_record(theorem: str, pt: dict, cfg: SweepConfig, seed: int) -> dict:
    p, N, k, n, a = pt["p"], pt["N"], pt["k"], pt["n"], pt["offset"]
    if theorem in ("T9", "T17"):
        a = 0
    if theorem in ("T8", "T9", "T10", "T11"):
        n = 2
    if theorem == "T17":
        n = 1
    I = _check_interval(p, N, a)
    intervals = [I] * n
    coeffs = None
    if cfg.random_coeffs:
        rng = random.Random(seed)
        coeffs = [expsums.CoeffSeq.random_unimodular(N, rng) for _ in range(n)]
    a_star, mag, scan = _scan_max(intervals, coeffs, p, cfg.samples, seed)
    total = N**n
    regime = IN_REGIME
    pred: object = "<1"
    bound = None
    if theorem == "T8":
        ok = _pow_lt(p, 1, N, 18) and _pow_lt(p, 5, N, 12)
        regime = IN_REGIME if ok else OUT_OF_REGIME
    elif theorem == "T9":
        sp = math.sqrt(p)
        f = (N ** (k - 1) / sp + sp / N**k) ** (1 / (2 * k * k))
        bound = f * f * total
    elif theorem == "T10":
        bound = p ** (1 / 8) * N**1.5 * (N**3 / p + 1) ** (1 / 8)
    elif theorem == "T11":
        regime = IN_REGIME if _pow_lt(N, 2 * k, p, k + 1) else OUT_OF_REGIME
        bound = p ** (1 / (2 * k * k)) * N ** (-2 / (k * (k + 1))) * total
    elif theorem == "T12":
        regime = IN_REGIME if n >= 7 and _pow_lt(p, 1, N, 3 * n) else OUT_OF_REGIME
    elif theorem == "T13":
        regime = IN_REGIME if _pow_lt(p, 4, N, n * n) else OUT_OF_REGIME
    elif theorem == "T14":
        regime = IN_REGIME if _pow_lt(p, 1, N, 2 * n) else OUT_OF_REGIME
    elif theorem == "T17":
        lp = math.log(p)
        bound = math.log(lp) ** 3 * lp / math.log(N) ** 1.5 * N if N > 1 and lp > 1 else None
    extra = dict(offset=a, a_star=a_star, scan=scan)
    if bound is not None:
        pred = _log_ratio(bound, total)
        extra["bound_ratio"] = f"{bound / total:.6g}"
    if theorem in ("T9", "T11"):
        extra["k2"] = k
    return dict(
        measured=repr(mag / total),
        predicted_exponent=pred if isinstance(pred, str) else _fmt_exponent(pred),
        measured_exponent=_log_ratio(mag, total),
        regime=regime,
        param_extra=_extra(**extra),
    )


def _archimedean_record(pt: dict) -> dict:
    N, xi = pt["N"], pt["xi"]
    S = expsums.archimedean_bilinear(xi, N, N)
    ratio = abs(xi) / (N * N)
    extra = {"xi": repr(float(xi))}
    regime = IN_REGIME if abs(xi) > N * N else OUT_OF_REGIME
    pred = ""
    if ratio >= 1:
        kk = expsums.choose_archimedean_k(ratio, N)
        g = expsums.archimedean_gamma(xi, N, N, kk, kk)
        extra.update(k1=kk, k2=kk, gamma=f"{g:.6g}", ratio_to_gamma=f"{S.normalized / g:.6g}")
        pred = _fmt_exponent(_log_ratio(g * N * N, N * N))
    return dict(
        measured=repr(S.normalized),
        predicted_exponent=pred,
        measured_exponent=_log_ratio(S.modulus, N * N),
        regime=regime,
        param_extra=_extra(**extra),
    )


# ---------------------------------------------------------------------------
# Brun-Titchmarsh ratio


@dataclass
class BTRow:
    x: int
    theta: float
    q: int
    a: int
    count: int
    c_measured: float


def brun_titchmarsh_row(x: int, q: int, a: int = 1, theta: float | None = None) -> BTRow:
    """pi(x; q, a) and the ratio pi * phi(q) * log(x/q) / x."""
    if x > BT_SIEVE_MAX:
        raise ResourceError(f"x={x} exceeds the sieve budget {BT_SIEVE_MAX}")
    if q >= x:
        raise DomainError("need q < x")
    count = prime_count_ap(x, q, a)
    c = count * euler_phi(q) * math.log(x / q) / x
    if theta is None:
        theta = math.log(q) / math.log(x)
    return BTRow(x, theta, q, a, count, c)


def brun_titchmarsh_report(x: int, theta_grid: Sequence[float], a: int = 1) -> list[BTRow]:
    """One row per theta with q the prime nearest x^theta."""
    if not theta_grid:
        raise ConfigError("empty theta grid")
    if x > BT_SIEVE_MAX:
        raise ResourceError(f"x={x} exceeds the sieve budget {BT_SIEVE_MAX}")
    rows = []
    for th in theta_grid:
        if not 0 < th < 1:
            raise ConfigError(f"theta={th} outside (0, 1)")
        q = nearest_prime(x**th)
        rows.append(brun_titchmarsh_row(x, q, a, th))
    return rows


def _bt_record(pt: dict) -> tuple[dict, int]:
    row = brun_titchmarsh_report(pt["x"], [pt["theta"]])[0]
    return (
        dict(
            measured=str(row.count),
            predicted_exponent="",
            measured_exponent=row.c_measured,
            regime=IN_REGIME if row.c_measured > 0 else OUT_OF_REGIME,
            param_extra=_extra(theta=repr(row.theta), a=row.a, c_bound=2),
        ),
        row.q,
    )


# ---------------------------------------------------------------------------
# sweep driver


def evaluate_point(cfg: SweepConfig, index: int, pt: dict) -> ResultRecord:
    t0 = time.perf_counter()
    t = cfg.theorem
    seed = _point_seed(cfg.seed, index)
    p, N, k, n = pt.get("p", 0), pt.get("N", pt.get("x", 0)), pt.get("k", 0), pt.get("n", 0)
    if t in _ENERGY:
        body = _energy_record(t, pt, cfg)
        n = 1
    elif t in _SUMS:
        body = _sum_record(t, pt, cfg, seed)
        n = {"T8": 2, "T9": 2, "T10": 2, "T11": 2, "T17": 1}.get(t, n)
        if t not in ("T9", "T11"):
            k = 0
    elif t == "T15":
        body = _archimedean_record(pt)
        k = n = 0
        N = pt["N"]
    else:
        body, p = _bt_record(pt)
        N = pt["x"]
    seconds = time.perf_counter() - t0 if cfg.timing else 0.0
    return ResultRecord(theorem=t, p=p, N=N, k=k, n=n, seconds=seconds, **body)


def iter_sweep(cfg: SweepConfig) -> Iterator[ResultRecord]:
    """Records in grid order; with threads > 1 points run concurrently."""
    cfg.validate()
    pts = cfg.points()
    if cfg.theorem not in ("BT", "T15"):
        for pt in pts:
            _check_interval(pt["p"], pt["N"], 0 if cfg.theorem in ("T5", "T6", "T9", "T17") else pt["offset"])
    if cfg.threads == 1:
        for i, pt in enumerate(pts):
            yield evaluate_point(cfg, i, pt)
        return
    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        yield from pool.map(lambda ip: evaluate_point(cfg, *ip), enumerate(pts))


def run_sweep(cfg: SweepConfig) -> list[ResultRecord]:
    """Run every grid point; stream to ``cfg.out`` when set."""
    if cfg.out is None:
        return list(iter_sweep(cfg))
    cfg.validate()
    out = []
    with RecordWriter(cfg.out, cfg.fmt) as w:
        for rec in iter_sweep(cfg):
            w.write(rec)
            out.append(rec)
    return out


# ---------------------------------------------------------------------------
# serialization


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class RecordWriter:
    """Streaming CSV/JSON writer; line 1 carries the timestamp."""

    def __init__(self, path, fmt: str = "csv", stamp: str | None = None):
        if fmt not in ("csv", "json"):
            raise ConfigError(f"unknown format {fmt!r}")
        self.path, self.fmt = path, fmt
        self.stamp = stamp or _timestamp()
        self._fh = None
        self._first = True

    def __enter__(self):
        self._fh = open(self.path, "w", newline="") if not hasattr(self.path, "write") else self.path
        if self.fmt == "csv":
            self._fh.write(f"# generated {self.stamp}\n")
            csv.writer(self._fh, lineterminator="\n").writerow(COLUMNS)
        else:
            self._fh.write(json.dumps({"generated": self.stamp})[:-1] + ",\n")
            self._fh.write('"records": [\n')
        return self

    def write(self, rec: ResultRecord) -> None:
        if self.fmt == "csv":
            csv.writer(self._fh, lineterminator="\n").writerow(rec.row())
        else:
            sep = "" if self._first else ",\n"
            self._fh.write(sep + json.dumps(rec.as_dict()))
        self._first = False
        self._fh.flush()

    def __exit__(self, *exc):
        if self.fmt == "json":
            self._fh.write("\n]}\n")
        if not hasattr(self.path, "write"):
            self._fh.close()
        return False


def dumps(records: Iterable[ResultRecord], fmt: str = "csv", stamp: str | None = None) -> str:
    buf = io.StringIO()
    with RecordWriter(buf, fmt, stamp) as w:
        for r in records:
            w.write(r)
    return buf.getvalue()


def loads(text: str) -> list[ResultRecord]:
    """Parse either format; the format is recognised from the first character."""
    if text.lstrip().startswith("{"):
        return [ResultRecord.from_row(d) for d in json.loads(text)["records"]]
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return [ResultRecord.from_row(r) for r in csv.DictReader(lines)]


def read_records(path) -> list[ResultRecord]:
    return loads(Path(path).read_text())


def format_bt_table(rows: Sequence[BTRow]) -> str:
    lines = [f"{'x':>12} {'theta':>7} {'q':>10} {'pi(x;q,a)':>10} {'c_measured':>11}"]
    for r in rows:
        lines.append(f"{r.x:>12} {r.theta:>7.3f} {r.q:>10} {r.count:>10} {r.c_measured:>11.5f}")
    return "\n".join(lines)
