"""Command-line orchestration: identity suites over prime sweeps, asymptotic
ratio tables, cache management, and direct G-function evaluation.

Exit status contract: `verify` returns 0 iff every emitted record matches.
Output determinism: timing columns are zeroed unless --timings is given, so
identical configurations produce byte-identical CSV/JSON at any worker count.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from fractions import Fraction
from pathlib import Path

from sympy import isprime, primerange

from . import classnumber as cn
from . import identities as idn
from . import kloosterman as km
from . import padic as pa
from .ecurve import ap_table, l_set_sizes, twist_relation_check
from .ffield import make_field_ctx
from .records import (SCHEMA_HEADER, VerificationRecord, merge_records,
                      records_to_csv)

SUITE_NAMES = ("moments", "s4-triroute", "cp-chain", "eichler", "cohen",
               "curves", "schoof", "counting", "gk", "greene",
               "prop6.4", "prop6.5", "prop6.6")

SWEEP_NAMES = idn.SWEEP_CLAIMS + ("thm6.2", "thm6.3", "angles")


@dataclass(frozen=True)
class RunConfig:
    pmin: int = 7
    pmax: int = 97
    nmax: int = 999
    K: int = 6
    suites: tuple = ()
    workers: int = 1
    out: str = "csv"
    file: str | None = None
    cache: str | None = None
    census_cap: int = 200
    cp_cap: int = 100
    threshold: float = 4.0
    timings: bool = False
    seed: int = 1729

    def __post_init__(self):
        if self.pmin <= 5:
            raise ValueError("suites assume p > 5; pass --pmin 7 or higher")
        if self.out not in ("csv", "json"):
            raise ValueError("output format must be csv or json")


# --- shared state handed to forked workers ------------------------------------

_SHARED: dict = {}

_TABLE_SUITES = {"s4-triroute", "eichler", "cohen", "curves", "schoof",
                 "counting"}


def _prepare_shared(cfg: RunConfig) -> None:
    if not (_TABLE_SUITES & set(cfg.suites)):
        return
    bound = 0
    if {"eichler", "cohen"} & set(cfg.suites):
        bound = max(bound, cfg.nmax)
    if _TABLE_SUITES - {"eichler", "cohen"} & set(cfg.suites):
        bound = max(bound, 4 * cfg.pmax)
    prev = _SHARED.get("hurwitz")
    if prev is None or prev.bound < bound:
        _SHARED["hurwitz"] = cn.build_hurwitz_table(bound)


def _table() -> cn.HurwitzTable:
    return _SHARED["hurwitz"]


# --- per-task record computation ----------------------------------------------

def _guard(p: int, name: str, fn) -> list[VerificationRecord]:
    """Per-record error capture: failures become mismatching records, the
    sweep itself never aborts."""
    try:
        out = fn()
        return out if isinstance(out, list) else [out]
    except Exception as exc:  # noqa: BLE001 - reported, not swallowed
        return [VerificationRecord(p, name, "error", "", False,
                                   detail=f"{type(exc).__name__}: {exc}")]


def _collapse(p: int, name: str, recs: list[VerificationRecord],
              extra: str = "") -> VerificationRecord:
    fails = [r for r in recs if not r.match]
    detail = f"checks={len(recs)} fails={len(fails)}"
    if fails:
        detail += " first=" + fails[0].name
    if extra:
        detail += " " + extra
    return VerificationRecord(p, name, len(recs) - len(fails), len(recs),
                              not fails, detail=detail)


def _suite_moments(p: int, cfg: RunConfig) -> list[VerificationRecord]:
    ctx = make_field_ctx(p)
    pre = km.kloosterman_table(ctx)
    cf = km.closed_forms(p)
    phi = (p - 1) // 2
    out = []

    def rec(name, lhs, rhs):
        out.append(VerificationRecord(p, name, lhs, rhs, lhs == rhs))

    rec("S1-closed", km.untwisted_moment(ctx, 1, pre).value, cf["S1"])
    rec("S2-closed", km.untwisted_moment(ctx, 2, pre).value, cf["S2"])
    s3 = km.untwisted_moment(ctx, 3, pre).value
    c3 = 1 if p % 3 == 1 else -1
    rec("S3-fit", s3, c3 * p * p + 2 * p + 1)
    s4 = km.untwisted_moment(ctx, 4, pre).value
    rec("S4-closed-printed", s4, cf["S4"])
    rec("S4-closed-corrected", s4, cf["S4corrected"])
    s4phi = km.twisted_moment(ctx, 4, phi, pre).value
    rec("S2phi-closed", km.twisted_moment(ctx, 2, phi, pre).value, cf["S2phi"])
    rec("S1phi-closed", km.twisted_moment(ctx, 1, phi, pre).value,
        ctx.qr[p - 1] * p)
    rec("M4phi-offset", km.sheaf_moment(ctx, 4, pre), s4phi + 3 * p * p)
    rec("M1phi-closed", km.sheaf_moment(ctx, 1, pre), -ctx.qr[p - 1] * p)
    return out


def _suite_triroute(p: int, cfg: RunConfig) -> list[VerificationRecord]:
    ctx = make_field_ctx(p)
    direct = idn.s4_direct(ctx)
    via_ap = idn.s4_via_ap(ctx, corrected=True)
    via_h = idn.s4_via_classnumbers(ctx, _table(), corrected=True)
    printed_ap = idn.s4_via_ap(ctx, corrected=False)
    printed_h = idn.s4_via_classnumbers(ctx, _table(), corrected=False)
    match = direct == via_ap == via_h
    return [VerificationRecord(
        p, "s4-triroute", direct, via_ap, match,
        detail=f"h-route={via_h} printed-ap={printed_ap} "
               f"printed-h={printed_h}")]


def _suite_cp(p: int, cfg: RunConfig) -> list[VerificationRecord]:
    ctx = make_field_ctx(p)
    out = [idn.ap_second_moment_check(ctx)]
    if p <= cfg.cp_cap:
        brute = idn.cp_count(ctx, "brute", cap=cfg.cp_cap)
        formula = idn.cp_count(ctx, "formula", cap=cfg.cp_cap)
        out.append(VerificationRecord(p, "cp-count", brute, formula,
                                      brute == formula))
    return out


def _suite_eichler(cfg: RunConfig) -> list[VerificationRecord]:
    table = _table()
    out = []
    for n in range(1, cfg.nmax + 1, 2):
        lhs = cn.eichler_lhs(n, table)
        rhs = cn.eichler_rhs(n)
        # the index column holds n: these records sweep odd n, not primes
        out.append(VerificationRecord(n, "eichler", str(lhs), str(rhs),
                                      lhs == rhs))
    return out


def _suite_cohen(cfg: RunConfig) -> list[VerificationRecord]:
    table = _table()
    out = []
    for ell in range(1, cfg.nmax + 1, 2):
        c = cn.cohen_coefficient(ell, table)
        ratio = abs(float(c)) / ell ** 1.5
        out.append(VerificationRecord(ell, "cohen", str(c), "0",
                                      ratio <= 0.01, ratio=ratio))
    return out


def _suite_curves(p: int, cfg: RunConfig) -> list[VerificationRecord]:
    ctx = make_field_ctx(p)
    twists = [lam for lam in range(2, p - 1)
              if not all(twist_relation_check(ctx, lam))]
    hist = Counter(l_set_sizes(ctx).values())
    # L(lambda) carries both signs of each mu, so sizes are 2, 4, 6 or 12,
    # and each size-k class contributes k lambdas to the tally
    ok = (set(hist) <= {2, 4, 6, 12}
          and all(v % k == 0 for k, v in hist.items()))
    out = [
        VerificationRecord(p, "twist-relations", len(twists), 0, not twists),
        VerificationRecord(p, "l-set-sizes", sum(hist.values()), p - 3,
                           ok and sum(hist.values()) == p - 3,
                           detail=" ".join(f"{k}:{v}" for k, v
                                           in sorted(hist.items()))),
        idn.torsion_census_check(ctx, _table()),
    ]
    return out


def _admissible_schoof(p: int) -> list[tuple[int, int]]:
    pairs = []
    smax = math.isqrt(4 * p - 1)
    for n in (1, 2, 4):
        if (p - 1) % n:
            continue
        for s in range(-smax, smax + 1):
            if s % p == 0 or (p + 1 - s) % (n * n):
                continue
            pairs.append((n, s))
    return pairs


def _suite_schoof(p: int, cfg: RunConfig) -> list[VerificationRecord]:
    ctx = make_field_ctx(p)
    recs = [idn.schoof_count_check(ctx, n, s, _table(), cap=cfg.census_cap)
            for n, s in _admissible_schoof(p)]
    return [_collapse(p, "schoof-census", recs)]


def _suite_counting(p: int, cfg: RunConfig) -> list[VerificationRecord]:
    return [idn.counting_lemma_check(make_field_ctx(p), _table())]


def _suite_gk(p: int, cfg: RunConfig) -> list[VerificationRecord]:
    ctx = pa.make_padic_ctx(p, cfg.K)
    q = p - 1
    rng = random.Random(cfg.seed ^ p)
    if p <= 50:
        pairs = [(a, b) for a in range(1, q) for b in range(1, q)]
    else:
        pairs = [(rng.randrange(1, q), rng.randrange(1, q)) for _ in range(50)]
    gk = [pa.gk_consistency_check(ctx, a, b) for a, b in pairs]
    out = [_collapse(p, "gk-consistency", gk)]
    for m in (2, 3):
        if q % m:
            continue
        sidxs = range(q) if p <= 50 else sorted(
            rng.sample(range(q), min(q, 20)))
        hd = [pa.hasse_davenport_check(ctx, m, s) for s in sidxs]
        out.append(_collapse(p, f"hd-m{m}", hd))
    jidxs = range(q) if p <= 50 else sorted(rng.sample(range(q), min(q, 12)))
    gp = [pa.gamma_product_checks(ctx, t, j)
          for t in (2, 3, 4, 6, 12) for j in jidxs]
    out.append(_collapse(p, "gamma-products", gp))
    return out


def _suite_greene(p: int, cfg: RunConfig) -> list[VerificationRecord]:
    ctx = pa.make_padic_ctx(p, max(cfg.K, 4))
    aps = ap_table(ctx.field)
    phim = ctx.field.qr[p - 1]
    bad = [lam for lam in range(2, p)
           if pa.greene_2f1_fraction(ctx, lam)
           != Fraction(-phim * int(aps[lam]), p)]
    return [VerificationRecord(p, "greene-trace", len(bad), 0, not bad)]


_PRIME_SUITES = {
    "moments": (_suite_moments, 1, 0),
    "s4-triroute": (_suite_triroute, 1, 0),
    "cp-chain": (_suite_cp, 1, 0),
    "curves": (_suite_curves, 1, 0),
    "schoof": (_suite_schoof, 1, 0),
    "counting": (_suite_counting, 4, 1),
    "greene": (_suite_greene, 1, 0),
    "gk": (_suite_gk, 1, 0),
    "prop6.4": (lambda p, cfg: [pa.prop64_check(
        pa.make_padic_ctx(p, max(cfg.K, 6)))], 6, 1),
    "prop6.5": (lambda p, cfg: [pa.prop65_check(
        pa.make_padic_ctx(p, max(cfg.K, 6)))], 3, 2),
    "prop6.6": (lambda p, cfg: [pa.prop66_check(
        pa.make_padic_ctx(p, max(cfg.K, 6)))], 1, 0),
}


def _run_task(task) -> list[VerificationRecord]:
    suite, idx, cfg = task
    if suite == "eichler":
        return _guard(0, "eichler", lambda: _suite_eichler(cfg))
    if suite == "cohen":
        return _guard(0, "cohen", lambda: _suite_cohen(cfg))
    fn = _PRIME_SUITES[suite][0]
    return _guard(idx, suite, lambda: fn(idx, cfg))


def _suite_tasks(cfg: RunConfig) -> list[tuple]:
    tasks = []
    for suite in cfg.suites:
        if suite in ("eichler", "cohen"):
            tasks.append((suite, 0, cfg))
            continue
        fn, modulus, residue = _PRIME_SUITES[suite]
        pmax = cfg.pmax
        if suite == "schoof":
            pmax = min(pmax, cfg.census_cap)
        for p in primerange(cfg.pmin, pmax + 1):
            if p % modulus == residue % modulus:
                tasks.append((suite, p, cfg))
    return tasks


def _emit(records: list[VerificationRecord], cfg: RunConfig) -> None:
    if not cfg.timings:
        records = [replace(r, elapsed_ms=0.0) for r in records]
    if cfg.out == "json":
        rows = []
        for r in records:
            d = asdict(r)
            d["lhs"], d["rhs"] = str(r.lhs), str(r.rhs)
            rows.append(d)
        text = json.dumps(rows, indent=1) + "\n"
    else:
        text = records_to_csv(records)
    sys.stdout.write(text)
    if cfg.file:
        path = Path(cfg.file)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)


def cmd_verify(cfg: RunConfig) -> int:
    if not cfg.suites:
        raise SystemExit("verify: pick at least one --suite "
                         f"from {', '.join(SUITE_NAMES)} or 'all'")
    _prepare_shared(cfg)
    tasks = _suite_tasks(cfg)
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            groups = list(pool.map(_run_task, tasks, chunksize=1))
    else:
        groups = [_run_task(t) for t in tasks]
    records = merge_records(*groups)
    _emit(records, cfg)
    fails = sum(not r.match for r in records)
    print(f"{len(records)} records, {fails} mismatches", file=sys.stderr)
    return 1 if fails else 0


# --- sweeps --------------------------------------------------------------------

def _thm6_task(args) -> list[VerificationRecord]:
    claim, p, K = args
    fn = pa.theorem62_sweep if claim == "thm6.2" else pa.theorem63_sweep
    return fn(p, p, K)


def cmd_sweep(cfg: RunConfig, claim: str, p: int | None, bins: int) -> int:
    if claim == "angles":
        if p is None or not isprime(p):
            raise SystemExit("angles sweep needs a prime --p")
        ctx = make_field_ctx(p)
        counts = km.angle_histogram(ctx, bins)
        edges = [math.pi * k / bins for k in range(bins + 1)]

        def cdf(t: float) -> float:
            return t / math.pi - math.sin(2 * t) / (2 * math.pi)

        lines = [SCHEMA_HEADER, "bin_lo,bin_hi,count,expected"]
        for k in range(bins):
            expect = (p - 1) * (cdf(edges[k + 1]) - cdf(edges[k]))
            lines.append(f"{edges[k]:.6f},{edges[k + 1]:.6f},"
                         f"{int(counts[k])},{expect:.3f}")
        text = "\n".join(lines) + "\n"
        sys.stdout.write(text)
        if cfg.file:
            Path(cfg.file).write_text(text)
        chi = km.semicircle_chisq(counts)
        print(f"semicircle chi^2 = {chi:.2f} over {bins} bins", file=sys.stderr)
        return 0
    if claim in ("thm6.2", "thm6.3"):
        admissible = [pp for pp in primerange(cfg.pmin, cfg.pmax + 1)
                      if (pp % 6 == 1 if claim == "thm6.2" else pp % 3 == 2)]
        if cfg.workers > 1:
            with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
                groups = list(pool.map(_thm6_task,
                                       [(claim, pp, cfg.K) for pp in admissible]))
            records = merge_records(*groups)
        else:
            fn = pa.theorem62_sweep if claim == "thm6.2" else pa.theorem63_sweep
            records = fn(cfg.pmin, cfg.pmax, cfg.K)
        _emit(records, cfg)
        if len(records) >= 2:
            trend = pa.sweep_trend_ok(records)
            print(f"normalized ratio falls from first to last prime: {trend}",
                  file=sys.stderr)
        return 0
    if claim in idn.SWEEP_CLAIMS:
        records = idn.asymptotic_sweep(cfg.pmin, cfg.pmax, claim)
        records = [replace(r, match=(r.ratio is None
                                     or r.ratio <= cfg.threshold),
                           detail=f"threshold={cfg.threshold:g}")
                   for r in records]
        _emit(records, cfg)
        worst = max((r.ratio for r in records if r.ratio is not None),
                    default=0.0)
        print(f"max normalized ratio {worst:.4f} "
              f"(threshold {cfg.threshold:g})", file=sys.stderr)
        return 0 if all(r.match for r in records) else 1
    raise SystemExit(f"unknown claim {claim!r}; pick from {SWEEP_NAMES}")


# --- cache ----------------------------------------------------------------------

def _write_ap_csv(p: int, directory: Path) -> Path:
    ctx = make_field_ctx(p)
    aps = ap_table(ctx)
    lines = [SCHEMA_HEADER, "lambda,ap"]
    for lam in range(2, p):
        lines.append(f"{lam},{int(aps[lam])}")
    path = directory / f"ap_{p}.csv"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")
    return path


def cmd_cache(cfg: RunConfig, action: str, bound: int, ap_primes: list[int]) -> int:
    directory = Path(cfg.cache) if cfg.cache else cn.cache_dir()
    if action == "build":
        table = cn.load_or_build(bound, directory, write=True)
        print(f"hurwitz.csv: D <= {table.bound} "
              f"at {cn.hurwitz_csv_path(directory)}")
        for p in ap_primes:
            if not isprime(p):
                raise SystemExit(f"--ap {p}: not prime")
            print(f"ap table: {_write_ap_csv(p, directory)}")
        return 0
    # inspect
    path = cn.hurwitz_csv_path(directory)
    if path.exists():
        table = cn.read_hurwitz_csv(path)
        print(f"{path}: D <= {table.bound} ({table.bound + 1} rows)")
    else:
        print(f"{path}: missing")
    for ap in sorted(directory.glob("ap_*.csv")):
        nrows = sum(1 for line in ap.read_text().splitlines()
                    if line and not line.startswith("#")) - 1
        print(f"{ap}: {nrows} rows")
    return 0


def cmd_gfun(p: int, family: str, lam: int, K: int) -> int:
    ctx = pa.make_padic_ctx(p, K)
    spec = pa.g3_spec(lam) if family == "3g3" else pa.g9_spec(lam)
    v = pa.ngn_evaluate(ctx, spec)
    if v.is_zero:
        print(f"p={p} family={family} lambda={lam} K={K} value=0 "
              f"(to precision p^{v.precision})")
    else:
        print(f"p={p} family={family} lambda={lam} K={K} "
              f"valuation={v.valuation} unit={v.unit} mod p^{v.precision}")
    return 0


# --- argument plumbing -----------------------------------------------------------

def _load_config_file(path: str) -> dict:
    out = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise SystemExit(f"config line not key=value: {raw!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        out[key] = val
    return out


_CONFIG_TYPES = {
    "pmin": int, "pmax": int, "nmax": int, "K": int, "workers": int,
    "census_cap": int, "cp_cap": int, "seed": int, "threshold": float,
    "timings": lambda s: s.lower() in ("1", "true", "yes"),
    "out": str, "file": str, "cache": str, "suites": str,
}


def _build_config(ns: argparse.Namespace) -> RunConfig:
    base: dict = {}
    if getattr(ns, "config", None):
        for key, val in _load_config_file(ns.config).items():
            if key not in _CONFIG_TYPES:
                raise SystemExit(f"unknown config key {key!r}")
            base[key] = _CONFIG_TYPES[key](val)
    if "suites" in base:
        base["suites"] = tuple(base["suites"].split(","))
    for key in _CONFIG_TYPES:
        flag = getattr(ns, key, None)
        if flag is not None:
            base[key] = flag
    suites = base.get("suites", ())
    if "all" in suites:
        suites = SUITE_NAMES
    base["suites"] = tuple(suites)
    try:
        return RunConfig(**base)
    except ValueError as e:
        raise SystemExit(f"bad configuration: {e}")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="ntlab",
        description="Cross-checked verification lab for Kloosterman moments, "
                    "class-number windows, and p-adic hypergeometric identities.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--pmin", type=int)
        sp.add_argument("--pmax", type=int)
        sp.add_argument("--K", type=int)
        sp.add_argument("--workers", type=int)
        sp.add_argument("--out", choices=("csv", "json"))
        sp.add_argument("--file", help="also write the report to this path")
        sp.add_argument("--config", help="key=value defaults; flags win")
        sp.add_argument("--timings", action="store_const", const=True,
                        default=None, help="emit real elapsed_ms "
                        "(breaks byte-reproducibility)")

    vp = sub.add_parser("verify", help="run identity suites over a prime range")
    common(vp)
    vp.add_argument("--suite", action="append", dest="suite",
                    help=f"one of {', '.join(SUITE_NAMES)}, or 'all'; repeatable")
    vp.add_argument("--nmax", type=int, help="odd-index cap for eichler/cohen")
    vp.add_argument("--seed", type=int)

    wp = sub.add_parser("sweep", help="normalized-ratio tables for the "
                                      "asymptotic claims")
    common(wp)
    wp.add_argument("--claim", required=True,
                    help=f"one of {', '.join(SWEEP_NAMES)}")
    wp.add_argument("--p", type=int, help="single prime (angles)")
    wp.add_argument("--bins", type=int, default=20)
    wp.add_argument("--threshold", type=float)

    cp = sub.add_parser("cache", help="build or inspect hurwitz.csv / ap_<p>.csv")
    cp.add_argument("action", choices=("build", "inspect"))
    cp.add_argument("--bound", type=int, default=20000)
    cp.add_argument("--ap", type=int, action="append", default=[],
                    help="also write ap_<p>.csv for this prime; repeatable")
    cp.add_argument("--cache", help="cache directory (default: NTLAB_CACHE)")

    gp = sub.add_parser("gfun", help="evaluate one p-adic G-function value")
    gp.add_argument("--p", type=int, required=True)
    gp.add_argument("--family", choices=("3g3", "9g9"), required=True)
    gp.add_argument("--lambda", dest="lam", type=int, required=True)
    gp.add_argument("--K", type=int, default=6)

    ns = ap.parse_args(argv)
    if ns.command == "verify":
        picked = tuple(s for part in (ns.suite or ())
                       for s in part.split(","))
        ns.suites = picked or None
        unknown = set(picked) - set(SUITE_NAMES) - {"all"}
        if unknown:
            raise SystemExit(f"unknown suites: {', '.join(sorted(unknown))}")
        del ns.suite
        return cmd_verify(_build_config(ns))
    if ns.command == "sweep":
        return cmd_sweep(_build_config(ns), ns.claim, ns.p, ns.bins)
    if ns.command == "cache":
        cfg = RunConfig(cache=ns.cache)
        return cmd_cache(cfg, ns.action, ns.bound, ns.ap)
    if ns.command == "gfun":
        if not isprime(ns.p) or ns.p < 5:
            raise SystemExit(f"--p {ns.p}: need a prime >= 5")
        return cmd_gfun(ns.p, ns.family, ns.lam, ns.K)
    raise SystemExit(2)


if __name__ == "__main__":
    sys.exit(main())
