"""``pcl`` command line.

Exit status: 0 on success (no counterexamples among the selected claims),
1 when a sweep found counterexamples, 2 on usage or execution errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .claims import CLAIMS, NClass, sweep
from .correlations import (
    Engine,
    PrecisionLimitError,
    batch_correlate,
    correlate,
    correlation_record,
)
from .reports import (
    COLUMNS,
    CONJECTURE_COLUMNS,
    FORMATS,
    THEOREM_COLUMNS,
    ReportWriter,
    resolve_config,
    sig9,
)
from .sieve import (
    DEFAULT_LIMIT,
    CacheError,
    PrimeTable,
    ResourceLimitError,
    big_omega,
    build_prime_table,
    load_prime_table,
    save_prime_table,
    table_checksum,
)
from .singular import DEFAULT_PRODUCT_LIMIT, build_singular_series, singular_series
from .weights import POINTWISE, WeightKind, build_weight_tables

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_ERROR = 0, 1, 2


class UsageError(ValueError):
    pass


def _int(text: str) -> int:
    try:
        v = float(text) if any(c in text.lower() for c in "e.") else int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v != int(v):
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(v)


def _classes(text: str) -> tuple[NClass, ...]:
    try:
        return tuple(NClass(c.strip().lower()) for c in text.split(",") if c.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"class must be one of {[c.value for c in NClass]}"
        ) from None


def _claims(text: str) -> tuple[str, ...]:
    out = tuple(c.strip() for c in text.split(",") if c.strip())
    bad = set(out) - set(CLAIMS)
    if bad:
        raise argparse.ArgumentTypeError(f"unknown claims {sorted(bad)}; choose from {CLAIMS}")
    return out


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def _set_threads(cfg) -> None:
    import numba

    numba.set_num_threads(min(cfg.resolved_threads(), numba.config.NUMBA_NUM_THREADS))


def get_table(limit: int, cache_path: str | None) -> PrimeTable:
    """Load a cached table covering ``limit`` or build one (refreshing the cache)."""
    if cache_path and os.path.exists(cache_path):
        try:
            t = load_prime_table(cache_path)
            if t.limit >= limit:
                return t
            _log(f"cache {cache_path} covers {t.limit} < {limit}; rebuilding")
        except CacheError as exc:
            _log(f"ignoring cache: {exc}")
    t = build_prime_table(limit)
    if cache_path:
        save_prime_table(t, cache_path)
    return t


# -- subcommands ---------------------------------------------------------------


def cmd_sieve(args) -> int:
    cfg = resolve_config({"limit": args.limit, "cache_path": args.cache}, args.config)
    limit = cfg.limit if cfg.limit is not None else DEFAULT_LIMIT
    if limit < 2:
        raise UsageError(f"--limit must be >= 2, got {limit}")
    t = build_prime_table(limit)
    if cfg.cache_path:
        save_prime_table(t, cfg.cache_path)
    print(f"limit={t.limit} primes={t.primes.size} sha256={table_checksum(t)}")
    return EXIT_OK


def cmd_eval(args) -> int:
    cfg = resolve_config({"limit": args.limit, "cache_path": args.cache}, args.config)
    n = args.n
    limit = cfg.limit if cfg.limit is not None else max(n, 2)
    if not 1 <= n <= limit:
        raise UsageError(f"n={n} outside [1, {limit}]")
    t = get_table(limit, cfg.cache_path)
    out = {kind.value: sig9(POINTWISE[kind](t, n)) for kind in WeightKind}
    out["omega"] = big_omega(t, n)
    out["phi"] = int(t.phi[n])
    print(json.dumps(out))
    return EXIT_OK


def cmd_correlate(args) -> int:
    cfg = resolve_config(
        {
            "limit": args.limit,
            "cache_path": args.cache,
            "engine": args.engine,
            "weights": tuple(w.strip() for w in args.weights.split(",")) if args.weights else None,
            "allow_uncertified": True if args.allow_uncertified else None,
        },
        args.config,
    )
    kinds = [WeightKind(w) for w in cfg.weights]
    top = max(args.N)
    if min(args.N) < 2:
        raise UsageError("N must be >= 2")
    limit = max(cfg.limit or top, top)
    t = get_table(limit, cfg.cache_path)
    tables = build_weight_tables(t, top)
    batches = {}
    if cfg.engine is Engine.CONVOLUTION:
        batches = {
            k: batch_correlate(f, top, Engine.CONVOLUTION, allow_uncertified=cfg.allow_uncertified)
            for k, f in tables.items()
        }
    for N in args.N:
        if batches:
            row = {"N": N, **{k.value: sig9(float(batches[k][N])) for k in kinds}}
        else:
            row = {"N": N, **{k.value: sig9(correlate(tables[k], N)) for k in kinds}}
        if N % 2 == 0 and N >= 8:
            rec = correlation_record(t, tables, N)
            row.update(
                noncoprime=sig9(rec.noncoprime_part),
                coprime=sig9(rec.coprime_part),
                per_prime={str(p): sig9(s) for p, s in rec.per_prime.items()},
                denominator=sig9(rec.denominator),
                ratio_K=None if rec.ratio_k is None else sig9(rec.ratio_k),
            )
        print(json.dumps(row))
    return EXIT_OK


def _run_sweep(args, columns, default_claims) -> int:
    cli = {
        "limit": args.limit,
        "lo": args.lo,
        "hi": args.hi,
        "engine": args.engine,
        "output_format": args.format,
        "cache_path": args.cache,
        "threads": args.threads,
        "classes": args.classes,
        "claims": args.claims,
        "product_limit": args.product_limit,
        "timestamp": False if args.no_timestamp else None,
        "allow_uncertified": True if args.allow_uncertified else None,
    }
    cfg = resolve_config(cli, args.config)
    cfg.validate()
    claims = cfg.claims or default_claims
    _set_threads(cfg)
    lo = max(cfg.lo, 8)
    out = open(args.out, "w", encoding="utf-8", newline="") if args.out else sys.stdout
    try:
        writer = ReportWriter(out, cfg.output_format, columns, timestamp=cfg.timestamp)
        if lo > cfg.hi or not any(n % 2 == 0 for n in (lo, lo + 1) if n <= cfg.hi):
            summary = None
        else:
            limit = cfg.limit if cfg.limit is not None else max(cfg.hi, DEFAULT_PRODUCT_LIMIT)
            if cfg.hi > limit:
                raise UsageError(f"hi={cfg.hi} exceeds limit={limit}")
            t = get_table(limit, cfg.cache_path)
            tables = build_weight_tables(t, cfg.hi)
            ssv = build_singular_series(t, cfg.product_limit)
            summary = sweep(
                t,
                tables,
                ssv,
                lo,
                cfg.hi,
                classes=cfg.classes,
                engine=cfg.engine,
                sink=writer.write,
                stop_on=claims if args.fail_fast else (),
                exhaustive_split=args.exhaustive_split,
                error_terms=args.error_terms,
                allow_uncertified=cfg.allow_uncertified,
            )
        writer.close()
    finally:
        if args.out:
            out.close()
    if summary is None:
        info = {"reports": 0, "counterexamples": {c: 0 for c in CLAIMS}}
        found = 0
    else:
        info = summary.to_dict()
        found = summary.total_counterexamples(claims)
    info["selected_claims"] = list(claims)
    text = json.dumps(info, indent=2)
    if args.summary_out:
        with open(args.summary_out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    _log(text)
    if found:
        where = summary.stopped_at
        first = _first_counterexamples(summary, claims)
        _log(f"counterexamples found: {found}" + (f"; halted at N={where}" if where else ""))
        for claim, ns in first.items():
            if ns:
                _log(f"  {claim}: first at N={ns[0]}")
        return EXIT_COUNTEREXAMPLE
    return EXIT_OK


def _first_counterexamples(summary, claims) -> dict[str, list[int]]:
    lists = {
        "goldbach": summary.goldbach_counterexamples,
        "relaxed": summary.relaxed_counterexamples,
        "conjecture1": [n for n, _ in summary.conjecture1_counterexamples],
        "bridge": summary.bridge_counterexamples,
    }
    return {c: lists[c] for c in claims}


def cmd_sweep(args) -> int:
    return _run_sweep(args, COLUMNS, CLAIMS)


def cmd_check_theorem(args) -> int:
    return _run_sweep(args, THEOREM_COLUMNS, ("relaxed", "bridge"))


def cmd_check_conjecture(args) -> int:
    return _run_sweep(args, CONJECTURE_COLUMNS, ("conjecture1",))


def cmd_singular(args) -> int:
    cfg = resolve_config(
        {"limit": args.limit, "cache_path": args.cache, "product_limit": args.product_limit},
        args.config,
    )
    ns = args.N or []
    if any(n < 2 for n in ns):
        raise UsageError("N must be >= 2")
    plimit = cfg.product_limit if cfg.product_limit is not None else DEFAULT_PRODUCT_LIMIT
    limit = max(cfg.limit or 0, plimit, *ns, 3)
    t = get_table(limit, cfg.cache_path)
    ssv = build_singular_series(t, plimit)
    out = {"pi2": ssv.pi2, "tail_bound": ssv.pi2_tail_bound, "product_limit": ssv.product_limit}
    if ns:
        out["s_of_N"] = {str(n): sig9(singular_series(ssv, t, n)) for n in ns}
    print(json.dumps(out))
    return EXIT_OK


# -- parser --------------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--limit", type=_int, help="sieve limit")
    p.add_argument("--cache", help="sieve cache file (default: $PCL_CACHE)")
    p.add_argument("--config", help="key=value config file")


def _sweep_opts(p: argparse.ArgumentParser) -> None:
    _common(p)
    p.add_argument("--lo", type=_int)
    p.add_argument("--hi", type=_int)
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--out", help="write records here instead of stdout")
    p.add_argument("--summary-out", help="also write the JSON summary to this file")
    p.add_argument("--class", dest="classes", type=_classes, help="comma list: general,two_p,small")
    p.add_argument("--claims", type=_claims, help=f"comma list from {','.join(CLAIMS)}")
    p.add_argument("--engine", choices=[e.value for e in Engine])
    p.add_argument("--threads", help="worker count or 'auto'")
    p.add_argument("--product-limit", type=_int, help="prime bound for the twin prime product")
    p.add_argument("--fail-fast", action="store_true", help="stop at the first counterexample")
    p.add_argument("--no-timestamp", action="store_true")
    p.add_argument("--exhaustive-split", action="store_true", help="gcd-test every pair")
    p.add_argument("--error-terms", action="store_true", help="track error-term classes")
    p.add_argument("--allow-uncertified", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pcl", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sieve", help="build (and cache) the smallest-prime-factor table")
    _common(p)
    p.set_defaults(func=cmd_sieve)

    p = sub.add_parser("eval", help="pointwise weights, Omega and phi at n")
    _common(p)
    p.add_argument("n", type=_int)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("correlate", help="correlation sums at the given N")
    _common(p)
    p.add_argument("N", type=_int, nargs="+")
    p.add_argument("--engine", choices=[e.value for e in Engine])
    p.add_argument("--weights", help="comma list from lambda,lambda0,upsilon")
    p.add_argument("--allow-uncertified", action="store_true")
    p.set_defaults(func=cmd_correlate)

    for name, func, help_ in (
        ("sweep", cmd_sweep, "audit every even N in [lo, hi]"),
        ("check-theorem", cmd_check_theorem, "sweep with theorem columns only"),
        ("check-conjecture", cmd_check_conjecture, "sweep with conjecture columns only"),
    ):
        p = sub.add_parser(name, help=help_)
        _sweep_opts(p)
        p.set_defaults(func=func)

    p = sub.add_parser("singular", help="twin prime constant and singular series")
    _common(p)
    p.add_argument("N", type=_int, nargs="*")
    p.add_argument("--product-limit", type=_int)
    p.set_defaults(func=cmd_singular)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    try:
        return args.func(args)
    except (
        UsageError,
        ValueError,
        OSError,
        CacheError,
        PrecisionLimitError,
        ResourceLimitError,
        OverflowError,
    ) as exc:
        _log(f"pcl {args.command}: error: {exc}")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
