"""``xhwe`` command line: scan, simulate, dist, validate-table3.

Exit codes: 0 success, 1 I/O or configuration error, 2 validation failure
(malformed rows under ``--strict``, or a published value not reproduced).
"""

from __future__ import annotations

import argparse
import itertools
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import nulldist, simlab, table3
from ._format import format_num, format_p
from .core import Region
from .errors import InputError, XHWEError
from .hwe_tests import TESTS
from .scan import ScanConfig, run_scan

log = logging.getLogger("xhwe")

EXIT_OK, EXIT_CONFIG, EXIT_VALIDATION = 0, 1, 2


# -- scan ---------------------------------------------------------------------


def _parse_tests(text):
    if text is None or text.strip().lower() == "default":
        return None
    return tuple(t.strip() for t in text.split(",") if t.strip())


def cmd_scan(args) -> int:
    try:
        config = ScanConfig(
            input=args.input,
            region_col=args.region_col,
            tests=_parse_tests(args.tests),
            threshold=args.threshold,
            orient_female_minor=args.orient_female_minor,
            maf_filter=args.maf_filter,
            out=args.out,
            hits=args.hits,
            plot=args.plot,
            threads=args.threads,
            strict=args.strict,
            seed=args.seed,
        )
    except ValueError as exc:
        log.error("%s", exc)
        return EXIT_CONFIG
    try:
        _, summary = run_scan(config)
    except InputError as exc:
        log.error("%s", exc)
        return EXIT_VALIDATION if args.strict else EXIT_CONFIG
    except OSError as exc:
        log.error("%s", exc)
        return EXIT_CONFIG
    print(
        f"rows={summary.rows} tested={summary.tested} filtered={summary.filtered} "
        f"degenerate={summary.degenerate} errors={summary.errors} hits={summary.hits}"
    )
    for test, count in summary.hits_per_test.items():
        print(f"  {test}\t{count}")
    return EXIT_OK


# -- simulate -----------------------------------------------------------------

_LIST_KEYS = ("f", "m", "p_f", "sdmaf", "delta_f", "delta_m")


def read_sim_config(path) -> dict:
    """``key = value`` lines; ``#`` starts a comment; lists are comma separated."""
    raw = {}
    with open(path, encoding="utf-8") as handle:
        for number, line in enumerate(handle, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValueError(f"line {number}: expected key = value")
            raw[key.strip().lower()] = value.strip().strip('"').strip("'")
    return raw


def _floats(text):
    return [float(v) for v in text.replace("[", "").replace("]", "").split(",") if v.strip()]


def sim_scenarios(raw: dict, seed=None) -> tuple[list[simlab.SimScenario], tuple[str, ...] | None]:
    """Expand a config into the scenario grid (f and m are paired, the rest crossed)."""
    known = {*_LIST_KEYS, "region", "replicates", "alpha", "seed", "tests", "workers"}
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"unknown config key(s): {', '.join(sorted(unknown))}")
    if "f" not in raw or "p_f" not in raw:
        raise ValueError("config needs at least f and p_f")
    f = [int(v) for v in _floats(raw["f"])]
    m = [int(v) for v in _floats(raw.get("m", raw["f"]))]
    if len(m) == 1:
        m = m * len(f)
    if len(f) == 1:
        f = f * len(m)
    if len(f) != len(m):
        raise ValueError("f and m lists must have equal length (or one of them be scalar)")
    region = Region.parse(raw.get("region", "npr"))
    lists = [_floats(raw.get(k, "0")) for k in ("p_f", "sdmaf", "delta_f", "delta_m")]
    replicates = int(float(raw.get("replicates", 10_000)))
    alpha = float(raw.get("alpha", 0.05))
    seed = int(raw.get("seed", 0)) if seed is None else seed
    tests = _parse_tests(raw.get("tests"))
    scenarios = [
        simlab.SimScenario(
            f=fi, m=mi, p_f=p, sdmaf=s, delta_f=df, delta_m=dm, region=region,
            replicates=replicates, alpha=alpha, seed=seed,
        )
        for (fi, mi), p, s, df, dm in itertools.product(zip(f, m), *lists)
    ]
    return scenarios, tests


SIM_HEADER = (
    "region", "f", "m", "p_f", "p_m", "sdmaf", "delta_f", "delta_m", "alpha", "test",
    "replicates", "valid", "degenerate", "rejections", "critical_value", "rate", "se",
    "ci99_lo", "ci99_hi",
)


def sim_rows(reports):
    for report in reports:
        s = report.scenario
        for rate in report.rates.values():
            lo, hi = rate.ci99
            yield [
                s.region.value, str(s.f), str(s.m), f"{s.p_f:g}", f"{s.p_m:.6g}", f"{s.sdmaf:g}",
                f"{s.delta_f:g}", f"{s.delta_m:g}", f"{s.alpha:g}", rate.test,
                str(s.replicates), str(rate.valid), str(rate.degenerate), str(rate.rejections),
                format_num(rate.critical_value, 10), format_num(rate.rate), format_num(rate.se),
                format_num(lo), format_num(hi),
            ]


def cmd_simulate(args) -> int:
    try:
        raw = read_sim_config(args.config)
        scenarios, tests = sim_scenarios(raw, args.seed)
        workers = args.workers or int(raw.get("workers", 1))
        for test in tests or ():
            if test not in TESTS:
                raise ValueError(f"unknown test {test!r}")
    except (OSError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_CONFIG
    try:
        reports = simlab.run_power(scenarios, tests, workers=workers)
    except XHWEError as exc:
        log.error("%s", exc)
        return EXIT_CONFIG
    lines = ["\t".join(SIM_HEADER)] + ["\t".join(r) for r in sim_rows(reports)]
    text = "\n".join(lines) + "\n"
    try:
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    except OSError as exc:
        log.error("%s", exc)
        return EXIT_CONFIG
    return EXIT_OK


# -- dist ---------------------------------------------------------------------


def cmd_dist(args) -> int:
    try:
        null = nulldist.parse_null(args.null)
        if args.x is None and args.alpha is None:
            raise ValueError("give --x and/or --alpha")
        if args.x is not None:
            logp = null.logsf(args.x)
            print(f"sf({args.x:g}) = {format_p(nulldist.neglog10(logp))}\t"
                  f"neglog10 = {nulldist.neglog10(logp):.6g}")
        if args.alpha is not None:
            print(f"quantile(1 - {args.alpha:g}) = {null.isf(args.alpha):.10g}")
        if args.mc_draws:
            w = null.w if isinstance(null, nulldist.Mixture) else None
            if w is None:
                raise ValueError("Monte Carlo check is available for mixture nulls only")
            sample = nulldist.mc_mixture_draws(w, args.mc_draws, args.seed)
            if args.x is not None:
                p = float((sample > args.x).mean())
                se = math.sqrt(p * (1.0 - p) / args.mc_draws)
                print(f"mc sf({args.x:g}) = {p:.6g} +/- {se:.2g}")
            if args.alpha is not None:
                print(f"mc quantile(1 - {args.alpha:g}) = "
                      f"{float(np.quantile(sample, 1.0 - args.alpha)):.6g}")
    except (ValueError, XHWEError) as exc:
        log.error("%s", exc)
        return EXIT_CONFIG
    return EXIT_OK


# -- validate-table3 ----------------------------------------------------------


def cmd_validate_table3(args) -> int:
    report = table3.validate_table3()
    lines = report.lines() if args.verbose else report.lines()[-1:]
    print("\n".join(lines))
    return EXIT_OK if report.passed else EXIT_VALIDATION


# -- entry point --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xhwe", description=__doc__.splitlines()[0])
    parser.add_argument("-q", "--quiet", action="store_true", help="errors only")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan", help="test every SNP in a genotype-count TSV")
    p.add_argument("--input", required=True)
    p.add_argument("--region-col", default="region")
    p.add_argument("--tests", default="default", help="comma list of test ids, or 'default'")
    p.add_argument("--threshold", type=float, default=5e-8)
    p.add_argument("--maf-filter", type=float, default=0.05)
    p.add_argument("--orient-female-minor", action="store_true")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strict", action="store_true", help="fail on the first malformed row")
    p.add_argument("--out")
    p.add_argument("--hits")
    p.add_argument("--plot")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("simulate", help="rejection rates over a scenario grid")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("dist", help="evaluate a null distribution")
    p.add_argument("--null", required=True, help="chisq:<df> or mixture:<w>")
    p.add_argument("--x", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--mc-draws", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("validate-table3", help="recompute the published AFR hits")
    p.add_argument("-v", "--verbose", action="store_true", help="print every comparison")
    p.set_defaults(func=cmd_validate_table3)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.ERROR if args.quiet else logging.WARNING,
        format="xhwe: %(levelname)s: %(message)s",
    )
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
