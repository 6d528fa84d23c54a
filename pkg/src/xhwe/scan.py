"""Genome-wide scan over a genotype-count TSV.

Input columns: ``chrom pos id ref alt region f0 f1 f2 m0 m1 m2`` (tab
separated, header required; ``m1`` may be blank for X-NPR rows).  Each input
row yields exactly one :class:`ScanRecord`, whether it was tested, filtered
or rejected, and output order always follows input order.
"""

from __future__ import annotations

import csv
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Optional, Sequence, Union

from . import hwe_tests as ht
from ._format import NA, format_num, format_p
from .core import AlleleStats, GenotypeCounts, Region, allele_stats, maf, relabel_alleles, validate
from .errors import (
    BadRegionTag,
    CountParseError,
    DegenerateLocus,
    InputError,
    MissingColumn,
    XHWEError,
)

log = logging.getLogger(__name__)

COUNT_COLUMNS = ("f0", "f1", "f2", "m0", "m1", "m2")
META_COLUMNS = ("chrom", "pos", "id", "ref", "alt")

RESULT_HEADER = (
    "chrom", "pos", "id", "ref", "alt", "region", "status", "flags",
    "p_f", "p_m", "p_pooled", "delta_f", "delta_m", "sdmaf",
)
PLOT_HEADER = ("pos_bp", "test_id", "neglog10_p_clipped", "abs_sdmaf")
# p-values above 0.1 are drawn at 0.1
PLOT_FLOOR = 1.0


@dataclass(frozen=True)
class ScanConfig:
    input: Union[str, Path]
    region_col: str = "region"
    tests: Optional[tuple[str, ...]] = None  # None: per-region default panel
    threshold: float = 5e-8
    orient_female_minor: bool = False
    maf_filter: float = 0.05
    out: Optional[Union[str, Path]] = None
    hits: Optional[Union[str, Path]] = None
    plot: Optional[Union[str, Path]] = None
    threads: int = 1
    strict: bool = False
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.threshold < 1.0:
            raise ValueError(f"threshold must lie in (0, 1), got {self.threshold}")
        if not 0.0 <= self.maf_filter <= 0.5:
            raise ValueError(f"MAF filter must lie in [0, 0.5], got {self.maf_filter}")
        if self.tests is not None:
            for t in self.tests:
                if t not in ht.TESTS:
                    raise ValueError(f"unknown test {t!r}")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")

    def panel(self, region: Region) -> tuple[str, ...]:
        if self.tests is None:
            return ht.DEFAULT_PANELS[region]
        return self.tests

    def columns(self) -> tuple[str, ...]:
        if self.tests is not None:
            return self.tests
        seen: dict[str, None] = {}
        for region in (Region.AUTOSOME, Region.X_NPR, Region.X_PAR):
            seen.update(dict.fromkeys(ht.DEFAULT_PANELS[region]))
        return tuple(seen)


@dataclass(frozen=True)
class RowError:
    """An input row that could not be turned into valid counts."""

    line: int
    error: InputError
    fields: dict


@dataclass
class ScanRecord:
    line: int
    counts: Optional[GenotypeCounts]
    meta: dict
    status: str = "ok"  # ok | filtered | degenerate | error
    stats: Optional[AlleleStats] = None
    results: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)
    flags: set = field(default_factory=set)

    def significant(self, threshold: float) -> list[str]:
        cut = -math.log10(threshold)
        return [t for t, r in self.results.items() if r.neglog10_p >= cut]


# -- parsing ------------------------------------------------------------------


def _count(value, name, line):
    text = (value or "").strip()
    if text == "" and name == "m1":
        return 0
    try:
        number = int(text)
    except ValueError:
        raise CountParseError(f"column {name}: {text!r} is not an integer count", line) from None
    return number


def read_counts_table(path, region_col: str = "region") -> Iterator[tuple[int, Union[GenotypeCounts, RowError]]]:
    """Yield ``(line, counts)`` or ``(line, RowError)`` for every data row.

    A missing required column is fatal and raises :class:`MissingColumn`.
    """
    with open(path, newline="", encoding="utf-8") as handle:
        rows = (
            (number, text)
            for number, text in enumerate(handle, start=1)
            if text.strip() and not text.startswith("#")
        )
        header_line = next(rows, None)
        if header_line is None:
            return
        line, text = header_line
        header = [h.strip() for h in text.rstrip("\r\n").split("\t")]
        needed = (*META_COLUMNS, region_col, *COUNT_COLUMNS)
        missing = [c for c in needed if c not in header]
        if missing:
            raise MissingColumn(f"missing column(s): {', '.join(missing)}", line)
        for line, text in rows:
            values = next(csv.reader([text.rstrip("\r\n")], delimiter="\t"))
            fields = dict(zip(header, values))
            try:
                yield line, _row_counts(fields, region_col, line)
            except InputError as exc:
                yield line, RowError(line, exc, fields)


def _row_counts(fields, region_col, line):
    try:
        region = Region.parse(fields.get(region_col, ""))
    except ValueError:
        raise BadRegionTag(f"unknown region tag {fields.get(region_col)!r}", line) from None
    counts = [_count(fields.get(name), name, line) for name in COUNT_COLUMNS]
    pos_text = (fields.get("pos") or "").strip()
    try:
        pos = int(pos_text) if pos_text else None
    except ValueError:
        raise CountParseError(f"column pos: {pos_text!r} is not an integer", line) from None
    record = GenotypeCounts(
        region, *counts,
        chrom=fields.get("chrom") or None, pos=pos, id=fields.get("id") or None,
        ref=fields.get("ref") or None, alt=fields.get("alt") or None,
    )
    try:
        return validate(record)
    except InputError as exc:
        raise type(exc)(str(exc), line) from None


def parse_counts_table(path, region_col: str = "region", strict: bool = True) -> Iterator[GenotypeCounts]:
    """Validated records in file order.

    With ``strict`` the first malformed row raises; otherwise it is logged
    (with its line number) and skipped.
    """
    for line, item in read_counts_table(path, region_col):
        if isinstance(item, RowError):
            if strict:
                raise item.error
            log.warning("skipping %s", item.error)
            continue
        yield item


# -- per-row evaluation -------------------------------------------------------


def _meta(item):
    if isinstance(item, RowError):
        f = item.fields
        return {k: f.get(k, "") for k in META_COLUMNS} | {"region": ""}
    return {
        "chrom": item.chrom or "", "pos": "" if item.pos is None else str(item.pos),
        "id": item.id or "", "ref": item.ref or "", "alt": item.alt or "",
        "region": item.region.value,
    }


def _passes_maf(st: AlleleStats, cutoff: float) -> bool:
    for p in (st.p_f, st.p_m, st.p_pooled):
        if p is not None and maf(p) < cutoff:
            return False
    return True


def scan_row(line: int, item, config: ScanConfig) -> ScanRecord:
    record = ScanRecord(line=line, counts=None, meta=_meta(item))
    if isinstance(item, RowError):
        record.status = "error"
        record.errors["input"] = type(item.error).__name__
        return record

    counts = item
    st = allele_stats(counts)
    if config.orient_female_minor and st.p_f is not None and st.p_f > 0.5:
        counts = relabel_alleles(counts)
        st = allele_stats(counts)
        record.flags.add("flipped")
    record.counts, record.stats = counts, st

    if st.p_pooled is None or not 0.0 < st.p_pooled < 1.0:
        record.status = "degenerate"
        record.flags.add("degenerate")
        return record
    if not _passes_maf(st, config.maf_filter):
        record.status = "filtered"
        record.flags.add("filtered")
        return record

    for test in config.panel(counts.region):
        if not ht.applicable(test, counts.region):
            record.errors[test] = "WrongRegion"
            continue
        try:
            result = ht.run_test(test, counts)
        except DegenerateLocus:
            record.errors[test] = "DegenerateLocus"
            record.flags.add("degenerate")
            continue
        except XHWEError as exc:
            record.errors[test] = type(exc).__name__
            continue
        record.results[test] = result
        if result.warnings:
            record.flags.update(result.warnings)
    return record


@dataclass(frozen=True)
class ScanSummary:
    rows: int
    tested: int
    filtered: int
    degenerate: int
    errors: int
    hits: int
    hits_per_test: dict


def run_scan(config: ScanConfig) -> tuple[list[ScanRecord], ScanSummary]:
    """Evaluate every row of ``config.input`` and write the configured outputs.

    Rows are processed by ``config.threads`` workers; records come back in
    input order so the outputs are identical for any thread count.
    """
    items = list(read_counts_table(config.input, config.region_col))
    if config.strict:
        for _, item in items:
            if isinstance(item, RowError):
                raise item.error

    def work(pair):
        return scan_row(pair[0], pair[1], config)

    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            records = list(pool.map(work, items))
    else:
        records = [work(pair) for pair in items]

    columns = config.columns()
    hits = [r for r in records if r.status == "ok" and r.significant(config.threshold)]
    per_test = {t: sum(1 for r in hits if t in r.significant(config.threshold)) for t in columns}
    summary = ScanSummary(
        rows=len(records),
        tested=sum(r.status == "ok" for r in records),
        filtered=sum(r.status == "filtered" for r in records),
        degenerate=sum(r.status == "degenerate" for r in records),
        errors=sum(r.status == "error" for r in records),
        hits=len(hits),
        hits_per_test=per_test,
    )
    if config.out:
        write_results(records, columns, config.out)
    if config.hits:
        write_hits(hits, columns, config.threshold, config.hits)
    if config.plot:
        write_plot(records, columns, config.plot)
    return records, summary


# -- writers ------------------------------------------------------------------


def _stat_cells(st: Optional[AlleleStats]):
    if st is None:
        return [NA] * 6
    return [format_num(v) for v in (st.p_f, st.p_m, st.p_pooled, st.delta_f, st.delta_m, st.sdmaf)]


def result_header(columns: Sequence[str]) -> list[str]:
    header = list(RESULT_HEADER)
    for t in columns:
        header += [f"{t}.stat", f"{t}.p", f"{t}.neglog10p"]
    return header + ["errors"]


def result_row(record: ScanRecord, columns: Sequence[str]) -> list[str]:
    m = record.meta
    row = [m["chrom"], m["pos"], m["id"], m["ref"], m["alt"], m["region"] or NA,
           record.status, ",".join(sorted(record.flags)) or "."]
    row += _stat_cells(record.stats)
    for t in columns:
        r = record.results.get(t)
        if r is None:
            row += [NA, NA, NA]
        else:
            row += [format_num(r.statistic), format_p(r.neglog10_p), f"{r.neglog10_p:.4f}"]
    errors = ";".join(f"{k}:{v}" for k, v in record.errors.items())
    return row + [errors or "."]


def _write(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as handle:
        handle.write("\t".join(header) + "\n")
        for row in rows:
            handle.write("\t".join(row) + "\n")


def write_results(records, columns, path):
    _write(path, result_header(columns), (result_row(r, columns) for r in records))


HITS_HEADER = ("id", "chrom", "pos", "ref_alt", "region", "delta_f", "delta_m",
               "p_f", "p_m", "p_pooled", "sdmaf")


def write_hits(hits, columns, threshold, path):
    header = list(HITS_HEADER) + [f"{t}.p" for t in columns] + ["significant_tests"]

    def rows():
        for r in hits:
            m, st = r.meta, r.stats
            row = [m["id"], m["chrom"], m["pos"], f"{m['ref']}/{m['alt']}", m["region"]]
            row += [format_num(v, 3) for v in (st.delta_f, st.delta_m, st.p_f, st.p_m,
                                               st.p_pooled, st.sdmaf)]
            row += [format_p(r.results[t].neglog10_p) if t in r.results else NA for t in columns]
            row.append(",".join(r.significant(threshold)))
            yield row

    _write(path, header, rows())


def write_plot(records, columns, path):
    def rows():
        for r in records:
            if r.status != "ok":
                continue
            sd = r.stats.sdmaf
            abs_sd = format_num(abs(sd)) if sd is not None else NA
            for t in columns:
                res = r.results.get(t)
                if res is None:
                    continue
                yield [r.meta["pos"], t, f"{max(res.neglog10_p, PLOT_FLOOR):.4f}", abs_sd]

    _write(path, PLOT_HEADER, rows())


def write_counts_table(records: Sequence[GenotypeCounts], path) -> None:
    """Write counts in the scan input format (inverse of :func:`parse_counts_table`)."""
    header = (*META_COLUMNS, "region", *COUNT_COLUMNS)

    def rows():
        for c in records:
            yield [c.chrom or "", "" if c.pos is None else str(c.pos), c.id or "", c.ref or "",
                   c.alt or "", c.region.value, *(str(v) for v in (c.f0, c.f1, c.f2, c.m0, c.m1, c.m2))]

    _write(path, header, rows())
