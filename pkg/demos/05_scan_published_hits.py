# The genome-scan pipeline run on counts rebuilt from published AFR estimates.
import tempfile
from pathlib import Path

from xhwe import table3
from xhwe.scan import ScanConfig, run_scan, write_counts_table

report = table3.validate_table3()
print(report.lines()[-1])

with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    counts = tmp / "counts.tsv"
    write_counts_table([table3.reconstruct_counts(r) for r in table3.ROWS], counts)
    config = ScanConfig(input=counts, hits=tmp / "hits.tsv", plot=tmp / "plot.tsv", threads=2)
    records, summary = run_scan(config)
    print(summary)
    for r in records:
        print(f"{r.meta['id']:12s} {r.meta['region']}  significant: {', '.join(r.significant(5e-8))}")
    print((tmp / "plot.tsv").read_text().splitlines()[:4])
