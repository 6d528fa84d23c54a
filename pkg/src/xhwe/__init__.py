"""Hardy-Weinberg and sex-difference allele-frequency tests for autosomes and the X chromosome."""

from .core import AlleleStats, GenotypeCounts, Region, allele_stats, maf, relabel_alleles, validate
from . import errors
from .errors import InputError, XHWEError
from .hwe_tests import (
    DEFAULT_PANELS,
    TESTS,
    JointDecomposition,
    TestResult,
    applicable,
    decompose_joint,
    pearson_auto_1df,
    pearson_auto_1df_moment,
    pearson_auto_2df,
    pearson_auto_2df_moment,
    pearson_xnpr_female_1df,
    pearson_xnpr_fm,
    pearson_xnpr_pooled,
    ra_auto_1df,
    ra_xnpr_female_1df,
    ra_xnpr_joint_2df,
    ra_xnpr_pooled_1df,
    ra_xpar_2df,
    ra_xpar_pooled_1df,
    run_test,
    sdmaf_component_hwe,
    sdmaf_robust,
)
from .nulldist import ChiSq, Mixture, NullSpec, mixture_quantile, mixture_sf
from .scan import ScanConfig, ScanRecord, parse_counts_table, run_scan
from .simlab import SimScenario, run_power, run_rejection, run_t1e, simulate_counts
from .table3 import validate_table3

__version__ = "0.1.0"
