# Type-I error and power of the X-NPR HWE tests, small-scale.
from xhwe.simlab import SimScenario, delta_grid, run_power, run_t1e

# With no sdMAF, everything is calibrated.
r = run_t1e(SimScenario(f=500, m=500, p_f=0.3, replicates=4000, seed=1))
for name, rate in r.rates.items():
    print(f"{name:22s} {rate.rate:.4f} +/- {rate.se:.4f}")

# An sdMAF of 0.1 inflates every test that assumes equal frequencies;
# the female-only test is immune.
r = run_t1e(SimScenario(f=250, m=750, p_f=0.3, sdmaf=0.1, replicates=4000, seed=1))
for name, rate in r.rates.items():
    print(f"sdMAF=0.1  {name:22s} {rate.rate:.4f}")

# Power curve over female HWD
grid = [SimScenario(f=500, m=500, p_f=0.3, delta_f=d, replicates=2000, seed=1)
        for d in delta_grid(-0.04, 0.04, 0.02)]
for report in run_power(grid):
    d = report.scenario.delta_f
    rates = "  ".join(f"{t.split('_', 1)[1]}={x.rate:.3f}" for t, x in report.rates.items())
    print(f"delta_f={d:+.2f}  {rates}")
