"""
Checking the analytic CDF against simulation
============================================

Draws FTR channels from the physical model, compares the empirical CDF
with the analytic one, and then looks at how often a correct model is
rejected at the 5% level.
"""

from ftrfading import FtrParams, build_coefficients, capacity, ftr_cdf, ks_test, mc_capacity, sample_channel
from ftrfading.cli import CLI_CONTROL
from ftrfading.presets import TABLE1

# one sample, a few quantiles side by side
p = FtrParams(9.2, 3.0, 1.0, 1.0)
emp = sample_channel(p, 100_000, seed=1)
table = build_coefficients(p, CLI_CONTROL)
for x in (0.1, 0.5, 1.0, 2.0):
    print(f"x={x:<4} empirical {emp.cdf(x):.4f}  analytic {float(ftr_cdf(x, table)):.4f}")

# the six reference rows, v = 1e4 samples each
for row in TABLE1:
    r = ks_test(FtrParams(*row), v=10_000, seed=7)
    print(f"{row}: T={r.statistic:.5f} critical={r.critical:.5f} accepted={r.accepted}")

# a correct model is still rejected about 5% of the time
seeds = range(200)
rejected = sum(not ks_test(p, v=10_000, seed=s).accepted for s in seeds)
print(f"\n(9.2, 3, 1): rejected {rejected} of {len(seeds)} seeds ({rejected / len(seeds):.1%})")

# capacity by simulation, with its standard error
est = mc_capacity(FtrParams.from_db(10.3, 10.0, 0.5, 10.0), 10 ** 6, seed=2)
exact = capacity(build_coefficients(FtrParams.from_db(10.3, 10.0, 0.5, 10.0), CLI_CONTROL)).value
print(f"capacity at 10 dB: MC {est.value:.5f} +/- {est.stderr:.5f}, series {exact:.5f}, z={(est.value - exact) / est.stderr:+.2f}")
