"""Asymptotic and simulated-null independence tests on one dataset.

The xi test calibrates against its closed-form normal limit.  The D, R
and tau* tests compare n-scaled statistics against weighted chi-square
banks; banks are cached on disk so repeat runs skip the build.
"""

import numpy as np

from rankdep import mu_test, xi_star_test, xi_test
from rankdep.power import weighted_bank, xi_star_bank
from rankdep.ranks import PairedSample

rng = np.random.default_rng(12)
n = 500

# faint quadratic dependence
x = rng.standard_normal(n)
y = 0.3 * x**2 + rng.standard_normal(n)
sample = PairedSample(x, y)

result = xi_test(sample, alpha=0.05)
print("xi asymptotic test")
print(f"  statistic {result.statistic:+.3f}  critical {result.critical_value:.3f}"
      f"  p {result.p_value:.2e}  reject={result.reject}")

# small desk-scale banks; the defaults (V=100, B=1e6) are sharper
cache = ".bank-cache"
d_bank = weighted_bank("d_or_r", truncation=50, draws=10**5, seed=0, bank_dir=cache)
tau_bank = weighted_bank("tau_star", truncation=50, draws=10**5, seed=0, bank_dir=cache)

for coeff, bank in (("d", d_bank), ("r", d_bank), ("tau_star", tau_bank)):
    result = mu_test(sample, coeff, bank, alpha=0.05)
    print(f"{coeff} weighted chi-square test")
    print(f"  statistic {result.statistic:+.4f}  critical {result.critical_value:.4f}"
          f"  p {result.p_value:.4f}  reject={result.reject}")

# the smoothed coefficient calibrates against its own Monte Carlo null
star_bank = xi_star_bank(n, reps=1000, seed=0, bank_dir=cache)
result = xi_star_test(sample, star_bank, alpha=0.05)
print("xi* Monte Carlo bank test")
print(f"  statistic {result.statistic:+.4f}  critical {result.critical_value:.4f}"
      f"  p {result.p_value:.4f}  reject={result.reject}")
