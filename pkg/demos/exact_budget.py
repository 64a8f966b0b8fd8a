# Exact token budgets
#
# A feature matrix has one row per visual token. How many tokens an image
# needs depends on how quickly the singular values of that matrix decay:
# a steep spectrum means a few directions carry almost all the energy.

import numpy as np

from specbudget import (
    BudgetConfig,
    SpectrumProfile,
    budget_exact,
    compute_singular_values,
    generate_spectrum,
    matrix_from_spectrum,
)

# Two stand-ins for real encoder output: a "simple" image whose spectrum
# decays fast, and a "busy" one whose spectrum is nearly flat.

n_v, d_v = 576, 1024
simple = matrix_from_spectrum(generate_spectrum(SpectrumProfile.exponential(0.9, n_v)), n_v, d_v, seed=1)
busy = matrix_from_spectrum(generate_spectrum(SpectrumProfile.power_law(0.6, n_v)), n_v, d_v, seed=2)

# The cumulative energy curve is what the budget reads off.

for name, m in [("simple", simple), ("busy", busy)]:
    c = compute_singular_values(m).cumulative()
    print(f"{name:>6}: C(10) = {c[9]:.3f}, C(50) = {c[49]:.3f}, C(200) = {c[199]:.3f}")

# The budget is the smallest k whose cumulative energy reaches tau,
# clamped to [k_min, k_max]. rho is the fraction of tokens dropped.

for tau in (0.9, 0.99, 0.998):
    cfg = BudgetConfig(tau, k_min=16, k_max=n_v)
    for name, m in [("simple", simple), ("busy", busy)]:
        r = budget_exact(m, cfg)
        print(f"tau={tau:<6} {name:>6}: k_raw={r.k_raw:4d}  k*={r.k_star:4d}  rho={r.rho:.3f}")

# Scaling a matrix does not change its budget, since only energy ratios matter.

cfg = BudgetConfig(0.99)
assert budget_exact(simple, cfg).k_star == budget_exact(1e3 * simple, cfg).k_star
print("budget is scale invariant:", budget_exact(simple, cfg).k_star)
