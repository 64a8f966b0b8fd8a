# Latency of the budget computation
#
# Per-image overhead of the exact SVD against the randomized sketch, timed
# single threaded after warmup. Absolute numbers depend on the machine; the
# ratio is what carries over.

from specbudget import BudgetConfig, make_ensemble, mixed_profiles
from specbudget.bench import bench_grid, run_bench

n_v, d_v = 576, 1024
mats = make_ensemble(mixed_profiles(10, n_v, seed=5), n_v, d_v, seed=5)

configs = bench_grid(BudgetConfig(0.99), ["exact", "rsvd"], ts=[300], ps=[10], qs=[0, 2])
report = run_bench(mats, configs, warmup=2, min_iterations=10, threads=1)

exact_ms = report["records"][0]["median_latency_ms"]
for rec in report["records"]:
    label = "exact" if rec["method"] == "exact" else f"rsvd t={rec['t']} q={rec['q']}"
    print(f"{label:<16} median {rec['median_latency_ms']:7.1f} ms  "
          f"({rec['median_latency_ms'] / exact_ms:.2f}x)  mean k* {rec['mean_k_star']:.1f}")
