"""Seeded batches: how the predictions hold up as the clusters blur."""

from eigloc.experiment import run_batch, sweep, trials_csv
from eigloc.sbm import SbmParams

grid = [SbmParams(200, 0.9, q, seed=100) for q in (0.05, 0.15, 0.3)]
for s in sweep(grid, trials=20):
    xb = "absent" if s.xi_bar is None else f"{s.xi_bar:.3f}"
    print(f"p_out={s.params['p_out']:.2f}  gamma={s.gamma:.3f}  xi_bar={xb}  "
          f"cos ok={s.frac_cos_ok:.2f}  lambda ok={s.frac_lambda_ok:.2f}  "
          f"mean accuracy={s.mean_accuracy:.3f}")

# every trial is re-runnable on its own; rows come back ordered by seed
batch = run_batch(SbmParams(100, 0.8, 0.1, seed=5), trials=3)
print()
print(trials_csv(batch.results, digits=6), end="")
