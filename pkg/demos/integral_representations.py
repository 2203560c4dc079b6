"""Rebuild MC functions from their representing measure and exponential weight."""

import numpy as np

from skewinfo import builtin, eval_c, h_repr_of, measure_of, reconstruct_from_h, reconstruct_from_measure
from skewinfo.representation import boundary_density_oracle, metric_constant_integral

grid = [(x, y) for x in np.logspace(-3, 3, 7) for y in np.logspace(-3, 3, 7)]

for mc in [builtin("wyd", p=0.3), builtin("kubo"), builtin("bridge", gamma=0.5)]:
    measure = measure_of(mc)
    worst = max(abs(reconstruct_from_measure(measure, x, y) / eval_c(mc, x, y) - 1) for x, y in grid)
    print(f"{mc.label:18s} measure route, max rel error {worst:.2e}, mass {measure.total_mass():.12f}")

for mc in [builtin("wy"), builtin("kubo"), builtin("bridge", gamma=1.0)]:
    hr = h_repr_of(mc)
    worst = max(abs(reconstruct_from_h(hr, x, y) / eval_c(mc, x, y) - 1) for x, y in grid)
    print(f"{mc.label:18s} h route (C0={hr.C0:.6f}), max rel error {worst:.2e}")

# the density is also visible in the jump of c across the negative axis
print()
kubo = builtin("kubo")
for lam in (0.2, 0.5, 0.8):
    print(f"lam={lam}: oracle {boundary_density_oracle(kubo, lam):.9f}  tabulated {measure_of(kubo).pdf(lam):.9f}")

# regular metrics have a finite integral 1/m(c); Kubo's grows like log(1/cutoff)
print()
print("wyd(0.3): 1/m =", 1 / 0.21, " integral =", metric_constant_integral(builtin("wyd", p=0.3))[0])
for k in (3, 6, 9):
    print(f"kubo cutoff 1e-{k}: {metric_constant_integral(kubo, cutoff=10.0**-k)[0]:.4f}")
