"""A short tour: MC functions, skew information and its bounds on a qubit."""

import numpy as np

from skewinfo import builtin, eval_c, metric_constant, skew_info, variance

sx = np.array([[0, 1], [1, 0]], dtype=complex)
rho = np.diag([0.9, 0.1])

# a few monotone metrics and their kernels at (x, y) = (0.9, 0.1)
metrics = [builtin("wyd", p=0.3), builtin("wy"), builtin("bures"), builtin("kubo")]
for mc in metrics:
    print(f"{mc.label:12s} c(0.9, 0.1) = {eval_c(mc, 0.9, 0.1):.6f}  m(c) = {metric_constant(mc)!r}")

# skew information needs a regular metric (m(c) > 0)
print()
print("Var =", variance(rho, sx))
for mc in metrics[:3]:
    print(f"I[{mc.label}] = {skew_info(mc, rho, sx):.6f}")

# along the segment from a pure state to the maximally mixed state
# the skew information falls from Var to 0
print()
psi = np.array([1, 1j]) / np.sqrt(2)
pure = np.outer(psi, psi.conj())
sz = np.diag([1.0, -1.0])
for t in np.linspace(0, 1, 6):
    state = (1 - t) * pure + t * np.eye(2) / 2
    print(f"t={t:.1f}  I_wy={skew_info(builtin('wy'), state, sz):.4f}  Var={variance(state, sz):.4f}")
