"""Two stand-alone integrability oracles.

E(r): the distance integral over a ball tangent to a hyperplane scales like
r^(N-2s) and is finite only for s < (N+1)/4 — the quantitative reason small
Dirichlet balls touching a convex domain lose their influence in dimension
N = 2 only up to s = 3/4.

The Dini-type condition couples the boundary modulus of continuity to the
kernel order: power moduli need beta > alpha, while the Lebesgue-spine
modulus 1/log(1/t) fails for every kernel power.
"""

import numpy as np

from mixedfrac import KernelOrder, ModulusOfContinuity, dini_check, e_of_r
from mixedfrac.errors import DivergentIntegral

print("=== tangent-ball distance integral E(r), N = 2 ===")
for s in (0.4, 0.6, 0.7):
    rs = 2.0 ** -np.arange(3, 9)
    vals = [e_of_r(float(r), s) for r in rs]
    slope = float(np.polyfit(np.log(rs), np.log(vals), 1)[0])
    pref = [v / r ** (2 - 2 * s) for v, r in zip(vals, rs)]
    print(f"  s={s}: slope {slope:.4f} (N - 2s = {2 - 2*s:.1f}); "
          f"prefactor spread {max(pref)/min(pref)-1:.2e}")
for s in (0.75, 0.9):
    try:
        e_of_r(0.125, s)
        print(f"  s={s}: finite (unexpected)")
    except DivergentIntegral:
        print(f"  s={s}: divergent (threshold s >= (N+1)/4 = 0.75)")

print("\n=== Dini-type integrability of (omega0(t)/t) Psi(1/t) ===")
cases = [
    ("t^0.6 vs t^0.3", ModulusOfContinuity.power(0.6), KernelOrder.power(0.3)),
    ("t^0.3 vs t^0.3", ModulusOfContinuity.power(0.3), KernelOrder.power(0.3)),
    ("t^0.5 vs t^0.8", ModulusOfContinuity.power(0.5), KernelOrder.power(0.8)),
    ("spine vs t^0.1", ModulusOfContinuity.log_spine(), KernelOrder.power(0.1)),
    ("spine vs t^0.5", ModulusOfContinuity.log_spine(), KernelOrder.power(0.5)),
]
for name, om0, psi in cases:
    res = dini_check(om0, psi)
    out = f"finite, value {res.value:.6f}" if res.converges else "divergent"
    print(f"  {name:18s}: {out}   (exponent at 0: {res.exponent:+.2f})")
print("  (a Lipschitz-graph boundary admits every kernel order below one;"
      " the spine admits none)")
