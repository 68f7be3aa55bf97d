"""All-Dirichlet principal eigenvalue on (-1, 1) with mesh refinement.

The P1 eigenvalues converge at roughly first order in h; Richardson
extrapolation over a geometric h-sequence pins the limit.  For s = 1/2 the
extrapolated value can be compared against the published spectral value for
the half-Laplacian on an interval, 1.157774.
"""

import time

from mixedfrac import DiscParams, Domain1D, dirichlet_baseline, make_order, richardson_extrapolate

om = Domain1D(-1.0, 1.0)

for s in (0.3, 0.5, 0.7):
    order = make_order(1, s)
    hs = [0.08, 0.04, 0.02]
    lams = []
    print(f"=== s = {s} ===")
    for h in hs:
        t0 = time.perf_counter()
        res = dirichlet_baseline(om, order, DiscParams(h=h, L=8.0, scheme="P1"))
        lams.append(res.lambda1)
        print(f"  h = {h:5.3f}: lambda1 = {res.lambda1:.8f}   "
              f"({res.iterations} iterations, {time.perf_counter()-t0:.2f}s)")
    limit, rate = richardson_extrapolate(hs, lams)
    print(f"  extrapolated: {limit:.6f}   (rate h^{rate:.2f})")
    if s == 0.5:
        print(f"  reference value for the half-Laplacian: 1.157774  "
              f"(difference {abs(limit-1.157774):.2e})")
