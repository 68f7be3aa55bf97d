"""Exterior partitions and how their Neumann parts vanish on compact sets.

Whether the mixed eigenvalue converges to the all-Dirichlet one is governed
by |N_k intersect B_R| -> 0 for every R; the families below realize the two
mechanisms (shrinking measure, traveling support) including sets of infinite
measure, and the diffusion report classifies each.
"""

from mixedfrac import (
    Domain1D,
    ExteriorSet,
    PartitionFamily,
    condition_C,
    diffusion_report,
    generate,
    make_order,
    measure_in_ball,
    separation,
)

om = Domain1D(-1.0, 1.0)

families = {
    "traveling interval (finite measure)": PartitionFamily(
        kind="traveling_ball", omega=om,
        params={"offset0": 1.0, "length": 1.0, "ratio": 2.0}),
    "traveling half-line (infinite measure)": PartitionFamily(
        kind="traveling_strip", omega=om, params={"R0": 2.0, "ratio": 2.0}),
    "symmetric traveling rings": PartitionFamily(
        kind="traveling_ring", omega=om,
        params={"R0": 2.0, "length": 1.0, "ratio": 2.0}),
    "nested shrinking interval": PartitionFamily(
        kind="nested_neumann", omega=om,
        params={"left": 1.5, "length0": 1.0, "ratio": 2.0}),
    "fixed interval (does NOT diffuse)": PartitionFamily(
        kind="explicit", omega=om,
        params={"neumann": [[1.0, 2.0]], "dirichlet": "rest"}),
}

ks = list(range(6))
Rs = [4.0, 16.0]
for name, fam in families.items():
    rep = diffusion_report(fam, Rs, ks)
    print(f"=== {name}:  diffusing = {rep.diffusing}")
    print("    |N_k cap B_R| for R =", Rs)
    for k, row in zip(ks, rep.measures):
        print(f"    k={k}: " + "  ".join(f"{v:8.4f}" for v in row))

print("\n=== integral smallness of Dirichlet sets (condition on int_D int_Omega k) ===")
order25 = make_order(1, 0.25)
order75 = make_order(1, 0.75)
for r in (0.5, 0.125, 2.0 ** -5):
    d = ExteriorSet.of((-r, 0.0))
    om01 = Domain1D(0.0, 1.0)
    print(f"  touching D = (-{r:.4g}, 0), s=0.25: {condition_C(d, om01, order25):.5f}"
          f"   s=0.75: {condition_C(d, om01, order75)}")
print("  (touching sets diverge for s >= 1/2: the kernel is no longer"
      " integrable up to the boundary)")

fam = families["traveling interval (finite measure)"]
print("\n=== separation of the moving set from Omega ===")
for k in (0, 2, 4, 6):
    part = generate(fam, k)
    print(f"  k={k}: dist(N_k, Omega) = {separation(part.moving_set, om):g},"
          f"  |N_k cap B_8| = {measure_in_ball(part.neumann, 8.0):g}")
