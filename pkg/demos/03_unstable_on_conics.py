"""A stable bundle that becomes very unstable on conics through one point.

E is the kernel of (x^d, y^d, z^(2d-1)) : O(-d)^2 + O(-2d+1) -> O.  On a conic
through [0:0:1] the cokernel picks up torsion of length d, and the splitting
type drifts away from balanced as d grows.

Run: python demos/03_unstable_on_conics.py
"""

from splitlab.lab import verify_conic_example
from splitlab.sheaf import chern, conic_example_bundle, is_stable_rank2

for d in range(1, 5):
    E = conic_example_bundle(d)
    c = chern(E)
    rep = verify_conic_example(d, q=101, trials=100, seed=d)
    print(f"d={d}: c1={c.c1}, c2={c.c2}, slope {c.slope}, stable {is_stable_rank2(E)}")
    print(f"  general conics:       mean mu {float(rep['general']['mean_mu']):.3f}  {rep['general']['histogram']}")
    print(f"  conics through apex:  mean mu {float(rep['through_point']['mean_mu']):.3f}  {rep['through_point']['histogram']}")
    print(f"  gap {float(rep['gap']):.3f}")
print()
print("For d = 1 the kernel is the cotangent bundle, which looks the same on every conic,")
print("so the gap only opens from d = 2 on.")
