"""The tangent bundle of the plane along lines and rational curves.

Run: python demos/01_tangent_bundle.py
"""

import random
from fractions import Fraction

from splitlab import (
    ExperimentConfig,
    RationalCurveMap,
    chern,
    euler_tangent,
    hn_filtration,
    is_stable_rank2,
    jump_report,
    sample_jump_distribution,
)
from splitlab.exactalg import GF, HomForm
from splitlab.restrict import BasePointError


def random_curve(field, d, rng):
    while True:
        try:
            return RationalCurveMap(tuple(HomForm.random(field, 2, d, rng) for _ in range(3)))
        except BasePointError:
            pass


T = euler_tangent(GF(101))
c = chern(T)
print(f"T is presented as a cokernel of O -> O(1)^3 by (x, y, z)")
print(f"  rank {c.rank}, c1 = {c.c1}, c2 = {c.c2}, discriminant {c.discriminant}")
print(f"  stable: {is_stable_rank2(T)}; HN data: {hn_filtration(T).pieces}")
print()

rng = random.Random(1)
print("Restricting to random curves of degree d over F_101:")
for d in range(1, 7):
    rep = jump_report(T, random_curve(GF(101), d, rng))
    print(f"  d={d}: splitting {rep.splitting.parts}, expected panel "
          f"{[str(x) for x in rep.expected.entries]}, defect mu = {rep.mu}")
print()

print("The unbalanced stratum for conics, estimated by sampling (20 000 curves):")
hist = sample_jump_distribution(ExperimentConfig("tangent", 2, 101, 20_000, 0, (Fraction(1),)))
for mu, n in hist.counts.items():
    print(f"  mu = {mu}: {n} curves")
(e,) = hist.estimates
print(f"  estimated codimension {e['chat']:.3f}, 95% interval [{e['ci_lo']:.3f}, {e['ci_hi']:.3f}]")
print("  A codimension c locus holds about q^-c of the F_q points, so this points to codimension 1.")
