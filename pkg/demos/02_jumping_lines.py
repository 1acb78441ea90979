"""Jumping lines of a Schwarzenberger bundle are the tangent lines of a conic.

Run: python demos/02_jumping_lines.py
"""

from collections import Counter

from splitlab.exactalg import GF
from splitlab.lab import enumerate_lines, tangent_conic_analysis
from splitlab.sheaf import chern, is_stable_rank2, schwarzenberger

q = 7
E = schwarzenberger(4, 0, GF(q))
c = chern(E)
print("E = coker(O(-1)^3 -> O^5), the 5 x 3 band matrix with x, y, z down each column")
print(f"  rank {c.rank}, c1 = {c.c1}, c2 = {c.c2}, stable: {is_stable_rank2(E)}")
print()

table = enumerate_lines(E, q)
print(f"Splitting types over all {len(table.records)} lines of P^2(F_{q}):")
for split, n in sorted(Counter(r.splitting for r in table.records).items()):
    print(f"  {split}: {n} lines")
jumping = [r.line for r in table.jumping_lines]
print(f"jumping lines (dual coordinates): {jumping}")
print()

a = tangent_conic_analysis(jumping, q)
print("Fitting a conic in the dual plane through these points:")
print(f"  unique: {a['unique_conic']}, smooth: {a['smooth']}")
print(f"  primal conic matrix: {a['primal_conic']}")
print(f"  lines whose restricted quadratic has zero discriminant: {len(a['tangent_lines'])}")
print(f"  tangent lines coincide with the jumping lines: {a['matches']}")
