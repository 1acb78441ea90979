"""Closed-form bounds and constructive Fitting-ideal certificates.

Run: python demos/04_bounds_and_fitting.py
"""

from fractions import Fraction

from splitlab.bounds import BoundInputs, all_bounds, p2_relcanonical_bound, zeta_prime
from splitlab.exactalg import GF, HomForm, form_variables
from splitlab.fitting import adjugate_kernel, fitting_generators, laplace_witness, matvec, verify_laplace_witness

print("Relative canonical bound for the tangent bundle (c1 = c2 = 3):")
for dQ in range(2, 7):
    b = p2_relcanonical_bound(dQ, 3, 3)
    print(f"  quotient degree {dQ}: radicand {b.radicand}, bound {b.value}")
print(f"  Chern-only constant: {zeta_prime(3, 3)}")
print()

print("Every bound computable from (e, f, mu, k, d) = (3, 3, 3, 2, 10):")
for k, v in all_bounds(BoundInputs(e=3, f=3, mu=Fraction(3), k=2, d=10)).items():
    print(f"  {k:>22}: {v}")
print()

F = GF(101)
x, y, z = form_variables(F, 3)
zero = HomForm.zero(F, 3, 1)
N = [[x, y, zero], [zero, x, y]]
cert = adjugate_kernel(N, 2)
print("Adjugate syzygy of N = [[x, y, 0], [0, x, y]]:")
print(f"  det A = {cert.detA}")
for v in cert.kernel_vectors:
    print(f"  v = {v}, N v = {matvec(N, v)}")
gens = fitting_generators(N, 3, 1)
print(f"  det A is a 2-minor of N: {gens.contains_up_to_sign(cert.detA)}")
print()

M = [[x, y, z], [y, z, x], [z, x, y]]
w = laplace_witness(M, (0, 1, 2), (0, 1, 2))
print("Laplace witness: the 3-minor of a circulant is a combination of its 2-minors")
for coef, rows, cols in w.terms:
    print(f"  coefficient {coef} times minor rows {rows} cols {cols}")
print(f"  re-verified: {verify_laplace_witness(M, w)}")
