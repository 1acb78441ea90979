"""Closed-form codimension and relative-canonical bounds for rank 2 bundles on P^2.

Rational formulas return ``Fraction``.  Formulas with a square root return a
``Fraction`` when the radicand is a rational square and a float otherwise; the
radicand itself is always computed exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence


class BoundError(ValueError):
    pass


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def exact_sqrt(q: Fraction) -> Fraction | float:
    """Square root of a non-negative rational, exact when possible."""
    q = _frac(q)
    if q < 0:
        raise BoundError("square root of a negative number")
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return math.sqrt(n) / math.sqrt(d)


def to_jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, tuple):
        return [to_jsonable(x) for x in v]
    return v


class RelCanonicalBound(NamedTuple):
    value: Fraction | float
    ratio_form: Fraction | float
    radicand: Fraction


def _check_chern(e: int, f: int) -> int:
    delta = 4 * f - e * e
    if delta < 0:
        raise BoundError(f"Bogomolov inequality violated: discriminant {delta} < 0")
    return delta


def p2_relcanonical_bound(dQ: int, e: int, f: int) -> RelCanonicalBound:
    """Lower bound for K_{X'/P^2} . alpha' from a rank 1 quotient of degree dQ.

    value = sqrt(1 - D / (4 (dQ - e/2)^2 + D)) with D = 4f - e^2; the same
    number is (dQ - e/2) / sqrt(dQ^2 - dQ e + f).
    """
    delta = _check_chern(e, f)
    x = Fraction(dQ) - Fraction(e, 2)
    if x <= 0:
        raise BoundError(f"quotient degree {dQ} does not exceed the slope {Fraction(e, 2)}")
    radicand = 1 - Fraction(delta) / (4 * x * x + delta)
    value = exact_sqrt(radicand)
    s = dQ * dQ - dQ * e + f
    root = exact_sqrt(Fraction(s))
    ratio = x / root if isinstance(root, Fraction) else float(x) / root
    return RelCanonicalBound(value, ratio, radicand)


def zeta_prime(e: int, f: int) -> Fraction | float:
    """Chern-only constant: the bound above at the smallest integer dQ > e/2."""
    _check_chern(e, f)
    return p2_relcanonical_bound(e // 2 + 1, e, f).value


def expected_codim_rank2(mu) -> Fraction:
    mu = _frac(mu)
    if mu < 0:
        raise BoundError("mu must be non-negative")
    return max(2 * mu - 1, Fraction(0))


def gm_codim_bound(mu, rank: int, k) -> Fraction:
    """2(k-1) mu / ((rank-1) k) - 1."""
    if k < 2:
        raise BoundError("freeness constant k must be at least 2")
    if rank < 2:
        raise BoundError("rank must be at least 2")
    k = _frac(k)
    return 2 * (k - 1) * _frac(mu) / ((rank - 1) * k) - 1


def tangentgaps_bound(mu, rank: int, g: int, dimX: int) -> tuple[Fraction, Fraction]:
    """(weak, strong) codimension bounds with gamma = g (dimX - 1) + 1."""
    if rank < 2:
        raise BoundError("rank must be at least 2")
    mu = _frac(mu)
    gamma = g * (dimX - 1) + 1
    weak = mu / ((gamma + 1) * (rank - 1)) - gamma
    strong = 2 * mu / ((2 * gamma + 1) * (rank - 1)) - Fraction(2 * gamma * gamma + gamma - 1, 2 * gamma + 1)
    return weak, strong


def moduli_dim_bounds(Kdeg: int, g: int, dimX: int) -> tuple[int, int]:
    """Lower and upper bounds on the dimension of a dominant component of maps."""
    return Kdeg + (dimX - 3) * (1 - g), Kdeg + dimX + 2 * g - 3


def mixed_codim_bound(mu, g: int, d: int, zeta) -> Fraction | float:
    """min{2 mu / (2g + 3) - (g + 1), d zeta - g} (no immersion / kg hypotheses)."""
    if g < 0:
        raise BoundError("genus must be non-negative")
    first = 2 * _frac(mu) / (2 * g + 3) - (g + 1)
    second = d * zeta - g
    return min(first, second)


def disconnected_dim_bound(a_value, dimM: int, g: int) -> Fraction:
    """a dim(M) + max(g - 1, 0): upper bound on dim(W) for families through a cover."""
    if g < 0:
        raise BoundError("genus must be non-negative")
    return _frac(a_value) * dimM + max(g - 1, 0)


def genfinite_dim_bound(dimM: int, g: int) -> Fraction:
    """(2/3) dim(M) + g."""
    if g < 0:
        raise BoundError("genus must be non-negative")
    return Fraction(2, 3) * dimM + g


@dataclass(frozen=True)
class BoundInputs:
    dQ: int | None = None
    e: int | None = None
    f: int | None = None
    mu: Fraction | None = None
    g: int = 0
    k: int | None = None
    rank: int = 2
    dimX: int = 2
    d: int | None = None
    a_value: Fraction | None = None
    dimM: int | None = None
    upsilon: Fraction | None = None


def goodbounds_verdict(case: int, inputs: BoundInputs) -> Fraction | float:
    """Codimension lower bound in each of the three cases for stable rank 2 bundles on P^2.

    Case 2 uses the Chern-only constant in place of the quotient infimum; it is
    smaller, so the bound stays valid.
    """
    if case == 1:
        if inputs.mu is None or inputs.k is None:
            raise BoundError("case 1 needs mu and k")
        if inputs.k < 2:
            raise BoundError("k must be at least 2")
        k = Fraction(inputs.k)
        return 2 * (k - 1) / k * _frac(inputs.mu) - 1
    if case == 2:
        if inputs.e is None or inputs.f is None or inputs.d is None:
            raise BoundError("case 2 needs e, f and d")
        return zeta_prime(inputs.e, inputs.f) * inputs.d
    if case == 3:
        if inputs.d is None:
            raise BoundError("case 3 needs d")
        return Fraction(inputs.d - inputs.g)
    raise BoundError(f"unknown case {case!r}")


def all_bounds(inputs: BoundInputs) -> dict:
    """Every bound computable from the supplied fields, keyed by name."""
    out: dict = {}
    i = inputs
    if i.e is not None and i.f is not None:
        out["discriminant"] = 4 * i.f - i.e * i.e
        out["zeta_prime"] = zeta_prime(i.e, i.f)
        if i.dQ is not None:
            b = p2_relcanonical_bound(i.dQ, i.e, i.f)
            out["p2_relcanonical"] = b.value
            out["p2_relcanonical_ratio_form"] = b.ratio_form
            out["p2_relcanonical_radicand"] = b.radicand
        if i.d is not None:
            out["goodbounds_case2"] = goodbounds_verdict(2, i)
    if i.mu is not None:
        if i.rank == 2:
            out["expected_codim_rank2"] = expected_codim_rank2(i.mu)
        if i.rank >= 2:
            weak, strong = tangentgaps_bound(i.mu, i.rank, i.g, i.dimX)
            out["tangentgaps_weak"] = weak
            out["tangentgaps_strong"] = strong
        if i.k is not None:
            out["gm_codim"] = gm_codim_bound(i.mu, i.rank, i.k)
            out["goodbounds_case1"] = goodbounds_verdict(1, i)
        if i.d is not None and i.e is not None and i.f is not None:
            out["mixed_codim"] = mixed_codim_bound(i.mu, i.g, i.d, out["zeta_prime"])
    if i.d is not None:
        out["goodbounds_case3"] = goodbounds_verdict(3, i)
        if i.dimX == 2:
            lo, hi = moduli_dim_bounds(3 * i.d, i.g, 2)
            out["moduli_dim_lower"] = lo
            out["moduli_dim_upper"] = hi
    if i.dimM is not None:
        out["genfinite_dim"] = genfinite_dim_bound(i.dimM, i.g)
        if i.a_value is not None:
            out["disconnected_dim"] = disconnected_dim_bound(i.a_value, i.dimM, i.g)
    return out


@dataclass(frozen=True)
class BlowupModel:
    """alpha' = H - sum a_i E_i and c1(Q') = dQ H - sum b_i E_i on an iterated blowup."""

    a: tuple
    b: tuple
    dQ: int
    e: int
    f: int

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(_frac(x) for x in self.a))
        object.__setattr__(self, "b", tuple(int(x) for x in self.b))


def blowup_model_check(model: BlowupModel) -> bool:
    """Verify sum a_i >= (dQ - e/2) / sqrt(dQ^2 - dQ e + f), exactly.

    Raises ``BoundError`` if the model itself is infeasible.
    """
    a, b = model.a, model.b
    if len(a) != len(b):
        raise BoundError("a and b must have equal length")
    if any(x < 0 for x in a) or any(x < 0 for x in b):
        raise BoundError("blowup coefficients must be non-negative")
    s = model.dQ * model.dQ - model.dQ * model.e + model.f
    if sum(x * x for x in b) != s:
        raise BoundError(f"sum b_i^2 = {sum(x * x for x in b)} but dQ^2 - dQ e + f = {s}")
    x = Fraction(model.dQ) - Fraction(model.e, 2)
    if x <= 0:
        raise BoundError(f"quotient degree {model.dQ} does not exceed the slope {Fraction(model.e, 2)}")
    if sum(ai * bi for ai, bi in zip(a, b)) < x:
        raise BoundError("slope condition sum a_i b_i >= dQ - e/2 fails")
    total = sum(a, Fraction(0))
    # total >= x / sqrt(s)  <=>  total^2 * s >= x^2, both sides non-negative
    return total * total * s >= x * x


def feasible_blowup_model(rng, max_blowups: int = 4, max_b: int = 3) -> BlowupModel | None:
    """Rejection-sample one model satisfying both invariants, or None on rejection."""
    n = rng.randint(1, max_blowups)
    b = [rng.randint(0, max_b) for _ in range(n)]
    s = sum(x * x for x in b)
    e = rng.randint(-6, 6)
    dQ = e // 2 + rng.randint(1, 4)
    f = s - dQ * dQ + dQ * e
    if 4 * f - e * e < 0:
        return None
    x = Fraction(dQ) - Fraction(e, 2)
    a = [Fraction(rng.randint(0, 12), rng.randint(1, 6)) for _ in range(n)]
    if sum(ai * bi for ai, bi in zip(a, b)) < x:
        return None
    return BlowupModel(tuple(a), tuple(b), dQ, e, f)


def sample_blowup_models(rng, count: int) -> list[BlowupModel]:
    out: list[BlowupModel] = []
    while len(out) < count:
        m = feasible_blowup_model(rng)
        if m is not None:
            out.append(m)
    return out


__all__ = [
    "BoundError", "BoundInputs", "BlowupModel", "RelCanonicalBound", "exact_sqrt",
    "p2_relcanonical_bound", "zeta_prime", "expected_codim_rank2", "gm_codim_bound",
    "tangentgaps_bound", "moduli_dim_bounds", "goodbounds_verdict", "mixed_codim_bound",
    "disconnected_dim_bound", "genfinite_dim_bound", "blowup_model_check",
    "all_bounds", "sample_blowup_models",
]
