"""Experiments over finite fields: sampling curves, enumerating lines, reproducing examples."""

from __future__ import annotations

import math
import os
import random
import time
import warnings
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .exactalg import GF, FieldError, HomForm, Matrix, det, kernel_basis, _is_prime
from .panel import FiltrationData
from .restrict import (
    RationalCurveMap,
    certify_bundle,
    is_base_point_free,
    jump_report,
    pullback,
    splitting_type,
)
from .sheaf import SheafPresentation, hn_filtration, load, named_bundle

Z95 = 1.959963984540054


class ConfigError(ValueError):
    """Invalid experiment configuration (CLI exit code 2)."""


class DegenerateSetupError(RuntimeError):
    """Most samples failed certification (CLI exit code 3); carries the histogram."""

    def __init__(self, message: str, histogram: JumpHistogram):
        super().__init__(message)
        self.histogram = histogram


def resolve_bundle(bundle, q: int) -> SheafPresentation:
    """A presentation, a named constructor, or a path to a presentation file, over GF(q)."""
    if isinstance(bundle, SheafPresentation):
        if bundle.field.characteristic != q:
            raise ConfigError(f"bundle is over {bundle.field}, experiment over GF({q})")
        return bundle
    try:
        field = GF(q)
        if Path(str(bundle)).is_file():
            pres = load(bundle)
            if pres.field != field:
                raise ConfigError(f"bundle file is over {pres.field}, experiment over GF({q})")
            return pres
        return named_bundle(str(bundle), field)
    except FieldError as exc:
        raise ConfigError(str(exc)) from None
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None


@dataclass(frozen=True)
class ExperimentConfig:
    bundle: object = "tangent"
    curve_degree: int = 1
    field_order: int = 32003
    trials: int = 1000
    seed: int = 0
    jump_thresholds: tuple = (Fraction(1),)

    def __post_init__(self):
        object.__setattr__(self, "jump_thresholds", tuple(Fraction(t) for t in self.jump_thresholds))
        if not _is_prime(self.field_order) or self.field_order == 2:
            raise ConfigError(f"field order {self.field_order} is not an odd prime")
        if self.trials < 1:
            raise ConfigError("need at least one trial")
        if self.curve_degree < 1:
            raise ConfigError("curve degree must be positive")

    def to_json(self) -> dict:
        bundle = self.bundle if not isinstance(self.bundle, SheafPresentation) else "<presentation>"
        return {
            "bundle": str(bundle),
            "curve_degree": self.curve_degree,
            "field_order": self.field_order,
            "trials": self.trials,
            "seed": self.seed,
            "jump_thresholds": [str(t) for t in self.jump_thresholds],
        }


def trial_rng(seed: int, i: int) -> random.Random:
    """Independent stream for trial i; string seeding is stable across runs and platforms."""
    return random.Random(f"{seed}:{i}")


def random_curve_forms(field, d: int, rng) -> tuple[HomForm, HomForm, HomForm]:
    return tuple(HomForm.random(field, 2, d, rng) for _ in range(3))


BASE_POINTED = "base_pointed"
UNCERTIFIED = "uncertified"
OK = "ok"


def _run_trial(pres: SheafPresentation, hn: FiltrationData, d: int, seed: int, i: int):
    rng = trial_rng(seed, i)
    forms = random_curve_forms(pres.field, d, rng)
    if not is_base_point_free(forms):
        return BASE_POINTED, None
    s = RationalCurveMap(forms)
    if not certify_bundle(pullback(pres, s)):
        return UNCERTIFIED, None
    return OK, jump_report(pres, s, hn=hn).mu


def _run_chunk(args):
    pres, hn, d, seed, lo, hi = args
    return [_run_trial(pres, hn, d, seed, i) for i in range(lo, hi)]


def worker_count() -> int:
    env = os.environ.get("LAB_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def wilson_interval(k: int, n: int, z: float = Z95) -> tuple[float, float]:
    if n == 0:
        return 0.0, 1.0
    phat = k / n
    denom = 1 + z * z / n
    centre = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom
    lo = 0.0 if k == 0 else max(0.0, centre - half)
    hi = 1.0 if k == n else min(1.0, centre + half)
    return lo, hi


def codim_estimate(freq: float, q: int) -> float:
    """-log_q(freq); infinite for freq = 0."""
    if freq <= 0:
        return math.inf
    return -math.log(freq) / math.log(q)


@dataclass
class JumpHistogram:
    config: ExperimentConfig
    counts: dict = dc_field(default_factory=dict)
    rejected_base_pointed: int = 0
    rejected_uncertified: int = 0
    estimates: list = dc_field(default_factory=list)

    @property
    def rejected(self) -> int:
        return self.rejected_base_pointed + self.rejected_uncertified

    @property
    def certified(self) -> int:
        return sum(self.counts.values())

    def frequency(self, threshold) -> float:
        n = self.certified
        if n == 0:
            return 0.0
        return sum(c for mu, c in self.counts.items() if mu >= threshold) / n

    def to_json(self) -> dict:
        return {
            "config": self.config.to_json(),
            "histogram": [{"mu": str(mu), "count": c} for mu, c in sorted(self.counts.items())],
            "certified": self.certified,
            "rejected": self.rejected,
            "rejected_breakdown": {BASE_POINTED: self.rejected_base_pointed, UNCERTIFIED: self.rejected_uncertified},
            "estimates": [
                {k: (None if isinstance(v, float) and not math.isfinite(v) else (str(v) if isinstance(v, Fraction) else v))
                 for k, v in e.items()}
                for e in self.estimates
            ],
        }


def sample_jump_distribution(cfg: ExperimentConfig, workers: int | None = None) -> JumpHistogram:
    """Draw curves coefficient-uniformly over GF(q), split, and histogram the defect mu.

    Trial i uses its own RNG stream, so results do not depend on ``workers``.
    """
    pres = resolve_bundle(cfg.bundle, cfg.field_order)
    hn = hn_filtration(pres)
    workers = worker_count() if workers is None else workers
    n, d = cfg.trials, cfg.curve_degree
    if workers > 1 and n >= 4 * workers:
        step = math.ceil(n / (4 * workers))
        chunks = [(pres, hn, d, cfg.seed, lo, min(lo + step, n)) for lo in range(0, n, step)]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            outcomes = [o for part in ex.map(_run_chunk, chunks) for o in part]
    else:
        outcomes = _run_chunk((pres, hn, d, cfg.seed, 0, n))

    hist = JumpHistogram(cfg)
    counts: Counter = Counter()
    for status, mu in outcomes:
        if status == OK:
            counts[mu] += 1
        elif status == BASE_POINTED:
            hist.rejected_base_pointed += 1
        else:
            hist.rejected_uncertified += 1
    hist.counts = dict(sorted(counts.items()))
    if hist.certified + hist.rejected != n:
        raise AssertionError("histogram does not account for every trial")
    q = cfg.field_order
    for thr in cfg.jump_thresholds:
        k = sum(c for mu, c in hist.counts.items() if mu >= thr)
        m = hist.certified
        freq = k / m if m else 0.0
        lo, hi = wilson_interval(k, m)
        hist.estimates.append({
            "threshold": thr,
            "count": k,
            "freq": freq,
            "chat": codim_estimate(freq, q),
            "ci_lo": codim_estimate(hi, q),
            "ci_hi": codim_estimate(lo, q),
        })
    if hist.rejected_uncertified > n / 2:
        raise DegenerateSetupError(
            f"{hist.rejected_uncertified} of {n} samples failed certification", hist
        )
    return hist


# ---------------------------------------------------------------------------
# lines


def all_lines(q: int) -> list[tuple[int, int, int]]:
    """Dual coordinates of the q^2 + q + 1 lines of P^2(F_q), first nonzero entry 1."""
    out = [(1, b, c) for b in range(q) for c in range(q)]
    out += [(0, 1, c) for c in range(q)]
    out.append((0, 0, 1))
    return out


def line_parametrization(line: Sequence[int], q: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Two points spanning the line ``a x + b y + c z = 0``."""
    F = GF(q)
    K = kernel_basis(Matrix.from_rows(F, [list(line)], 3))
    return K.column(0), K.column(1)


def line_map(line: Sequence[int], q: int) -> RationalCurveMap:
    P, Q = line_parametrization(line, q)
    F = GF(q)
    return RationalCurveMap(tuple(HomForm.from_coeffs(F, 2, 1, (P[i], Q[i])) for i in range(3)))


@dataclass
class LineRecord:
    line: tuple[int, int, int]
    splitting: tuple[int, ...] | None
    mu: Fraction | None
    certified: bool
    jumping: bool = False

    def to_json(self) -> dict:
        return {
            "line": list(self.line),
            "splitting": None if self.splitting is None else list(self.splitting),
            "mu": None if self.mu is None else str(self.mu),
            "certified": self.certified,
            "jumping": self.jumping,
        }


@dataclass
class LineTable:
    q: int
    records: list

    @property
    def jumping_lines(self) -> list[LineRecord]:
        return [r for r in self.records if r.jumping]

    @property
    def uncertified(self) -> list[LineRecord]:
        return [r for r in self.records if not r.certified]


def enumerate_lines(bundle, q: int) -> LineTable:
    """Splitting type on every F_q-line; lines whose mu exceeds the minimum are jumping."""
    pres = resolve_bundle(bundle, q)
    hn = hn_filtration(pres)
    records = []
    for line in all_lines(q):
        s = line_map(line, q)
        if not certify_bundle(pullback(pres, s)):
            records.append(LineRecord(line, None, None, False))
            continue
        rep = jump_report(pres, s, hn=hn)
        records.append(LineRecord(line, rep.splitting.parts, rep.mu, True))
    mus = [r.mu for r in records if r.certified]
    if mus:
        floor = min(mus)
        for r in records:
            r.jumping = r.certified and r.mu > floor
    return LineTable(q, records)


def _sym(coeffs, F):
    A, B, C, D, E, G = coeffs
    half = F.inv(2)
    return [[A, D * half % F.p, E * half % F.p], [D * half % F.p, B, G * half % F.p], [E * half % F.p, G * half % F.p, C]]


def _adjugate3(M, F):
    p = F.p
    adj = [[0] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            rows = [r for r in range(3) if r != j]
            cols = [c for c in range(3) if c != i]
            m = M[rows[0]][cols[0]] * M[rows[1]][cols[1]] - M[rows[0]][cols[1]] * M[rows[1]][cols[0]]
            adj[i][j] = (-m if (i + j) % 2 else m) % p
    return adj


def _quad(M, u, v, p):
    return sum(u[i] * M[i][j] * v[j] for i in range(3) for j in range(3)) % p


def tangent_conic_analysis(jumping: Sequence[Sequence[int]], q: int) -> dict:
    """Fit the dual conic through the jumping lines and test tangency of every line.

    A line is tangent to the primal conic C exactly when C restricted to the
    line, a binary quadratic, has zero discriminant.
    """
    F = GF(q)
    rows = [[a * a, b * b, c * c, a * b, a * c, b * c] for a, b, c in jumping]
    if len(rows) < 5:
        return {"unique_conic": False, "smooth": False, "tangent_lines": [], "matches": False}
    K = kernel_basis(Matrix.from_rows(F, rows, 6))
    unique = K.ncols == 1
    if not unique:
        return {"unique_conic": False, "smooth": False, "tangent_lines": [], "matches": False}
    dual_mat = _sym(K.column(0), F)
    smooth = det(Matrix.from_rows(F, dual_mat, 3)) != 0
    primal = _adjugate3(dual_mat, F)
    tangent = []
    for line in all_lines(q):
        P, Q = line_parametrization(line, q)
        a, b, c = _quad(primal, P, P, q), 2 * _quad(primal, P, Q, q), _quad(primal, Q, Q, q)
        if (b * b - 4 * a * c) % q == 0:
            tangent.append(tuple(line))
    jump_set = {tuple(j) for j in jumping}
    return {
        "unique_conic": unique,
        "smooth": smooth,
        "dual_conic": [str(c) for c in K.column(0)],
        "primal_conic": primal,
        "tangent_lines": tangent,
        "matches": smooth and set(tangent) == jump_set,
    }


def verify_schwarzenberger(p: int = 4, qq: int = 0, field_order: int = 7) -> dict:
    table = enumerate_lines(named_bundle(f"schwarzenberger:{p},{qq}", GF(field_order)), field_order)
    jumping = [r.line for r in table.jumping_lines]
    analysis = tangent_conic_analysis(jumping, field_order)
    return {
        "p": p,
        "q": qq,
        "field_order": field_order,
        "lines": len(table.records),
        "uncertified": len(table.uncertified),
        "jumping_count": len(jumping),
        "jumping_splittings": sorted({r.splitting for r in table.jumping_lines}),
        "generic_splittings": sorted({r.splitting for r in table.records if r.certified and not r.jumping}),
        "tangency": analysis,
    }


# ---------------------------------------------------------------------------
# rational curves of higher degree


def verify_ramella(degrees=range(1, 7), q: int = 101, trials: int = 2000, seed: int = 0) -> dict:
    """Fraction of certified samples where s^*T splits as (ceil(3d/2), floor(3d/2))."""
    out = {}
    for d in degrees:
        hist = sample_jump_distribution(ExperimentConfig("tangent", d, q, trials, seed, (Fraction(1),)), workers=1)
        balanced_mu = Fraction(0) if d % 2 == 0 else Fraction(1, 2)
        good = hist.counts.get(balanced_mu, 0)
        out[d] = {
            "balanced": ((3 * d + 1) // 2, 3 * d // 2),
            "certified": hist.certified,
            "rejected": hist.rejected,
            "balanced_fraction": good / hist.certified if hist.certified else 0.0,
            "histogram": {str(k): v for k, v in hist.counts.items()},
        }
    return out


def _random_invertible(F, rng, first_column=None):
    while True:
        cols = [[F.random(rng) for _ in range(3)] for _ in range(3)]
        if first_column is not None:
            cols[0] = list(first_column)
        A = [[cols[j][i] for j in range(3)] for i in range(3)]
        if det(Matrix.from_rows(F, A, 3)) != 0:
            return A


def conic_map(A, F) -> RationalCurveMap:
    """The smooth conic ``A . (s^2, st, t^2)``."""
    veronese = [HomForm.monomial(F, (2, 0)), HomForm.monomial(F, (1, 1)), HomForm.monomial(F, (0, 2))]
    forms = []
    for row in A:
        f = HomForm.zero(F, 2, 2)
        for c, v in zip(row, veronese):
            f = f + v.scale(c)
        forms.append(f)
    return RationalCurveMap(tuple(forms))


def _conic_contains_apex(A, F) -> bool:
    # [0:0:1] = A (u^2, uv, v^2) for some (u:v) iff w = A^{-1} e_3 satisfies w0 w2 = w1^2
    M = Matrix.from_rows(F, A, 3)
    inv_cols = [F.reduce(x) for x in _solve3(M, F, (0, 0, 1))]
    w0, w1, w2 = inv_cols
    return (w0 * w2 - w1 * w1) % F.p == 0


def _solve3(M: Matrix, F, b):
    rows = [list(M.entries[i]) + [b[i]] for i in range(3)]
    from .exactalg import rref

    R, piv = rref(F, rows, 4)
    return [R[i][3] for i in range(3)]


def verify_conic_example(d: int, q: int = 101, trials: int = 200, seed: int = 0) -> dict:
    """Compare mu of the (x^d, y^d, z^(2d-1)) kernel bundle on general conics and on conics through [0:0:1]."""
    F = GF(q)
    pres = named_bundle(f"conic:{d}", F)
    hn = hn_filtration(pres)
    general, through = Counter(), Counter()
    for i in range(trials):
        rng = trial_rng(seed, i)
        while True:
            A = _random_invertible(F, rng)
            if not _conic_contains_apex(A, F):
                break
        general[jump_report(pres, conic_map(A, F), hn=hn).mu] += 1
        B = _random_invertible(F, rng, first_column=(0, 0, 1 + rng.randrange(q - 1)))
        through[jump_report(pres, conic_map(B, F), hn=hn).mu] += 1

    def mean(c: Counter) -> Fraction:
        return sum((mu * k for mu, k in c.items()), Fraction(0)) / sum(c.values())

    g_mean, t_mean = mean(general), mean(through)
    return {
        "d": d,
        "field_order": q,
        "trials": trials,
        "general": {"mean_mu": g_mean, "histogram": {str(k): v for k, v in sorted(general.items())}},
        "through_point": {"mean_mu": t_mean, "histogram": {str(k): v for k, v in sorted(through.items())}},
        "gap": t_mean - g_mean,
    }


def splitting_on(bundle, s: RationalCurveMap):
    """Convenience wrapper: splitting type of a named or explicit bundle on a curve."""
    pres = resolve_bundle(bundle, s.field.characteristic)
    return splitting_type(pullback(pres, s))


def timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, (time.perf_counter() - t0) * 1000.0


def warn_degenerate(hist: JumpHistogram):
    warnings.warn(f"{hist.rejected_uncertified} of {hist.config.trials} samples were uncertified")
