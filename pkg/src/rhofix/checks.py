"""Randomized checkers for modular axioms, s-convexity, doubling, and Fatou.

All checkers are deterministic for a given sampler seed and never raise on a
mathematical violation: findings are collected into an AxiomReport with full
witnesses. The only exceptions are usage errors and the invalid-modular
condition in `delta2_type_estimate`. Trials are drawn and evaluated in
batches; a report is independent of how the batches were split.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, InvalidModularError
from .modular import (
    ABS_TOL,
    INF,
    REL_TOL,
    Family,
    ModularLike,
    ModularSpec,
    NamedFunctional,
    Phi,
    as_point,
    modular_batch_fn,
    modular_dim,
    modular_fn,
    slack_tol,
)

__all__ = [
    "PointSampler",
    "Violation",
    "AxiomReport",
    "check_modular_axioms",
    "check_s_convexity",
    "Delta2Result",
    "delta2_type_estimate",
    "exact_doubling_constant",
    "check_fatou_sampled",
    "sine_bump",
    "sign_skewed",
    "dead_zone",
    "INVALID_FUNCTIONALS",
]

# coordinates the sampler snaps to occasionally; inequality failures tend to
# sit on round points and sign boundaries
_SPECIAL_VALUES = np.array([0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0])


class PointSampler:
    """Seeded point generator used by every randomized checker.

    Coordinates are a mixture of uniform[-1, 1] draws, log-uniform
    magnitudes in [1e-3, 1e3] with random sign, and a sprinkle of special
    values (0, +-0.5, +-1, +-2): axiom and doubling failures often appear
    only at extreme scales or on round points.
    """

    def __init__(self, dim: int, seed: int = 0, log_min: float = 1e-3, log_max: float = 1e3):
        if dim < 1:
            raise ValueError("dim must be >= 1")
        self.dim = int(dim)
        self.seed = seed
        self.rng = np.random.default_rng(seed)
        self._lo = math.log10(log_min)
        self._hi = math.log10(log_max)

    def points(self, n: int) -> np.ndarray:
        """An (n, dim) batch of mixture-sampled points."""
        rng = self.rng
        shape = (n, self.dim)
        out = rng.uniform(-1.0, 1.0, shape)
        mags = 10.0 ** rng.uniform(self._lo, self._hi, shape)
        signs = np.where(rng.random(shape) < 0.5, -1.0, 1.0)
        out = np.where(rng.random(shape) < 0.45, out, signs * mags)
        special = rng.random(shape) < 0.10
        k = int(special.sum())
        if k:
            out[special] = rng.choice(_SPECIAL_VALUES, k)
        return out

    def point(self) -> np.ndarray:
        return self.points(1)[0]

    def directions(self, n: int) -> np.ndarray:
        """An (n, dim) batch rescaled to unit sup-norm per row."""
        out = self.points(n)
        sup = np.max(np.abs(out), axis=1)
        while np.any(sup == 0.0):
            bad = sup == 0.0
            out[bad] = self.points(int(bad.sum()))
            sup = np.max(np.abs(out), axis=1)
        return out / sup[:, None]

    def units(self, n: int) -> np.ndarray:
        return self.rng.uniform(size=n)

    def unit(self) -> float:
        return float(self.rng.uniform())


@dataclass
class Violation:
    """One failed inequality with its witness.

    `slack` is the offense magnitude: lhs - rhs for inequality axioms, the
    absolute modular gap for symmetry, and the sup-norm of the offending
    point for the zero-iff axiom.
    """

    axiom: str
    points: tuple[np.ndarray, ...]
    scalars: tuple[float, ...]
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        return self.lhs - self.rhs


@dataclass
class AxiomReport:
    """Outcome of a sampled checker run.

    `max_slack_violation` is 0 when no violation was recorded, else the
    largest offense. `max_ratio` is filled by the contraction checkers only.
    """

    trials: int
    violations: list[Violation] = field(default_factory=list)
    max_slack_violation: float = 0.0
    max_ratio: float = math.nan

    @property
    def passed(self) -> bool:
        return not self.violations

    def record(self, axiom: str, points, scalars, lhs: float, rhs: float) -> None:
        v = Violation(
            axiom,
            tuple(np.array(p, dtype=float) for p in points),
            tuple(float(s) for s in scalars),
            float(lhs),
            float(rhs),
        )
        self.violations.append(v)
        if v.slack > self.max_slack_violation:
            self.max_slack_violation = v.slack

    def violated_axioms(self) -> set[str]:
        return {v.axiom for v in self.violations}


def _resolve(m: ModularLike, sampler: PointSampler):
    rho = modular_batch_fn(m)
    dim = modular_dim(m, sampler.dim)
    if dim != sampler.dim:
        raise DimensionMismatch(f"sampler dim {sampler.dim} does not match modular dim {dim}")
    return rho, dim


def _ineq_violations(lhs: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Indices where lhs > rhs beyond the numeric slack (inf-safe)."""
    scale = np.maximum(
        np.where(np.isfinite(lhs), np.abs(lhs), 0.0),
        np.where(np.isfinite(rhs), np.abs(rhs), 0.0),
    )
    with np.errstate(invalid="ignore"):  # inf > inf compares False anyway
        bad = lhs > rhs + (ABS_TOL + REL_TOL * scale)
    return np.nonzero(bad)[0]


def check_modular_axioms(m: ModularLike, sampler: PointSampler, trials: int) -> AxiomReport:
    """Sampled check of the three modular axioms.

    Per trial draws x, y and a convex pair (a, 1-a), then checks

        zero_iff   rho(x) = 0 iff x = 0  (at x = 0 once, and at every x)
        symmetry   rho(x) = rho(-x) exactly
        convexity  rho(a x + (1-a) y) <= rho(x) + rho(y)  up to slack

    Violations are recorded with witnesses; nothing is raised.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rho, dim = _resolve(m, sampler)
    rep = AxiomReport(trials=trials)

    zero = np.zeros(dim)
    r0 = float(rho(zero[None, :])[0])
    if r0 != 0.0:
        rep.record("zero_iff", (zero,), (r0,), r0, 0.0)

    xs = sampler.points(trials)
    ys = sampler.points(trials)
    a = sampler.units(trials)

    rx = rho(xs)
    rmx = rho(-xs)
    ry = rho(ys)
    combo = rho(a[:, None] * xs + (1.0 - a)[:, None] * ys)

    for i in np.nonzero((rx == 0.0) & np.any(xs != 0.0, axis=1))[0]:
        rep.record("zero_iff", (xs[i],), (rx[i],), float(np.max(np.abs(xs[i]))), 0.0)
    for i in np.nonzero(rx != rmx)[0]:
        rep.record("symmetry", (xs[i],), (rx[i], rmx[i]),
                   max(rx[i], rmx[i]), min(rx[i], rmx[i]))
    rhs = rx + ry
    for i in _ineq_violations(combo, rhs):
        rep.record("convexity", (xs[i], ys[i]), (a[i], 1.0 - a[i]), combo[i], rhs[i])
    return rep


def check_s_convexity(m: ModularLike, s: float, sampler: PointSampler, trials: int) -> AxiomReport:
    """Check rho(a x + b y) <= a**s rho(x) + b**s rho(y) over a**s + b**s = 1."""
    if not 0.0 < s <= 1.0:
        raise ValueError("s must lie in (0, 1]")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rho, _ = _resolve(m, sampler)
    rep = AxiomReport(trials=trials)

    xs = sampler.points(trials)
    ys = sampler.points(trials)
    a = sampler.units(trials)
    b = (1.0 - a**s) ** (1.0 / s)

    lhs = rho(a[:, None] * xs + b[:, None] * ys)
    # a vanished coefficient removes its term even against an infinite rho
    with np.errstate(invalid="ignore"):
        rhs = np.where(a == 0.0, 0.0, a**s * rho(xs)) + np.where(b == 0.0, 0.0, b**s * rho(ys))
    for i in _ineq_violations(lhs, rhs):
        rep.record("s_convexity", (xs[i], ys[i]), (a[i], b[i], s), lhs[i], rhs[i])
    return rep


class Delta2Result(NamedTuple):
    constant: float
    unbounded: bool


def exact_doubling_constant(m: ModularLike) -> float | None:
    """2**p for the families where rho(2x) = 2**p rho(x) holds identically."""
    if isinstance(m, ModularSpec):
        if m.family in (Family.PPOWER, Family.WEIGHTED_SUM):
            return 2.0**m.p
        if m.family is Family.ORLICZ and m.phi is Phi.POWER:
            return 2.0**m.p
    return None


def delta2_type_estimate(m: ModularLike, sampler: PointSampler, trials: int) -> Delta2Result:
    """Estimate the least K with rho(2x) <= K rho(x) by sampled ratios.

    Samples sweep sup-norm scales from 1e-3 to 1e3 in increasing order. The
    unbounded flag is set when any ratio overflows, or when the running max
    still grows by more than 1% over the top decade of scales. A sample
    with rho(x) = 0 at nonzero x raises InvalidModularError: no finite K
    can exist for such a functional.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rho, _ = _resolve(m, sampler)
    exps = np.linspace(-3.0, 3.0, trials) if trials > 1 else np.array([-3.0])
    X = (10.0**exps)[:, None] * sampler.directions(trials)
    r1 = rho(X)
    if np.any(r1 == 0.0):
        i = int(np.nonzero(r1 == 0.0)[0][0])
        raise InvalidModularError(
            f"rho(x) = 0 at a nonzero point (scale 1e{exps[i]:+.2f}); no doubling constant exists"
        )
    r2 = rho(2.0 * X)
    with np.errstate(invalid="ignore"):
        ratio = np.where(np.isinf(r1), -INF, r2 / r1)  # both-inf samples are indeterminate
    best = float(np.max(ratio))
    if best == -INF:
        best = 0.0
    unbounded = math.isinf(best)
    if not unbounded:
        early = ratio[exps <= 2.0]
        best_before_top = float(np.max(early)) if early.size else 0.0
        if best_before_top > 0.0:
            unbounded = best > 1.01 * best_before_top
    return Delta2Result(best, unbounded)


def check_fatou_sampled(
    m: ModularLike,
    x,
    y,
    ratio: float,
    steps: int,
    *,
    sampler: PointSampler | None = None,
    directions: list[tuple] | None = None,
    n_directions: int = 8,
) -> AxiomReport:
    """Finite surrogate check of the Fatou inequality.

    Builds x_n = x + ratio**n u and y_n = y + ratio**n v for each direction
    pair (u, v) -- sequences that converge under every shipped family --
    and checks rho(x - y) against the minimum of the tail half of
    rho(x_n - y_n). The tail minimum is a finite liminf proxy: an
    approximation, not a proof.

    Sampled pairs are drawn with u - v sign-aligned to x - y, so the
    constructed sequences approach their limit from above and the finite
    tail stays a sound proxy; a truncated from-below sequence would
    undershoot any finite tail by its remaining geometric term. Explicit
    `directions` are taken verbatim.
    """
    if not 0.0 < ratio < 1.0:
        raise ValueError("ratio must lie in (0, 1)")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    rho = modular_batch_fn(m)
    dim = modular_dim(m, sampler.dim if sampler else None)
    xa = as_point(x, dim)
    ya = as_point(y, xa.size)
    if directions is None:
        if sampler is None:
            raise ValueError("either directions or a sampler is required")
        directions = []
        gap_signs = np.sign(xa - ya)
        for _ in range(n_directions):
            v = sampler.point()
            w = sampler.point()
            aligned = np.where(gap_signs != 0.0, gap_signs * np.abs(w), w)
            directions.append((v + aligned, v))

    gap = xa - ya
    lhs = float(modular_fn(m)(gap))
    rep = AxiomReport(trials=len(directions))
    powers = ratio ** np.arange(1, steps + 1)
    tail = math.ceil(steps / 2)
    for u, v in directions:
        ua = as_point(u, xa.size)
        va = as_point(v, xa.size)
        seq = rho(gap + powers[:, None] * (ua - va))
        liminf_proxy = float(np.min(seq[-tail:]))
        if lhs > liminf_proxy + slack_tol(lhs, liminf_proxy):
            rep.record("fatou", (ua, va), (ratio, float(steps)), lhs, liminf_proxy)
    return rep


# ---------------------------------------------------------------------------
# Deliberately invalid dim-1 functionals, one per targeted axiom. They ship
# so checkers and the CLI can be exercised against known failures.

def sine_bump(x: np.ndarray) -> float:
    """|sin(pi u)| + |u| / 10: symmetric, vanishes only at 0, not convex."""
    u = float(x[0])
    return abs(math.sin(math.pi * u)) + abs(u) / 10.0


def sign_skewed(x: np.ndarray) -> float:
    """max(u, 0) + 2 max(-u, 0): convex but asymmetric."""
    u = float(x[0])
    return max(u, 0.0) + 2.0 * max(-u, 0.0)


def dead_zone(x: np.ndarray) -> float:
    """max(|u| - 1, 0): convex and symmetric but zero on a whole interval."""
    u = float(x[0])
    return max(abs(u) - 1.0, 0.0)


#: name -> (functional, axiom its violation targets)
INVALID_FUNCTIONALS: dict[str, tuple[NamedFunctional, str]] = {
    "sine_bump": (NamedFunctional("sine_bump", sine_bump, dim=1), "convexity"),
    "sign_skewed": (NamedFunctional("sign_skewed", sign_skewed, dim=1), "symmetry"),
    "dead_zone": (NamedFunctional("dead_zone", dead_zone, dim=1), "zero_iff"),
}
