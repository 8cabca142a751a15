"""Contraction verification and Picard fixed-point iteration under a modular.

The central loop iterates x_{n+1} = T x_n and tracks three modulars per
step: the step modular rho(x_n - x_{n-1}), the residual rho(T x_n - x_n),
and the doubled-orbit modular rho(2 x_n). Convergence requires BOTH the
step and residual modulars below tol, which guards against declaring
victory on a slowly moving orbit.

`solve_via_power` implements the doubling-constant shortcut: pick the
smallest n with c**n k < 1/2 (k the doubling constant rho(2x) <= k rho(x)),
iterate the n-fold composite, then confirm the point is fixed for the
single map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple

import numpy as np

from .checks import AxiomReport, PointSampler, delta2_type_estimate, exact_doubling_constant
from .errors import (
    DimensionMismatch,
    DivergenceError,
    InconsistentContractionError,
)
from .modular import INF, ModularLike, as_point, modular_dim, modular_fn, slack_tol

__all__ = [
    "MapKind",
    "MapSpec",
    "TraceStep",
    "IterationTrace",
    "verify_contraction",
    "verify_s_contraction",
    "OrbitBound",
    "orbit_bound_check",
    "picard_solve",
    "power_index",
    "solve_via_power",
]


class MapKind(Enum):
    AFFINE = "affine"            # x -> A x + b
    HALF = "half"                # coordinatewise u -> u / 2
    LOGISTIC_DAMPED = "logistic_damped"  # coordinatewise u -> lam * u / (1 + |u|)
    CONST = "const"              # coordinatewise u -> constant


@dataclass
class MapSpec:
    """A self-map of the space: affine, or a named 1-D map per coordinate.

    `c` is the claimed factor for rho(Tx - Ty) <= c rho(x - y); the triple
    (c, k, s) instead describes the scaled form rho(c (Tx - Ty)) <= k**s
    rho(x - y) whenever `s` is set. Claims are verified empirically by
    `verify_contraction` / `verify_s_contraction`, never trusted.
    """

    kind: MapKind
    matrix: np.ndarray | None = None
    offset: np.ndarray | None = None
    lam: float | None = None
    value: np.ndarray | None = None
    c: float | None = None
    k: float | None = None
    s: float | None = None

    @classmethod
    def affine(cls, matrix, offset, c: float | None = None) -> "MapSpec":
        a = np.atleast_2d(np.asarray(matrix, dtype=float))
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"matrix must be square, got shape {a.shape}")
        b = as_point(offset, a.shape[0])
        if not np.all(np.isfinite(a)):
            raise ValueError("matrix entries must be finite")
        return cls(MapKind.AFFINE, matrix=a, offset=b, c=_check_c(c))

    @classmethod
    def half(cls, c: float | None = 0.5) -> "MapSpec":
        return cls(MapKind.HALF, c=_check_c(c))

    @classmethod
    def logistic_damped(cls, lam: float, c: float | None = None) -> "MapSpec":
        if not lam >= 0:
            raise ValueError("lam must be >= 0")
        return cls(MapKind.LOGISTIC_DAMPED, lam=float(lam), c=_check_c(c))

    @classmethod
    def const(cls, value, c: float | None = 0.0) -> "MapSpec":
        return cls(MapKind.CONST, value=np.atleast_1d(np.asarray(value, dtype=float)), c=_check_c(c))

    @property
    def dim(self) -> int | None:
        """Fixed dimension for affine maps; None for coordinatewise maps."""
        if self.kind is MapKind.AFFINE:
            return self.matrix.shape[0]
        if self.kind is MapKind.CONST and self.value.size > 1:
            return self.value.size
        return None

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Apply the map to a point, or row-wise to an (n, dim) batch.

        Overflow is not an error here; the solver watches iterates for
        non-finite values and raises DivergenceError with the trace.
        """
        x = np.asarray(x, dtype=float)
        with np.errstate(over="ignore", invalid="ignore"):
            if self.kind is MapKind.AFFINE:
                if x.shape[-1] != self.matrix.shape[0]:
                    raise DimensionMismatch(
                        f"map is {self.matrix.shape[0]}-dimensional, point has shape {x.shape}"
                    )
                return x @ self.matrix.T + self.offset
            if self.kind is MapKind.HALF:
                return 0.5 * x
            if self.kind is MapKind.LOGISTIC_DAMPED:
                return self.lam * x / (1.0 + np.abs(x))
            if self.value.size not in (1, x.shape[-1]):
                raise DimensionMismatch(
                    f"constant map target has dim {self.value.size}, point has shape {x.shape}"
                )
            return np.broadcast_to(self.value, x.shape).astype(float)


def _check_c(c: float | None) -> float | None:
    if c is None:
        return None
    c = float(c)
    if not 0.0 <= c < 1.0:
        raise ValueError(f"claimed contraction factor must lie in [0, 1), got {c}")
    return c


@dataclass
class TraceStep:
    n: int
    x: np.ndarray
    step_mod: float       # rho(x_n - x_{n-1}); nan at n = 0
    residual: float       # rho(T x_n - x_n)
    doubled_orbit: float  # rho(2 x_n)


@dataclass
class IterationTrace:
    """Full record of one Picard run."""

    steps: list[TraceStep] = field(default_factory=list)
    converged: bool = False
    fixed_point: np.ndarray | None = None
    power: int = 1              # the composite T^power the engine stepped
    k_used: float | None = None  # doubling constant behind the power choice

    @property
    def iterations(self) -> int:
        return self.steps[-1].n if self.steps else 0


def _map_dim(T: MapSpec, m: ModularLike, x0) -> int | None:
    dims = {d for d in (T.dim, modular_dim(m), np.atleast_1d(np.asarray(x0)).size) if d is not None}
    if len(dims) > 1:
        raise DimensionMismatch(f"map/modular/point dimensions disagree: {sorted(dims)}")
    return dims.pop() if dims else None


def verify_contraction(
    T: MapSpec, m: ModularLike, c: float, sampler: PointSampler, trials: int
) -> AxiomReport:
    """Sampled check of rho(Tx - Ty) <= c rho(x - y).

    Alongside random pairs, every canonical basis vector is probed against
    the origin; for affine maps under a sum-type modular that pins the max
    ratio to the worst coordinate direction. The report carries the largest
    observed ratio rho(Tx - Ty) / rho(x - y) -- an empirical figure, usable
    as an auto-filled factor, never a proof.
    """
    if not 0.0 <= c < 1.0:
        raise ValueError("c must lie in [0, 1)")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rho, dim = modular_fn(m), sampler.dim
    _map_dim(T, m, np.zeros(sampler.dim))
    rep = AxiomReport(trials=trials)

    def probe(x: np.ndarray, y: np.ndarray) -> None:
        d = rho(x - y)
        lhs = rho(T.apply(x) - T.apply(y))
        if math.isinf(d):
            rhs = INF if c > 0.0 else 0.0
        else:
            rhs = c * d
        if lhs > rhs + slack_tol(lhs, rhs):
            rep.record("contraction", (x, y), (c,), lhs, rhs)
        if 0.0 < d < INF and not math.isinf(lhs):
            ratio = lhs / d
            if math.isnan(rep.max_ratio) or ratio > rep.max_ratio:
                rep.max_ratio = ratio

    zero = np.zeros(dim)
    for j in range(dim):
        e = np.zeros(dim)
        e[j] = 1.0
        probe(e, zero)
    for _ in range(trials):
        probe(sampler.point(), sampler.point())
    return rep


def verify_s_contraction(
    T: MapSpec,
    m: ModularLike,
    c: float,
    k: float,
    s: float,
    sampler: PointSampler,
    trials: int,
) -> AxiomReport:
    """Sampled check of the scaled form rho(c (Tx - Ty)) <= k**s rho(x - y)."""
    if not c > max(1.0, k):
        raise ValueError(f"requires c > max(1, k); got c = {c}, k = {k}")
    if not 0.0 < s <= 1.0:
        raise ValueError("s must lie in (0, 1]")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rho = modular_fn(m)
    _map_dim(T, m, np.zeros(sampler.dim))
    ks = k**s
    rep = AxiomReport(trials=trials)
    for _ in range(trials):
        x = sampler.point()
        y = sampler.point()
        d = rho(x - y)
        lhs = rho(c * (T.apply(x) - T.apply(y)))
        rhs = ks * d if not math.isinf(d) else (INF if ks > 0 else 0.0)
        if lhs > rhs + slack_tol(lhs, rhs):
            rep.record("s_contraction", (x, y), (c, k, s), lhs, rhs)
        if 0.0 < d < INF and not math.isinf(lhs):
            ratio = lhs / d
            if math.isnan(rep.max_ratio) or ratio > rep.max_ratio:
                rep.max_ratio = ratio
    return rep


class OrbitBound(NamedTuple):
    sup: float
    stabilized: bool


def orbit_bound_check(T: MapSpec, m: ModularLike, omega, N: int) -> OrbitBound:
    """Max of rho(2 T^n omega) for n = 1..N: the orbit-boundedness figure.

    `stabilized` is True when the running max did not grow by more than 1%
    over the last ceil(N/2) steps (the same convention as the doubling
    estimate; a monotone orbit converging to its bound keeps inching up
    forever, so exact equality would never hold). Overflow returns
    (+inf, False).
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    rho = modular_fn(m)
    x = as_point(omega, _map_dim(T, m, omega))
    vals: list[float] = []
    with np.errstate(over="ignore"):
        for _ in range(N):
            x = T.apply(x)
            if not np.all(np.isfinite(x)):
                return OrbitBound(INF, False)
            vals.append(rho(2.0 * x))
    sup = max(vals)
    if math.isinf(sup):
        return OrbitBound(INF, False)
    early = vals[: N - math.ceil(N / 2)]
    early_max = max(early) if early else 0.0
    if early_max == 0.0:
        return OrbitBound(sup, sup == 0.0)
    return OrbitBound(sup, sup <= 1.01 * early_max)


def _run_picard(
    T: MapSpec, m: ModularLike, x0, tol: float, max_iter: int, power: int
) -> IterationTrace:
    if tol <= 0:
        raise ValueError("tol must be > 0")
    if max_iter < 0:
        raise ValueError("max_iter must be >= 0")
    rho = modular_fn(m)
    x = as_point(x0, _map_dim(T, m, x0))

    def step(z: np.ndarray) -> np.ndarray:
        for _ in range(power):
            z = T.apply(z)
        return z

    def finite(z: np.ndarray) -> bool:
        return bool(np.all(np.isfinite(z)))

    trace = IterationTrace(power=power)
    with np.errstate(over="ignore", invalid="ignore"):
        fx = step(x)
        res0 = rho(fx - x) if finite(fx) else INF
        trace.steps.append(TraceStep(0, x.copy(), math.nan, res0, rho(2.0 * x)))
        if max_iter == 0:
            return trace
        if not finite(fx):
            raise DivergenceError("non-finite iterate at step 1", trace=trace)

        for n in range(1, max_iter + 1):
            x_new = fx
            fx_new = step(x_new)
            ok = finite(fx_new)
            step_mod = rho(x_new - x)
            residual = rho(fx_new - x_new) if ok else INF
            trace.steps.append(TraceStep(n, x_new.copy(), step_mod, residual, rho(2.0 * x_new)))
            if step_mod <= tol and residual <= tol:
                trace.converged = True
                trace.fixed_point = x_new.copy()
                break
            if not ok:
                raise DivergenceError(f"non-finite iterate at step {n + 1}", trace=trace)
            x, fx = x_new, fx_new
    return trace


def picard_solve(T: MapSpec, m: ModularLike, x0, tol: float, max_iter: int) -> IterationTrace:
    """Iterate x_{n+1} = T x_n until step and residual modulars are <= tol.

    Records every step; `fixed_point` is set only on convergence. A
    non-finite iterate raises DivergenceError carrying the partial trace.
    With max_iter = 0 the trace holds only the initial point.
    """
    return _run_picard(T, m, x0, tol, max_iter, power=1)


def power_index(c: float, k: float) -> int:
    """Smallest n >= 1 with c**n * k < 1/2.

    `k` is a doubling constant, any finite positive value is accepted;
    an unbounded (infinite) k has no applicable index and raises.
    """
    if not 0.0 <= c < 1.0:
        raise ValueError("c must lie in [0, 1)")
    if not k > 0.0:
        raise ValueError("k must be > 0")
    if math.isinf(k):
        raise ValueError("doubling constant is unbounded; power selection not applicable")
    if c * k < 0.5:
        return 1
    # analytic first guess, then settle the boundary exactly in floats
    n = max(1, math.ceil(math.log(0.5 / k) / math.log(c)))
    while c**n * k >= 0.5:
        n += 1
    while n > 1 and c ** (n - 1) * k < 0.5:
        n -= 1
    return n


def solve_via_power(
    T: MapSpec,
    m: ModularLike,
    c: float,
    x0,
    tol: float,
    max_iter: int,
    *,
    k: float | None = None,
    sampler: PointSampler | None = None,
    trials: int = 256,
) -> IterationTrace:
    """Picard on the composite T^n with n = power_index(c, k), then confirm
    the result is fixed for T itself.

    The doubling constant k is taken exactly where the family scales
    exactly, otherwise estimated from samples (a sampler is then required).
    The composite is applied by n-fold application per step. A composite
    fixed point whose single-map residual exceeds tol raises
    InconsistentContractionError: the contraction claim c is then false
    (e.g. the map has a periodic orbit).
    """
    if k is None:
        k = exact_doubling_constant(m)
    if k is None:
        if sampler is None:
            raise ValueError("sampler required to estimate the doubling constant")
        est = delta2_type_estimate(m, sampler, trials)
        if est.unbounded:
            raise ValueError("doubling constant unbounded; power path not applicable")
        k = est.constant
    n = power_index(c, float(k))
    trace = _run_picard(T, m, x0, tol, max_iter, power=n)
    trace.k_used = float(k)
    if trace.converged:
        rho = modular_fn(m)
        x_star = trace.fixed_point
        res = rho(T.apply(x_star) - x_star)
        if res > tol:
            raise InconsistentContractionError(
                f"composite fixed point is not fixed for the map itself "
                f"(residual {res:.3e} > tol {tol:.3e}); the claimed factor c = {c} is false",
                trace=trace,
            )
    return trace
