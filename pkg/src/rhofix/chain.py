"""Finite chain certificates for contraction orbits.

For a verified contraction T with factor c and base point omega, the chain

    (x_n, alpha_n) = (T^n omega, c**n alpha),   n = 0..N

is totally ordered by the relation "rho(x - y) <= alpha - beta" once alpha
is chosen large enough that rho(omega - T^n omega) <= alpha - c**n alpha
for every n. A ChainCertificate materializes this chain at finite N,
numerically verifies every pairwise order inequality, checks the final
iterate as a stand-in maximum element at level 0, and tabulates how fast
the alphas (hence all pairwise modulars) fall below each tolerance.

The stand-in maximum is a surrogate: the genuine maximum element exists by
a non-constructive argument, while the certificate only exhibits finite
witnesses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import UnboundedOrbitError
from .modular import ModularLike, as_point, modular_dim, modular_fn, slack_tol
from .solver import MapSpec

__all__ = [
    "ALPHA_MARGIN",
    "EPS_GRID",
    "ChainCertificate",
    "SlackCheck",
    "compute_alpha",
    "build_chain",
    "verify_order_pairs",
    "verify_maximum_element",
    "node_slacks",
    "cauchy_modulus",
]

# relative headroom applied to the minimal admissible alpha so the
# certificate is robust to rounding
ALPHA_MARGIN = 1e-6

# tolerance rows of the Cauchy-modulus table
EPS_GRID = tuple(10.0**-j for j in range(1, 9))

VACUOUS = math.inf


@dataclass
class ChainCertificate:
    """The chain (T^n omega, c**n alpha) with its verification results.

    `pair_check` is the worst slack (alpha_p - alpha_q) - rho(x_p - x_q)
    over pairs p < q; `max_check` the worst slack of the maximum-element
    inequality rho(x_n - limit) <= alpha_n. `all_pass` holds when both
    worst slacks clear -eps_num.
    """

    omega: np.ndarray
    c: float
    alpha: float
    nodes: list[tuple[np.ndarray, float]]
    limit_candidate: np.ndarray
    pair_check: float = math.nan
    max_check: float = math.nan
    all_pass: bool = False
    worst_pair: tuple[int, int] | None = None
    worst_node: int | None = None

    @property
    def length(self) -> int:
        return len(self.nodes) - 1

    def alphas(self) -> np.ndarray:
        return np.array([a for _, a in self.nodes])


class SlackCheck(NamedTuple):
    worst_slack: float
    index: object  # pair (p, q) or node index; None when vacuous


def _orbit(T: MapSpec, omega: np.ndarray, N: int) -> list[np.ndarray]:
    xs = [omega]
    x = omega
    for n in range(1, N + 1):
        x = T.apply(x)
        if not np.all(np.isfinite(x)):
            raise UnboundedOrbitError(f"orbit left the space at step {n}")
        xs.append(x)
    return xs


def compute_alpha(m: ModularLike, T: MapSpec, omega, c: float, N: int) -> float:
    """Least admissible chain level, with a (1 + 1e-6) safety margin.

    Returns alpha = (1 + margin) * max_n rho(omega - T^n omega) / (1 - c**n)
    over n = 1..N, so rho(omega - T^n omega) <= alpha - c**n alpha holds
    strictly on the built range. A base point that is already fixed yields
    the degenerate alpha = 0. Any infinite orbit modular raises
    UnboundedOrbitError.
    """
    if not 0.0 <= c < 1.0:
        raise ValueError("c must lie in [0, 1)")
    if N < 1:
        raise ValueError("N must be >= 1")
    rho = modular_fn(m)
    x0 = as_point(omega, modular_dim(m))
    best = 0.0
    for n, xn in enumerate(_orbit(T, x0, N)[1:], start=1):
        r = rho(x0 - xn)
        if math.isinf(r):
            raise UnboundedOrbitError(f"rho(omega - T^{n} omega) is infinite")
        best = max(best, r / (1.0 - c**n))
    return (1.0 + ALPHA_MARGIN) * best


def build_chain(
    m: ModularLike, T: MapSpec, omega, c: float, alpha: float, N: int, *, max_tol: float = 0.0
) -> ChainCertificate:
    """Materialize the chain of length N and verify its order inequalities.

    The final iterate T^N omega stands in for the maximum element at level
    0. N = 0 gives a singleton chain that passes vacuously.
    """
    if not alpha >= 0.0:
        raise ValueError("alpha must be >= 0")
    if not 0.0 <= c < 1.0:
        raise ValueError("c must lie in [0, 1)")
    if N < 0:
        raise ValueError("N must be >= 0")
    x0 = as_point(omega, modular_dim(m))
    xs = _orbit(T, x0, N)
    nodes = [(xn, c**n * alpha) for n, xn in enumerate(xs)]
    cert = ChainCertificate(
        omega=x0,
        c=float(c),
        alpha=float(alpha),
        nodes=nodes,
        limit_candidate=xs[-1].copy(),
    )
    pair = verify_order_pairs(cert, m)
    mx = verify_maximum_element(cert, m, max_tol)
    cert.pair_check, cert.worst_pair = pair.worst_slack, pair.index
    cert.max_check, cert.worst_node = mx.worst_slack, mx.index
    thr = slack_tol(alpha, 1.0)
    cert.all_pass = cert.pair_check >= -thr and cert.max_check >= -thr
    return cert


def verify_order_pairs(cert: ChainCertificate, m: ModularLike) -> SlackCheck:
    """Worst slack of (alpha_p - alpha_q) - rho(x_p - x_q) over pairs p < q.

    A worst slack >= -eps_num certifies the chain is totally ordered by
    "rho(x - y) <= alpha - beta" (equivalently the |alpha - beta| membership
    bound, since the levels decrease). Singleton chains are vacuous and
    report +inf.
    """
    rho = modular_fn(m)
    worst, where = VACUOUS, None
    for q in range(1, len(cert.nodes)):
        xq, aq = cert.nodes[q]
        for p in range(q):
            xp, ap = cert.nodes[p]
            slack = (ap - aq) - rho(xp - xq)
            if slack < worst:
                worst, where = slack, (p, q)
    return SlackCheck(worst, where)


def node_slacks(cert: ChainCertificate, m: ModularLike, tol: float = 0.0) -> np.ndarray:
    """Per-node slacks (alpha_n + tol) - rho(x_n - limit_candidate)."""
    rho = modular_fn(m)
    return np.array([(a + tol) - rho(x - cert.limit_candidate) for x, a in cert.nodes])


def verify_maximum_element(cert: ChainCertificate, m: ModularLike, tol: float = 0.0) -> SlackCheck:
    """Worst slack of rho(x_n - limit) <= alpha_n + tol with the final
    iterate playing the maximum element at level 0."""
    slacks = node_slacks(cert, m, tol)
    idx = int(np.argmin(slacks))
    return SlackCheck(float(slacks[idx]), idx)


def cauchy_modulus(cert: ChainCertificate, eps_grid=EPS_GRID) -> list[tuple[float, int | None]]:
    """For each eps, the least index N with alpha_N < eps (None if never).

    Once the order inequalities hold, every pairwise modular beyond that
    index sits below eps as well: rho(x_m - x_n) <= alpha_min(m,n) < eps.
    """
    alphas = cert.alphas()
    rows: list[tuple[float, int | None]] = []
    for eps in eps_grid:
        hit = np.nonzero(alphas < eps)[0]
        rows.append((float(eps), int(hit[0]) if hit.size else None))
    return rows
