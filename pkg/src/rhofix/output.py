"""Delimited trace/certificate files and JSON report summaries.

All floats are written with 17 significant digits, so reading a file back
reproduces the stored doubles exactly and recorded slacks can be
re-verified losslessly.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .chain import ChainCertificate, node_slacks, verify_order_pairs
from .checks import AxiomReport, Delta2Result
from .modular import ModularLike, modular_fn
from .solver import IterationTrace, MapSpec

__all__ = [
    "write_trace",
    "read_trace",
    "write_certificate",
    "read_certificate",
    "write_json",
    "report_payload",
    "trace_payload",
    "reverify_trace",
    "reverify_certificate",
]

MAX_WITNESSES = 20


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def write_trace(path, trace: IterationTrace) -> None:
    """CSV trace: n, step_mod, residual, doubled_orbit, then coordinates."""
    path = Path(path)
    dim = trace.steps[0].x.size if trace.steps else 0
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "step_mod", "residual", "doubled_orbit"] + [f"x{i}" for i in range(dim)])
        for s in trace.steps:
            w.writerow([s.n, _fmt(s.step_mod), _fmt(s.residual), _fmt(s.doubled_orbit)]
                       + [_fmt(v) for v in s.x])


def read_trace(path) -> dict:
    """Read a trace CSV back into arrays (floats parse bit-exactly)."""
    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    dim = len(header) - 4
    return {
        "n": np.array([int(r[0]) for r in body]),
        "step_mod": np.array([float(r[1]) for r in body]),
        "residual": np.array([float(r[2]) for r in body]),
        "doubled_orbit": np.array([float(r[3]) for r in body]),
        "x": np.array([[float(v) for v in r[4 : 4 + dim]] for r in body]),
    }


def write_certificate(path, cert: ChainCertificate, m: ModularLike) -> None:
    """CSV certificate: one node per record: n, alpha_n, slack_n, coords."""
    path = Path(path)
    slacks = node_slacks(cert, m)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        dim = cert.omega.size
        w.writerow(["n", "alpha", "slack"] + [f"x{i}" for i in range(dim)])
        for n, (x, a) in enumerate(cert.nodes):
            w.writerow([n, _fmt(a), _fmt(slacks[n])] + [_fmt(v) for v in x])


def read_certificate(path) -> dict:
    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    dim = len(header) - 3
    return {
        "n": np.array([int(r[0]) for r in body]),
        "alpha": np.array([float(r[1]) for r in body]),
        "slack": np.array([float(r[2]) for r in body]),
        "x": np.array([[float(v) for v in r[3 : 3 + dim]] for r in body]),
    }


def write_json(path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, default=_jsonable) + "\n")


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    raise TypeError(f"not JSON-serializable: {type(obj)}")


def report_payload(checker: str, report: AxiomReport, extra: dict | None = None) -> dict:
    """Machine-readable summary of one checker run."""
    payload = {
        "checker": checker,
        "trials": report.trials,
        "passed": report.passed,
        "n_violations": len(report.violations),
        "max_slack_violation": report.max_slack_violation,
        "violated_axioms": sorted(report.violated_axioms()),
        "violations": [
            {
                "axiom": v.axiom,
                "points": [p.tolist() for p in v.points],
                "scalars": list(v.scalars),
                "lhs": v.lhs,
                "rhs": v.rhs,
                "slack": v.slack,
            }
            for v in report.violations[:MAX_WITNESSES]
        ],
    }
    if not math.isnan(report.max_ratio):
        payload["max_ratio"] = report.max_ratio
    if extra:
        payload.update(extra)
    return payload


def delta2_payload(result: Delta2Result) -> dict:
    return {
        "checker": "delta2_type_estimate",
        "constant": result.constant,
        "unbounded": result.unbounded,
    }


def trace_payload(trace: IterationTrace, extra: dict | None = None) -> dict:
    last = trace.steps[-1] if trace.steps else None
    payload = {
        "converged": trace.converged,
        "iterations": trace.iterations,
        "power": trace.power,
        "k_used": trace.k_used,
        "final_step_mod": None if last is None else last.step_mod,
        "final_residual": None if last is None else last.residual,
        "fixed_point": None if trace.fixed_point is None else trace.fixed_point.tolist(),
    }
    if extra:
        payload.update(extra)
    return payload


def reverify_trace(path, m: ModularLike, T: MapSpec, power: int = 1) -> float:
    """Recompute every recorded modular of a stored trace from its iterates.

    `power` must match the composite the solver stepped (the trace summary
    records it): residuals in a power-path trace are composite residuals.
    Returns the max absolute discrepancy between recorded and recomputed
    values (step, residual, doubled-orbit); with 17-digit formatting this
    is a bit-exact round trip up to re-evaluation order.
    """
    data = read_trace(path)
    rho = modular_fn(m)

    def step(z):
        for _ in range(power):
            z = T.apply(z)
        return z

    worst = 0.0
    xs = data["x"]
    for i in range(len(xs)):
        x = xs[i]
        if i > 0:
            worst = max(worst, abs(rho(x - xs[i - 1]) - data["step_mod"][i]))
        worst = max(worst, abs(rho(step(x) - x) - data["residual"][i]))
        worst = max(worst, abs(rho(2.0 * x) - data["doubled_orbit"][i]))
    return worst


def reverify_certificate(csv_path, m: ModularLike) -> dict:
    """Recompute a stored certificate's slacks from its nodes.

    Returns the recomputed worst pair slack and the max absolute
    discrepancy against the recorded per-node slacks.
    """
    data = read_certificate(csv_path)
    xs, alphas = data["x"], data["alpha"]
    cert = ChainCertificate(
        omega=xs[0],
        c=math.nan,
        alpha=float(alphas[0]),
        nodes=[(xs[i], float(alphas[i])) for i in range(len(xs))],
        limit_candidate=xs[-1],
    )
    recomputed = node_slacks(cert, m)
    pair = verify_order_pairs(cert, m)
    return {
        "max_node_slack_diff": float(np.max(np.abs(recomputed - data["slack"]))),
        "pair_check": pair.worst_slack,
        "node_slacks": recomputed,
    }
