"""Problem files: a YAML tree describing the space, the map, and the run.

Recognized keys (dotted = nested):

    space.family            ppower | orlicz | weighted_sum, or one of the
                            named test functionals (sine_bump, sign_skewed,
                            dead_zone)
    space.p                 exponent for ppower / weighted_sum / orlicz power
    space.phi               power | exp_minus_one | u_log   (orlicz only)
    space.weights           list of positive weights        (weighted_sum)
    space.quadrature_nodes  grid cells on [0, 1]            (orlicz)
    map.kind                affine | half | logistic_damped | const
    map.matrix, map.offset  affine data; offset doubles as the const target
    map.lam                 damping factor (logistic_damped)
    map.c, map.k, map.s     claimed factors; (c, k, s) selects the scaled form
    initial_point           list of reals; fixes the space dimension
    solve.tol, solve.max_iter
    check.trials, check.s   s triggers the s-convexity checker
    check.fatou_ratio, check.fatou_steps
    chain.N, chain.alpha    alpha overrides the computed admissible level
    seed                    64-bit unsigned
    out_dir                 report/trace output directory

Anything malformed raises ConfigError naming the offending key.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from .checks import INVALID_FUNCTIONALS
from .errors import ConfigError
from .modular import Family, ModularLike, ModularSpec, Phi
from .solver import MapKind, MapSpec

__all__ = ["ProblemConfig", "load_config"]

_DEFAULTS = {
    "tol": 1e-10,
    "max_iter": 10_000,
    "trials": 10_000,
    "chain_n": 30,
    "seed": 0,
    "out_dir": "out",
    "fatou_ratio": 0.5,
    "fatou_steps": 20,
}


@dataclass
class ProblemConfig:
    space: ModularLike
    map: MapSpec | None
    initial_point: np.ndarray
    tol: float = _DEFAULTS["tol"]
    max_iter: int = _DEFAULTS["max_iter"]
    trials: int = _DEFAULTS["trials"]
    chain_n: int = _DEFAULTS["chain_n"]
    seed: int = _DEFAULTS["seed"]
    out_dir: Path = field(default_factory=lambda: Path(_DEFAULTS["out_dir"]))
    s: float | None = None
    fatou_ratio: float = _DEFAULTS["fatou_ratio"]
    fatou_steps: int = _DEFAULTS["fatou_steps"]
    chain_alpha: float | None = None

    @property
    def dim(self) -> int:
        return self.initial_point.size


def _get(tree: dict, key: str, path: str, required: bool = False, default=None):
    if key not in tree:
        if required:
            raise ConfigError(f"{path}.{key}" if path else key, "missing required key")
        return default
    return tree[key]


def _as_float(value, path: str) -> float:
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(path, f"expected a number, got {value!r}") from None


def _as_int(value, path: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(path, f"expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(path, f"must be >= {minimum}, got {value}")
    return value


def _as_vector(value, path: str) -> np.ndarray:
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        raise ConfigError(path, f"expected a list of numbers, got {value!r}") from None
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1 or arr.size < 1 or not np.all(np.isfinite(arr)):
        raise ConfigError(path, "expected a nonempty list of finite numbers")
    return arr


def _subtree(tree: dict, key: str) -> dict:
    sub = tree.get(key, {})
    if sub is None:
        sub = {}
    if not isinstance(sub, dict):
        raise ConfigError(key, f"expected a mapping, got {sub!r}")
    return sub


def _load_space(tree: dict, dim: int) -> ModularLike:
    family = _get(tree, "family", "space", required=True)
    if family in INVALID_FUNCTIONALS:
        fn, _ = INVALID_FUNCTIONALS[family]
        if dim != fn.dim:
            raise ConfigError("initial_point", f"{family} is {fn.dim}-dimensional")
        return fn
    try:
        fam = Family(family)
    except ValueError:
        raise ConfigError("space.family", f"unknown family {family!r}") from None

    if fam is Family.PPOWER:
        p = _as_float(_get(tree, "p", "space", required=True), "space.p")
        return ModularSpec.p_power(p, dim)
    if fam is Family.WEIGHTED_SUM:
        p = _as_float(_get(tree, "p", "space", required=True), "space.p")
        w = _as_vector(_get(tree, "weights", "space", required=True), "space.weights")
        if w.size != dim:
            raise ConfigError("space.weights", f"expected {dim} weights, got {w.size}")
        if not np.all(w > 0):
            raise ConfigError("space.weights", "weights must all be > 0")
        return ModularSpec.weighted_sum(p, w)
    phi_name = _get(tree, "phi", "space", required=True)
    try:
        phi = Phi(phi_name)
    except ValueError:
        raise ConfigError("space.phi", f"unknown integrand {phi_name!r}") from None
    nodes = _as_int(_get(tree, "quadrature_nodes", "space", default=dim), "space.quadrature_nodes", 1)
    if nodes != dim:
        raise ConfigError("space.quadrature_nodes", f"must match the point dimension {dim}")
    p = _get(tree, "p", "space")
    if phi is Phi.POWER and p is None:
        raise ConfigError("space.p", "the power integrand requires an exponent")
    return ModularSpec.orlicz(phi, nodes, p=None if p is None else _as_float(p, "space.p"))


def _load_map(tree: dict, dim: int) -> MapSpec | None:
    if not tree:
        return None
    kind_name = _get(tree, "kind", "map", required=True)
    try:
        kind = MapKind(kind_name)
    except ValueError:
        raise ConfigError("map.kind", f"unknown map kind {kind_name!r}") from None

    c = tree.get("c")
    k = tree.get("k")
    s = tree.get("s")
    c = None if c is None else _as_float(c, "map.c")
    k = None if k is None else _as_float(k, "map.k")
    s = None if s is None else _as_float(s, "map.s")
    claimed = None if s is not None else c  # with s set, (c, k, s) is the scaled form

    try:
        if kind is MapKind.AFFINE:
            matrix = _get(tree, "matrix", "map", required=True)
            offset = _get(tree, "offset", "map", required=True)
            A = np.asarray(matrix, dtype=float)
            if A.ndim != 2 or A.shape != (dim, dim):
                raise ConfigError("map.matrix", f"expected a {dim}x{dim} matrix, got shape {A.shape}")
            b = _as_vector(offset, "map.offset")
            if b.size != dim:
                raise ConfigError("map.offset", f"expected {dim} entries, got {b.size}")
            spec = MapSpec.affine(A, b, c=claimed)
        elif kind is MapKind.HALF:
            spec = MapSpec.half(c=0.5 if claimed is None else claimed)
        elif kind is MapKind.LOGISTIC_DAMPED:
            lam = _as_float(_get(tree, "lam", "map", required=True), "map.lam")
            spec = MapSpec.logistic_damped(lam, c=claimed)
        else:
            value = _get(tree, "offset", "map", required=True)
            v = _as_vector(value, "map.offset")
            if v.size not in (1, dim):
                raise ConfigError("map.offset", f"constant target must have dim 1 or {dim}")
            spec = MapSpec.const(v, c=0.0 if claimed is None else claimed)
    except ValueError as exc:  # factory-level validation
        raise ConfigError("map", str(exc)) from None
    spec.k, spec.s = k, s
    if s is not None:
        spec.c = c  # scaled-form c may exceed 1 legitimately
    return spec


def load_config(path) -> ProblemConfig:
    """Parse a YAML problem file into a validated ProblemConfig."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read config: {exc}") from None
    try:
        tree = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(str(path), f"invalid YAML: {exc}") from None
    if not isinstance(tree, dict):
        raise ConfigError(str(path), "expected a top-level mapping of config keys")

    point = _as_vector(_get(tree, "initial_point", "", required=True), "initial_point")
    dim = point.size
    space = _load_space(_subtree(tree, "space"), dim)
    map_spec = _load_map(_subtree(tree, "map"), dim)

    solve = _subtree(tree, "solve")
    check = _subtree(tree, "check")
    chain = _subtree(tree, "chain")

    tol = _as_float(solve.get("tol", _DEFAULTS["tol"]), "solve.tol")
    if tol <= 0:
        raise ConfigError("solve.tol", f"must be > 0, got {tol}")
    max_iter = _as_int(solve.get("max_iter", _DEFAULTS["max_iter"]), "solve.max_iter", 0)
    trials = _as_int(check.get("trials", _DEFAULTS["trials"]), "check.trials", 1)
    chain_n = _as_int(chain.get("N", _DEFAULTS["chain_n"]), "chain.N", 0)
    chain_alpha = chain.get("alpha")
    if chain_alpha is not None:
        chain_alpha = _as_float(chain_alpha, "chain.alpha")
        if chain_alpha < 0:
            raise ConfigError("chain.alpha", f"must be >= 0, got {chain_alpha}")

    seed = _get(tree, "seed", "", default=_DEFAULTS["seed"])
    seed = _as_int(seed, "seed", 0)
    if seed >= 2**64:
        raise ConfigError("seed", "must fit in 64 bits")

    s = check.get("s")
    s = None if s is None else _as_float(s, "check.s")
    if s is not None and not 0.0 < s <= 1.0:
        raise ConfigError("check.s", f"must lie in (0, 1], got {s}")
    fatou_ratio = _as_float(check.get("fatou_ratio", _DEFAULTS["fatou_ratio"]), "check.fatou_ratio")
    if not 0.0 < fatou_ratio < 1.0:
        raise ConfigError("check.fatou_ratio", f"must lie in (0, 1), got {fatou_ratio}")
    fatou_steps = _as_int(check.get("fatou_steps", _DEFAULTS["fatou_steps"]), "check.fatou_steps", 1)

    out_dir = _get(tree, "out_dir", "", default=_DEFAULTS["out_dir"])
    if not isinstance(out_dir, str) or not out_dir:
        raise ConfigError("out_dir", f"expected a path string, got {out_dir!r}")

    return ProblemConfig(
        space=space,
        map=map_spec,
        initial_point=point,
        tol=tol,
        max_iter=max_iter,
        trials=trials,
        chain_n=chain_n,
        seed=seed,
        out_dir=Path(out_dir),
        s=s,
        fatou_ratio=fatou_ratio,
        fatou_steps=fatou_steps,
        chain_alpha=chain_alpha,
    )
