"""Projection of the distance matrix into 2D for the scatter plot.

Metric multidimensional scaling by stress majorization: starting from a
classical (spectral) or seeded random configuration, each iteration applies
the Guttman transform, which never increases the raw stress
sum((d_ij - |x_i - x_j|)^2).  Assertions about embeddings should compare
recovered pairwise distances, never absolute coordinates, since any rigid
motion of a solution is an equally good solution.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .abstraction import AbstractionMapping
from .clustering import NOISE, Clustering
from .distance import DistanceMatrix
from .errors import FingerprintMismatchError
from .fingerprint import fingerprint

__all__ = ["Init", "ProjectionOptions", "Embedding2D", "mds_project", "scatter_payload"]


class Init(enum.Enum):
    CLASSICAL = "classical"
    RANDOM = "random"


@dataclass(frozen=True)
class ProjectionOptions:
    max_iter: int = 300
    tolerance: float = 1e-6
    seed: int = 0
    init: Init = Init.CLASSICAL

    def to_json_dict(self) -> dict:
        return {
            "max_iter": self.max_iter,
            "tolerance": self.tolerance,
            "seed": self.seed,
            "init": self.init.value,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "ProjectionOptions":
        return cls(
            max_iter=d.get("max_iter", 300),
            tolerance=d.get("tolerance", 1e-6),
            seed=d.get("seed", 0),
            init=Init(d.get("init", "classical")),
        )

    @property
    def fingerprint(self) -> str:
        return fingerprint(self.to_json_dict())


@dataclass(frozen=True)
class Embedding2D:
    coordinates: tuple[tuple[float, float], ...]
    stress: float
    iterations: int
    seed: int
    stress_history: tuple[float, ...] = ()
    matrix_fingerprint: str = ""

    def __post_init__(self):
        for x, y in self.coordinates:
            if not (np.isfinite(x) and np.isfinite(y)):
                raise ValueError("embedding coordinates must be finite")
        if self.stress < 0:
            raise ValueError("stress must be >= 0")

    def to_json_dict(self) -> dict:
        return {
            "coordinates": [[x, y] for x, y in self.coordinates],
            "stress": self.stress,
            "iterations": self.iterations,
            "seed": self.seed,
            "stress_history": list(self.stress_history),
            "matrix_fingerprint": self.matrix_fingerprint,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "Embedding2D":
        return cls(
            coordinates=tuple((x, y) for x, y in d["coordinates"]),
            stress=d["stress"],
            iterations=d["iterations"],
            seed=d["seed"],
            stress_history=tuple(d.get("stress_history", [])),
            matrix_fingerprint=d.get("matrix_fingerprint", ""),
        )


def _full_matrix(d: DistanceMatrix) -> np.ndarray:
    full = np.zeros((d.n, d.n), dtype=np.float64)
    idx = 0
    for i in range(d.n):
        for j in range(i + 1, d.n):
            full[i, j] = full[j, i] = float(d.condensed[idx])
            idx += 1
    return full


def _classical_init(full: np.ndarray) -> np.ndarray:
    n = full.shape[0]
    j = np.eye(n) - np.full((n, n), 1.0 / n)
    b = -0.5 * j @ (full**2) @ j
    evals, evecs = np.linalg.eigh(b)
    order = np.argsort(evals)[::-1]
    coords = np.zeros((n, 2))
    for dim in range(2):
        lam = evals[order[dim]]
        if lam > 0:
            coords[:, dim] = evecs[:, order[dim]] * np.sqrt(lam)
    return coords


def _stress(full: np.ndarray, x: np.ndarray) -> float:
    diff = x[:, None, :] - x[None, :, :]
    e = np.sqrt((diff**2).sum(axis=2))
    resid = full - e
    return float((resid[np.triu_indices_from(resid, k=1)] ** 2).sum())


def _guttman(full: np.ndarray, x: np.ndarray) -> np.ndarray:
    n = x.shape[0]
    diff = x[:, None, :] - x[None, :, :]
    e = np.sqrt((diff**2).sum(axis=2))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(e > 0, full / np.where(e > 0, e, 1.0), 0.0)
    b = -ratio
    np.fill_diagonal(b, 0.0)
    np.fill_diagonal(b, -b.sum(axis=1))
    return (b @ x) / n


def mds_project(d: DistanceMatrix, options: ProjectionOptions | None = None) -> Embedding2D:
    """Embed the values in the plane so Euclidean distances approximate the matrix.

    One and two points have exact closed forms; larger inputs run stress
    majorization until the relative stress improvement drops below the
    tolerance or max_iter is reached.  Deterministic for a given seed.
    """
    options = options or ProjectionOptions()
    n = d.n
    if n == 1:
        return Embedding2D(
            coordinates=((0.0, 0.0),),
            stress=0.0,
            iterations=0,
            seed=options.seed,
            stress_history=(0.0,),
            matrix_fingerprint=d.fingerprint,
        )
    if n == 2:
        sep = float(d.condensed[0])
        return Embedding2D(
            coordinates=((0.0, 0.0), (sep, 0.0)),
            stress=0.0,
            iterations=0,
            seed=options.seed,
            stress_history=(0.0,),
            matrix_fingerprint=d.fingerprint,
        )

    full = _full_matrix(d)
    if options.init is Init.CLASSICAL:
        x = _classical_init(full)
    else:
        rng = np.random.default_rng(options.seed)
        x = rng.standard_normal((n, 2))

    history = [_stress(full, x)]
    iterations = 0
    for _ in range(options.max_iter):
        if history[-1] == 0.0:
            break
        candidate = _guttman(full, x)
        s = _stress(full, candidate)
        if s > history[-1]:
            # majorization cannot increase stress; a worse candidate means
            # numerical convergence, so keep the better iterate and stop
            break
        x = candidate
        history.append(s)
        iterations += 1
        if history[-2] - s < options.tolerance * history[-2]:
            break

    return Embedding2D(
        coordinates=tuple((float(px), float(py)) for px, py in x),
        stress=history[-1],
        iterations=iterations,
        seed=options.seed,
        stress_history=tuple(history),
        matrix_fingerprint=d.fingerprint,
    )


def scatter_payload(e: Embedding2D, c: Clustering, m: AbstractionMapping) -> list[dict]:
    """Plot-ready records: position, cluster, color index, label and count.

    Labels are the groups' representative original values.  NOISE points
    keep cluster id -1 and get the reserved color index one past the last
    cluster.
    """
    if e.matrix_fingerprint and c.matrix_fingerprint and e.matrix_fingerprint != c.matrix_fingerprint:
        raise FingerprintMismatchError("embedding and clustering come from different matrices")
    if c.mapping_fingerprint and c.mapping_fingerprint != m.fingerprint:
        raise FingerprintMismatchError("clustering was computed for a different abstraction mapping")
    if len(e.coordinates) != len(c.labels):
        raise FingerprintMismatchError("embedding and clustering sizes differ")
    if list(c.value_index) != m.abstracted_values:
        raise FingerprintMismatchError("clustering does not refer to this abstraction mapping")

    by_value = {g.abstracted: g for g in m.groups}
    records = []
    for i, value in enumerate(c.value_index):
        group = by_value[value]
        label = c.labels[i]
        records.append(
            {
                "x": e.coordinates[i][0],
                "y": e.coordinates[i][1],
                "cluster": label,
                "color": label if label != NOISE else c.k,
                "abstracted": value,
                "label": group.representative,
                "count": group.total_count,
            }
        )
    return records
