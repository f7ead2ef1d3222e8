"""Bounded design spaces, unit-box normalization, and Latin hypercube pools."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.spatial.distance import cdist


@dataclass(frozen=True)
class DesignSpace:
    """Axis-aligned box of raw design variables (e.g. minutes, deg C)."""

    lower: np.ndarray
    upper: np.ndarray
    names: tuple[str, ...] = ()

    def __post_init__(self):
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float))
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        if lower.ndim != 1 or lower.size < 1:
            raise ValueError("design space needs at least one dimension")
        if lower.shape != upper.shape:
            raise ValueError("lower and upper bounds differ in length")
        if not np.all(lower < upper):
            bad = int(np.argmin(upper - lower))
            raise ValueError(f"lower bound must be strictly below upper in dimension {bad}")
        if not self.names:
            object.__setattr__(self, "names", tuple(f"x{i}" for i in range(lower.size)))
        elif len(self.names) != lower.size:
            raise ValueError("number of names does not match dimensionality")

    @property
    def dims(self) -> int:
        return self.lower.size

    def normalize(self, raw) -> np.ndarray:
        """Map raw coordinates to the unit box. Rejects out-of-bounds input."""
        raw = np.asarray(raw, dtype=float)
        if raw.shape[-1] != self.dims:
            raise ValueError(f"expected {self.dims} coordinates, got {raw.shape[-1]}")
        for i in range(self.dims):
            col = raw[..., i]
            if np.any(col < self.lower[i]) or np.any(col > self.upper[i]):
                raise ValueError(
                    f"{self.names[i]} out of bounds "
                    f"[{self.lower[i]}, {self.upper[i]}]"
                )
        return (raw - self.lower) / (self.upper - self.lower)

    def denormalize(self, unit) -> np.ndarray:
        """Inverse of normalize; exact round trip up to float rounding."""
        unit = np.asarray(unit, dtype=float)
        if unit.shape[-1] != self.dims:
            raise ValueError(f"expected {self.dims} coordinates, got {unit.shape[-1]}")
        return self.lower + unit * (self.upper - self.lower)


@dataclass(frozen=True)
class CandidatePool:
    """Finite set of normalized candidate points, kept in generation order."""

    points: np.ndarray  # (k, d) coordinates in [0, 1]
    seed: object = None
    m: int = 0  # requested sample count; len(points) <= m after sieving

    def __len__(self) -> int:
        return len(self.points)


def lhs_sample(space: DesignSpace, m: int, seed=None) -> CandidatePool:
    """Latin hypercube sample of m points over the unit box.

    Each dimension is split into m equal strata and receives exactly one
    point per stratum, placed uniformly at random within the stratum.
    Deterministic for a given seed.
    """
    if m < 1:
        raise ValueError("sample count m must be at least 1")
    rng = np.random.default_rng(seed)
    d = space.dims
    offsets = rng.random((m, d))
    strata = np.empty((m, d))
    for h in range(d):
        strata[:, h] = rng.permutation(m)
    return CandidatePool(points=(strata + offsets) / m, seed=seed, m=m)


def sieve(
    pool: CandidatePool,
    predicate: Callable[[np.ndarray], bool],
    space: DesignSpace | None = None,
) -> CandidatePool:
    """Keep the candidates passing a deterministic predicate, order preserved.

    The predicate sees raw coordinates when a space is supplied, otherwise the
    normalized coordinates. An empty result is a valid (empty) pool.
    """
    pts = pool.points
    if len(pts) == 0:
        return pool
    shown = space.denormalize(pts) if space is not None else pts
    keep = np.fromiter((bool(predicate(p)) for p in shown), dtype=bool, count=len(pts))
    return CandidatePool(points=pts[keep], seed=pool.seed, m=pool.m)


def drop_near_duplicates(
    pool: CandidatePool, evaluated: np.ndarray, tol: float = 1e-9
) -> CandidatePool:
    """Remove candidates within L-inf distance tol of any evaluated point.

    Keeps the correlation matrix of the surrogates well conditioned.
    """
    evaluated = np.asarray(evaluated, dtype=float)
    if len(pool.points) == 0 or evaluated.size == 0:
        return pool
    gaps = cdist(pool.points, np.atleast_2d(evaluated), metric="chebyshev")
    keep = gaps.min(axis=1) > tol
    return CandidatePool(points=pool.points[keep], seed=pool.seed, m=pool.m)
