"""Weight vectors and sample sequences shared by the checkers and evaluators."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

SEGMENT_RTOL = 1e-9


@dataclass(frozen=True)
class WeightVector:
    w: tuple[float, ...]

    def __post_init__(self):
        w = tuple(float(v) for v in self.w)
        if len(w) < 2:
            raise DomainError(f"need at least 2 weights, got {len(w)}")
        if not all(math.isfinite(v) for v in w):
            raise DomainError("weights must be finite")
        if not all(v > 0.0 for v in w):
            raise DomainError("weights must be positive")
        object.__setattr__(self, "w", w)

    def __len__(self) -> int:
        return len(self.w)

    @property
    def total(self) -> float:
        return math.fsum(self.w)

    def normalized(self) -> tuple[float, ...]:
        total = self.total
        return tuple(v / total for v in self.w)


@dataclass(frozen=True)
class SampleSequence:
    """Scalars (``x_k`` floats) or vectors (``x_k`` tuples of length d).

    Vector sequences must lie on the segment from ``x_1`` to ``x_n`` with
    non-decreasing position ``t_k`` (``t_1 = 0``, ``t_n = 1``); there is no
    ordering of R^d to appeal to otherwise.
    """

    x: tuple
    interval: tuple[float, float] | None = None

    def __post_init__(self):
        pts = self.x
        if len(pts) < 2:
            raise DomainError(f"need at least 2 points, got {len(pts)}")
        if all(np.ndim(p) == 0 for p in pts):
            pts = tuple(float(p) for p in pts)
            if not all(math.isfinite(p) for p in pts):
                raise DomainError("points must be finite")
            if self.interval is not None:
                a, b = (float(v) for v in self.interval)
                if not a <= b:
                    raise DomainError(f"interval [{a}, {b}] is empty")
                bad = [p for p in pts if not a <= p <= b]
                if bad:
                    raise DomainError(f"point {bad[0]!r} lies outside the interval [{a}, {b}]")
                object.__setattr__(self, "interval", (a, b))
        else:
            pts = tuple(tuple(float(c) for c in np.atleast_1d(p)) for p in pts)
            dims = {len(p) for p in pts}
            if len(dims) != 1:
                raise DomainError(f"vectors of mixed dimension {sorted(dims)}")
            if not np.all(np.isfinite(pts)):
                raise DomainError("points must be finite")
        object.__setattr__(self, "x", pts)
        if self.is_vector:
            self.positions()  # validates the segment shape

    def __len__(self) -> int:
        return len(self.x)

    @property
    def is_vector(self) -> bool:
        return isinstance(self.x[0], tuple)

    @property
    def dim(self) -> int:
        return len(self.x[0]) if self.is_vector else 1

    def array(self) -> np.ndarray:
        return np.asarray(self.x, dtype=float)

    def positions(self) -> tuple[float, ...]:
        """Position of each point along the segment ``x_1 -> x_n`` (scalar mode: the points)."""
        if not self.is_vector:
            return self.x
        X = self.array()
        u = X[-1] - X[0]
        uu = float(u @ u)
        if uu == 0.0:
            if np.any(X != X[0]):
                raise DomainError("unsupported vector input: x_1 = x_n but other points differ")
            return tuple(0.0 for _ in self.x)
        t = (X - X[0]) @ u / uu
        resid = np.linalg.norm(X - X[0] - np.outer(t, u), axis=1)
        scale = np.maximum(1.0, np.linalg.norm(X, axis=1))
        if np.any(resid > SEGMENT_RTOL * scale):
            k = int(np.argmax(resid / scale))
            raise DomainError(f"unsupported vector input: point {k + 1} is off the segment x_1 -> x_n")
        if np.any(np.diff(t) < -SEGMENT_RTOL) or t[0] < -SEGMENT_RTOL or t[-1] > 1 + SEGMENT_RTOL:
            raise DomainError("unsupported vector input: points are not ordered along x_1 -> x_n")
        return tuple(float(v) for v in t)

    def is_sorted(self) -> bool:
        if self.is_vector:
            return True
        return all(a <= b for a, b in zip(self.x, self.x[1:]))


def sort_pairs(w: WeightVector, x: SampleSequence) -> tuple[WeightVector, SampleSequence]:
    """Jointly sort (w_k, x_k) by x_k (stable). Vector sequences are already ordered."""
    if x.is_vector or x.is_sorted():
        return w, x
    if len(w) != len(x):
        raise DomainError(f"{len(w)} weights but {len(x)} points")
    order = sorted(range(len(x)), key=lambda k: x.x[k])
    return (
        WeightVector(tuple(w.w[k] for k in order)),
        SampleSequence(tuple(x.x[k] for k in order), x.interval),
    )
