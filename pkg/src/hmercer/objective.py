"""The function ``f`` under test: a scalar expression or a p-norm on R^d."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError
from .expr import Expression, evaluate, evaluate_array, parse

BUILTINS: dict[str, str] = {
    "linear": "x",
    "square": "x^2",
    "cube": "x^3",
    "abs": "abs(x)",
    "exp": "exp(x)",
    "sqrt": "sqrt(x)",
    "reciprocal": "1/x",
    "xlnx": "x*ln(x)",
}


@dataclass(frozen=True)
class ObjectiveSpec:
    """``kind`` is ``builtin``, ``expression`` or ``norm``.

    For ``norm`` the function is ``x -> ||x||_p`` on vectors of length ``d``;
    ``p = inf`` gives the max-norm.
    """

    kind: str
    name: str = ""
    expr: Expression | None = None
    p: float = 2.0
    d: int = 1

    @classmethod
    def builtin(cls, name: str) -> "ObjectiveSpec":
        if name not in BUILTINS:
            raise ConfigError(f"unknown builtin {name!r}; choose from {sorted(BUILTINS)}", "f.spec")
        return cls("builtin", name, parse(BUILTINS[name]))

    @classmethod
    def expression(cls, source: str | Expression) -> "ObjectiveSpec":
        e = source if isinstance(source, Expression) else parse(source)
        return cls("expression", e.source or str(e), e)

    @classmethod
    def norm(cls, p: float = 2.0, d: int = 1) -> "ObjectiveSpec":
        if not p >= 1.0:
            raise ConfigError(f"p must be >= 1, got {p!r}", "f.p")
        if d < 1:
            raise ConfigError(f"d must be >= 1, got {d!r}", "f.d")
        return cls("norm", f"norm_{p:g}", None, float(p), int(d))

    @property
    def is_norm(self) -> bool:
        return self.kind == "norm"

    @property
    def is_vector(self) -> bool:
        return self.kind == "norm" and self.d > 1

    def __call__(self, x):
        if self.kind == "norm":
            v = np.atleast_1d(np.asarray(x, dtype=float))
            if v.shape[-1] != self.d:
                raise DomainError(f"expected a vector of length {self.d}, got shape {v.shape}")
            return float(np.linalg.norm(v, ord=self.p))
        return evaluate(self.expr, x)

    def many(self, xs) -> np.ndarray:
        """Evaluate on an array of points (scalars, or rows of vectors for norms)."""
        xs = np.asarray(xs, dtype=float)
        if self.kind == "norm":
            if self.d == 1 and (xs.ndim == 0 or xs.shape[-1] != 1):
                return np.abs(xs)
            return np.linalg.norm(xs, ord=self.p, axis=-1)
        return evaluate_array(self.expr, xs)

    def describe(self) -> dict:
        if self.kind == "norm":
            return {"kind": "norm", "p": self.p if math.isfinite(self.p) else "inf", "d": self.d}
        return {"kind": self.kind, "spec": self.name}
