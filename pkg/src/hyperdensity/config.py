"""Parameter tuples a = (a_1, ..., a_2g) and their degenerate subfamily.

A tuple is admissible when the g pairs (a_{2j-1}, a_{2j}) form clusters that
sit strictly inside (-1, 1) and are strictly separated from each other.  The
two members of one pair may coincide; such a pair is a double root of f.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import HyperError

NEAR_DEGENERATE = 1e-12


@dataclass(frozen=True)
class Classification:
    kind: str  # "GENERIC" | "DEGENERATE_AT" | "FULLY_DEGENERATE"
    pairs: tuple[int, ...] = ()  # 1-based indices of coincident pairs

    @property
    def tag(self) -> str:
        if self.kind == "DEGENERATE_AT":
            return "DEGENERATE_AT(" + ",".join(str(j) for j in self.pairs) + ")"
        return self.kind

    def __str__(self) -> str:
        return self.tag


@dataclass(frozen=True)
class Configuration:
    """A validated tuple; within each pair the smaller value is stored first."""

    g: int
    a: tuple[float, ...]

    def pair(self, j: int) -> tuple[float, float]:
        """Pair ``j`` (1-based) as ``(lo, hi)``."""
        return self.a[2 * j - 2], self.a[2 * j - 1]

    @property
    def pairs(self) -> list[tuple[float, float]]:
        return [self.pair(j) for j in range(1, self.g + 1)]

    @property
    def classification(self) -> Classification:
        coincident = tuple(j for j, (lo, hi) in enumerate(self.pairs, 1) if lo == hi)
        if not coincident:
            return Classification("GENERIC")
        if len(coincident) == self.g:
            return Classification("FULLY_DEGENERATE", coincident)
        return Classification("DEGENERATE_AT", coincident)

    def as_array(self) -> np.ndarray:
        return np.array(self.a, dtype=float)

    def f(self, x):
        """f(x) = (x^2 - 1) prod (x - a_i)."""
        out = x * x - 1.0
        for ai in self.a:
            out = out * (x - ai)
        return out


@dataclass(frozen=True)
class DegenerateConfig:
    b: tuple[float, ...]

    def __post_init__(self):
        b = tuple(float(x) for x in self.b)
        object.__setattr__(self, "b", b)
        if not b:
            raise HyperError("EMPTY", "need at least one node b_i")
        for bi in b:
            if not -1.0 < bi < 1.0:
                raise HyperError("ENDPOINT_VIOLATION", f"b value {bi!r} not in (-1, 1)")
        for lo, hi in zip(b, b[1:]):
            if not lo < hi:
                raise HyperError("NOT_INCREASING", f"b is not strictly increasing: {lo!r} >= {hi!r}")

    @property
    def g(self) -> int:
        return len(self.b)


def validate(a: Sequence[float]) -> Configuration:
    """Check the admissibility inequalities and normalise pair order.

    Raises ``HyperError`` with code ``ODD_LENGTH``, ``ENDPOINT_VIOLATION`` or
    ``PAIR_OVERLAP``.
    """
    vals = [float(x) for x in a]
    if not vals or len(vals) % 2:
        raise HyperError("ODD_LENGTH", f"need a positive even number of values, got {len(vals)}")
    if any(not np.isfinite(x) for x in vals):
        raise HyperError("ENDPOINT_VIOLATION", "values must be finite")
    g = len(vals) // 2
    pairs = [(min(vals[2 * j], vals[2 * j + 1]), max(vals[2 * j], vals[2 * j + 1])) for j in range(g)]
    if not -1.0 < pairs[0][0]:
        raise HyperError("ENDPOINT_VIOLATION", f"min(a_1, a_2) = {pairs[0][0]!r} must exceed -1")
    if not pairs[-1][1] < 1.0:
        raise HyperError("ENDPOINT_VIOLATION", f"max(a_{2*g-1}, a_{2*g}) = {pairs[-1][1]!r} must be below 1")
    for j in range(g - 1):
        if not pairs[j][1] < pairs[j + 1][0]:
            raise HyperError(
                "PAIR_OVERLAP",
                f"max of pair {j + 1} ({pairs[j][1]!r}) must be below min of pair {j + 2} ({pairs[j + 1][0]!r})",
            )
    for j, (lo, hi) in enumerate(pairs, 1):
        if 0.0 < hi - lo < NEAR_DEGENERATE:
            warnings.warn(f"pair {j} is nearly coincident (width {hi - lo:.3g})", stacklevel=2)
    return Configuration(g, tuple(x for p in pairs for x in p))


def embed_degenerate(b: DegenerateConfig | Sequence[float]) -> Configuration:
    """The fully degenerate tuple a_{2i-1} = a_{2i} = b_i."""
    if not isinstance(b, DegenerateConfig):
        b = DegenerateConfig(tuple(b))
    return validate([x for bi in b.b for x in (bi, bi)])


def margins(a: Configuration) -> list[float]:
    """Widths of the g + 1 open gaps between -1, the pair clusters, and 1."""
    edges = [-1.0]
    for lo, hi in a.pairs:
        edges += [lo, hi]
    edges.append(1.0)
    return [edges[2 * k + 1] - edges[2 * k] for k in range(a.g + 1)]
