"""Integration paths and the two quadrature engines.

``integrate`` handles holomorphic integrands along polylines (adaptive
Gauss-Legendre, whole-vs-halves error estimate).  ``integrate_singular_interval``
is a tanh-sinh rule for real integrands with inverse-square-root endpoint
behaviour; it backs the real-interval cross-checks.
"""

from __future__ import annotations

import inspect
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .config import Configuration, margins
from .errors import HyperError

DEFAULT_TOL = 1e-12
MAX_DEPTH = 30
GAUSS_ORDER = 16

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(GAUSS_ORDER)
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class Path:
    """Oriented polyline; ``segments`` is a tuple of (start, end) pairs."""

    segments: tuple[tuple[complex, complex], ...]
    closed: bool = False
    clearance: float = 0.0

    def __post_init__(self):
        segs = tuple((complex(p), complex(q)) for p, q in self.segments)
        object.__setattr__(self, "segments", segs)
        for (_, q), (p, _) in zip(segs, segs[1:]):
            if abs(p - q) > 1e-15:
                raise ValueError("consecutive segments must share endpoints")
        if self.closed and abs(segs[-1][1] - segs[0][0]) > 1e-15:
            raise ValueError("closed path must end where it starts")

    @classmethod
    def polyline(cls, points, closed: bool = False, clearance: float = 0.0) -> "Path":
        pts = [complex(p) for p in points]
        if closed:
            pts.append(pts[0])
        return cls(tuple(zip(pts, pts[1:])), closed, clearance)

    @property
    def vertices(self) -> list[complex]:
        return [self.segments[0][0]] + [q for _, q in self.segments]

    @property
    def start(self) -> complex:
        return self.segments[0][0]

    @property
    def end(self) -> complex:
        return self.segments[-1][1]

    @property
    def length(self) -> float:
        return sum(abs(q - p) for p, q in self.segments)

    def reversed(self) -> "Path":
        return Path(tuple((q, p) for p, q in reversed(self.segments)), self.closed, self.clearance)

    def sample(self, step: float) -> np.ndarray:
        """Points along the path at spacing at most ``step``, endpoints included."""
        chunks = []
        for p, q in self.segments:
            n = max(1, math.ceil(abs(q - p) / step))
            chunks.append(p + (q - p) * np.arange(n) / n)
        chunks.append(np.array([self.end]))
        return np.concatenate(chunks)


@dataclass
class QuadratureResult:
    value: complex
    error_estimate: float
    evaluations: int = 0
    segments_used: int = field(default=0, repr=False)


def rectangle_loop(a: Configuration, j: int, height_scale: float = 1.0) -> Path:
    """Counterclockwise rectangle around the cut of pair ``j`` (1-based).

    Vertical sides sit at the midpoints of the two gaps flanking the pair;
    the horizontal sides at +-min(flanking gaps)/2, times ``height_scale``.
    """
    if not 1 <= j <= a.g:
        raise ValueError(f"loop index {j} outside 1..{a.g}")
    gaps = margins(a)
    lo, hi = a.pair(j)
    left = lo - gaps[j - 1] / 2
    right = hi + gaps[j] / 2
    h = height_scale * min(gaps[j - 1], gaps[j]) / 2
    return Path.polyline(
        [complex(left, -h), complex(right, -h), complex(right, h), complex(left, h)],
        closed=True,
        clearance=min(h, gaps[j - 1] / 2, gaps[j] / 2),
    )


def v_crossing(a: Configuration) -> tuple[float, float]:
    """(epsilon, c): the x-path crosses the real axis at 1 - epsilon, i.e. z = c."""
    eps = (1.0 - max(a.a)) / 2
    return eps, 1.0 / (1.0 - eps)


def v_path(a: Configuration, height: float = 0.5) -> tuple[Path, Path, float]:
    """The z-plane path for v, split at the crossing point c.

    ``lower`` runs 0 -> c below the real axis and ``upper`` runs c -> 0 above
    it.  Under x = 1/z this is the x-plane loop around [1, inf) traversed
    clockwise, so its integral of the pulled-back differential is -v.
    """
    eps, c = v_crossing(a)
    amax = max(a.a)
    gap = (1.0 / amax - c) if amax > 0 else math.inf
    clearance = min(height, c - 1.0, gap)
    lower = Path.polyline([0.0, complex(0, -height), complex(c, -height), c], clearance=clearance)
    upper = Path.polyline([c, complex(c, height), complex(0, height), 0.0], clearance=clearance)
    return lower, upper, c


def _gl(fun, p: complex, q: complex):
    mid = 0.5 * (p + q)
    half = 0.5 * (q - p)
    vals = np.asarray(fun(mid + half * _GL_NODES), dtype=complex)
    return half * np.dot(_GL_WEIGHTS, vals), abs(half) * np.dot(_GL_WEIGHTS, np.abs(vals))


def integrate(path: Path, integrand: Callable, tol: float = DEFAULT_TOL, max_depth: int = MAX_DEPTH) -> QuadratureResult:
    """Adaptive Gauss-Legendre integral of a vectorised holomorphic integrand."""
    total_len = path.length
    value = 0j
    err_total = 0.0
    nevals = 0
    nseg = 0
    for p, q in path.segments:
        seg_len = abs(q - p)
        if seg_len == 0.0:
            continue
        whole, mag = _gl(integrand, p, q)
        nevals += GAUSS_ORDER
        stack = [(p, q, whole, mag, 0)]
        while stack:
            s, e, coarse, cmag, depth = stack.pop()
            m = 0.5 * (s + e)
            left, lmag = _gl(integrand, s, m)
            right, rmag = _gl(integrand, m, e)
            nevals += 2 * GAUSS_ORDER
            fine = left + right
            err = abs(fine - coarse)
            share = tol * abs(e - s) / total_len
            roundoff = 50 * _EPS * (lmag + rmag)
            if err <= max(share, roundoff):
                value += fine
                err_total += err
                nseg += 1
            elif depth >= max_depth:
                raise HyperError(
                    "NO_CONVERGENCE",
                    f"adaptive subdivision exceeded depth {max_depth} near {m:.6g}",
                )
            else:
                stack.append((s, m, left, lmag, depth + 1))
                stack.append((m, e, right, rmag, depth + 1))
    return QuadratureResult(complex(value), float(err_total), nevals, nseg)


_TS_T_MAX = 4.5
_TS_MAX_LEVEL = 12


def _wants_distances(fun) -> bool:
    try:
        return len(inspect.signature(fun).parameters) >= 3
    except (TypeError, ValueError):
        return False


def integrate_singular_interval(
    lo: float,
    hi: float,
    integrand: Callable,
    tol: float = DEFAULT_TOL,
    max_level: int = _TS_MAX_LEVEL,
) -> float:
    """Tanh-sinh quadrature of a real integrand over (lo, hi).

    The integrand is called on numpy arrays, either as ``f(x)`` or, if it
    takes three arguments, as ``f(x, x - lo, hi - x)`` with the endpoint
    distances computed without cancellation.  Use the second form for
    integrands singular at the endpoints.
    """
    if not hi > lo:
        raise ValueError("need lo < hi")
    three = _wants_distances(integrand)
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)

    def level_sum(t):
        u = 0.5 * math.pi * np.sinh(t)
        with np.errstate(over="ignore"):
            e2 = np.exp(-2.0 * np.abs(u))
        # 1 - tanh|u| and 1 + tanh|u|, both without cancellation
        small = 2.0 * e2 / (1.0 + e2)
        big = 2.0 / (1.0 + e2)
        dlo = half * np.where(u < 0, small, big)
        dhi = half * np.where(u < 0, big, small)
        x = np.where(u < 0, lo + dlo, hi - dhi)
        w = half * 0.5 * math.pi * np.cosh(t) * 4.0 * e2 / (1.0 + e2) ** 2
        keep = (dlo > 0) & (dhi > 0) & (w > 0)
        x, dlo, dhi, w = x[keep], dlo[keep], dhi[keep], w[keep]
        vals = integrand(x, dlo, dhi) if three else integrand(x)
        return float(np.dot(w, np.asarray(vals, dtype=float))), len(x)

    h = 1.0
    t0 = np.arange(-_TS_T_MAX, _TS_T_MAX + 0.5 * h, h)
    acc, _ = level_sum(t0)
    est = acc * h
    for level in range(1, max_level + 1):
        h *= 0.5
        t_new = np.arange(-_TS_T_MAX + h, _TS_T_MAX, 2 * h)
        s_new, _ = level_sum(t_new)
        acc += s_new
        new_est = acc * h
        if level >= 3 and abs(new_est - est) <= max(tol, 10 * _EPS * abs(new_est)):
            return new_est
        est = new_est
    raise HyperError("NO_CONVERGENCE", f"tanh-sinh did not reach tol {tol:g} in {max_level} levels")
