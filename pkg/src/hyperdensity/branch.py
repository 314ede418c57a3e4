"""The chosen holomorphic square root of f off the branch cuts.

Cuts are (-inf, -1], [1, inf) and one segment [lo, hi] per pair (a puncture
when lo == hi).  Conventions:

* sqrt(x^2 - 1) has positive imaginary part off the outer cuts;
* sqrt((x - lo)(x - hi)) is the branch asymptotic to x at infinity, so it is
  positive for real x > hi (and, by holomorphy, negative for real x < lo).

All evaluators accept scalars or numpy arrays.
"""

from __future__ import annotations

import numpy as np

from .config import Configuration
from .errors import HyperError

CUT_TOL = 1e-15

LOWER = "LOWER"
UPPER = "UPPER"


def _result(x, out):
    return complex(out) if np.ndim(x) == 0 else out


def _dist_to_segment(x: np.ndarray, lo: float, hi: float) -> np.ndarray:
    re = np.clip(x.real, lo, hi)
    return np.hypot(x.real - re, x.imag)


def _dist_to_outer_cuts(x: np.ndarray) -> np.ndarray:
    left = np.hypot(np.maximum(x.real + 1.0, 0.0), x.imag)
    right = np.hypot(np.minimum(x.real - 1.0, 0.0), x.imag)
    return np.minimum(left, right)


def _check(mask: np.ndarray, what: str) -> None:
    if np.any(mask):
        raise HyperError("ON_CUT", f"evaluation point within {CUT_TOL:g} of {what}")


def sqrt_x2_minus_1(x):
    """sqrt(x^2 - 1) with strictly positive imaginary part."""
    xa = np.asarray(x, dtype=complex)
    _check(_dist_to_outer_cuts(xa) < CUT_TOL, "(-inf,-1] or [1,inf)")
    w = np.sqrt((xa - 1.0) * (xa + 1.0))
    w = np.where(w.imag < 0, -w, w)
    return _result(x, w)


def _pair_branch(lo: float, hi: float, xa: np.ndarray) -> np.ndarray:
    m = 0.5 * (lo + hi)
    r = 0.5 * (hi - lo)
    d = xa - m
    if r == 0.0:
        return d
    far = np.abs(d) > r
    out = np.empty_like(xa)
    with np.errstate(divide="ignore", invalid="ignore"):
        df = d[far]
        out[far] = df * np.sqrt(1.0 - (r / df) ** 2)
    near = ~far
    if np.any(near):
        xn = xa[near]
        s = np.sqrt((xn - lo) * (xn - hi))
        # the branch maps each open half-plane to itself
        flip = np.where(xn.imag != 0, s.imag * xn.imag < 0, s.real * (xn.real - m) < 0)
        out[near] = np.where(flip, -s, s)
    return out


def sqrt_pair(a_lo: float, a_hi: float, x):
    """sqrt((x - a_lo)(x - a_hi)), positive for real x > a_hi, holomorphic off [a_lo, a_hi]."""
    lo, hi = min(a_lo, a_hi), max(a_lo, a_hi)
    xa = np.atleast_1d(np.asarray(x, dtype=complex))
    _check(_dist_to_segment(xa, lo, hi) < CUT_TOL, f"[{lo!r}, {hi!r}]")
    out = _pair_branch(lo, hi, xa)
    return _result(x, out.reshape(np.shape(x)))


class BranchedSqrt:
    """Evaluator of sqrt(f) for one configuration."""

    def __init__(self, config: Configuration):
        self.config = config

    def __call__(self, x):
        return self.sqrt_f(x)

    def sqrt_f(self, x):
        xa = np.atleast_1d(np.asarray(x, dtype=complex))
        out = np.asarray(sqrt_x2_minus_1(xa), dtype=complex)
        for lo, hi in self.config.pairs:
            out = out * sqrt_pair(lo, hi, xa)
        return _result(x, out.reshape(np.shape(x)))

    def distance_to_cuts(self, x) -> np.ndarray:
        xa = np.asarray(x, dtype=complex)
        d = _dist_to_outer_cuts(xa)
        for lo, hi in self.config.pairs:
            d = np.minimum(d, _dist_to_segment(xa, lo, hi))
        return d

    def sqrt_F(self, z, side: str = LOWER):
        """Branch of sqrt(F(z)), F(z) = (1 - z^2) prod (1 - a_i z), under z = 1/x.

        Off the real axis this is z^(g+1) * sqrt_f(1/z), computed without
        forming 1/z where that would overflow.  That function tends to +1 as
        z -> 0 from the lower half-plane and to -1 from the upper one; at
        z = 0 itself ``side`` picks the limit.  Real z on an image of a cut
        raises ON_CUT.
        """
        if side not in (LOWER, UPPER):
            raise ValueError(f"side must be {LOWER!r} or {UPPER!r}")
        za = np.atleast_1d(np.asarray(z, dtype=complex))
        self._check_z(za)
        zero = za == 0
        w = np.sqrt((1.0 - za) * (1.0 + za))
        with np.errstate(divide="ignore", invalid="ignore"):
            flip = (w * np.conj(za)).imag < 0
        out = np.where(flip, -w, w)
        out = np.where(zero, 1.0 if side == LOWER else -1.0, out)
        for lo, hi in self.config.pairs:
            out = out * self._pair_factor_z(lo, hi, za)
        return _result(z, out.reshape(np.shape(z)))

    @staticmethod
    def _pair_factor_z(lo: float, hi: float, za: np.ndarray) -> np.ndarray:
        # z * sqrt_pair(lo, hi, 1/z)
        m = 0.5 * (lo + hi)
        r = 0.5 * (hi - lo)
        one_mz = 1.0 - m * za
        far = np.abs(one_mz) > r * np.abs(za)
        out = np.empty_like(za)
        out[far] = one_mz[far] * np.sqrt(1.0 - (r * za[far] / one_mz[far]) ** 2)
        near = ~far
        if np.any(near):
            zn = za[near]
            out[near] = zn * _pair_branch(lo, hi, 1.0 / zn)
        return out

    def _check_z(self, za: np.ndarray) -> None:
        real = (np.abs(za.imag) < CUT_TOL) & (za != 0)
        if not np.any(real):
            return
        zr = za.real[real]
        with np.errstate(divide="ignore"):
            x = 1.0 / zr
        bad = np.abs(x) >= 1.0 - CUT_TOL
        for lo, hi in self.config.pairs:
            bad |= (x >= lo - CUT_TOL) & (x <= hi + CUT_TOL)
        _check(bad, "the image of a branch cut under z = 1/x")


def sqrt_f(config: Configuration, x):
    return BranchedSqrt(config).sqrt_f(x)


def sqrt_F(config: Configuration, z, side: str = LOWER):
    return BranchedSqrt(config).sqrt_F(z, side)


def track_sqrt(squares, start: complex) -> np.ndarray:
    """Continue a square root along a densely sampled path.

    ``squares`` holds the radicand at consecutive path points; at each step the
    root closest to the previous value is kept.  Used as an oracle for the
    closed-form branches above.
    """
    sq = np.asarray(squares, dtype=complex)
    out = np.empty_like(sq)
    prev = complex(start)
    for k, s in enumerate(sq):
        r = np.sqrt(s)
        if abs(r - prev) > abs(r + prev):
            r = -r
        out[k] = r
        prev = r
    return out
