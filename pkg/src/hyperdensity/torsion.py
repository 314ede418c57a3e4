"""Torsion detection and the constructive density search.

A tuple is of torsion type exactly when u = M^{-1} v is rational.  Near any
point where the Jacobian du/da (g x 2g) is onto, a rational target close to
u(a0) can be hit by a nearby a*: ``find_torsion_near`` does this with
minimal-norm Gauss-Newton steps.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .config import Configuration, margins, validate
from .contour import DEFAULT_TOL
from .errors import HyperError
from .periods import reduced_vector

log = logging.getLogger(__name__)

DEFAULT_STEP = 1e-6
RANK_THRESHOLD = 1e-6
MAX_HALVINGS = 30


@dataclass(frozen=True)
class RationalVector:
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        ents = tuple(Fraction(e) for e in self.entries)
        for e in ents:
            if not 0 < e < 1:
                raise HyperError("BAD_TARGET", f"rational target {e} not in (0, 1)")
        object.__setattr__(self, "entries", ents)

    def as_array(self) -> np.ndarray:
        return np.array([float(e) for e in self.entries])

    def to_list(self) -> list[dict]:
        return [{"p": e.numerator, "q": e.denominator} for e in self.entries]

    def __str__(self) -> str:
        return "(" + ", ".join(str(e) for e in self.entries) + ")"


@dataclass
class TorsionCertificate:
    a0: Configuration
    a_star: Configuration
    target: RationalVector
    residual: float
    distance: float
    iterations: int
    history: list[float] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            "a0": list(self.a0.a),
            "a_star": list(self.a_star.a),
            "target": self.target.to_list(),
            "residual": self.residual,
            "distance": self.distance,
            "iterations": self.iterations,
        }


def _config(a) -> Configuration:
    return a if isinstance(a, Configuration) else validate(a)


def _u(a: Configuration, tol: float) -> np.ndarray:
    return reduced_vector(a, tol).u


def default_step(a: Configuration) -> float:
    return DEFAULT_STEP * min(1.0, min(margins(a)))


def _central(a: Configuration, h: float, tol: float) -> np.ndarray:
    base = a.as_array()
    cols = []
    for k in range(2 * a.g):
        e = np.zeros_like(base)
        e[k] = h
        up = _u(validate(base + e), tol)
        dn = _u(validate(base - e), tol)
        cols.append((up - dn) / (2 * h))
    return np.column_stack(cols)


def jacobian_u(a, h: float | None = None, tol: float = DEFAULT_TOL, richardson: bool = False) -> np.ndarray:
    """g x 2g matrix du_i/da_k by central differences.

    Complex steps are not an option: they would move the cuts off the real
    axis.  With ``richardson`` the h and h/2 estimates are combined.
    """
    a = _config(a)
    h = default_step(a) if h is None else float(h)
    if not min(margins(a)) > 2 * h:
        raise HyperError("MARGIN_TOO_SMALL", f"gap {min(margins(a)):.3g} does not exceed 2h = {2 * h:.3g}")
    J = _central(a, h, tol)
    if richardson:
        J = (4 * _central(a, h / 2, tol) - J) / 3
    return J


def singular_values(J: np.ndarray) -> np.ndarray:
    return np.linalg.svd(np.atleast_2d(J), compute_uv=False)


def rank(J: np.ndarray, rel_threshold: float = RANK_THRESHOLD) -> int:
    s = singular_values(J)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > rel_threshold * s[0]))


def _best_rational(x: float, q_max: int) -> Fraction:
    # limit_denominator returns the closest p/q with q <= q_max, preferring
    # the smaller denominator on a tie
    best = Fraction(x).limit_denominator(q_max)
    if 0 < best < 1:
        return best
    if q_max == 1:
        raise HyperError("BAD_TARGET", "no fraction strictly inside (0, 1) has denominator 1")
    return Fraction(1, q_max) if best <= 0 else Fraction(q_max - 1, q_max)


def nearest_rationals(u: Sequence[float], q_max: int) -> RationalVector:
    """Componentwise best approximation p/q in (0, 1) with q <= q_max."""
    if q_max < 1:
        raise ValueError("q_max must be at least 1")
    return RationalVector(tuple(_best_rational(float(x), int(q_max)) for x in u))


def _search(a0, q_max, tol, max_iter, quad_tol, h, target):
    a0 = _config(a0)
    u = _u(a0, quad_tol)
    target = nearest_rationals(u, q_max) if target is None else target
    t = target.as_array()
    r = u - t
    res = float(np.max(np.abs(r)))
    history = [res]
    a = a0
    start_rank = None
    it = 0
    while res >= tol:
        if it >= max_iter:
            raise HyperError("NO_CONVERGENCE", f"residual {res:.3g} after {max_iter} iterations")
        J = jacobian_u(a, h, quad_tol)
        rk = rank(J)
        if start_rank is None:
            start_rank = rk
            if rk < a.g:
                raise HyperError("RANK_DEFICIENT", f"Jacobian rank {rk} < g = {a.g} at the start point")
        delta = -np.linalg.pinv(J) @ r
        step = 1.0
        left_domain = False
        for _ in range(MAX_HALVINGS):
            try:
                cand = validate(a.as_array() + step * delta)
            except HyperError:
                left_domain = True
                step *= 0.5
                continue
            u_c = _u(cand, quad_tol)
            r_c = u_c - t
            res_c = float(np.max(np.abs(r_c)))
            if res_c < res:
                a, r, res = cand, r_c, res_c
                break
            step *= 0.5
        else:
            if left_domain:
                raise HyperError("LEFT_DOMAIN", "damping could not keep the iterate admissible")
            raise HyperError("NO_CONVERGENCE", f"no damped step reduced the residual below {res:.3g}")
        it += 1
        history.append(res)
        log.debug("iter %d residual %.3e step %.3g", it, res, step)
    distance = float(np.max(np.abs(a.as_array() - a0.as_array())))
    cert = TorsionCertificate(a0, a, target, res, distance, it, history)
    return cert, start_rank


def find_torsion_near(
    a0,
    q_max: int,
    tol: float = 1e-10,
    max_iter: int = 50,
    quad_tol: float = DEFAULT_TOL,
    h: float | None = None,
    target: RationalVector | None = None,
) -> TorsionCertificate:
    """Gauss-Newton on u(a) - target, target = nearest_rationals(u(a0), q_max).

    Each step is the minimal-norm solution of J d = -r; it is halved while the
    trial point leaves the admissible set or fails to lower max|r|.
    """
    return _search(a0, q_max, tol, max_iter, quad_tol, h, target)[0]


def scan_lattice(g: int, grid_per_axis: int, spread: float = 0.5, degenerate: bool = False) -> list[tuple[float, ...]]:
    """A g-dimensional lattice of admissible tuples.

    (-1, 1) is cut into g equal slots; cluster i is centred at fraction
    k/(n+1) of slot i, k = 1..n, with half-width ``spread`` times its distance
    to the nearer slot edge (zero when ``degenerate``).
    """
    n = grid_per_axis
    if g < 1 or n < 1:
        raise ValueError("g and grid_per_axis must be positive")
    if n**g > 10_000:
        raise ValueError(f"lattice has {n**g} points, limit is 10000")
    slot = 2.0 / g
    fracs = [k / (n + 1) for k in range(1, n + 1)]
    points = []
    for idx in np.ndindex(*([n] * g)):
        a = []
        for i, k in enumerate(idx):
            t = fracs[k]
            c = -1.0 + slot * (i + t)
            w = 0.0 if degenerate else spread * slot * min(t, 1 - t)
            a += [c - w, c + w]
        points.append(tuple(a))
    return points


def _scan_point(args) -> dict:
    a, q_max, tol, max_iter, quad_tol = args
    rec = {"a0": list(a)}
    try:
        cert, rk = _search(a, q_max, tol, max_iter, quad_tol, None, None)
    except HyperError as exc:
        rec.update(ok=False, error=exc.to_dict())
        return rec
    if rk is None:
        rk = rank(jacobian_u(cert.a0, None, quad_tol))
    rec.update(ok=True, jacobian_rank=rk, **cert.to_dict())
    return rec


def density_scan(
    g: int,
    grid_per_axis: int,
    q_max: int,
    tol: float = 1e-10,
    max_iter: int = 50,
    quad_tol: float = DEFAULT_TOL,
    degenerate: bool = False,
    workers: int = 1,
) -> dict:
    """Run ``find_torsion_near`` over ``scan_lattice``; per-point failures are recorded."""
    pts = scan_lattice(g, grid_per_axis, degenerate=degenerate)
    jobs = [(a, q_max, tol, max_iter, quad_tol) for a in pts]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            records = list(ex.map(_scan_point, jobs))
    else:
        records = [_scan_point(j) for j in jobs]
    good = [r for r in records if r["ok"]]
    return {
        "g": g,
        "grid": grid_per_axis,
        "q_max": q_max,
        "tol": tol,
        "degenerate": degenerate,
        "n_points": len(records),
        "n_success": len(good),
        "success_rate": len(good) / len(records),
        "max_distance": max((r["distance"] for r in good), default=math.nan),
        "max_residual": max((r["residual"] for r in good), default=math.nan),
        "max_iterations": max((r["iterations"] for r in good), default=0),
        "points": records,
    }
