"""Independent checks of the contour engine.

For separated roots the loop integral around the j-th cut collapses onto the
segment: M_ij = 2 * sigma_j * int x^(i-1) / sqrt|f(x)| over [a_{2j-1}, a_{2j}].
Just below the segment sqrt(x^2 - 1) = i sqrt(1 - x^2), the own pair factor
is -i sqrt|.|, pairs to the left are positive and pairs to the right
negative, so sigma_j = (-1)^(g - j).

For g = 1 the same integral is a complete elliptic integral of the first kind
with four real branch points -1 < a_1 < a_2 < 1, evaluated by the AGM.
"""

from __future__ import annotations

import math

import numpy as np

from .config import Configuration
from .contour import DEFAULT_TOL, integrate_singular_interval
from .errors import HyperError
from .periods import period_matrix, v_vector_contour, v_vector_interval


def _require_generic(a: Configuration) -> None:
    if a.classification.kind != "GENERIC":
        raise HyperError("NOT_GENERIC", f"real-interval periods need distinct roots, got {a.classification.tag}")


def interval_sign(a: Configuration, j: int) -> int:
    return -1 if (a.g - j) % 2 else 1


def real_interval_period(a: Configuration, i: int, j: int, tol: float = DEFAULT_TOL) -> float:
    """M_ij (1-based) by tanh-sinh on the j-th segment."""
    _require_generic(a)
    lo, hi = a.pair(j)
    others = [p for k, p in enumerate(a.pairs, 1) if k != j]

    def integrand(x, dlo, dhi):
        absf = (1.0 - x) * (1.0 + x) * dlo * dhi
        for plo, phi in others:
            absf = absf * np.abs((x - plo) * (x - phi))
        return x ** (i - 1) / np.sqrt(absf)

    return 2.0 * interval_sign(a, j) * integrate_singular_interval(lo, hi, integrand, tol)


def real_interval_matrix(a: Configuration, tol: float = DEFAULT_TOL) -> np.ndarray:
    return np.array([[real_interval_period(a, i, j, tol) for j in range(1, a.g + 1)] for i in range(1, a.g + 1)])


def agm(x: float, y: float, tol: float = 1e-16) -> float:
    for _ in range(64):
        if abs(x - y) <= tol * abs(x):
            break
        x, y = 0.5 * (x + y), math.sqrt(x * y)
    return 0.5 * (x + y)


def ellipk_agm(kprime: float) -> float:
    """K as a function of the complementary modulus k' = sqrt(1 - k^2)."""
    return math.pi / (2.0 * agm(1.0, kprime))


def agm_complete_elliptic(a: Configuration, tol: float = DEFAULT_TOL) -> float:
    """2 int_{a1}^{a2} dx / sqrt(-f(x)) for g = 1.

    With roots e1 < e2 < e3 < e4 and x in (e2, e3),
    int dx / sqrt((x-e1)(x-e2)(e3-x)(e4-x)) = 2 K(k) / sqrt((e4-e2)(e3-e1)),
    k^2 = (e3-e2)(e4-e1) / ((e4-e2)(e3-e1)).  Here e = (-1, a1, a2, 1).
    """
    if a.g != 1:
        raise HyperError("NOT_GENUS_1", f"AGM reduction needs g = 1, got g = {a.g}")
    _require_generic(a)
    a1, a2 = a.pair(1)
    denom = (1.0 - a1) * (1.0 + a2)
    # 1 - k^2 factors as (1 + a1)(1 - a2) / denom
    kprime = math.sqrt((1.0 + a1) * (1.0 - a2) / denom)
    return 2.0 * 2.0 * ellipk_agm(kprime) / math.sqrt(denom)


def three_way(a: Configuration, tol: float = DEFAULT_TOL) -> dict:
    """Contour vs tanh-sinh (vs AGM for g = 1) agreement table."""
    M = period_matrix(a, tol=tol)
    v_c = v_vector_contour(a, tol=tol)
    v_i = v_vector_interval(a, tol=tol)
    out = {
        "g": a.g,
        "a": list(a.a),
        "classification": a.classification.tag,
        "M_contour": M.tolist(),
        "v_contour": v_c.tolist(),
        "v_interval": v_i.tolist(),
        "max_dev_v": float(np.max(np.abs(v_c - v_i))),
    }
    if a.classification.kind == "GENERIC":
        M_i = real_interval_matrix(a, tol)
        out["M_interval"] = M_i.tolist()
        out["max_dev_M"] = float(np.max(np.abs(M - M_i)))
        if a.g == 1:
            k = agm_complete_elliptic(a, tol)
            out["M_agm"] = k
            out["max_dev_agm"] = max(abs(k - M[0, 0]), abs(k - M_i[0, 0]))
    return out
