"""Closed forms on the fully degenerate locus a_{2i-1} = a_{2i} = b_i.

There the curve is a nodal rational curve and, in the partial-fraction basis
dx / ((x - b_i) sqrt(x^2 - 1)), everything is elementary:

    M = diag(2 pi / sqrt(1 - b_i^2))
    v_i = 2 arccos(-b_i) / sqrt(1 - b_i^2)
    u_i = arccos(-b_i) / pi
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .branch import sqrt_x2_minus_1
from .config import DegenerateConfig, embed_degenerate
from .contour import DEFAULT_TOL, integrate_singular_interval
from .periods import Basis, period_matrix


def _as_degenerate(b) -> DegenerateConfig:
    return b if isinstance(b, DegenerateConfig) else DegenerateConfig(tuple(b))


@dataclass(frozen=True)
class DegenerateClosedForm:
    b: DegenerateConfig
    M_diag: np.ndarray
    v: np.ndarray
    u: np.ndarray
    du_db_diag: np.ndarray

    @property
    def M(self) -> np.ndarray:
        return np.diag(self.M_diag)

    def to_dict(self) -> dict:
        g = self.b.g
        return {
            "g": g,
            "b": list(self.b.b),
            "a": [x for bi in self.b.b for x in (bi, bi)],
            "M": self.M.tolist(),
            "v": self.v.tolist(),
            "u": self.u.tolist(),
            "du_db_diag": self.du_db_diag.tolist(),
        }


def closed_form(b) -> DegenerateClosedForm:
    b = _as_degenerate(b)
    bb = np.array(b.b)
    s = np.sqrt(1.0 - bb * bb)
    acos = np.arccos(-bb)
    return DegenerateClosedForm(
        b=b,
        M_diag=2 * math.pi / s,
        v=2 * acos / s,
        u=acos / math.pi,
        # derivative of arccos(-b)/pi
        du_db_diag=1.0 / (math.pi * s),
    )


def partial_fraction_periods(b, tol: float = DEFAULT_TOL) -> np.ndarray:
    """The general contour engine run in the partial-fraction basis."""
    b = _as_degenerate(b)
    return period_matrix(embed_degenerate(b), Basis.partial_fraction(b.b), tol)


def offdiagonal_check(b, tol: float = DEFAULT_TOL) -> float:
    """Largest |M_ij|, i != j, of ``partial_fraction_periods``; 0 for g = 1."""
    M = partial_fraction_periods(b, tol)
    off = M - np.diag(np.diag(M))
    return float(np.max(np.abs(off))) if M.shape[0] > 1 else 0.0


def residue_period(b, i: int) -> float:
    """2 pi i Res_{x=b_i} dx / ((x - b_i) sqrt(x^2 - 1)), with i 1-based."""
    b = _as_degenerate(b)
    val = 2j * math.pi / sqrt_x2_minus_1(complex(b.b[i - 1]))
    return float(val.real)


def v_by_t_substitution(b, tol: float = DEFAULT_TOL) -> np.ndarray:
    """v_i = int_0^1 4 dt / (t^2 - 2 b_i t + 1), from t = x - sqrt(x^2 - 1)."""
    b = _as_degenerate(b)
    return np.array(
        [integrate_singular_interval(0.0, 1.0, lambda t, bi=bi: 4.0 / (t * t - 2 * bi * t + 1.0), tol) for bi in b.b]
    )
