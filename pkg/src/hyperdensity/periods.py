"""Period matrix M, the vector v and the reduced vector u = M^{-1} v.

Differentials are p_i(x) dx / sqrt(f(x)) with deg p_i <= g - 1; a ``Basis``
stores the coefficient rows (constant term first).  M_ij is the integral of
the i-th differential around the rectangle enclosing the j-th cut.  v_i is
twice the integral from 1 to infinity, evaluated after z = 1/x, where the
differential becomes -q_i(z) dz / sqrt(F(z)) with q_i the reversed
polynomial and F(z) = (1 - z^2) prod (1 - a_i z).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .branch import LOWER, UPPER, BranchedSqrt
from .config import Configuration, validate
from .contour import DEFAULT_TOL, integrate, integrate_singular_interval, rectangle_loop, v_path
from .errors import HyperError

IMAG_LIMIT = 1e-9
SOLVE_RESIDUAL = 1e-10


@dataclass(frozen=True)
class Basis:
    coeffs: np.ndarray  # g x g, row i holds p_i

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise HyperError("BAD_BASIS", f"need a square coefficient matrix, got shape {c.shape}")
        s = np.linalg.svd(c, compute_uv=False)
        if s[-1] <= 1e-10 * s[0]:
            raise HyperError("BAD_BASIS", "basis polynomials are linearly dependent")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def g(self) -> int:
        return self.coeffs.shape[0]

    @classmethod
    def standard(cls, g: int) -> "Basis":
        """x^k dx / sqrt(f), k = 0..g-1."""
        return cls(np.eye(g))

    @classmethod
    def partial_fraction(cls, b) -> "Basis":
        """p_i = prod_{l != i} (x - b_l), i.e. dx / ((x - b_i) sqrt(x^2 - 1)) on the degenerate locus."""
        b = list(b)
        rows = []
        for i in range(len(b)):
            others = [bl for l, bl in enumerate(b) if l != i]
            # np.poly gives highest degree first
            rows.append(np.poly(others)[::-1] if others else np.ones(1))
        return cls(np.array(rows, dtype=float))

    def transformed(self, change: np.ndarray) -> "Basis":
        return Basis(np.asarray(change, dtype=float) @ self.coeffs)

    def x_poly(self, i: int, x):
        return np.polynomial.polynomial.polyval(x, self.coeffs[i])

    def z_poly(self, i: int, z):
        """q_i(z) = z^(g-1) p_i(1/z)."""
        return np.polynomial.polynomial.polyval(z, self.coeffs[i][::-1])


@dataclass(frozen=True)
class PeriodData:
    g: int
    a: tuple[float, ...]
    M: np.ndarray
    v: np.ndarray
    u: np.ndarray
    cond_M: float
    max_imag: float
    tol: float

    def to_dict(self) -> dict:
        return {
            "g": self.g,
            "a": list(self.a),
            "M": self.M.tolist(),
            "v": self.v.tolist(),
            "u": self.u.tolist(),
            "cond_M": self.cond_M,
            "max_imag": self.max_imag,
            "tol": self.tol,
        }


def _check_basis(a: Configuration, basis: Basis | None) -> Basis:
    basis = Basis.standard(a.g) if basis is None else basis
    if basis.g != a.g:
        raise HyperError("BAD_BASIS", f"basis has {basis.g} elements, genus is {a.g}")
    return basis


def _real(z: complex, tol: float, what: str) -> tuple[float, float]:
    limit = max(IMAG_LIMIT, 10 * tol)
    if abs(z.imag) >= limit:
        raise HyperError("IMAG_TOO_LARGE", f"{what} has imaginary part {z.imag:.3g} (limit {limit:g})")
    return z.real, abs(z.imag)


def period_matrix_complex(
    a: Configuration, basis: Basis | None = None, tol: float = DEFAULT_TOL, height_scale: float = 1.0
) -> np.ndarray:
    """Raw contour integrals M_ij before the imaginary parts are dropped."""
    basis = _check_basis(a, basis)
    root = BranchedSqrt(a)
    out = np.empty((a.g, a.g), dtype=complex)
    for j in range(1, a.g + 1):
        loop = rectangle_loop(a, j, height_scale)
        for i in range(a.g):
            res = integrate(loop, lambda x, i=i: basis.x_poly(i, x) / root.sqrt_f(x), tol)
            out[i, j - 1] = res.value
    return out


def period_matrix(
    a: Configuration,
    basis: Basis | None = None,
    tol: float = DEFAULT_TOL,
    height_scale: float = 1.0,
    return_imag: bool = False,
):
    """Real g x g matrix of loop integrals; optionally also the largest dropped imaginary part."""
    raw = period_matrix_complex(a, basis, tol, height_scale)
    for idx, z in np.ndenumerate(raw):
        _real(complex(z), tol, f"M[{idx[0] + 1},{idx[1] + 1}]")
    M = raw.real.copy()
    max_imag = float(np.max(np.abs(raw.imag)))
    return (M, max_imag) if return_imag else M


def v_vector_interval(a: Configuration, basis: Basis | None = None, tol: float = DEFAULT_TOL) -> np.ndarray:
    """v_i = 2 int_0^1 q_i(z) dz / sqrt(F(z)), F > 0 on (0, 1)."""
    basis = _check_basis(a, basis)

    def sqrt_F(z, dhi):
        F = dhi * (1.0 + z)
        for ai in a.a:
            F = F * (1.0 - ai * z)
        return np.sqrt(F)

    return np.array(
        [
            2.0 * integrate_singular_interval(0.0, 1.0, lambda z, dlo, dhi, i=i: basis.z_poly(i, z) / sqrt_F(z, dhi), tol)
            for i in range(a.g)
        ]
    )


def v_vector_contour(
    a: Configuration,
    basis: Basis | None = None,
    tol: float = DEFAULT_TOL,
    return_imag: bool = False,
    height: float = 0.5,
):
    """v from the split z-plane path, LOWER branch below the axis and UPPER above."""
    basis = _check_basis(a, basis)
    root = BranchedSqrt(a)
    lower, upper, _ = v_path(a, height)
    out = []
    imag = 0.0
    for i in range(a.g):
        lo = integrate(lower, lambda z, i=i: basis.z_poly(i, z) / root.sqrt_F(z, LOWER), tol).value
        up = integrate(upper, lambda z, i=i: basis.z_poly(i, z) / root.sqrt_F(z, UPPER), tol).value
        # the path is the clockwise image of the x-loop and the pulled-back
        # differential carries a minus sign; the two cancel
        re, im = _real(lo + up, tol, f"v[{i + 1}]")
        out.append(re)
        imag = max(imag, im)
    v = np.array(out)
    return (v, imag) if return_imag else v


def v_vector(a: Configuration, basis: Basis | None = None, tol: float = DEFAULT_TOL, method: str = "interval") -> np.ndarray:
    if method == "interval":
        return v_vector_interval(a, basis, tol)
    if method == "contour":
        return v_vector_contour(a, basis, tol)
    raise ValueError(f"unknown v method {method!r}")


def solve_reduced(M: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, float]:
    """u = M^{-1} v by LU with partial pivoting; returns (u, cond(M))."""
    cond = float(np.linalg.cond(M))
    if not np.isfinite(cond):
        raise HyperError("SINGULAR_M", "period matrix is numerically singular (cond = inf)")
    try:
        lu = scipy.linalg.lu_factor(M, check_finite=True)
    except (ValueError, scipy.linalg.LinAlgError) as exc:
        raise HyperError("SINGULAR_M", str(exc)) from exc
    u = scipy.linalg.lu_solve(lu, v)
    resid = float(np.max(np.abs(M @ u - v)))
    if not resid < SOLVE_RESIDUAL * max(float(np.max(np.abs(v))), 1e-300):
        raise HyperError("SINGULAR_M", f"solve residual {resid:.3g} too large (cond_M = {cond:.3g})")
    return u, cond


def reduced_vector(
    a: Configuration,
    tol: float = DEFAULT_TOL,
    basis: Basis | None = None,
    v_method: str = "interval",
) -> PeriodData:
    """M, v and u = M^{-1} v in one record; u does not depend on ``basis``."""
    basis = _check_basis(a, basis)
    M, imag_m = period_matrix(a, basis, tol, return_imag=True)
    if v_method == "contour":
        v, imag_v = v_vector_contour(a, basis, tol, return_imag=True)
    else:
        v, imag_v = v_vector(a, basis, tol, v_method), 0.0
    u, cond = solve_reduced(M, v)
    return PeriodData(a.g, a.a, M, v, u, cond, max(imag_m, imag_v), tol)


def u_of(a, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Shorthand: u for a raw tuple or a Configuration."""
    cfg = a if isinstance(a, Configuration) else validate(a)
    return reduced_vector(cfg, tol).u
