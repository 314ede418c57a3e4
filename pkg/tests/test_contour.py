import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hyperdensity.branch import BranchedSqrt, sqrt_x2_minus_1
from hyperdensity.config import validate
from hyperdensity.contour import (
    Path,
    integrate,
    integrate_singular_interval,
    rectangle_loop,
    v_crossing,
    v_path,
)
from hyperdensity.errors import HyperError

from conftest import random_config

UNIT_SQUARE = Path.polyline([-0.5 - 0.5j, 0.5 - 0.5j, 0.5 + 0.5j, -0.5 + 0.5j], closed=True)


def test_rectangle_examples():
    assert rectangle_loop(validate([-0.5, 0.5]), 1).vertices == pytest.approx(
        [-0.75 - 0.25j, 0.75 - 0.25j, 0.75 + 0.25j, -0.75 + 0.25j, -0.75 - 0.25j]
    )
    assert rectangle_loop(validate([0, 0]), 1).vertices[:4] == pytest.approx(
        [-0.5 - 0.5j, 0.5 - 0.5j, 0.5 + 0.5j, -0.5 + 0.5j]
    )
    loop = rectangle_loop(validate([-0.6, -0.4, 0.2, 0.5]), 2)
    assert loop.vertices[:4] == pytest.approx([-0.1 - 0.25j, 0.75 - 0.25j, 0.75 + 0.25j, -0.1 + 0.25j])
    assert loop.closed


@pytest.mark.parametrize("g", [1, 2, 3])
def test_rectangle_encloses_only_its_cut(rng, g):
    cfg = random_config(rng, g)
    root = BranchedSqrt(cfg)
    for j in range(1, g + 1):
        loop = rectangle_loop(cfg, j)
        pts = loop.sample(1e-3)
        assert np.min(root.distance_to_cuts(pts)) >= loop.clearance - 1e-12
        re = [v.real for v in loop.vertices]
        lo, hi = cfg.pair(j)
        assert min(re) < lo and hi < max(re)
        for k, (plo, phi) in enumerate(cfg.pairs, 1):
            if k != j:
                assert phi < min(re) or plo > max(re)


def test_v_path_examples():
    lower, upper, c = v_path(validate([0, 0]))
    assert c == pytest.approx(2.0)
    assert v_crossing(validate([0, 0]))[0] == pytest.approx(0.5)
    assert lower.start == 0 and lower.end == pytest.approx(2.0)
    assert upper.start == pytest.approx(2.0) and upper.end == 0
    assert all(v.imag <= 0 for v in lower.vertices) and all(v.imag >= 0 for v in upper.vertices)
    eps, c = v_crossing(validate([-0.5, 0.5]))
    assert (eps, c) == pytest.approx((0.25, 4 / 3))
    eps, c = v_crossing(validate([0.1, 0.9]))
    assert eps == pytest.approx(0.05) and c == pytest.approx(1 / 0.95)
    assert 1 < c < 1 / 0.9
    assert v_path(validate([0.1, 0.9]))[0].clearance == pytest.approx(min(c - 1, 1 / 0.9 - c))


def test_integrate_residue_and_polynomial():
    res = integrate(UNIT_SQUARE, lambda z: 1 / z)
    assert abs(res.value - 2j * math.pi) < 1e-12
    assert res.error_estimate >= 0 and res.evaluations > 0
    assert abs(integrate(UNIT_SQUARE, lambda z: z).value) < 1e-12


def test_integrate_degenerate_loop():
    cfg = validate([0.3, 0.3])
    loop = rectangle_loop(cfg, 1)
    val = integrate(loop, lambda x: 1 / ((x - 0.3) * sqrt_x2_minus_1(x))).value
    assert val.real == pytest.approx(2 * math.pi / math.sqrt(1 - 0.09), abs=1e-12)
    assert abs(val.imag) < 1e-12


def test_integrate_reversal_negates():
    f = lambda z: np.exp(z) / (z - 0.1)
    fwd = integrate(UNIT_SQUARE, f).value
    back = integrate(UNIT_SQUARE.reversed(), f).value
    assert abs(fwd + back) < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False), min_size=1, max_size=6))
def test_closed_loop_polynomial_vanishes(coeffs):
    p = np.polynomial.Polynomial(coeffs)
    assert abs(integrate(UNIT_SQUARE, p).value) < 1e-12


def test_integrate_no_convergence():
    path = Path.polyline([-1, 1])
    with pytest.raises(HyperError) as exc:
        integrate(path, lambda z: 1 / np.sqrt(np.abs(z.real) + 0j), tol=1e-14, max_depth=4)
    assert exc.value.code == "NO_CONVERGENCE"


def test_singular_interval_examples():
    assert integrate_singular_interval(0, 1, lambda x, dlo, dhi: 1 / np.sqrt(dlo)) == pytest.approx(2, abs=1e-12)
    val = integrate_singular_interval(-1, 1, lambda x, dlo, dhi: 1 / np.sqrt(dlo * dhi))
    assert val == pytest.approx(math.pi, abs=1e-12)
    assert integrate_singular_interval(0, 2, lambda x: x**2) == pytest.approx(8 / 3, abs=1e-13)


def test_singular_interval_no_convergence():
    with pytest.raises(HyperError):
        integrate_singular_interval(0, 1, lambda x, dlo, dhi: 1 / dlo, tol=1e-12)
