import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hyperdensity import torsion
from hyperdensity.config import embed_degenerate, validate
from hyperdensity.errors import HyperError
from hyperdensity.periods import Basis, reduced_vector
from hyperdensity.torsion import (
    RationalVector,
    density_scan,
    find_torsion_near,
    jacobian_u,
    nearest_rationals,
    rank,
    scan_lattice,
    singular_values,
)

from conftest import random_config


def brute_best(x, q_max):
    best = None
    for q in range(1, q_max + 1):
        for p in range(1, q):
            cand = (abs(Fraction(x) - Fraction(p, q)), q, p)
            if best is None or cand < best:
                best = cand
    return Fraction(best[2], best[1])


def test_nearest_rationals_examples():
    assert nearest_rationals([0.5], 10).entries == (Fraction(1, 2),)
    assert nearest_rationals([0.6667], 10).entries == (Fraction(2, 3),)
    assert nearest_rationals([0.3183], 50).entries == (brute_best(0.3183, 50),)
    assert nearest_rationals([0.3183], 50).entries == (Fraction(7, 22),)


@given(st.floats(1e-3, 1 - 1e-3), st.integers(2, 60))
def test_nearest_rationals_vs_brute_force(x, q_max):
    assert nearest_rationals([x], q_max).entries[0] == brute_best(x, q_max)


def test_nearest_rationals_stays_inside():
    assert nearest_rationals([1e-4], 10).entries == (Fraction(1, 10),)
    assert nearest_rationals([1 - 1e-4], 10).entries == (Fraction(9, 10),)
    assert RationalVector((Fraction(1, 3),)).to_list() == [{"p": 1, "q": 3}]
    with pytest.raises(HyperError):
        RationalVector((Fraction(3, 2),))


def test_rank_examples(rng):
    assert rank(np.zeros((2, 4))) == 0
    assert rank(np.hstack([np.eye(3), np.zeros((3, 3))])) == 3
    assert rank(jacobian_u(random_config(rng, 2))) == 2


def test_jacobian_at_degenerate_point():
    for b in ([0.0], [-0.5, 0.5]):
        J = jacobian_u(embed_degenerate(b))
        sums = J[:, 0::2] + J[:, 1::2]
        expect = np.diag([1 / (math.pi * math.sqrt(1 - x * x)) for x in b])
        assert np.allclose(sums, expect, atol=1e-6)
        assert np.allclose(J[:, 0::2], J[:, 1::2], atol=1e-6)
        assert rank(J) == len(b)
    assert jacobian_u(embed_degenerate([0.0]))[0].sum() == pytest.approx(1 / math.pi, abs=1e-6)


def test_jacobian_richardson_and_margin():
    cfg = validate([-0.3, -0.1, 0.2, 0.6])
    J1 = jacobian_u(cfg)
    J2 = jacobian_u(cfg, richardson=True)
    assert np.allclose(J1, J2, atol=1e-6)
    with pytest.raises(HyperError) as exc:
        jacobian_u(cfg, h=0.2)
    assert exc.value.code == "MARGIN_TOO_SMALL"
    assert singular_values(J1).shape == (2,)


def test_find_torsion_exact_points():
    c = find_torsion_near(embed_degenerate([0.0]), 10)
    assert c.target.entries == (Fraction(1, 2),)
    assert c.residual < 1e-10 and c.distance == 0 and c.iterations == 0
    c = find_torsion_near(embed_degenerate([0.5]), 10)
    assert c.target.entries == (Fraction(2, 3),)
    assert c.residual < 1e-10 and c.distance < 1e-10


def test_find_torsion_generic_start():
    a0 = validate([-0.11, 0.13])
    c = find_torsion_near(a0, 20, tol=1e-10)
    assert c.residual < 1e-10
    # a posteriori, with tighter quadrature
    u_star = reduced_vector(c.a_star, tol=1e-14).u
    assert np.max(np.abs(u_star - c.target.as_array())) < 1e-10
    u0 = reduced_vector(a0).u
    smin = singular_values(jacobian_u(a0))[-1]
    assert c.distance <= 2 * np.max(np.abs(u0 - c.target.as_array())) / smin
    rerun = find_torsion_near(c.a_star, 20, target=c.target)
    assert rerun.distance < 1e-10


def test_find_torsion_basis_consistency(rng):
    # the search only sees u, which is basis independent
    a = random_config(rng, 2)
    u_std = reduced_vector(a).u
    u_alt = reduced_vector(a, basis=Basis(np.array([[1.0, 2.0], [0.5, -1.0]]))).u
    assert nearest_rationals(u_std, 50) == nearest_rationals(u_alt, 50)


def test_find_torsion_errors(monkeypatch):
    a0 = validate([-0.3, 0.4])
    with pytest.raises(HyperError) as exc:
        find_torsion_near(a0, 50, max_iter=0)
    assert exc.value.code == "NO_CONVERGENCE"

    monkeypatch.setattr(torsion, "jacobian_u", lambda *args, **kw: np.zeros((1, 2)))
    with pytest.raises(HyperError) as exc:
        find_torsion_near(a0, 50)
    assert exc.value.code == "RANK_DEFICIENT"
    monkeypatch.undo()

    def refuse(a):
        raise HyperError("ENDPOINT_VIOLATION", "refused")

    monkeypatch.setattr(torsion, "jacobian_u", lambda *args, **kw: np.array([[1.0, 0.0]]))
    monkeypatch.setattr(torsion, "validate", refuse)
    with pytest.raises(HyperError) as exc:
        find_torsion_near(a0, 50)
    assert exc.value.code == "LEFT_DOMAIN"


def test_certificate_json():
    c = find_torsion_near(validate([-0.3, 0.4]), 10)
    d = c.to_dict()
    assert list(d) == ["a0", "a_star", "target", "residual", "distance", "iterations"]
    assert all(set(t) == {"p", "q"} for t in d["target"])


def test_scan_lattice():
    pts = scan_lattice(1, 9)
    assert len(pts) == 9
    assert [round(0.5 * (p + q), 12) for p, q in pts] == [round(-0.8 + 0.2 * k, 12) for k in range(9)]
    assert len(scan_lattice(2, 5)) == 25
    for a in scan_lattice(3, 3):
        validate(a)
    assert all(p == q for p, q in scan_lattice(1, 9, degenerate=True))
    with pytest.raises(ValueError):
        scan_lattice(4, 11)


def test_density_scan_small():
    rep = density_scan(1, 3, 20)
    assert rep["n_points"] == 3 and rep["success_rate"] == 1.0
    assert rep["max_residual"] < 1e-10
    assert all(p["jacobian_rank"] == 1 for p in rep["points"])


def test_degenerate_scan_exact_at_rational_u():
    rep = density_scan(1, 9, 50, degenerate=True)
    by_b = {round(p["a0"][0], 12): p for p in rep["points"]}
    assert by_b[0.0]["distance"] == 0.0
    assert rep["success_rate"] == 1.0
