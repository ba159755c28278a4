import math

import numpy as np
import pytest

from lorentz_metrics import (
    Diamond,
    HalfSpaceFuture,
    SpacelikeSlab,
    cone_future,
    cosmo_time_closed,
    delta_cone_future,
    delta_diamond_2d,
    delta_halfspace,
    markowitz_lower,
    markowitz_upper,
    stable_cone_complement,
)
from lorentz_metrics.metrics import Mesh
from lorentz_metrics.oracles import (
    delta_cone_exact_2d,
    delta_halfspace_exact_2d,
    delta_slab_matrix,
    delta_slab_pair,
)

REL = 0.03
LOWER_TOL = 1e-6


def test_delta_cone_future_examples():
    a = np.zeros(2)
    assert delta_cone_future(a, (1, 0), (math.e, 0)) == pytest.approx(2.0)
    assert delta_cone_future(a, (1, 0), (1, 0)) == 0.0
    val = delta_cone_future(a, (1, 0), (2, 0))
    assert val == pytest.approx(2.0 * math.log(2.0))
    dom = cone_future(a)
    up = markowitz_upper(dom, (1, 0), (2, 0), Mesh(k=96)).value
    lo = markowitz_lower(dom, (1, 0), (2, 0)).value
    assert lo - LOWER_TOL <= val <= up + LOWER_TOL


def test_delta_halfspace_examples():
    hs = HalfSpaceFuture(1)
    assert delta_halfspace(hs, (1, 0), (math.e ** 2, 0)) == pytest.approx(2.0)
    assert delta_halfspace(hs, (1, 0), (1, 0)) == 0.0
    assert delta_halfspace(hs, (1, 0), (2, 1)) == pytest.approx(math.log(2.0))


def test_delta_diamond_2d_examples():
    a, b = (-1, 0), (1, 0)
    assert delta_diamond_2d(a, b, (0, 0), (0, 0.5)) \
        == pytest.approx(math.log(9.0))
    assert delta_diamond_2d(a, b, (0, 0), (0.5, 0)) \
        == pytest.approx(math.log(9.0))
    assert delta_diamond_2d(a, b, (0.2, 0.1), (0.2, 0.1)) == 0.0


def test_cosmo_time_closed_examples():
    omega = stable_cone_complement(1.0, 1)
    assert cosmo_time_closed(omega, (2, 1)) == pytest.approx(5 / math.sqrt(3))
    assert cosmo_time_closed(cone_future((0.0, 0.0)), (3, 0)) \
        == pytest.approx(3.0)
    assert cosmo_time_closed(HalfSpaceFuture(1), (2, 7)) == pytest.approx(2.0)


def _bracket_check(dom, oracle, pairs):
    for x, y in pairs:
        val = oracle(x, y)
        up = markowitz_upper(dom, x, y).value
        assert val <= up * (1 + REL) + LOWER_TOL
        if dom.convex:
            lo = markowitz_lower(dom, x, y).value
            assert lo <= val + LOWER_TOL


def test_oracles_inside_solver_bracket():
    rng = np.random.default_rng(7)
    dia = Diamond((-1.0, 0.0), (1.0, 0.0))
    pts = dia.sample(rng, 120)
    pairs = list(zip(pts[:50], pts[50:100]))
    _bracket_check(dia, lambda x, y: delta_diamond_2d(dia.a, dia.b, x, y),
                   pairs)

    cone = cone_future((0.0, 0.0))
    pts = cone.sample(rng, 120)
    pairs = list(zip(pts[:50], pts[50:100]))
    _bracket_check(cone, lambda x, y: delta_cone_exact_2d(cone.apex, x, y),
                   pairs)

    hs = HalfSpaceFuture(1)
    pts = hs.sample(rng, 120)
    pairs = list(zip(pts[:50], pts[50:100]))
    _bracket_check(hs, lambda x, y: delta_halfspace_exact_2d(hs, x, y), pairs)


def test_delta_slab_against_lattice():
    slab = SpacelikeSlab(1.0, 1)
    rng = np.random.default_rng(3)
    for _ in range(6):
        tx, ty = rng.uniform(-0.7, 0.7, 2)
        lat = rng.uniform(0.2, 6.0)
        exact = delta_slab_pair(1.0, tx, ty, lat)
        up = markowitz_upper(slab, (tx, 0.0), (ty, lat), Mesh(k=128)).value
        # the lattice is an upper bound converging onto the reduction value
        assert exact <= up + 1e-9
        assert up <= exact * (1.0 + 2e-3) + 1e-9


def test_delta_slab_matrix_consistency():
    rng = np.random.default_rng(5)
    P = np.column_stack([rng.uniform(-0.6, 0.6, 6),
                         rng.uniform(-4.0, 4.0, 6),
                         rng.uniform(-4.0, 4.0, 6)])
    D = delta_slab_matrix(1.0, P)
    assert np.allclose(D, D.T)
    assert np.allclose(np.diag(D), 0.0)
    for i, j in ((0, 3), (1, 4), (2, 5)):
        lat = np.linalg.norm(P[i, 1:] - P[j, 1:])
        assert D[i, j] == pytest.approx(
            delta_slab_pair(1.0, P[i, 0], P[j, 0], lat), rel=1e-9)
