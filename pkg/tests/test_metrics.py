import math

import numpy as np
import pytest

from lorentz_metrics import (
    Diamond,
    EuclideanBall,
    HalfSpaceFuture,
    Similarity,
    cone_future,
    hilbert_distance,
    infinitesimal_markowitz,
    ln_tau_minus,
    markowitz_edge_cost,
    markowitz_lower,
    markowitz_upper,
    null_distance,
    quasi_hyperbolic_distance,
    validate_time_function,
)
from lorentz_metrics.metrics import (
    Mesh,
    QhGrid,
    TimeFunction,
    mesh_slack,
    quasi_hyperbolic_halfplane_oracle,
)

LN9 = math.log(9.0)


def test_infinitesimal_markowitz_examples():
    hs = HalfSpaceFuture(1)
    assert infinitesimal_markowitz(hs, (1, 0), (1, 1)) == pytest.approx(1.0)
    # cone: the past exit along (1,1) from (1,0) sits at s=1/2, so the
    # finite term is |v| / d_h = sqrt(2) / (sqrt(2)/2) = 2
    cone = cone_future((0.0, 0.0))
    assert infinitesimal_markowitz(cone, (1, 0), (1, 1)) == pytest.approx(2.0)
    v1 = infinitesimal_markowitz(hs, (1, 0.3), (1, -1))
    v2 = infinitesimal_markowitz(hs, (1, 0.3), (2, -2))
    assert v2 == pytest.approx(2.0 * v1)


def test_markowitz_edge_cost_examples():
    dia = Diamond((-1.0, 0.0), (1.0, 0.0))
    # limiting value of the boundary-edge chord example, nudged inside
    d = 1e-7
    val = markowitz_edge_cost(dia, (0.5 - d, -0.5 + d), (0.75 - d, -0.25 + d))
    assert val == pytest.approx(math.log(3.0), abs=1e-5)
    assert markowitz_edge_cost(dia, (0.2, 0.1), (0.2, 0.1)) == 0.0
    hs = HalfSpaceFuture(1)
    assert markowitz_edge_cost(hs, (1, 1), (math.e, math.e)) \
        == pytest.approx(1.0)


def test_markowitz_upper_examples():
    dia = Diamond((-1.0, 0.0), (1.0, 0.0))
    val = markowitz_upper(dia, (0, 0), (0, 0.5), Mesh(k=64)).value
    assert LN9 <= val + 1e-12 <= LN9 + 0.05
    assert markowitz_upper(dia, (0.1, 0.2), (0.1, 0.2)).value == 0.0
    cone = cone_future((0.0, 0.0))
    val = markowitz_upper(cone, (1, 0), (math.e, 0), Mesh(k=64)).value
    assert 2.0 <= val + 1e-12 <= 2.05


def test_markowitz_lower_examples():
    hs = HalfSpaceFuture(1)
    assert markowitz_lower(hs, (1, 0), (math.e, 0)).value \
        == pytest.approx(1.0, abs=1e-9)
    dia = Diamond((-1.0, 0.0), (1.0, 0.0))
    assert markowitz_lower(dia, (0, 0), (0.5, 0)).value \
        == pytest.approx(LN9, abs=1e-9)
    assert markowitz_lower(dia, (0.1, 0.2), (0.1, 0.2)).value == 0.0


def test_markowitz_symmetry_triangle():
    dia = Diamond((-1.0, 0.0), (1.0, 0.0))
    rng = np.random.default_rng(9)
    pts = dia.sample(rng, 9)
    mesh = Mesh(k=64)
    for x, y, z in zip(pts[:3], pts[3:6], pts[6:9]):
        dxy = markowitz_upper(dia, x, y, mesh).value
        dyx = markowitz_upper(dia, y, x, mesh).value
        dyz = markowitz_upper(dia, y, z, mesh).value
        dxz = markowitz_upper(dia, x, z, mesh).value
        slack = 2.0 * max(mesh_slack(v) for v in (dxy, dyz, dxz))
        assert dxy == pytest.approx(dyx, abs=slack + 1e-9)
        assert dxz <= dxy + dyz + slack


def test_quasi_hyperbolic_examples():
    hs = HalfSpaceFuture(1)
    val = quasi_hyperbolic_distance(hs, (1, 0), (math.e, 0),
                                    QhGrid(h=0.04)).value
    assert val == pytest.approx(1.0, rel=0.02)
    assert quasi_hyperbolic_distance(hs, (1, 0.5), (1, 0.5)).value == 0.0
    for d in (0.5, 1.5):
        ref = quasi_hyperbolic_halfplane_oracle((1, 0), (1, d))
        val = quasi_hyperbolic_distance(hs, (1, 0), (1, d),
                                        QhGrid(h=0.04)).value
        assert val == pytest.approx(ref, rel=0.02)


def test_quasi_hyperbolic_oracle_closed_form():
    assert quasi_hyperbolic_halfplane_oracle((1, 0), (1, 1)) \
        == pytest.approx(math.acosh(1.5))


def test_null_distance_examples():
    hs = HalfSpaceFuture(1)
    tau = ln_tau_minus(hs)
    est = null_distance(hs, tau, (1, 0), (math.e, 0))
    assert est.kind == "exact"
    assert est.value == pytest.approx(1.0)
    assert null_distance(hs, tau, (1, 0.3), (1, 0.3)).value == 0.0
    # non-causal pair: coarse solve within 2% of a refined zigzag lattice
    coarse = null_distance(hs, tau, (1, -0.5), (1, 0.5), Mesh(k=96)).value
    fine = null_distance(hs, tau, (1, -0.5), (1, 0.5), Mesh(k=256)).value
    assert coarse == pytest.approx(fine, rel=0.02)


def test_validate_time_function():
    hs = HalfSpaceFuture(1)
    validate_time_function(hs, ln_tau_minus(hs))
    bad = TimeFunction("minus_t", lambda P: -np.atleast_2d(P)[:, 0])
    with pytest.raises(ValueError):
        validate_time_function(hs, bad)


def test_hilbert_examples():
    ball = EuclideanBall((0.0, 0.0), 1.0)
    assert hilbert_distance(ball, (0, 0), (0, 0.5)) \
        == pytest.approx(math.log(3.0))
    assert hilbert_distance(ball, (0.1, 0.2), (0.1, 0.2)) == 0.0
    dia = Diamond((-1.0, 0.0), (1.0, 0.0))
    h = hilbert_distance(dia, (0, 0), (0, 0.5))
    assert h == pytest.approx(math.log(3.0))
    assert h <= LN9


def test_similarity_invariance_sampled():
    dia = Diamond((-1.0, 0.0), (1.0, 0.0))
    g = Similarity.boost_1d(0.4, scale=1.7, translation=np.array([0.3, -0.2]))
    img = Diamond(g(dia.a), g(dia.b))
    rng = np.random.default_rng(4)
    pts = dia.sample(rng, 6)
    for x, y in zip(pts[:3], pts[3:6]):
        v1 = markowitz_upper(dia, x, y, Mesh(k=64)).value
        v2 = markowitz_upper(img, g(x), g(y), Mesh(k=64)).value
        assert v1 == pytest.approx(v2, abs=1e-6 * (1.0 + v1))
