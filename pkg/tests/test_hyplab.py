import math

import numpy as np
import pytest

from lorentz_metrics import (
    CausalityError,
    Diamond,
    GraphDomain,
    HalfSpaceFuture,
    SpacelikeSlab,
    causal_quasigeodesic,
    causal_thinness,
    causal_triangle,
    cone_future,
    four_point_delta,
    gromov_product,
    stable_diamond,
    thin_triangle_defect,
    witness_family,
)
from lorentz_metrics.domains import DomainError
from lorentz_metrics.hyplab import (
    HalfSpaceLogSampler,
    QuasiGeodesicTriangle,
    SlabLateralSampler,
    matrix_evaluator_for,
    zigzag_axis_bigons,
)
from lorentz_metrics.oracles import delta_diamond_2d, delta_diamond_matrix


def _dict_metric(table):
    def d(a, b):
        if a == b:
            return 0.0
        return table[frozenset((a, b))]
    return d


def test_gromov_product_examples():
    d = _dict_metric({frozenset(("w", "x")): 3.0,
                      frozenset(("w", "y")): 3.0,
                      frozenset(("x", "y")): 6.0})
    assert gromov_product(d, "x", "x", "w") == pytest.approx(3.0)
    assert gromov_product(d, "x", "y", "x") == pytest.approx(0.0)
    assert gromov_product(d, "x", "y", "w") == pytest.approx(0.0)


def test_four_point_delta_degenerate():
    # quadruples at mutual distance zero carry zero defect
    ev = lambda P: np.zeros((len(P), len(P)))

    class Line:
        def points(self, rng, count, scale):
            return np.stack([np.zeros(count), np.arange(count, dtype=float)],
                            axis=1)

    rep = four_point_delta(ev, Line(), scales=(1.0,), quadruples=50,
                           points_per_scale=8)
    assert rep.delta_hat == 0.0


def test_four_point_delta_halfspace_bounded():
    ev = matrix_evaluator_for(HalfSpaceFuture(1))
    rep = four_point_delta(ev, HalfSpaceLogSampler(base=2.0),
                           scales=(1.0, 2.0, 4.0, 8.0, 16.0),
                           quadruples=800, seed=42, points_per_scale=48)
    assert rep.verdict == "bounded"
    assert rep.growth_ratio < 1.5


def test_four_point_delta_slab_growing():
    slab = SpacelikeSlab(1.0, 2)
    rep = four_point_delta(matrix_evaluator_for(slab),
                           SlabLateralSampler(slab, base=1.0),
                           scales=(1.0, 2.0, 4.0, 8.0, 16.0),
                           quadruples=800, seed=42, points_per_scale=32)
    assert rep.verdict == "growing"
    assert rep.growth_ratio > 2.0


def test_four_point_worst_quadruple_invariant():
    ev = matrix_evaluator_for(Diamond((-1.0, 0.0), (1.0, 0.0)))
    from lorentz_metrics.hyplab import DiamondPhiSampler
    rep = four_point_delta(ev, DiamondPhiSampler(Diamond((-1, 0), (1, 0)),
                                                 base=2.0),
                           scales=(1.0, 4.0), quadruples=300, seed=1,
                           points_per_scale=24)
    a = np.array([-1.0, 0.0])
    b = np.array([1.0, 0.0])
    pair = lambda p, q: delta_diamond_2d(a, b, p, q)
    assert rep.recompute_worst(pair) == pytest.approx(rep.delta_hat, abs=1e-9)


def test_causal_quasigeodesic_cone_axis():
    cone = cone_future((0.0, 0.0))
    path = causal_quasigeodesic(cone, np.array([1.0, 0.0]),
                                np.array([math.e, 0.0]), m=4)
    times = [v[0] for v in path.vertices]
    assert times == pytest.approx([math.exp(k / 4) for k in range(5)],
                                  rel=1e-9)


def test_causal_quasigeodesic_single_vertex():
    cone = cone_future((0.0, 0.0))
    p = causal_quasigeodesic(cone, np.array([1.0, 0.0]),
                             np.array([1.0, 0.0]), m=8)
    assert len(p.vertices) == 1


def test_causal_quasigeodesic_diamond_geodesic():
    dia = Diamond((-1.0, 0.0), (1.0, 0.0))
    path = causal_quasigeodesic(dia, np.array([-0.3, 0.0]),
                                np.array([0.4, 0.0]), m=5)
    # the diamond projective time makes causal curves exact geodesics:
    # delta = 2 |Delta ln(tau-/tau+)| link by link
    for i in range(len(path.vertices) - 1):
        d = delta_diamond_2d(dia.a, dia.b, path.vertices[i],
                             path.vertices[i + 1])
        dl = abs(path.tau_values[i + 1] - path.tau_values[i])
        assert d == pytest.approx(2.0 * dl, abs=1e-9)


def test_causal_quasigeodesic_rejects_noncausal():
    cone = cone_future((0.0, 0.0))
    with pytest.raises(CausalityError):
        causal_quasigeodesic(cone, np.array([1.0, 0.3]),
                             np.array([1.0, -0.3]))


def _diamond_eval():
    a = np.array([-1.0, 0.0])
    b = np.array([1.0, 0.0])
    return lambda P: delta_diamond_matrix(a, b, P)


def test_thin_triangle_degenerate():
    dia = Diamond((-1.0, 0.0), (1.0, 0.0))
    tri = causal_triangle(dia, np.array([-0.4, 0.0]), np.array([0.0, 0.0]),
                          np.array([0.5, 0.0]), m=32)
    assert thin_triangle_defect(_diamond_eval(), tri) < 0.15


def test_thin_triangles_grow_on_plain_diamond():
    ev = _diamond_eval()
    defects = []
    for k in range(1, 5):
        d = 2.0 ** -k
        x = np.array([0.0, -(1 - d)])
        y = np.array([1 - d, 0.0])
        z = np.array([0.0, 1 - d])
        sides = [np.linspace(x, y, 33), np.linspace(y, z, 33),
                 np.linspace(z, x, 33)]
        defects.append(thin_triangle_defect(ev, QuasiGeodesicTriangle(sides)))
    assert all(b > a for a, b in zip(defects, defects[1:]))
    assert defects[-1] > 2.0 * defects[0]


def test_thin_triangles_bounded_on_stable_diamond():
    sd = stable_diamond((-1.0, 0.0), (1.0, 0.0), 1.0)
    ev = matrix_evaluator_for(sd, k=96, ladders=16)
    defects = []
    for s in (0.3, 0.6, 0.9):
        tri = causal_triangle(sd, np.array([-s, 0.0]),
                              np.array([0.05, 0.3 * s]),
                              np.array([s, 0.0]), m=32)
        defects.append(thin_triangle_defect(ev, tri))
    assert max(defects) < 1.5


def test_witness_family_lightlike_boundary():
    g = GraphDomain([-8.0], [24.0],
                    f_minus=lambda Q: np.maximum(0.0, Q[:, 0]),
                    lipschitz_minus=1.0)
    tri = witness_family(g, "lightlike-boundary", 3)
    sides = [np.asarray(s, float) for s in tri.sides]
    x, y = sides[0][0], sides[0][-1]
    assert g.boundary_distance(x) < 0.2
    assert g.boundary_distance(y) < 0.2
    z = sides[1][-1]
    assert np.allclose(z[1:], x[1:], atol=1e-9)  # back on the anchor axis


def test_witness_family_flat_slice_and_rejection():
    slab = SpacelikeSlab(1.0, 1)
    tri = witness_family(slab, "flat-slice", 0)
    first = np.asarray(tri.sides[0], float)
    assert np.allclose(first[0], (0.0, 0.0))
    assert np.allclose(first[-1], (0.0, 1.0))
    sd = stable_diamond((-1.0, 0.0), (1.0, 0.0), 1.0)
    with pytest.raises(DomainError):
        witness_family(sd, "lightlike-boundary", 3)


def test_causal_thinness_examples():
    sd = stable_diamond((-1.0, 0.0), (1.0, 0.0), 1.0)
    ev = matrix_evaluator_for(sd, k=96, ladders=16)
    seg = np.array([[-0.3, 0.0], [0.0, 0.1], [0.4, 0.0]])
    assert causal_thinness(sd, ev, [(seg, seg.copy())]) == 0.0
    x = np.array([-0.5, 0.0])
    y = np.array([0.5, 0.0])
    series = [causal_thinness(sd, ev, zigzag_axis_bigons(sd, x, y,
                                                         scales=(s,)))
              for s in (1, 2, 3, 4)]
    assert series[-1] / max(series[0], 1e-9) < 1.5
    slab = SpacelikeSlab(1.0, 1)
    spacelike = np.array([[0.0, 0.0], [0.0, 1.0], [0.0, 2.0]])
    with pytest.raises(CausalityError):
        causal_thinness(slab, lambda P: np.zeros((len(P), len(P))),
                        [(spacelike, spacelike.copy())])
