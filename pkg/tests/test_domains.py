import math

import numpy as np
import pytest

from lorentz_metrics import (
    Diamond,
    GraphDomain,
    HalfSpaceFuture,
    SpacelikeSlab,
    bonsante,
    boundary_distance,
    causal_boundary,
    causal_structure_checks,
    cone_future,
    cosmological_time,
    initial_singularity,
    is_infinite,
    ray_exit,
    stable_acausality_epsilon,
    stable_cone_complement,
    stable_diamond,
)
from lorentz_metrics.core import FUTURE, PAST
from lorentz_metrics.domains import (
    ACAUSAL_FOR_ALL,
    NOT_STABLY_ACAUSAL,
    STABLE,
)


def test_ray_exit_examples():
    hs = HalfSpaceFuture(1)
    # the ray through (1,0) tangent to (-1,1) leaves in the past direction
    assert np.allclose(ray_exit(hs, (1, 0), (-1, 1), sign=PAST), (0, 1),
                       atol=1e-9)
    assert is_infinite(ray_exit(hs, (1, 0), (1, 1), sign=FUTURE))
    dia = Diamond((-1, 0), (1, 0))
    assert np.allclose(ray_exit(dia, (0, 0), (1, 1), sign=FUTURE),
                       (0.5, 0.5), atol=1e-9)


def test_ray_exit_consistency():
    rng = np.random.default_rng(0)
    for dom in (Diamond((-1, 0), (1, 0)), cone_future((0.0, 0.0)),
                SpacelikeSlab(1.0, 1)):
        pts = dom.sample(rng, 8)
        for x in pts:
            v = rng.normal(size=2)
            v /= np.linalg.norm(v)
            p = ray_exit(dom, x, v, sign=FUTURE)
            if is_infinite(p):
                continue
            seg = x + np.linspace(0.0, 1.0, 66)[1:-1, None] * (p - x)
            assert dom.contains_many(seg).all()
            probe = x + 1.000001 * (p - x)
            assert not dom.contains(probe) or \
                dom.boundary_distance(probe) < 1e-5 * dom.scale


def test_boundary_distance_examples():
    assert boundary_distance(HalfSpaceFuture(1), (1, 0)) == pytest.approx(1.0)
    assert boundary_distance(Diamond((-1, 0), (1, 0)), (0, 0)) \
        == pytest.approx(1.0 / math.sqrt(2.0))
    assert boundary_distance(cone_future((0.0, 0.0)), (1, 0)) \
        == pytest.approx(1.0 / math.sqrt(2.0))


def test_causal_boundary_graphs():
    cb = causal_boundary(SpacelikeSlab(1.0, 1))
    Q = np.array([[0.3], [-0.7]])
    assert np.allclose(cb.future.f(Q), 1.0)
    assert np.allclose(cb.past.f(Q), -1.0)
    cb = causal_boundary(HalfSpaceFuture(1))
    assert cb.future.empty
    assert np.allclose(cb.past.f(Q), 0.0)
    cb = causal_boundary(Diamond((-1, 0), (1, 0)))
    assert cb.past.f(np.array([[0.25]]))[0] == pytest.approx(-0.75)
    assert cb.future.f(np.array([[0.25]]))[0] == pytest.approx(0.75)


def test_stable_acausality_examples():
    ps = np.linspace(-2.0, 2.0, 41)
    graph = lambda L: np.stack([L * np.abs(ps), ps], axis=1)
    v = stable_acausality_epsilon(graph(0.5))
    assert v.verdict == STABLE
    assert v.epsilon_hat == pytest.approx(1.0, abs=1e-9)
    assert stable_acausality_epsilon(graph(1.0)).verdict == NOT_STABLY_ACAUSAL
    assert stable_acausality_epsilon(graph(0.0)).verdict == ACAUSAL_FOR_ALL


def test_cosmological_time_examples():
    omega = stable_cone_complement(1.0, 1)
    assert cosmological_time(omega, (2, 1)) == pytest.approx(5.0 / math.sqrt(3.0))
    assert cosmological_time(cone_future((0.0, 0.0)), (1, 0), PAST) \
        == pytest.approx(1.0)
    dia = Diamond((-1, 0), (1, 0))
    assert cosmological_time(dia, (0, 0), PAST) == pytest.approx(1.0)
    assert cosmological_time(dia, (0, 0), FUTURE) == pytest.approx(1.0)


def test_initial_singularity_examples():
    assert np.allclose(initial_singularity(cone_future((0.0, 0.0)), (1, 0)),
                       (0, 0), atol=1e-9)
    assert np.allclose(initial_singularity(HalfSpaceFuture(1), (2, 3)),
                       (0, 3), atol=1e-9)
    omega = stable_cone_complement(1.0, 1)
    y = initial_singularity(omega, (2, 1))
    assert np.allclose(y, (-4.0 / 3.0, 8.0 / 3.0), atol=1e-9)
    # the singular point realizes the cosmological time
    from lorentz_metrics import time_separation
    assert time_separation(y, (2.0, 1.0)) == pytest.approx(5.0 / math.sqrt(3.0))


def test_causal_structure_checks():
    rep = causal_structure_checks(Diamond((-1, 0), (1, 0)))
    assert rep == {"causally_convex": True, "future_complete": False,
                   "lightlike_line_free": True}
    rep = causal_structure_checks(HalfSpaceFuture(1))
    assert rep == {"causally_convex": True, "future_complete": True,
                   "lightlike_line_free": True}
    # A Bonsante cone factor leaves spatial directions free, but every
    # lightlike line still has unbounded past time coordinate and exits the
    # future of the boundary graph, so the open domain has no complete
    # lightlike lines (they accumulate only in the boundary).
    rep = causal_structure_checks(bonsante(1, 2))
    assert rep == {"causally_convex": True, "future_complete": True,
                   "lightlike_line_free": True}


def test_stable_diamond_membership_and_cosmo():
    sd = stable_diamond((-1.0, 0.0), (1.0, 0.0), 1.0)
    assert sd.contains((0.0, 0.0))
    # widening the cones enlarges the diamond laterally
    assert not Diamond((-1, 0), (1, 0)).contains((0.0, 1.5))
    assert sd.contains((0.0, 1.5))
    assert not sd.contains((0.0, 2.1))
    assert cosmological_time(sd, (0.0, 0.0), PAST) > 0.0


def test_graph_domain_audit():
    g = GraphDomain([-2.0], [2.0],
                    f_minus=lambda Q: 0.5 * np.abs(Q[:, 0]),
                    lipschitz_minus=0.5)
    rng = np.random.default_rng(0)
    report = g.audit_lipschitz(rng, count=500)
    assert report["minus"] <= 0.5 + 1e-9
    bad = GraphDomain([-2.0], [2.0],
                      f_minus=lambda Q: 0.9 * np.abs(Q[:, 0]),
                      lipschitz_minus=0.5)
    with pytest.raises(ValueError):
        bad.audit_lipschitz(rng, count=500)


def test_domain_flags():
    assert Diamond((-1, 0), (1, 0)).bounded
    assert not Diamond((-1, 0), (1, 0)).future_complete
    assert HalfSpaceFuture(1).future_complete
    assert cone_future((0.0, 0.0)).convex
    omega = stable_cone_complement(1.0, 1)
    assert omega.future_complete and omega.causally_convex and not omega.convex


def test_diamond_requires_order():
    from lorentz_metrics import CausalityError
    with pytest.raises(CausalityError):
        Diamond((0, 0), (0, 0))
