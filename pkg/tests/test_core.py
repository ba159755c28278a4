import math

import numpy as np
import pytest

from lorentz_metrics import (
    AT_INFINITY,
    CausalityError,
    LorentzInversion,
    ProjectiveInterval,
    Similarity,
    apply_conformal,
    causal_classify,
    cross_ratio_log,
    from_null,
    minkowski_form,
    null_coords,
    rho_interval,
    time_separation,
    wick_norm,
)
from lorentz_metrics.core import INTERVAL_I

TOL = 1e-12


def test_minkowski_form_examples():
    assert minkowski_form((1, 0), (1, 0)) == pytest.approx(-1.0, abs=TOL)
    assert minkowski_form((1, 1), (1, 1)) == pytest.approx(0.0, abs=TOL)
    assert minkowski_form((1, 1), (1, 1), eps=1.0) == pytest.approx(-3.0, abs=TOL)


def test_minkowski_form_bilinear_symmetric():
    rng = np.random.default_rng(0)
    for _ in range(30):
        u, v, w = rng.normal(size=(3, 4))
        a, b = rng.normal(size=2)
        lhs = minkowski_form(a * u + b * v, w)
        rhs = a * minkowski_form(u, w) + b * minkowski_form(v, w)
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)
        assert minkowski_form(u, v) == pytest.approx(minkowski_form(v, u),
                                                     rel=1e-12, abs=1e-12)


def test_wick_norm_examples():
    assert wick_norm((1, 0)) == pytest.approx(1.0)
    assert wick_norm((1, 1)) == pytest.approx(math.sqrt(2.0))
    assert wick_norm((3, 4)) == pytest.approx(5.0)


def test_causal_classify_examples():
    c = causal_classify((1, 0))
    assert (c.kind, c.orientation) == ("timelike", "future")
    c = causal_classify((0, 1))
    assert (c.kind, c.orientation) == ("spacelike", "none")
    # b_eps((1,1.5)) with eps=1: -(1+1)^2 t^2 ... = -4 + 2.25 = -1.75 < 0
    c = causal_classify((1, 1.5), eps=1.0)
    assert (c.kind, c.orientation) == ("timelike", "future")
    with pytest.raises(ValueError):
        causal_classify((0.0, 0.0))


def test_time_separation_examples():
    assert time_separation((0, 0), (2, 0)) == pytest.approx(2.0)
    assert time_separation((0, 0), (1, 1)) == pytest.approx(0.0)
    with pytest.raises(CausalityError):
        time_separation((0, 0), (0, 1))


def test_rho_interval_examples():
    assert rho_interval(INTERVAL_I, 0.0, 0.5) == pytest.approx(math.log(3.0))
    assert rho_interval(ProjectiveInterval(0.0, math.inf), 1.0, math.e) \
        == pytest.approx(1.0)
    assert rho_interval(INTERVAL_I, 0.3, 0.3) == 0.0


def test_cross_ratio_log_examples():
    a = np.array([0.0, 0.0])
    p = np.array([0.25, 0.25])
    q = np.array([0.5, 0.5])
    b = np.array([1.0, 1.0])
    assert cross_ratio_log(a, p, q, b) == pytest.approx(math.log(3.0))
    assert cross_ratio_log(a, p, p, b) == 0.0
    e = np.array([math.e, math.e])
    one = np.array([1.0, 1.0])
    assert cross_ratio_log(a, one, e, AT_INFINITY) == pytest.approx(1.0)


def test_apply_conformal_examples():
    g = Similarity.boost_1d(0.0, scale=2.0)
    assert np.allclose(apply_conformal(g, (1, 1)), (2, 2))
    inv = LorentzInversion()
    assert np.allclose(apply_conformal(inv, (1, 0)), (-1, 0))
    with pytest.raises(ValueError):
        apply_conformal(inv, (1, 1))


def test_similarity_inverse_roundtrip():
    rng = np.random.default_rng(1)
    g = Similarity.boost_1d(0.7, scale=1.4, translation=rng.normal(size=2))
    x = rng.normal(size=2)
    assert np.allclose(g.inverse()(g(x)), x, atol=1e-12)


def test_null_coords_roundtrip():
    rng = np.random.default_rng(2)
    for _ in range(10):
        x = rng.normal(size=2)
        U, W = null_coords(x)
        assert U == pytest.approx(x[0] + x[1])
        assert W == pytest.approx(x[0] - x[1])
        assert np.allclose(from_null(U, W), x, atol=1e-12)
