"""Gromov hyperbolicity experiments: four-point defects over growing
scales, quasi-geodesics of the conformal pseudodistance, thin-triangle
and causal-thinness (bigon) defects, and the escaping witness-triangle
families that certify non-hyperbolicity.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .core import FUTURE, PAST, CausalityError, as_event, causally_related
from .domains import (
    ConePiece,
    Diamond,
    DomainError,
    DomainOracle,
    GraphDomain,
    HalfSpaceFuture,
    SpacelikeSlab,
)
from .chaingraph import SolverError, zigzag_points
from .metrics import CausalPath, LatticeEvaluator
from . import oracles

# Growth verdict thresholds on the last/first ratio of the per-scale
# defect series; runs in between are inconclusive.
BOUNDED_RATIO = 1.5
GROWING_RATIO = 2.0
RATIO_FLOOR = 1e-3

DEFAULT_SCALES = (1.0, 2.0, 4.0, 8.0, 16.0)
DEFAULT_QUADRUPLES = 2000
DEFAULT_SEED = 42

BOUNDED = "bounded"
GROWING = "growing"
INCONCLUSIVE = "inconclusive"


def gromov_product(d, x, y, w) -> float:
    """(x, y)_w = (d(w,x) + d(w,y) - d(x,y)) / 2 for a two-point distance
    evaluator d."""
    return 0.5 * (d(w, x) + d(w, y) - d(x, y))


def _quadruple_defects(D: np.ndarray, quads: np.ndarray) -> np.ndarray:
    """Four-point defects max(0, min{(x,y)_w,(y,z)_w} - (x,z)_w), each
    maximized over all role assignments of the quadruple."""
    best = np.zeros(len(quads))
    for perm in itertools.permutations(range(4)):
        x, y, z, w = (quads[:, i] for i in perm)

        def gp(a, b):
            return 0.5 * (D[w, a] + D[w, b] - D[a, b])

        val = np.minimum(gp(x, y), gp(y, z)) - gp(x, z)
        best = np.maximum(best, val)
    return np.maximum(best, 0.0)


@dataclass
class HyperbolicityReport:
    delta_hat: float
    quadruple_count: int
    worst_quadruple: np.ndarray
    series: list  # (scale, delta_hat) pairs
    verdict: str
    growth_ratio: float

    def recompute_worst(self, d) -> float:
        """Defect of the stored worst quadruple under a two-point
        evaluator d (consistency check)."""
        P = self.worst_quadruple

        def dd(i, j):
            return d(P[i], P[j])

        best = 0.0
        for perm in itertools.permutations(range(4)):
            x, y, z, w = perm
            g1 = 0.5 * (dd(w, x) + dd(w, y) - dd(x, y))
            g2 = 0.5 * (dd(w, y) + dd(w, z) - dd(y, z))
            g3 = 0.5 * (dd(w, x) + dd(w, z) - dd(x, z))
            best = max(best, min(g1, g2) - g3)
        return max(best, 0.0)


def four_point_delta(matrix_evaluator, sampler, scales=DEFAULT_SCALES,
                     quadruples: int = DEFAULT_QUADRUPLES,
                     seed: int = DEFAULT_SEED,
                     points_per_scale: int = 64) -> HyperbolicityReport:
    """Per-scale four-point defect maxima.

    matrix_evaluator(P) returns the pairwise distance matrix of a point
    set; sampler.points(rng, count, scale) yields domain points whose
    pairwise distances grow with the scale.  Deterministic in the seed.
    """
    rng = np.random.default_rng(seed)
    series = []
    worst_val = -1.0
    worst_quad = None
    total = 0
    for scale in scales:
        P = np.asarray(sampler.points(rng, points_per_scale, scale), float)
        uniq = np.unique(np.round(P, 12), axis=0)
        if len(uniq) < 4:
            raise ValueError("degenerate sample: fewer than 4 distinct points")
        D = np.asarray(matrix_evaluator(P), float)
        quads = np.array([rng.choice(len(P), size=4, replace=False)
                          for _ in range(quadruples)])
        defects = _quadruple_defects(D, quads)
        total += len(quads)
        i = int(np.argmax(defects))
        series.append((float(scale), float(defects[i])))
        if defects[i] > worst_val:
            worst_val = float(defects[i])
            worst_quad = P[quads[i]]
    first = max(series[0][1], RATIO_FLOOR)
    ratio = series[-1][1] / first
    if ratio < BOUNDED_RATIO:
        verdict = BOUNDED
    elif ratio > GROWING_RATIO:
        verdict = GROWING
    else:
        verdict = INCONCLUSIVE
    return HyperbolicityReport(worst_val, total, worst_quad, series,
                               verdict, float(ratio))


# ---------------------------------------------------------------------------
# Scale samplers and matrix evaluators per domain family
# ---------------------------------------------------------------------------

class DiamondPhiSampler:
    """Uniform boxes in the interval log coordinates of a plain diamond of
    R^{1,1}; the Markowitz metric there is the L1 metric of these
    coordinates, so boxes of half-width base*scale have diameter
    proportional to the scale."""

    def __init__(self, diamond: Diamond, base: float = 2.0):
        if diamond.n != 1:
            raise DomainError("phi sampler is specific to R^{1,1}")
        self.diamond = diamond
        self.base = float(base)

    def points(self, rng, count, scale):
        L = self.base * scale
        phi = rng.uniform(-L, L, size=(count, 2))
        return oracles.diamond_point_from_log_coords(
            self.diamond.a, self.diamond.b, phi[:, 0], phi[:, 1])


class HalfSpaceLogSampler:
    """Log-height boxes for the standard half-space {t > 0} of R^{1,1}:
    heights e^{±base*scale} and lateral spread of the same metric order."""

    def __init__(self, base: float = 1.0):
        self.base = float(base)

    def points(self, rng, count, scale):
        L = self.base * scale
        t = np.exp(rng.uniform(-L, L, size=count))
        p = rng.uniform(-math.exp(L), math.exp(L), size=count)
        return np.stack([t, p], axis=1)


class AxisDepthSampler:
    """Metric-adapted sampler for cone-like domains: the time axis segment
    (t_lo, t_hi) is traversed in its interval log coordinate (so depth
    decays exponentially with the scale), then each point is jittered by a
    fraction of its boundary distance."""

    def __init__(self, domain: DomainOracle, t_lo: float, t_hi: float,
                 base: float = 1.0, lateral: float = 0.4):
        self.domain = domain
        self.t_lo = float(t_lo)
        self.t_hi = float(t_hi)
        self.base = float(base)
        self.lateral = float(lateral)

    def _axis_point(self, lam):
        if math.isinf(self.t_hi):
            t = self.t_lo + math.exp(lam)
        else:
            s = 1.0 / (1.0 + math.exp(-lam))
            t = self.t_lo + (self.t_hi - self.t_lo) * s
        x = np.zeros(self.domain.n + 1)
        x[0] = t
        return x

    def points(self, rng, count, scale):
        L = self.base * scale
        out = []
        for lam in rng.uniform(-L, L, size=count):
            x = self._axis_point(lam)
            d = self.domain.boundary_distance(x)
            for _ in range(16):
                cand = x + rng.uniform(-self.lateral * d, self.lateral * d,
                                       size=x.size)
                if self.domain.contains(cand):
                    x = cand
                    break
            out.append(x)
        return np.array(out)


class SlabLateralSampler:
    """Lateral boxes in a spacelike slab: the bounded time direction stays
    fixed while the spatial spread grows linearly with the scale, which is
    the flat direction of the slab metric."""

    def __init__(self, slab: SpacelikeSlab, base: float = 2.0):
        self.slab = slab
        self.base = float(base)

    def points(self, rng, count, scale):
        h = self.slab.height
        t = rng.uniform(-0.7 * h, 0.7 * h, size=count)
        p = rng.uniform(-self.base * scale * h, self.base * scale * h,
                        size=(count, self.slab.n))
        return np.concatenate([t[:, None], p], axis=1)


def matrix_evaluator_for(domain: DomainOracle, k: int = 128,
                         ladders: int = 24, pad_frac: float = 0.35):
    """Pairwise Markowitz evaluator: exact closed form when available,
    otherwise a shared null lattice (R^{1,1} only)."""
    if isinstance(domain, Diamond) and domain.widening == 0.0 and domain.n == 1:
        a, b = domain.a, domain.b
        return lambda P: oracles.delta_diamond_matrix(a, b, P)
    if isinstance(domain, HalfSpaceFuture) and domain.n == 1 \
            and np.allclose(domain.point, 0) \
            and np.allclose(domain.euclid_normal, [1.0, 0.0]):
        return lambda P: oracles.delta_halfspace_matrix(P)
    if isinstance(domain, SpacelikeSlab):
        h = domain.height
        return lambda P: oracles.delta_slab_matrix(h, P)

    def run(P):
        return LatticeEvaluator(domain, P, k=k, pad_frac=pad_frac,
                                ladders=ladders).pairwise()

    return run


def default_sampler_for(domain: DomainOracle, base: float = 1.0):
    if isinstance(domain, Diamond):
        if domain.widening == 0.0:
            return DiamondPhiSampler(domain, base=2.0 * base)
        ta = domain.a[0]
        tb = domain.b[0]
        return AxisDepthSampler(domain, ta, tb, base=base)
    if isinstance(domain, HalfSpaceFuture):
        return HalfSpaceLogSampler(base=base)
    if isinstance(domain, SpacelikeSlab):
        return SlabLateralSampler(domain, base=2.0 * base)
    if isinstance(domain, ConePiece) and domain.orientation == +1:
        return AxisDepthSampler(domain, domain.apex[0], math.inf, base=base)
    raise DomainError("no default scale sampler for this domain family")


# ---------------------------------------------------------------------------
# Quasi-geodesics of the conformal pseudodistance
# ---------------------------------------------------------------------------

def causal_quasigeodesic(domain: DomainOracle, x, y, m: int = 16,
                         tau=None) -> CausalPath:
    """Causal polygonal path from x to y whose vertices have equal ln tau
    increments.  tau defaults to the past cosmological time on future
    complete domains and to the ratio tau^-/tau^+ on bounded ones.  Along
    such a reparametrization the path is a (2,0)-quasi-geodesic of the
    Markowitz metric."""
    x = domain.require_member(x)
    y = domain.require_member(y)
    if tau is None:
        if domain.future_complete:
            tau = lambda z: domain.cosmo_time(z, PAST)
        else:
            tau = lambda z: (domain.cosmo_time(z, PAST)
                             / domain.cosmo_time(z, FUTURE))
    if np.array_equal(x, y):
        return CausalPath([x], [math.log(tau(x))])
    if not causally_related(x, y):
        raise CausalityError("quasi-geodesic construction needs a causal pair")
    if y[0] < x[0]:
        x, y = y, x
    lx = math.log(tau(x))
    ly = math.log(tau(y))
    targets = np.linspace(lx, ly, m + 1)
    verts = [x]
    for lam in targets[1:-1]:
        lo, hi = 0.0, 1.0
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if math.log(tau(x + mid * (y - x))) < lam:
                lo = mid
            else:
                hi = mid
        verts.append(x + 0.5 * (lo + hi) * (y - x))
    verts.append(y)
    return CausalPath(verts, [float(t) for t in targets])


@dataclass
class QuasiGeodesicTriangle:
    sides: list  # three vertex arrays
    constants: tuple = (2.0, 0.0)
    label: str = ""

    def all_vertices(self):
        return np.vstack([np.asarray(s, float) for s in self.sides])


def causal_triangle(domain: DomainOracle, x, y, z, m: int = 32,
                    tau=None) -> QuasiGeodesicTriangle:
    """Triangle whose sides are causal quasi-geodesics (every vertex pair
    must be causally related)."""
    sides = []
    for a, b in ((x, y), (y, z), (z, x)):
        path = causal_quasigeodesic(domain, a, b, m=m, tau=tau)
        sides.append(np.vstack(path.vertices))
    return QuasiGeodesicTriangle(sides)


def _hausdorff_defect(D: np.ndarray, idx_a, idx_b) -> float:
    """One-sided Hausdorff defect max_{i in a} min_{j in b} D[i, j]."""
    sub = D[np.ix_(idx_a, idx_b)]
    return float(np.max(np.min(sub, axis=1)))


def thin_triangle_defect(matrix_evaluator, triangle: QuasiGeodesicTriangle) -> float:
    """Max over sides of the one-sided Hausdorff defect of the side
    against the union of the other two sides."""
    sides = [np.asarray(s, float) for s in triangle.sides]
    P = np.vstack(sides)
    D = np.asarray(matrix_evaluator(P), float)
    offs = np.cumsum([0] + [len(s) for s in sides])
    ids = [list(range(offs[i], offs[i + 1])) for i in range(3)]
    worst = 0.0
    for i in range(3):
        other = ids[(i + 1) % 3] + ids[(i + 2) % 3]
        worst = max(worst, _hausdorff_defect(D, ids[i], other))
    return worst


# ---------------------------------------------------------------------------
# Witness families
# ---------------------------------------------------------------------------

LIGHTLIKE_BOUNDARY = "lightlike-boundary"
BROKEN_SEGMENT = "broken-segment"
FLAT_SLICE = "flat-slice"

# A lightlike boundary ray is accepted when a parallel lightlike probe
# stays within this boundary distance over a unit-scale run.
FEATURE_BAND = 0.35


def _segment(a, b, m):
    ts = np.linspace(0.0, 1.0, m)[:, None]
    return (1 - ts) * np.asarray(a, float)[None, :] + ts * np.asarray(b, float)[None, :]


def _audit_lightlike_feature(domain: DomainOracle, p, direction, span: float) -> bool:
    """Shoot a lightlike probe just above the claimed boundary ray and
    check the boundary distance stays small along it."""
    p = np.asarray(p, float)
    v = np.asarray(direction, float)
    start = p + np.concatenate(([0.05], np.zeros(len(p) - 1)))
    for s in np.linspace(0.1, span, 12):
        q = start + s * v
        if not domain.contains(q):
            return False
        if domain.boundary_distance(q) > FEATURE_BAND:
            return False
    return True


def witness_family(domain: DomainOracle, kind: str, k: int,
                   anchor=None, m: int = 33) -> QuasiGeodesicTriangle:
    """The k-th triangle of an escaping family certifying that the domain
    is not Gromov hyperbolic for the Markowitz metric.

    lightlike-boundary: boundary contains a lightlike half-line at the
    anchor; x_k hugs the anchor at depth 2^-k, y_k runs far along the
    parallel lightlike ray, z_k closes up on the anchor's time axis.
    flat-slice: Euclidean triangle of scale 2^k in the t = 0 slice.
    broken-segment: two lightlike legs against the straight causal chord.
    """
    if kind == FLAT_SLICE:
        if not isinstance(domain, SpacelikeSlab):
            raise DomainError("flat-slice family needs a spacelike slab")
        s = 2.0 ** k
        x = np.zeros(domain.n + 1)
        y = np.zeros(domain.n + 1)
        z = np.zeros(domain.n + 1)
        x[1] = 0.0
        y[1] = s
        z[1] = 0.5 * s
        if domain.n >= 2:
            z[2] = 0.5 * math.sqrt(3.0) * s
        else:
            # the t = 0 slice of R^{1,1} is a line; close the triangle with
            # a spacelike detour inside the slab
            z[0] = min(0.45 * domain.height, 0.25 * s)
        sides = [_segment(x, y, m), _segment(y, z, m), _segment(z, x, m)]
        return QuasiGeodesicTriangle(sides, label="flat-slice k=%d" % k)

    if kind == BROKEN_SEGMENT:
        base = np.zeros(domain.n + 1) if anchor is None else np.asarray(anchor, float)
        s = 2.0 ** k
        e = np.zeros(domain.n + 1)
        e[0] = 1.0
        e[1] = 1.0
        f = np.zeros(domain.n + 1)
        f[0] = 1.0
        f[1] = -1.0
        x = base
        mid = base + s * e
        z = mid + s * f
        for q in (x, mid, z):
            domain.require_member(q)
        sides = [_segment(x, mid, m), _segment(mid, z, m), _segment(z, x, m)]
        return QuasiGeodesicTriangle(sides, label="broken-segment k=%d" % k)

    if kind != LIGHTLIKE_BOUNDARY:
        raise ValueError("unknown witness family kind %r" % kind)

    p = np.zeros(domain.n + 1) if anchor is None else np.asarray(anchor, float)
    e_time = np.zeros(domain.n + 1)
    e_time[0] = 1.0
    ray = np.zeros(domain.n + 1)
    ray[0] = 1.0
    ray[1] = 1.0
    span = 2.0 ** max(k, 2)
    if not _audit_lightlike_feature(domain, p, ray, span):
        raise DomainError("boundary has no lightlike half-line at the anchor")
    depth = 2.0 ** (-k)
    R = 2.0 ** k
    x = p + depth * e_time
    y = x + R * ray
    z = p + (depth + 2.0 * R) * e_time
    for q in (x, y, z):
        domain.require_member(q)
    sides = [_segment(x, y, m), _segment(y, z, m), _segment(z, x, m)]
    return QuasiGeodesicTriangle(sides, label="lightlike-boundary k=%d" % k)


# ---------------------------------------------------------------------------
# Causal thinness (bigons)
# ---------------------------------------------------------------------------

def _check_causal_polyline(pts):
    pts = np.asarray(pts, float)
    for i in range(len(pts) - 1):
        d = pts[i + 1] - pts[i]
        if float(d @ d) == 0.0:
            continue
        if not causally_related(pts[i], pts[i + 1]):
            raise CausalityError("bigon curves must be causal polylines")


def causal_thinness(domain: DomainOracle, matrix_evaluator, bigons) -> float:
    """Max symmetrized Hausdorff defect over causal bigons (pairs of
    causal polylines sharing endpoints)."""
    worst = 0.0
    for left, right in bigons:
        left = np.asarray(left, float)
        right = np.asarray(right, float)
        if not (np.allclose(left[0], right[0]) and np.allclose(left[-1], right[-1])):
            raise ValueError("bigon curves must share endpoints")
        _check_causal_polyline(left)
        _check_causal_polyline(right)
        P = np.vstack([left, right])
        D = np.asarray(matrix_evaluator(P), float)
        ia = list(range(len(left)))
        ib = list(range(len(left), len(P)))
        worst = max(worst, _hausdorff_defect(D, ia, ib),
                    _hausdorff_defect(D, ib, ia))
    return worst


def zigzag_axis_bigons(domain: DomainOracle, x, y, scales=(1, 2, 3, 4),
                       m: int = 6):
    """Bigons between the straight causal segment [x, y] and lightlike
    zigzags of increasing leg count (same endpoints)."""
    x = domain.require_member(x)
    y = domain.require_member(y)
    if not causally_related(x, y):
        raise CausalityError("bigon endpoints must be causally related")
    out = []
    straight = _segment(x, y, 2 * m + 1)
    for s in scales:
        zig = zigzag_points(x, y, int(s) * m)
        out.append((straight, zig))
    return out
