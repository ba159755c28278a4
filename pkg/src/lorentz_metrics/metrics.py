"""The four distance solvers: Markowitz (chain Dijkstra upper bounds and
projective-witness lower bounds), quasi-hyperbolic, null distance and
Hilbert, plus the infinitesimal functionals.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra as _sp_dijkstra

from .core import (
    AT_INFINITY,
    FUTURE,
    PAST,
    CausalityError,
    ProjectiveInterval,
    as_event,
    causally_related,
    cross_ratio_log,
    is_infinite,
    is_lightlike,
    null_coords,
    rho_interval,
    wick_norm,
)
from .domains import (
    ConePiece,
    Diamond,
    DomainOracle,
    EuclideanBall,
    HalfSpaceFuture,
    IntersectionDomain,
    SpacelikeSlab,
)
from .chaingraph import (
    NullLattice,
    SolverError,
    WebMesh,
    interval_log_phi,
    pair_coords,
    union_coords,
    web_upper,
)
from . import oracles

UPPER = "upper"
LOWER = "lower"
EXACT = "exact"

# Default acceptance slack for mesh-limited estimates: 5% relative or 0.05
# absolute, whichever is larger.
def mesh_slack(value: float) -> float:
    return max(0.05 * abs(value), 0.05)


@dataclass
class DistanceEstimate:
    value: float
    kind: str  # upper | lower | exact
    mesh: dict = field(default_factory=dict)
    witness: object = None
    degenerate: bool = False


@dataclass
class LightlikeChain:
    vertices: list
    costs: list

    @property
    def total(self) -> float:
        return float(sum(self.costs))

    def recompute_costs(self, domain: DomainOracle):
        return [markowitz_edge_cost(domain, self.vertices[i], self.vertices[i + 1])
                for i in range(len(self.vertices) - 1)]


@dataclass
class CausalPath:
    vertices: list
    tau_values: list

    @property
    def increments(self):
        return [self.tau_values[i + 1] - self.tau_values[i]
                for i in range(len(self.tau_values) - 1)]


@dataclass
class Mesh:
    """Chain-graph refinement parameters."""
    k: int = 64
    margin: int | None = None
    d: int = 8          # shot directions per node (n > 1)
    nodes: int = 150    # stratified random nodes (n > 1)
    zigzag: int = 24
    band: float = 0.05
    seed: int = 0

    def resolved_margin(self) -> int:
        return self.k // 2 if self.margin is None else self.margin

    def describe(self) -> dict:
        return {"k": self.k, "margin": self.resolved_margin(), "d": self.d,
                "nodes": self.nodes, "seed": self.seed}


# ---------------------------------------------------------------------------
# Infinitesimal functional and edge cost
# ---------------------------------------------------------------------------

def infinitesimal_markowitz(domain: DomainOracle, x, v) -> float:
    """F(x, v) = |v|/d_h(x, past exit) + |v|/d_h(x, future exit), dropping
    a term when the exit is infinite; 0 when both are."""
    x = domain.require_member(x)
    v = np.asarray(v, float)
    if not is_lightlike(v):
        raise ValueError("direction must be lightlike")
    s_plus = domain.exit_param(x, v)
    s_minus = domain.exit_param(x, -v)
    out = 0.0
    if np.isfinite(s_minus):
        out += 1.0 / s_minus
    if np.isfinite(s_plus):
        out += 1.0 / s_plus
    return out


def markowitz_edge_cost(domain: DomainOracle, p, q) -> float:
    """Projective cost of the one-link lightlike chain [p, q]: the log
    cross-ratio against the boundary exits of the common null line."""
    p = domain.require_member(p)
    q = domain.require_member(q)
    if np.array_equal(p, q):
        return 0.0
    v = q - p
    if not is_lightlike(v):
        raise ValueError("q - p must be lightlike")
    for lam in np.linspace(0.0, 1.0, 9):
        if not domain.contains(p + lam * v):
            raise ValueError("segment [p, q] exits the domain")
    s_fwd = domain.exit_param(p, v)
    s_bwd = domain.exit_param(p, -v)
    a = AT_INFINITY if not np.isfinite(s_bwd) else p - s_bwd * v
    b = AT_INFINITY if not np.isfinite(s_fwd) else p + s_fwd * v
    return cross_ratio_log(a, p, q, b)


# ---------------------------------------------------------------------------
# Markowitz upper bounds
# ---------------------------------------------------------------------------

def markowitz_upper(domain: DomainOracle, x, y, mesh: Mesh | None = None,
                    seed_paths=None) -> DistanceEstimate:
    """Chain-Dijkstra upper bound for the Markowitz distance.

    Dimension 1+1 uses the null lattice through x and y (y is a node by
    construction); higher dimension uses the random web with shot rays.
    Refining the mesh never increases the value.
    """
    mesh = mesh or Mesh()
    x = domain.require_member(x)
    y = domain.require_member(y)
    if np.array_equal(x, y):
        return DistanceEstimate(0.0, UPPER, mesh.describe())
    if domain.n == 1:
        u_vals, w_vals = pair_coords(domain, x, y, mesh.k, mesh.resolved_margin())
        lat = NullLattice(domain, u_vals, w_vals)
        if lat.degenerate:
            return DistanceEstimate(math.nan, UPPER, mesh.describe(),
                                    degenerate=True)
        ix = lat.node_of(x)
        iy = lat.node_of(y)
        dist, pred = lat.distances([ix], return_predecessors=True)
        val = float(dist[0, iy])
        if not np.isfinite(val):
            raise SolverError("chain lattice disconnected; increase mesh.k or mesh.margin")
        pts = lat.path_points(pred, 0, iy)
        chain = _merge_chain(domain, pts)
        return DistanceEstimate(val, UPPER, mesh.describe(), witness=chain)
    val, pts = web_upper(domain, x, y,
                         WebMesh(nodes=mesh.nodes, d=mesh.d, zigzag=mesh.zigzag,
                                 band=mesh.band, seed=mesh.seed),
                         seed_paths=seed_paths)
    chain = LightlikeChain(list(pts), [float("nan")] * (len(pts) - 1))
    return DistanceEstimate(val, UPPER, mesh.describe(), witness=chain)


def _merge_chain(domain: DomainOracle, pts) -> LightlikeChain:
    """Merge collinear runs of a lattice path into a chain with one link
    per null line, recosting each merged link."""
    pts = np.asarray(pts, float)
    keep = [0]
    for i in range(1, len(pts) - 1):
        d1 = pts[i] - pts[keep[-1]]
        d2 = pts[i + 1] - pts[i]
        cross = d1[0] * d2[1] - d1[1] * d2[0]
        if abs(cross) > 1e-12 * (wick_norm(d1) * wick_norm(d2) + 1e-300):
            keep.append(i)
    keep.append(len(pts) - 1)
    verts = [pts[i] for i in keep]
    costs = [markowitz_edge_cost(domain, verts[i], verts[i + 1])
             for i in range(len(verts) - 1)]
    return LightlikeChain(verts, costs)


# ---------------------------------------------------------------------------
# Markowitz lower bounds
# ---------------------------------------------------------------------------

def functional_interval(domain: DomainOracle, c) -> ProjectiveInterval | None:
    """The interval ell(domain) for the affine functional ell(z) = c.z, or
    None when the image is the whole line (invalid witness)."""
    c = np.asarray(c, float)
    if isinstance(domain, HalfSpaceFuture):
        e = domain.euclid_normal
        alpha = float(c @ e) / float(e @ e)
        if np.linalg.norm(c - alpha * e) > 1e-12 * np.linalg.norm(c):
            return None
        level = float(c @ domain.point)
        if alpha > 0:
            return ProjectiveInterval(level, math.inf)
        if alpha < 0:
            return ProjectiveInterval(-math.inf, level)
        return None
    if isinstance(domain, ConePiece):
        if domain.sub_dim < domain.n and np.any(np.abs(c[1 + domain.sub_dim:]) > 1e-14):
            return None
        c0 = domain.orientation * c[0]
        csp = float(np.linalg.norm(c[1:1 + domain.sub_dim]))
        level = float(c @ domain.apex)
        if c0 > domain.c * csp + 1e-14:
            return (ProjectiveInterval(level, math.inf) if domain.orientation == +1
                    else ProjectiveInterval(-math.inf, level))
        if c0 < -(domain.c * csp) - 1e-14:
            return (ProjectiveInterval(-math.inf, level) if domain.orientation == +1
                    else ProjectiveInterval(level, math.inf))
        return None
    if isinstance(domain, IntersectionDomain):
        lo, hi = -math.inf, math.inf
        for part in domain.parts:
            J = functional_interval(part, c)
            if J is None:
                continue
            lo = max(lo, J.lower)
            hi = min(hi, J.upper)
        if lo >= hi or (math.isinf(lo) and math.isinf(hi)):
            return None
        return ProjectiveInterval(lo, hi)
    if isinstance(domain, SpacelikeSlab):
        if np.any(np.abs(c[1:]) > 1e-14) or c[0] == 0:
            return None
        lo, hi = sorted((-c[0] * domain.height, c[0] * domain.height))
        return ProjectiveInterval(lo, hi)
    if isinstance(domain, EuclideanBall):
        mid = float(c @ domain.center)
        rad = float(np.linalg.norm(c)) * domain.radius
        return ProjectiveInterval(mid - rad, mid + rad)
    return None


def _default_witness_directions(n: int):
    out = [np.concatenate(([1.0], np.zeros(n)))]
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        out.append(np.concatenate(([1.0], e)))
        out.append(np.concatenate(([1.0], -e)))
        out.append(np.concatenate(([0.0], e)))
    return out


def markowitz_lower(domain: DomainOracle, x, y, witnesses=None) -> DistanceEstimate:
    """Certified lower bound: the best of (a) projective scores of affine
    functionals with strict interval image, (b) exact distances of
    containing special domains (here: the domain itself when it has a
    closed form)."""
    if not domain.convex:
        raise ValueError("lower-bound witnesses require a convex domain")
    x = domain.require_member(x)
    y = domain.require_member(y)
    if np.array_equal(x, y):
        return DistanceEstimate(0.0, LOWER, witness="trivial")
    best = 0.0
    best_witness = None

    # (b) containment in a domain of known exact distance; the tightest
    # such witness is the domain itself when a closed form applies.
    exact = _self_exact(domain, x, y)
    if exact is not None:
        best, best_witness = exact

    # (a) affine functionals.
    directions = list(witnesses or [])
    directions += _default_witness_directions(domain.n)
    for c in directions:
        c = np.asarray(c, float)
        J = functional_interval(domain, c)
        if J is None:
            continue
        lx, ly = float(c @ x), float(c @ y)
        if not (J.contains(lx) and J.contains(ly)):
            continue
        score = rho_interval(J, lx, ly)
        if score > best:
            best = score
            best_witness = ("affine", c, J)
    return DistanceEstimate(best, LOWER, witness=best_witness)


def _self_exact(domain, x, y):
    if isinstance(domain, Diamond) and domain.widening == 0.0 and domain.n == 1:
        return (oracles.delta_diamond_2d(domain.a, domain.b, x, y),
                ("containment", "diamond exact formula"))
    if isinstance(domain, ConePiece) and domain.widening == 0.0 \
            and domain.orientation == +1 and domain.sub_dim == domain.n:
        if domain.n == 1:
            return (oracles.delta_cone_exact_2d(domain.apex, x, y),
                    ("containment", "cone exact formula"))
        if causally_related(x, y):
            return (oracles.delta_cone_future(domain.apex, x, y),
                    ("containment", "cone causal formula"))
    if isinstance(domain, HalfSpaceFuture):
        if domain.n == 1:
            return (oracles.delta_halfspace_exact_2d(domain, x, y),
                    ("containment", "half-space exact formula"))
        if causally_related(x, y):
            return (oracles.delta_halfspace(domain, x, y),
                    ("containment", "half-space causal formula"))
    return None


# ---------------------------------------------------------------------------
# Quasi-hyperbolic distance
# ---------------------------------------------------------------------------

@dataclass
class QhGrid:
    h: float = 0.05
    pad: float | None = None
    lightlike_only: bool = False
    smooth_iters: int = 25
    smooth_vertices: int = 48
    quad_points: int = 8

    def describe(self) -> dict:
        return {"h": self.h, "lightlike_only": self.lightlike_only,
                "smooth_iters": self.smooth_iters}


def _segment_lengths(domain: DomainOracle, A, B, subdiv: int):
    """Quasi-hyperbolic lengths of straight segments A_i -> B_i via the
    composite trapezoid rule on the density 1/d_h(., boundary)."""
    A = np.atleast_2d(np.asarray(A, float))
    B = np.atleast_2d(np.asarray(B, float))
    ts = np.linspace(0.0, 1.0, subdiv + 1)
    pts = A[:, None, :] + ts[None, :, None] * (B - A)[:, None, :]
    flat = pts.reshape(-1, A.shape[1])
    inside = domain.contains_many(flat)
    dvals = np.full(len(flat), np.nan)
    if np.any(inside):
        dvals[inside] = domain.boundary_distance_many(flat[inside])
    dvals = dvals.reshape(len(A), subdiv + 1)
    bad = ~np.all(np.isfinite(dvals) & (dvals > 0), axis=1)
    inv = 1.0 / np.where(dvals > 0, dvals, np.nan)
    integral = np.trapezoid(inv, ts, axis=1)
    out = integral * np.linalg.norm(B - A, axis=1)
    out[bad] = np.inf
    return out


def _polyline_length(domain: DomainOracle, pts, subdiv: int = 16) -> float:
    pts = np.asarray(pts, float)
    if len(pts) < 2:
        return 0.0
    return float(np.sum(_segment_lengths(domain, pts[:-1], pts[1:], subdiv)))


def _resample_polyline(pts, target: int):
    pts = np.asarray(pts, float)
    seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    if len(pts) < 2 or np.sum(seg) == 0:
        return pts
    s = np.concatenate([[0.0], np.cumsum(seg)])
    want = np.linspace(0.0, s[-1], target)
    out = np.empty((target, pts.shape[1]))
    for c in range(pts.shape[1]):
        out[:, c] = np.interp(want, s, pts[:, c])
    out[0] = pts[0]
    out[-1] = pts[-1]
    return out


def _smooth_path(domain: DomainOracle, pts, grid: QhGrid):
    """Red-black Gauss-Seidel vertex relaxation: pull each interior vertex
    toward the midpoint of its neighbors when that shortens the
    quasi-hyperbolic length; removes the grid stencil's direction bias."""
    pts = _resample_polyline(pts, grid.smooth_vertices)
    m = len(pts)
    if m < 3:
        return pts
    sub = grid.quad_points
    for _ in range(grid.smooth_iters):
        moved = False
        for parity in (1, 0):
            idx = np.arange(1, m - 1)
            idx = idx[idx % 2 == parity]
            if len(idx) == 0:
                continue
            mid = 0.5 * (pts[idx - 1] + pts[idx + 1])
            for lam in (1.0, 0.5, 0.25):
                cand = (1 - lam) * pts[idx] + lam * mid
                old = (_segment_lengths(domain, pts[idx - 1], pts[idx], sub)
                       + _segment_lengths(domain, pts[idx], pts[idx + 1], sub))
                new = (_segment_lengths(domain, pts[idx - 1], cand, sub)
                       + _segment_lengths(domain, cand, pts[idx + 1], sub))
                ok = domain.contains_many(cand) & (new < old - 1e-14)
                if np.any(ok):
                    pts[idx[ok]] = cand[ok]
                    moved = True
        if not moved:
            break
    return pts


def quasi_hyperbolic_distance(domain: DomainOracle, x, y,
                              grid: QhGrid | None = None) -> DistanceEstimate:
    """Upper bound for the quasi-hyperbolic distance k via Dijkstra on a
    regular grid (full 3^{n+1}-1 stencil) followed by path smoothing."""
    grid = grid or QhGrid()
    x = domain.require_member(x)
    y = domain.require_member(y)
    if np.array_equal(x, y):
        return DistanceEstimate(0.0, UPPER, grid.describe())
    dim = domain.n + 1
    h = grid.h
    gap = float(np.linalg.norm(y - x))
    pad = grid.pad if grid.pad is not None else 0.35 * gap + 4 * h
    lo = np.minimum(x, y) - pad
    hi = np.maximum(x, y) + pad
    axes = []
    for c in range(dim):
        left = int(math.floor((lo[c] - x[c]) / h))
        right = int(math.ceil((hi[c] - x[c]) / h))
        axes.append(x[c] + h * np.arange(left, right + 1))
    shape = tuple(len(a) for a in axes)
    pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, dim)
    inside = domain.contains_many(pts)
    node_id = -np.ones(len(pts), dtype=np.int64)
    node_id[inside] = np.arange(int(inside.sum()))
    dvals = np.full(len(pts), np.nan)
    dvals[inside] = domain.boundary_distance_many(pts[inside])
    node_grid = node_id.reshape(shape)
    d_grid = dvals.reshape(shape)

    offsets = [off for off in itertools.product((-1, 0, 1), repeat=dim)
               if any(off) and off > tuple([0] * dim)]
    if grid.lightlike_only:
        offsets = [off for off in offsets
                   if abs(off[0]) == 1 and sum(o * o for o in off[1:]) == 1]
    rows, cols, weights = [], [], []
    for off in offsets:
        src_sl = tuple(slice(max(0, -o), min(s, s - o)) for o, s in zip(off, shape))
        dst_sl = tuple(slice(max(0, o), min(s, s + o)) for o, s in zip(off, shape))
        a = node_grid[src_sl]
        b = node_grid[dst_sl]
        ok = (a >= 0) & (b >= 0)
        if not np.any(ok):
            continue
        length = h * math.sqrt(sum(o * o for o in off))
        w = length * 0.5 * (1.0 / d_grid[src_sl][ok] + 1.0 / d_grid[dst_sl][ok])
        rows.append(a[ok])
        cols.append(b[ok])
        weights.append(w)
    if not rows:
        raise SolverError("grid has no edges inside the domain; reduce grid.h")
    N = int(inside.sum())
    graph = coo_matrix((np.concatenate(weights),
                        (np.concatenate(rows), np.concatenate(cols))),
                       shape=(N, N)).tocsr()

    flat_pts = pts[inside]
    ix = int(np.argmin(np.linalg.norm(flat_pts - x, axis=1)))
    iy = int(np.argmin(np.linalg.norm(flat_pts - y, axis=1)))
    dist, pred = _sp_dijkstra(graph, directed=False, indices=np.array([ix]),
                              return_predecessors=True)
    if not np.isfinite(dist[0, iy]):
        raise SolverError("endpoints not connectable on the grid; reduce grid.h")
    seq = [iy]
    while pred[0, seq[-1]] >= 0:
        seq.append(int(pred[0, seq[-1]]))
    seq.reverse()
    path = np.vstack([x[None, :], flat_pts[np.array(seq)], y[None, :]])
    path = _smooth_path(domain, path, grid)
    val = _polyline_length(domain, path, subdiv=16)
    return DistanceEstimate(val, UPPER, grid.describe(), witness=path)


def quasi_hyperbolic_halfplane_oracle(x, y) -> float:
    """Hyperbolic distance of the upper half-plane model for the standard
    half-space {t > 0} (independent oracle for tests):
    arccosh(1 + (wick gap)^2 / (2 t_x t_y))."""
    x = as_event(x)
    y = as_event(y)
    g = wick_norm(y - x)
    return math.acosh(1.0 + g * g / (2.0 * x[0] * y[0]))


# ---------------------------------------------------------------------------
# Null distance
# ---------------------------------------------------------------------------

@dataclass
class TimeFunction:
    """A time function handle: vectorized values over point rows."""
    name: str
    fn: object

    def __call__(self, P):
        return np.asarray(self.fn(np.atleast_2d(np.asarray(P, float))), float)

    def at(self, x) -> float:
        return float(self(np.asarray(x, float)[None, :])[0])


def ln_tau_minus(domain: DomainOracle) -> TimeFunction:
    def fn(P):
        return np.log(_cosmo_many(domain, P, PAST))
    return TimeFunction("ln_tau_minus", fn)


def ln_tau_ratio(domain: DomainOracle) -> TimeFunction:
    def fn(P):
        return np.log(_cosmo_many(domain, P, PAST)) - np.log(_cosmo_many(domain, P, FUTURE))
    return TimeFunction("ln_tau_ratio", fn)


def _cosmo_many(domain: DomainOracle, P, sign) -> np.ndarray:
    P = np.atleast_2d(np.asarray(P, float))
    if hasattr(domain, "cosmo_time_many"):
        return domain.cosmo_time_many(P, sign)
    return np.fromiter((domain.cosmo_time(p, sign) for p in P), float, count=len(P))


def validate_time_function(domain: DomainOracle, tau: TimeFunction,
                           rng=None, samples: int = 64):
    """Reject handles that fail to increase along sampled future links."""
    rng = np.random.default_rng(7) if rng is None else rng
    pts = domain.sample(rng, samples)
    steps = rng.uniform(0.05, 0.2, size=samples)
    speeds = rng.uniform(0.0, 0.95, size=samples)
    u = rng.normal(size=(samples, domain.n))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    v = np.concatenate([np.ones((samples, 1)), speeds[:, None] * u], axis=1)
    fut = pts + steps[:, None] * v
    keep = domain.contains_many(fut)
    if np.any(tau(fut[keep]) <= tau(pts[keep])):
        raise ValueError("time function is not increasing along future links")


def null_distance(domain: DomainOracle, tau: TimeFunction, x, y,
                  mesh: Mesh | None = None) -> DistanceEstimate:
    """Null distance for the time function tau: exact |d tau| for causal
    pairs, otherwise a causal zigzag Dijkstra upper bound."""
    mesh = mesh or Mesh()
    x = domain.require_member(x)
    y = domain.require_member(y)
    if np.array_equal(x, y):
        return DistanceEstimate(0.0, EXACT)
    if causally_related(x, y):
        return DistanceEstimate(abs(tau.at(y) - tau.at(x)), EXACT,
                                witness="causal pair")
    if domain.n == 1:
        u_vals, w_vals = pair_coords(domain, x, y, mesh.k, mesh.resolved_margin())
        lat = NullLattice(domain, u_vals, w_vals, weight_mode=tau)
        ix = lat.node_of(x)
        iy = lat.node_of(y)
        dist = lat.distances([ix])
        val = float(dist[0, iy])
        if not np.isfinite(val):
            raise SolverError("zigzag lattice disconnected; refine the mesh")
        return DistanceEstimate(val, UPPER, mesh.describe())
    # Higher dimension: Dijkstra on sampled causal pairs; any causal edge
    # carries its exact null length |d tau|, so path sums are upper bounds.
    rng = np.random.default_rng(mesh.seed)
    lo = np.minimum(x, y)
    hi = np.maximum(x, y)
    pad = 0.75 * (np.linalg.norm(hi - lo) + 1e-9)
    P = np.vstack([x[None, :], y[None, :],
                   domain.sample(rng, mesh.nodes, box=(lo - pad, hi + pad))])
    vals = tau(P)
    dt = P[:, 0][None, :] - P[:, 0][:, None]
    sp = np.linalg.norm(P[None, :, 1:] - P[:, None, 1:], axis=2)
    causal = np.abs(dt) >= sp
    iu = np.triu_indices(len(P), k=1)
    sel = causal[iu]
    w = np.abs(vals[iu[1]] - vals[iu[0]])[sel]
    graph = coo_matrix((w, (iu[0][sel], iu[1][sel])),
                       shape=(len(P), len(P))).tocsr()
    dist = _sp_dijkstra(graph, directed=False, indices=np.array([0]))
    val = float(dist[0, 1])
    if not np.isfinite(val):
        raise SolverError("causal zigzag graph disconnected; add nodes")
    return DistanceEstimate(val, UPPER, mesh.describe())


# ---------------------------------------------------------------------------
# Hilbert distance
# ---------------------------------------------------------------------------

def hilbert_distance(domain: DomainOracle, x, y) -> float:
    """Straight-line log cross-ratio against the chord exits (the paper's
    normalization: twice the classical Hilbert metric)."""
    if not domain.convex:
        raise ValueError("Hilbert distance requires a convex domain")
    x = domain.require_member(x)
    y = domain.require_member(y)
    if np.array_equal(x, y):
        return 0.0
    v = y - x
    s_fwd = domain.exit_param(x, v)
    s_bwd = domain.exit_param(x, -v)
    lo = -s_bwd if np.isfinite(s_bwd) else -math.inf
    hi = s_fwd if np.isfinite(s_fwd) else math.inf
    if math.isinf(lo) and math.isinf(hi):
        return 0.0
    J = ProjectiveInterval(lo, hi)
    return rho_interval(J, 0.0, 1.0)


# ---------------------------------------------------------------------------
# Batch pairwise evaluation (shared lattice, R^{1,1})
# ---------------------------------------------------------------------------

class LatticeEvaluator:
    """Pairwise Markowitz (or null) distances for a point set of a domain
    in R^{1,1}: one shared null lattice whose coordinate arrays contain
    every query point, multi-source Dijkstra in one sweep."""

    def __init__(self, domain: DomainOracle, points, k: int = 192,
                 pad_frac: float = 0.5, ladders: int = 0, span=None,
                 weight_mode="projective"):
        if domain.n != 1:
            raise SolverError("LatticeEvaluator is specific to R^{1,1}")
        self.domain = domain
        P = np.atleast_2d(np.asarray(points, float))
        U = P[:, 0] + P[:, 1]
        W = P[:, 0] - P[:, 1]
        if span is None:
            uspan = (U.min(), U.max())
            wspan = (W.min(), W.max())
            upad = pad_frac * (uspan[1] - uspan[0] + 1e-9)
            wpad = pad_frac * (wspan[1] - wspan[0] + 1e-9)
            uspan = (uspan[0] - upad, uspan[1] + upad)
            wspan = (wspan[0] - wpad, wspan[1] + wpad)
        else:
            uspan, wspan = span
        u_vals = union_coords(U, uspan[0], uspan[1], k, ladders)
        w_vals = union_coords(W, wspan[0], wspan[1], k, ladders)
        self.lattice = NullLattice(domain, u_vals, w_vals, weight_mode=weight_mode)
        self.points = P
        self.ids = np.array([self.lattice.node_of(p) for p in P], dtype=np.int64)

    def pairwise(self) -> np.ndarray:
        uniq, inv = np.unique(self.ids, return_inverse=True)
        dist = self.lattice.distances(uniq)
        return dist[inv][:, self.ids]

    def distances_from(self, idx: int) -> np.ndarray:
        dist = self.lattice.distances([self.ids[idx]])
        return dist[0, self.ids]
