"""Shortest-path machinery for lightlike chain graphs.

In R^{1,1} the lightlike directions are the two null coordinate axes
U = t + p, W = t - p, so chain graphs are lattices of null coordinate
lines; the cost of a step along a line is the projective distance of the
line's chord interval, evaluated in the interval's log coordinate.  In
higher dimension the graph is a web of shot lightlike rays plus
near-lightlike node pairs re-projected onto exact lightlike segments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra as _sp_dijkstra

from .core import from_null, null_coords
from .domains import DomainOracle


class SolverError(RuntimeError):
    """Chain graph could not answer the query (e.g. disconnected)."""


def interval_log_phi(lo, hi, u):
    """Vectorized log coordinate of u in the interval (lo, hi); entries of
    lo may be -inf and of hi +inf.  Both infinite gives 0 (degenerate
    line, zero projective length)."""
    lo = np.asarray(lo, float)
    hi = np.asarray(hi, float)
    u = np.asarray(u, float)
    out = np.zeros(np.broadcast_shapes(lo.shape, hi.shape, u.shape))
    lo, hi, u = np.broadcast_arrays(lo, hi, u)
    fin_lo = np.isfinite(lo)
    fin_hi = np.isfinite(hi)
    both = fin_lo & fin_hi
    with np.errstate(divide="ignore", invalid="ignore"):
        out[both] = np.log(u[both] - lo[both]) - np.log(hi[both] - u[both])
        m = fin_lo & ~fin_hi
        out[m] = np.log(u[m] - lo[m])
        m = ~fin_lo & fin_hi
        out[m] = -np.log(hi[m] - u[m])
    return out


class NullLattice:
    """Graph on a lattice of null coordinate lines of a domain in R^{1,1}.

    weight_mode 'projective' gives Markowitz chain costs (projective
    distance along each null line); passing a time function callable
    instead builds the causal zigzag graph with |d tau| weights for the
    null distance.
    """

    def __init__(self, domain: DomainOracle, u_vals, w_vals, weight_mode="projective"):
        if domain.n != 1:
            raise SolverError("null lattices are specific to R^{1,1}")
        self.domain = domain
        self.u_vals = np.asarray(u_vals, float)
        self.w_vals = np.asarray(w_vals, float)
        nu, nw = len(self.u_vals), len(self.w_vals)
        UU, WW = np.meshgrid(self.u_vals, self.w_vals, indexing="ij")
        pts = np.stack([(UU + WW) / 2.0, (UU - WW) / 2.0], axis=-1).reshape(-1, 2)
        inside = domain.contains_many(pts).reshape(nu, nw)
        self.inside = inside
        self.points = pts.reshape(nu, nw, 2)
        self.node_id = -np.ones((nu, nw), dtype=np.int64)
        self.node_id[inside] = np.arange(int(inside.sum()))
        self.n_nodes = int(inside.sum())
        self.degenerate = False

        rows, cols, weights = [], [], []
        if weight_mode == "projective":
            # Chord intervals of the null lines through every node.
            flat = self.points[inside]
            s_up = domain.exit_params_many(flat, np.array([1.0, 1.0]))
            s_dn = domain.exit_params_many(flat, np.array([-1.0, -1.0]))
            s_rp = domain.exit_params_many(flat, np.array([1.0, -1.0]))
            s_rn = domain.exit_params_many(flat, np.array([-1.0, 1.0]))
            U_hi = np.full((nu, nw), np.nan)
            U_lo = np.full((nu, nw), np.nan)
            W_hi = np.full((nu, nw), np.nan)
            W_lo = np.full((nu, nw), np.nan)
            U_hi[inside] = UU[inside] + 2.0 * s_up
            U_lo[inside] = UU[inside] - 2.0 * s_dn
            W_hi[inside] = WW[inside] + 2.0 * s_rp
            W_lo[inside] = WW[inside] - 2.0 * s_rn
            for axis, C_lo, C_hi, C in ((0, U_lo, U_hi, UU), (1, W_lo, W_hi, WW)):
                a = _axis_slice(axis, np.s_[:-1])
                b = _axis_slice(axis, np.s_[1:])
                ok = inside[a] & inside[b]
                # Guard against a lattice step that would leave the domain
                # (non-convex chord): the step must stay inside the chord
                # interval seen from its left node.
                ok &= C[b] <= C_hi[a] + 1e-9 * (1.0 + np.abs(C[b]))
                phi1 = interval_log_phi(C_lo[a][ok], C_hi[a][ok], C[a][ok])
                phi2 = interval_log_phi(C_lo[a][ok], C_hi[a][ok], np.minimum(C[b][ok], C_hi[a][ok] - 0.0))
                w = np.abs(phi2 - phi1)
                deg = ~np.isfinite(C_lo[a][ok]) & ~np.isfinite(C_hi[a][ok])
                if np.any(deg):
                    self.degenerate = True
                rows.append(self.node_id[a][ok])
                cols.append(self.node_id[b][ok])
                weights.append(w)
        else:
            tau = weight_mode
            vals = np.full((nu, nw), np.nan)
            vals[inside] = tau(self.points[inside])
            for axis in (0, 1):
                a = _axis_slice(axis, np.s_[:-1])
                b = _axis_slice(axis, np.s_[1:])
                ok = inside[a] & inside[b]
                w = np.abs(vals[b][ok] - vals[a][ok])
                rows.append(self.node_id[a][ok])
                cols.append(self.node_id[b][ok])
                weights.append(w)

        rows = np.concatenate(rows) if rows else np.zeros(0, np.int64)
        cols = np.concatenate(cols) if cols else np.zeros(0, np.int64)
        weights = np.concatenate(weights) if weights else np.zeros(0)
        bad = ~np.isfinite(weights)
        if np.any(bad):
            rows, cols, weights = rows[~bad], cols[~bad], weights[~bad]
        self.graph = coo_matrix((weights, (rows, cols)), shape=(self.n_nodes, self.n_nodes)).tocsr()

    def node_of(self, point) -> int:
        U, W = null_coords(point)
        i = _locate(self.u_vals, U)
        j = _locate(self.w_vals, W)
        if i < 0 or j < 0 or self.node_id[i, j] < 0:
            raise SolverError("point is not a lattice node")
        return int(self.node_id[i, j])

    def distances(self, sources, return_predecessors=False):
        sources = np.atleast_1d(np.asarray(sources, dtype=np.int64))
        return _sp_dijkstra(self.graph, directed=False, indices=sources,
                            return_predecessors=return_predecessors)

    def node_points(self):
        return self.points[self.inside]

    def path_points(self, predecessors, source_row: int, target: int):
        pred = predecessors[source_row]
        seq = [target]
        while pred[seq[-1]] >= 0:
            seq.append(int(pred[seq[-1]]))
        seq.reverse()
        return self.node_points()[np.array(seq, dtype=np.int64)]


def _axis_slice(axis, sl):
    return (sl, slice(None)) if axis == 0 else (slice(None), sl)


def _locate(vals, x) -> int:
    i = int(np.searchsorted(vals, x))
    for j in (i - 1, i, i + 1):
        if 0 <= j < len(vals) and abs(vals[j] - x) <= 1e-9 * (1.0 + abs(x)):
            return j
    return -1


def pair_coords(domain: DomainOracle, x, y, k: int, margin: int):
    """Spec lattice for a pair query: solve y - x = alpha u + beta w in the
    lightlike basis u = (1,1), w = (1,-1), subdivide each coefficient into
    k steps and extend `margin` extra steps on each side."""
    Ux, Wx = null_coords(x)
    Uy, Wy = null_coords(y)
    span = abs(Uy - Ux) + abs(Wy - Wx) + domain.scale
    du = (Uy - Ux) / k
    dw = (Wy - Wx) / k
    if abs(du) < 1e-12 * span:
        du = span / (2.0 * k)
    if abs(dw) < 1e-12 * span:
        dw = span / (2.0 * k)
    steps = np.arange(-margin, k + margin + 1, dtype=float)
    u_vals = np.sort(Ux + du * steps)
    w_vals = np.sort(Wx + dw * steps)
    return u_vals, w_vals


def union_coords(points_vals, lo: float, hi: float, k: int, ladders: int = 0):
    """Coordinate array spanning [lo, hi]: a uniform subdivision, the query
    values themselves, and optional geometric ladders toward each end for
    resolution near the boundary."""
    vals = [np.linspace(lo, hi, k + 1), np.asarray(points_vals, float)]
    if ladders:
        span = hi - lo
        j = np.arange(2, ladders + 2, dtype=float)
        vals.append(lo + span * 0.5 ** j)
        vals.append(hi - span * 0.5 ** j)
    out = np.unique(np.concatenate(vals))
    return out[(out >= lo - 1e-12 * (1 + abs(lo))) & (out <= hi + 1e-12 * (1 + abs(hi)))]


# ---------------------------------------------------------------------------
# Higher-dimension web
# ---------------------------------------------------------------------------

def zigzag_points(a, b, m: int):
    """Replace the segment [a, b] by 2m alternating lightlike steps inside
    the 2-plane spanned by b - a and the time axis; returns the knot list
    including both endpoints."""
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    d = b - a
    spat = d.copy()
    spat[0] = 0.0
    r = float(np.linalg.norm(spat))
    if r < 1e-14:
        # Timelike leg: split into up/down lightlike pairs in the plane of
        # the first spatial axis.
        e = np.zeros(len(d))
        e[1] = 1.0
    else:
        e = spat / r
    dt = d[0]
    # Per zig pair: advance (dt/m, r e/m) via two lightlike steps
    # s1*(1, e)+s2*(1, -e) with s1+s2 = dt/m, s1-s2 = r/m.
    s1 = (dt + r) / (2.0 * m)
    s2 = (dt - r) / (2.0 * m)
    up = np.concatenate(([1.0], e[1:]))
    dn = np.concatenate(([1.0], -e[1:]))
    pts = [a]
    cur = a
    for _ in range(m):
        cur = cur + s1 * up
        pts.append(cur)
        cur = cur + s2 * dn
        pts.append(cur)
    pts[-1] = b
    return np.array(pts)


def _lightlike_edge_costs(domain: DomainOracle, P, Q):
    """Projective cost of the exact lightlike segments [P_i, Q_i]; inf when
    the segment leaves the domain (exit before the far endpoint)."""
    V = Q - P
    s_fwd = _exits_pointwise(domain, P, V)
    s_bwd = _exits_pointwise(domain, P, -V)
    lo = np.where(np.isfinite(s_bwd), -s_bwd, -np.inf)
    hi = np.where(np.isfinite(s_fwd), s_fwd, np.inf)
    out = np.full(len(P), np.inf)
    ok = hi >= 1.0 - 1e-9
    out[ok] = np.abs(interval_log_phi(lo[ok], hi[ok], np.ones(int(ok.sum())))
                     - interval_log_phi(lo[ok], hi[ok], np.zeros(int(ok.sum()))))
    return out


def _leg_costs(domain: DomainOracle, P, Q):
    """Like _lightlike_edge_costs but tolerant of zero-length legs."""
    L = np.linalg.norm(Q - P, axis=1)
    out = np.zeros(len(P))
    nz = L > 1e-13
    if np.any(nz):
        out[nz] = _lightlike_edge_costs(domain, P[nz], Q[nz])
    return out


def _exits_pointwise(domain: DomainOracle, X, V):
    """Exit parameters for per-row directions."""
    try:
        return domain.exit_params_many(X, V)
    except Exception:
        out = np.empty(len(X))
        for i in range(len(X)):
            out[i] = domain.exit_param(X[i], V[i])
        return out


@dataclass
class WebMesh:
    nodes: int = 150
    d: int = 8
    zigzag: int = 24
    band: float = 0.05
    knot_fracs: tuple = (0.25, 0.5, 0.75)
    seed: int = 0
    shot_sources: int = 32   # nodes from which lightlike rays are shot
    max_nodes: int = 1500    # hard cap on the web size (memory bound)


def web_upper(domain: DomainOracle, x, y, mesh: WebMesh, seed_paths=None):
    """Chain-graph upper bound in dimension n >= 2.

    Nodes: x, y, stratified random samples, zigzag knots along the seed
    paths (default the straight segment), and knots on lightlike rays shot
    from every node.  Edges: consecutive knots on a common ray (exact
    lightlike) and any near-lightlike node pair re-projected onto an exact
    lightlike segment before costing.
    """
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    dim = domain.n + 1
    rng = np.random.default_rng(mesh.seed)

    pts = [x[None, :], y[None, :]]
    if seed_paths is None:
        seed_paths = [np.array([x, y])]
    for path in seed_paths:
        path = np.asarray(path, float)
        for i in range(len(path) - 1):
            zz = zigzag_points(path[i], path[i + 1],
                               max(2, mesh.zigzag // max(1, len(path) - 1)))
            pts.append(zz)
    # Stratified random nodes in the padded bounding box of the query.
    lo = np.minimum(x, y)
    hi = np.maximum(x, y)
    pad = 0.35 * (np.linalg.norm(hi - lo) + 1e-9) + 1e-3
    lo, hi = lo - pad, hi + pad
    cand = rng.uniform(lo, hi, size=(mesh.nodes * 3, dim))
    cand = cand[domain.contains_many(cand)][: mesh.nodes]
    if len(cand):
        pts.append(cand)
    base = np.vstack(pts)
    base = base[domain.contains_many(base)]

    # Shoot lightlike rays and drop knots at exit fractions.  Knots on a
    # common ray are exactly lightlike-related, so the band test below
    # recovers the along-ray edges without bookkeeping.
    knots = [base]
    if len(base) > mesh.shot_sources:
        pick = rng.choice(len(base), size=mesh.shot_sources, replace=False)
        sources = base[np.sort(pick)]
    else:
        sources = base
    angles = np.arange(mesh.d) * (2.0 * math.pi / mesh.d) + 0.123
    sph = rng.normal(size=(mesh.d, domain.n))
    for k in range(mesh.d):
        if domain.n == 2:
            u = np.array([math.cos(angles[k]), math.sin(angles[k])])
        else:
            u = sph[k] / np.linalg.norm(sph[k])
        v = np.concatenate(([1.0], u))
        s_fwd = domain.exit_params_many(sources, v)
        s_bwd = domain.exit_params_many(sources, -v)
        span = np.linalg.norm(hi - lo)
        s_fwd = np.minimum(s_fwd, span)
        s_bwd = np.minimum(s_bwd, span)
        for frac in mesh.knot_fracs:
            for sign, s in ((+1.0, s_fwd), (-1.0, s_bwd)):
                knot = sources + (sign * frac * s)[:, None] * v
                keep = domain.contains_many(knot)
                knots.append(knot[keep])
    allp = np.vstack(knots)
    # Dedupe (rounded), then restore the exact endpoints.
    allp = np.unique(np.round(allp, 12), axis=0)
    allp = allp[domain.contains_many(allp)]
    if len(allp) > mesh.max_nodes:
        pick = rng.choice(len(allp), size=mesh.max_nodes, replace=False)
        allp = allp[np.sort(pick)]
    allp = np.vstack([x[None, :], y[None, :], allp])
    N = len(allp)
    ix = _find_row(allp, x)
    iy = _find_row(allp, y)
    if ix < 0 or iy < 0:
        raise SolverError("query endpoints lost during web construction")

    # Candidate edges: pairs whose difference is lightlike within the band.
    diffs_t = allp[:, 0][None, :] - allp[:, 0][:, None]
    d2 = np.zeros((N, N))
    for c in range(1, dim):
        dc = allp[:, c][None, :] - allp[:, c][:, None]
        d2 += dc * dc
    q = d2 - diffs_t * diffs_t  # b(diff, diff)
    wick2 = d2 + diffs_t * diffs_t
    iu = np.triu_indices(N, k=1)
    sel = np.abs(q[iu]) <= mesh.band * np.maximum(wick2[iu], 1e-300)
    # Always offer direct two-leg chains from the query endpoints.
    sel |= iu[0] <= 1
    rows = iu[0][sel]
    cols = iu[1][sel]
    if len(rows) == 0:
        raise SolverError("chain web is edgeless; refine mesh.d or mesh.nodes")
    P = allp[rows]
    Q = allp[cols]
    # Join each candidate pair by an exact two-leg lightlike chain through
    # the null meet point M in the 2-plane of the pair: legs s1 (1, e) and
    # s2 (1, -e) with s1 + s2 = dt, s1 - s2 = r.  The second leg may be
    # past directed; chains allow that.
    V = Q - P
    dt = V[:, 0]
    spat = np.linalg.norm(V[:, 1:], axis=1)
    ok = spat > 1e-14
    rows, cols, P, Q, V, dt, spat = (a[ok] for a in (rows, cols, P, Q, V, dt, spat))
    e = V[:, 1:] / spat[:, None]
    s1 = 0.5 * (dt + spat)
    M = P.copy()
    M[:, 0] += s1
    M[:, 1:] += s1[:, None] * e
    ok = domain.contains_many(M)
    rows, cols, P, Q, M = (a[ok] for a in (rows, cols, P, Q, M))
    w = _leg_costs(domain, P, M) + _leg_costs(domain, M, Q)
    good = np.isfinite(w)
    graph = coo_matrix((w[good], (rows[good], cols[good])), shape=(N, N)).tocsr()
    dist, pred = _sp_dijkstra(graph, directed=False, indices=np.array([ix]),
                              return_predecessors=True)
    val = float(dist[0, iy])
    if not np.isfinite(val):
        raise SolverError("chain web disconnected; refine mesh.d or mesh.nodes")
    seq = [iy]
    while pred[0, seq[-1]] >= 0:
        seq.append(int(pred[0, seq[-1]]))
    seq.reverse()
    return val, allp[np.array(seq, dtype=np.int64)]


def _find_row(arr, x) -> int:
    d = np.linalg.norm(arr - np.asarray(x, float), axis=1)
    i = int(np.argmin(d))
    return i if d[i] <= 1e-9 * (1.0 + np.linalg.norm(x)) else -1
