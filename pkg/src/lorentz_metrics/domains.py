"""Domain families of Minkowski space with a uniform oracle interface.

Every domain answers membership, ray--boundary exit and Wick boundary
distance queries, carries honest structural flags, and (where meaningful)
computes cosmological time and the initial singularity.  Special domains
use closed forms; graph domains fall back on bracketing + bisection and
multistart local search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .core import (
    AT_INFINITY,
    FUTURE,
    PAST,
    CausalityError,
    DimensionError,
    as_event,
    causally_related,
    is_future_causal,
    is_infinite,
    is_lightlike,
    minkowski_form,
    time_separation,
    wick_norm,
)

# Relative parameter tolerance of the generic bracketing + bisection exit.
EXIT_TOL = 1e-12
# Horizon factor: a ray still inside after 1e6 x (1 + scale) is "infinite".
HORIZON_FACTOR = 1e6
# Multistart count for the generic cosmological-time maximizer.
COSMO_SEEDS = 32


class DomainError(ValueError):
    """Query violated a domain precondition (e.g. point outside)."""


class DomainOracle:
    """Membership + ray-exit + boundary-distance interface.

    Attributes
    ----------
    n : spatial dimension (events live in R^{1,n}).
    convex, causally_convex, future_complete, bounded : structural flags.
    scale : rough linear size used for horizon and sampling defaults.
    """

    n: int
    convex = False
    causally_convex = False
    future_complete = False
    bounded = False
    scale = 1.0

    # -- membership ---------------------------------------------------------
    def contains(self, x) -> bool:
        raise NotImplementedError

    def contains_many(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        return np.fromiter((self.contains(row) for row in X), dtype=bool, count=len(X))

    def require_member(self, x):
        x = as_event(x)
        if x.size != self.n + 1:
            raise DimensionError("event dimension %d does not match domain R^{1,%d}" % (x.size - 1, self.n))
        if not self.contains(x):
            raise DomainError("point %s is not in the domain" % (x,))
        return x

    # -- ray exits ----------------------------------------------------------
    def exit_param(self, x, v) -> float:
        """Smallest s > 0 with x + s v on the boundary; inf when the ray
        stays inside up to the horizon."""
        return float(self.exit_params_many(np.asarray(x, dtype=float)[None, :], v)[0])

    def exit_params_many(self, X, v) -> np.ndarray:
        return _bisect_exit_many(self, np.asarray(X, dtype=float), np.asarray(v, dtype=float))

    # -- boundary distance --------------------------------------------------
    def boundary_distance(self, x) -> float:
        return float(self.boundary_distance_many(np.asarray(x, dtype=float)[None, :])[0])

    def boundary_distance_many(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        return np.fromiter((self._boundary_distance_one(row) for row in X), dtype=float, count=len(X))

    def _boundary_distance_one(self, x) -> float:
        raise NotImplementedError

    # -- cosmological time --------------------------------------------------
    def cosmo_time(self, x, sign: str = PAST) -> float:
        raise NotImplementedError("no closed-form cosmological time for %s" % type(self).__name__)

    def initial_singularity_point(self, x, sign: str = PAST) -> np.ndarray:
        raise NotImplementedError

    # -- sampling -----------------------------------------------------------
    def default_box(self) -> tuple[np.ndarray, np.ndarray]:
        """A canonical bounding box used for rejection sampling."""
        raise NotImplementedError

    def sample(self, rng, count: int, box=None) -> np.ndarray:
        lo, hi = self.default_box() if box is None else (np.asarray(box[0], float), np.asarray(box[1], float))
        out = np.empty((count, self.n + 1))
        got = 0
        for _ in range(10000):
            cand = rng.uniform(lo, hi, size=(max(4 * count, 64), self.n + 1))
            good = cand[self.contains_many(cand)]
            take = min(count - got, len(good))
            out[got:got + take] = good[:take]
            got += take
            if got == count:
                return out
        raise DomainError("rejection sampling failed; box does not meet the domain")


def _bisect_exit_many(domain: DomainOracle, X: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Vectorized bracketing + bisection exit solver (generic fallback)."""
    m = len(X)
    point_scale = 1.0 + domain.scale + np.linalg.norm(X, axis=1)
    horizon = HORIZON_FACTOR * point_scale / max(wick_norm(v), 1e-300)
    lo = np.zeros(m)
    hi = np.full(m, np.inf)
    step = 1e-9 * point_scale
    # Geometric sweep to bracket the first boundary crossing.
    open_mask = np.ones(m, dtype=bool)
    while np.any(open_mask):
        trial = np.where(open_mask, np.minimum(lo + step, horizon), lo)
        inside = np.zeros(m, dtype=bool)
        inside[open_mask] = domain.contains_many(X[open_mask] + trial[open_mask, None] * v)
        crossed = open_mask & ~inside
        hi[crossed] = trial[crossed]
        advanced = open_mask & inside
        lo[advanced] = trial[advanced]
        at_horizon = advanced & (trial >= horizon)
        open_mask = advanced & ~at_horizon
        step = step * 2.0
    bracketed = np.isfinite(hi)
    idx = np.where(bracketed)[0]
    if len(idx):
        blo, bhi = lo[idx], hi[idx]
        for _ in range(80):
            mid = 0.5 * (blo + bhi)
            inside = domain.contains_many(X[idx] + mid[:, None] * v)
            blo = np.where(inside, mid, blo)
            bhi = np.where(inside, bhi, mid)
            if np.all(bhi - blo <= EXIT_TOL * (1.0 + bhi)):
                break
        lo[idx] = blo
    out = np.where(bracketed, lo, np.inf)
    return out


def ray_exit(domain: DomainOracle, x, v, sign: str = FUTURE):
    """Endpoint of the maximal segment through x tangent to v, on the
    future or past side; AT_INFINITY when the ray never leaves."""
    x = domain.require_member(x)
    v = np.asarray(v, dtype=float)
    if float(v @ v) == 0.0:
        raise ValueError("zero direction")
    if sign not in (FUTURE, PAST):
        raise ValueError("sign must be 'future' or 'past'")
    # Orient v so it points toward the requested time direction; a purely
    # spatial v follows +v for 'future' and -v for 'past' by convention.
    future_v = v if (v[0] > 0 or (v[0] == 0 and sign == FUTURE)) else -v
    direction = future_v if sign == FUTURE else -future_v
    s = domain.exit_param(x, direction)
    if not np.isfinite(s):
        return AT_INFINITY
    return x + s * direction


def boundary_distance(domain: DomainOracle, x) -> float:
    """d_h(x, boundary) in the Wick metric."""
    x = domain.require_member(x)
    return domain.boundary_distance(x)


# ---------------------------------------------------------------------------
# Special domains
# ---------------------------------------------------------------------------

class ConePiece(DomainOracle):
    """One (possibly widened) solid cone nappe.

    orientation=+1: future cone of the apex, {(1+w)(t - t_a) > r}; -1 the
    past cone of the apex.  r is the Euclidean norm of the first
    `sub_dim` spatial coordinates (default all), which also covers the
    Bonsante domains I^+(F) over a spacelike coordinate subspace F.
    """

    convex = True
    causally_convex = True

    def __init__(self, apex, orientation: int = +1, widening: float = 0.0, sub_dim=None):
        self.apex = as_event(apex)
        self.n = self.apex.size - 1
        if orientation not in (+1, -1):
            raise ValueError("orientation must be +1 or -1")
        if widening < 0:
            raise ValueError("widening must be >= 0")
        self.orientation = orientation
        self.widening = float(widening)
        self.c = 1.0 + self.widening
        self.sub_dim = self.n if sub_dim is None else int(sub_dim)
        if not 0 <= self.sub_dim <= self.n:
            raise ValueError("sub_dim out of range")
        self.future_complete = orientation == +1
        self.scale = 1.0 + float(np.linalg.norm(self.apex))

    def _split(self, X):
        d = np.atleast_2d(np.asarray(X, dtype=float)) - self.apex
        dt = self.orientation * d[:, 0]
        r = np.linalg.norm(d[:, 1:1 + self.sub_dim], axis=1)
        return dt, r

    def contains_many(self, X):
        dt, r = self._split(X)
        if self.sub_dim == 0:
            return dt > 0
        return self.c * dt > r

    def contains(self, x):
        return bool(self.contains_many(np.asarray(x, float)[None, :])[0])

    def exit_params_many(self, X, v):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        v = np.asarray(v, dtype=float)
        V = np.broadcast_to(v, X.shape) if v.ndim == 1 else v
        dt, _ = self._split(X)
        d = X - self.apex
        dq = d[:, 1:1 + self.sub_dim]
        vt = self.orientation * V[:, 0]
        vq = V[:, 1:1 + self.sub_dim]
        if self.sub_dim == 0:
            # Pure half-space in time.
            with np.errstate(divide="ignore", invalid="ignore"):
                lin = dt / (-vt)
            return np.where(vt < 0, lin, np.inf)
        A = self.c ** 2 * vt * vt - np.sum(vq * vq, axis=1)
        B = 2.0 * (self.c ** 2 * dt * vt - np.sum(dq * vq, axis=1))
        C = self.c ** 2 * dt * dt - np.linalg.norm(dq, axis=1) ** 2
        return _smallest_positive_root(A, B, C)

    def boundary_distance_many(self, X):
        dt, r = self._split(X)
        if self.sub_dim == 0:
            return dt
        return (self.c * dt - r) / math.sqrt(self.c ** 2 + 1.0)

    def cosmo_time(self, x, sign: str = PAST):
        x = self.require_member(x)
        toward_apex = (sign == PAST) if self.orientation == +1 else (sign == FUTURE)
        if not toward_apex:
            return math.inf
        dt, r = self._split(x[None, :])
        dt, r = float(dt[0]), float(r[0])
        if self.widening == 0.0:
            return math.sqrt(max(0.0, dt * dt - r * r))
        if self.sub_dim != self.n:
            raise NotImplementedError("widened cone over a proper subspace")
        # The spacelike boundary graph t = r / c: the supremum sits at the
        # apex when dt >= c r, otherwise at the critical boundary point.
        if dt >= self.c * r:
            return math.sqrt(max(0.0, dt * dt - r * r))
        return (self.c * dt - r) / math.sqrt(self.c ** 2 - 1.0)

    def cosmo_time_many(self, X, sign: str = PAST):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        toward_apex = (sign == PAST) if self.orientation == +1 else (sign == FUTURE)
        if not toward_apex:
            return np.full(len(X), np.inf)
        dt, r = self._split(X)
        if self.widening == 0.0:
            return np.sqrt(np.maximum(0.0, dt * dt - r * r))
        if self.sub_dim != self.n:
            raise NotImplementedError("widened cone over a proper subspace")
        apexward = dt >= self.c * r
        return np.where(apexward,
                        np.sqrt(np.maximum(0.0, dt * dt - r * r)),
                        (self.c * dt - r) / math.sqrt(self.c ** 2 - 1.0))

    def initial_singularity_point(self, x, sign: str = PAST):
        x = self.require_member(x)
        toward_apex = (sign == PAST) if self.orientation == +1 else (sign == FUTURE)
        if not toward_apex:
            raise DomainError("cosmological time is infinite on that side")
        if self.widening == 0.0:
            return self.apex.copy()
        if self.sub_dim != self.n:
            raise NotImplementedError("widened cone over a proper subspace")
        d = x - self.apex
        dp = d[1:]
        r = float(np.linalg.norm(dp))
        c = self.c
        dt = self.orientation * d[0]
        if dt >= c * r:
            return self.apex.copy()
        # Critical point of T along the boundary graph t = r / c.
        s = c * (c * r - dt) / (c * c - 1.0)
        y_rel = np.concatenate(([self.orientation * s / c], s * dp / r))
        return self.apex + y_rel

    def default_box(self):
        lo = self.apex + self.orientation * np.concatenate(([0.1], -np.ones(self.n)))
        hi = self.apex + self.orientation * np.concatenate(([2.0], np.ones(self.n)))
        return np.minimum(lo, hi), np.maximum(lo, hi)

    def graph_form(self):
        slope = 1.0 / self.c
        apex = self.apex

        if self.orientation == +1:
            def f_minus(Q):
                Q = np.atleast_2d(Q)
                return apex[0] + slope * np.linalg.norm(Q[:, :self.sub_dim] - apex[1:1 + self.sub_dim], axis=1)
            return f_minus, None, slope
        else:
            def f_plus(Q):
                Q = np.atleast_2d(Q)
                return apex[0] - slope * np.linalg.norm(Q[:, :self.sub_dim] - apex[1:1 + self.sub_dim], axis=1)
            return None, f_plus, slope


def _smallest_positive_root(A, B, C):
    """Vectorized smallest s > 0 with A s^2 + B s + C = 0, given C > 0 at
    s = 0 (point inside); inf when the ray never crosses."""
    A = np.broadcast_to(np.asarray(A, dtype=float), np.shape(B)).copy() if np.ndim(A) == 0 else np.asarray(A, float)
    B = np.asarray(B, dtype=float)
    C = np.asarray(C, dtype=float)
    out = np.full(B.shape, np.inf)
    scale = np.abs(A) + np.abs(B) + np.abs(C)
    lin = np.abs(A) <= 1e-14 * scale
    with np.errstate(divide="ignore", invalid="ignore"):
        lin_root = -C / B
    hit = lin & (B < 0)
    out[hit] = lin_root[hit]
    quad = ~lin
    disc = B * B - 4.0 * A * C
    real = quad & (disc >= 0)
    sq = np.sqrt(np.where(real, disc, 0.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        r1 = (-B - sq) / (2.0 * A)
        r2 = (-B + sq) / (2.0 * A)
    rlo = np.minimum(r1, r2)
    rhi = np.maximum(r1, r2)
    pick = np.where(rlo > 0, rlo, np.where(rhi > 0, rhi, np.inf))
    out[real] = pick[real]
    return out


class IntersectionDomain(DomainOracle):
    """Finite intersection of oracles (used for diamonds)."""

    def __init__(self, parts):
        self.parts = list(parts)
        self.n = self.parts[0].n
        self.convex = all(p.convex for p in self.parts)
        self.causally_convex = all(p.causally_convex for p in self.parts)
        self.future_complete = all(p.future_complete for p in self.parts)
        self.scale = max(p.scale for p in self.parts)

    def contains_many(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        out = np.ones(len(X), dtype=bool)
        for p in self.parts:
            out &= p.contains_many(X)
        return out

    def contains(self, x):
        return bool(self.contains_many(np.asarray(x, float)[None, :])[0])

    def exit_params_many(self, X, v):
        return np.min([p.exit_params_many(X, v) for p in self.parts], axis=0)

    def boundary_distance_many(self, X):
        return np.min([p.boundary_distance_many(X) for p in self.parts], axis=0)

    def cosmo_time(self, x, sign: str = PAST):
        return min(p.cosmo_time(x, sign) for p in self.parts)

    def cosmo_time_many(self, X, sign: str = PAST):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return np.min([p.cosmo_time_many(X, sign) for p in self.parts], axis=0)

    def initial_singularity_point(self, x, sign: str = PAST):
        vals = [(p.cosmo_time(x, sign), p) for p in self.parts]
        tau, part = min(vals, key=lambda item: item[0])
        if not np.isfinite(tau):
            raise DomainError("cosmological time is infinite on that side")
        return part.initial_singularity_point(x, sign)


class HalfSpaceFuture(DomainOracle):
    """Future side of a spacelike hyperplane H = {b(x - point, normal) = 0}.

    `normal` is a future timelike vector, normalized so b(m, m) = -1.
    Defaults to the standard {t > 0}.
    """

    convex = True
    causally_convex = True
    future_complete = True

    def __init__(self, n: int = 1, point=None, normal=None):
        self.n = n
        self.point = np.zeros(n + 1) if point is None else as_event(point)
        if normal is None:
            m = np.zeros(n + 1)
            m[0] = 1.0
        else:
            m = np.asarray(normal, dtype=float)
            q = minkowski_form(m, m)
            if q >= 0 or m[0] <= 0:
                raise ValueError("normal must be future timelike")
            m = m / math.sqrt(-q)
        self.normal = m
        # Euclidean normal of the same hyperplane, pointing into the domain.
        self.euclid_normal = np.concatenate(([m[0]], -m[1:]))
        self.scale = 1.0 + float(np.linalg.norm(self.point))

    def _height(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return (X - self.point) @ self.euclid_normal

    def contains_many(self, X):
        return self._height(X) > 0

    def contains(self, x):
        return bool(self.contains_many(np.asarray(x, float)[None, :])[0])

    def exit_params_many(self, X, v):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        v = np.asarray(v, dtype=float)
        V = np.broadcast_to(v, X.shape) if v.ndim == 1 else v
        rate = V @ self.euclid_normal
        h = self._height(X)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = h / (-rate)
        return np.where(rate < 0, out, np.inf)

    def boundary_distance_many(self, X):
        return self._height(X) / float(np.linalg.norm(self.euclid_normal))

    def lorentz_height(self, x):
        """T(p_H(x), x) = |b(x - point, normal)| for members."""
        x = as_event(x)
        return abs(minkowski_form(x - self.point, self.normal))

    def project(self, x):
        """b-orthogonal projection of x onto H."""
        x = as_event(x)
        alpha = -minkowski_form(x - self.point, self.normal)
        return x - alpha * self.normal

    def cosmo_time(self, x, sign: str = PAST):
        self.require_member(x)
        if sign == FUTURE:
            return math.inf
        return self.lorentz_height(x)

    def cosmo_time_many(self, X, sign: str = PAST):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if sign == FUTURE:
            return np.full(len(X), np.inf)
        return np.abs((X - self.point) @ self.euclid_normal)

    def initial_singularity_point(self, x, sign: str = PAST):
        x = self.require_member(x)
        if sign == FUTURE:
            raise DomainError("cosmological time is infinite on that side")
        return self.project(x)

    def default_box(self):
        lo = self.point + np.concatenate(([0.1], -np.ones(self.n)))
        hi = self.point + np.concatenate(([2.0], np.ones(self.n)))
        return lo, hi

    def graph_form(self):
        m = self.normal
        point = self.point

        def f_minus(Q):
            Q = np.atleast_2d(Q)
            # Solve b((t, q) - point, m) = 0 for t.
            return point[0] + (Q - point[1:]) @ m[1:] / m[0]
        slope = float(np.linalg.norm(m[1:]) / m[0])
        return f_minus, None, slope


def cone_future(apex, widening: float = 0.0) -> ConePiece:
    """I^+(apex), optionally with the widened form b_eps."""
    return ConePiece(apex, +1, widening)


def cone_past(apex, widening: float = 0.0) -> ConePiece:
    return ConePiece(apex, -1, widening)


class ConeComplement(DomainOracle):
    """Omega_eps: complement of the closed widened past cone J^-_eps(apex),
    i.e. {(1+eps)(t - t_a) > -|p - p_a|}.

    The region above a 1/(1+eps)-Lipschitz boundary graph: future complete
    and causally convex but not convex.  Its cosmological time has the
    closed form ((1+eps) dt + r) / sqrt((1+eps)^2 - 1).
    """

    convex = False
    causally_convex = True
    future_complete = True
    bounded = False

    def __init__(self, apex, eps: float):
        if eps <= 0:
            raise ValueError("eps must be > 0")
        self.apex = as_event(apex)
        self.n = self.apex.size - 1
        self.widening = float(eps)
        self.c = 1.0 + float(eps)
        self.scale = 1.0 + float(np.linalg.norm(self.apex))

    def _split(self, X):
        d = np.atleast_2d(np.asarray(X, dtype=float)) - self.apex
        return d[:, 0], np.linalg.norm(d[:, 1:], axis=1)

    def contains_many(self, X):
        dt, r = self._split(X)
        return self.c * dt + r > 0

    def contains(self, x):
        return bool(self.contains_many(np.asarray(x, float)[None, :])[0])

    def exit_params_many(self, X, v):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        v = np.asarray(v, dtype=float)
        V = np.broadcast_to(v, X.shape) if v.ndim == 1 else v
        d = X - self.apex
        dt = d[:, 0]
        dq = d[:, 1:]
        vt = V[:, 0]
        vq = V[:, 1:]
        c2 = self.c ** 2
        A = c2 * vt * vt - np.sum(vq * vq, axis=1)
        B = 2.0 * (c2 * dt * vt - np.sum(dq * vq, axis=1))
        C = c2 * dt * dt - np.linalg.norm(dq, axis=1) ** 2
        out = np.full(len(X), np.inf)
        span = 1.0 + np.abs(dt) + np.linalg.norm(dq, axis=1)
        scale = np.abs(A) + np.abs(B) + np.abs(C)
        lin = np.abs(A) <= 1e-14 * scale
        with np.errstate(divide="ignore", invalid="ignore"):
            lin_root = np.where(lin, -C / B, np.nan)
            disc = B * B - 4.0 * A * C
            sq = np.sqrt(np.where(disc >= 0, disc, np.nan))
            r1 = np.where(lin, np.nan, (-B - sq) / (2.0 * A))
            r2 = np.where(lin, np.nan, (-B + sq) / (2.0 * A))
        for s in (lin_root, r1, r2):
            # A crossing lies on the past sheet c dt(s) = -r(s) <= 0.
            sheet = self.c * (dt + s * vt) <= 1e-9 * (span + np.abs(s * vt))
            ok = np.isfinite(s) & (s > EXIT_TOL * span) & sheet
            out[ok] = np.minimum(out[ok], s[ok])
        return out

    def boundary_distance_many(self, X):
        dt, r = self._split(X)
        foot = self.c * (self.c * r - dt)
        line = (self.c * dt + r) / math.sqrt(self.c ** 2 + 1.0)
        return np.where(foot <= 0, np.sqrt(dt * dt + r * r), line)

    def cosmo_time(self, x, sign: str = PAST):
        x = self.require_member(x)
        if sign == FUTURE:
            return math.inf
        dt, r = self._split(x[None, :])
        return (self.c * float(dt[0]) + float(r[0])) / math.sqrt(self.c ** 2 - 1.0)

    def cosmo_time_many(self, X, sign: str = PAST):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if sign == FUTURE:
            return np.full(len(X), np.inf)
        dt, r = self._split(X)
        return (self.c * dt + r) / math.sqrt(self.c ** 2 - 1.0)

    def initial_singularity_point(self, x, sign: str = PAST):
        x = self.require_member(x)
        if sign == FUTURE:
            raise DomainError("cosmological time is infinite on that side")
        d = x - self.apex
        dp = d[1:]
        r = float(np.linalg.norm(dp))
        c = self.c
        if r == 0.0:
            direction = np.zeros(self.n)
            direction[0] = 1.0
            s = c * d[0] / (c * c - 1.0)
            y_rel = np.concatenate(([-s / c], s * direction))
            return self.apex + y_rel
        lam = (d[0] + c * r) / ((c * c - 1.0) * r)
        y_rel = np.concatenate(([-lam * r], c * lam * dp))
        return self.apex + y_rel

    def default_box(self):
        lo = self.apex + np.concatenate(([-0.5], -2.0 * np.ones(self.n)))
        hi = self.apex + np.concatenate(([2.0], 2.0 * np.ones(self.n)))
        return lo, hi

    def graph_form(self):
        apex = self.apex
        slope = 1.0 / self.c

        def f_minus(Q):
            Q = np.atleast_2d(Q)
            return apex[0] - slope * np.linalg.norm(Q - apex[1:], axis=1)

        return f_minus, None, slope


def stable_cone_complement(eps: float, n: int = 1, apex=None) -> ConeComplement:
    """Omega_eps = R^{1,n} minus the closed widened past J^-_eps(apex)."""
    apex = np.zeros(n + 1) if apex is None else as_event(apex)
    return ConeComplement(apex, eps)


class Diamond(IntersectionDomain):
    """I(a, b): chronological future of a meets chronological past of b;
    widening > 0 gives the stable diamond I_eps(a, b)."""

    bounded = True

    def __init__(self, a, b, widening: float = 0.0):
        a = as_event(a)
        b = as_event(b)
        if not is_future_causal(b - a) or minkowski_form(b - a, b - a) >= 0:
            raise CausalityError("diamond needs a << b")
        super().__init__([ConePiece(a, +1, widening), ConePiece(b, -1, widening)])
        self.a = a
        self.b = b
        self.widening = float(widening)
        self.bounded = True
        self.scale = float(np.linalg.norm(b - a)) + max(np.linalg.norm(a), np.linalg.norm(b))

    def corner_points_2d(self):
        """The two spacelike corners e1, e2 (lightcone intersections of a
        and b) of a plain diamond in R^{1,1}."""
        if self.n != 1 or self.widening != 0.0:
            raise DomainError("corners are specific to plain diamonds of R^{1,1}")
        a, b = self.a, self.b
        # Intersections of {t - t_a = |p - p_a|} and {t_b - t = |p - p_b|}.
        # In null coordinates the diamond is the box (Ua, Ub) x (Wa, Wb);
        # the corners mix one coordinate of each tip.
        Ua, Wa = a[0] + a[1], a[0] - a[1]
        Ub, Wb = b[0] + b[1], b[0] - b[1]
        e1 = np.array([(Ua + Wb) / 2.0, (Ua - Wb) / 2.0])
        e2 = np.array([(Ub + Wa) / 2.0, (Ub - Wa) / 2.0])
        return e1, e2

    def default_box(self):
        lo = np.minimum(self.a, self.b) - 0.5 * np.ones(self.n + 1) * np.linalg.norm(self.b - self.a)
        hi = np.maximum(self.a, self.b) + 0.5 * np.ones(self.n + 1) * np.linalg.norm(self.b - self.a)
        return lo, hi

    def graph_form(self):
        fm, _, s1 = self.parts[0].graph_form()
        _, fp, s2 = self.parts[1].graph_form()
        return fm, fp, max(s1, s2)


def stable_diamond(a, b, eps: float) -> Diamond:
    if eps <= 0:
        raise ValueError("eps must be > 0")
    return Diamond(a, b, widening=eps)


def bonsante(ell: int, n: int) -> ConePiece:
    """Omega_ell = I^+(F) for the spacelike coordinate subspace F of
    dimension ell: {t > sqrt(p_1^2 + ... + p_{n-ell}^2)}."""
    if not 0 <= ell <= n:
        raise ValueError("need 0 <= ell <= n")
    return ConePiece(np.zeros(n + 1), +1, 0.0, sub_dim=n - ell)


class SpacelikeSlab(DomainOracle):
    """{|t| < height}."""

    convex = True
    causally_convex = True

    def __init__(self, height: float = 1.0, n: int = 1):
        if height <= 0:
            raise ValueError("height must be > 0")
        self.height = float(height)
        self.n = n
        self.scale = self.height

    def contains_many(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return np.abs(X[:, 0]) < self.height

    def contains(self, x):
        return bool(self.contains_many(np.asarray(x, float)[None, :])[0])

    def exit_params_many(self, X, v):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        v = np.asarray(v, dtype=float)
        V = np.broadcast_to(v, X.shape) if v.ndim == 1 else v
        t = X[:, 0]
        vt = V[:, 0]
        with np.errstate(divide="ignore", invalid="ignore"):
            up = (self.height - t) / vt
            dn = (-self.height - t) / vt
        return np.where(vt > 0, up, np.where(vt < 0, dn, np.inf))

    def boundary_distance_many(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return self.height - np.abs(X[:, 0])

    def cosmo_time(self, x, sign: str = PAST):
        x = self.require_member(x)
        return self.height + x[0] if sign == PAST else self.height - x[0]

    def cosmo_time_many(self, X, sign: str = PAST):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return self.height + X[:, 0] if sign == PAST else self.height - X[:, 0]

    def initial_singularity_point(self, x, sign: str = PAST):
        x = self.require_member(x)
        y = x.copy()
        y[0] = -self.height if sign == PAST else self.height
        return y

    def default_box(self):
        lo = np.concatenate(([-self.height], -np.ones(self.n)))
        hi = np.concatenate(([self.height], np.ones(self.n)))
        return lo, hi

    def graph_form(self):
        h = self.height

        def f_minus(Q):
            return np.full(len(np.atleast_2d(Q)), -h)

        def f_plus(Q):
            return np.full(len(np.atleast_2d(Q)), h)
        return f_minus, f_plus, 0.0


class EuclideanBall(DomainOracle):
    """Open Wick-metric ball; convex but not causally convex.  Used by the
    Hilbert metric tests."""

    convex = True
    bounded = True

    def __init__(self, center, radius: float):
        self.center = as_event(center)
        self.n = self.center.size - 1
        if radius <= 0:
            raise ValueError("radius must be > 0")
        self.radius = float(radius)
        self.scale = self.radius + float(np.linalg.norm(self.center))

    def contains_many(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return np.linalg.norm(X - self.center, axis=1) < self.radius

    def contains(self, x):
        return bool(self.contains_many(np.asarray(x, float)[None, :])[0])

    def exit_params_many(self, X, v):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        v = np.asarray(v, dtype=float)
        d = X - self.center
        V = np.broadcast_to(v, X.shape) if v.ndim == 1 else v
        A = np.sum(V * V, axis=1)
        B = 2.0 * np.sum(d * V, axis=1)
        C = np.linalg.norm(d, axis=1) ** 2 - self.radius ** 2
        # Inside the ball C < 0, so there is exactly one positive root.
        disc = np.sqrt(B * B - 4.0 * A * C)
        return (-B + disc) / (2.0 * A)

    def boundary_distance_many(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return self.radius - np.linalg.norm(X - self.center, axis=1)

    def default_box(self):
        return self.center - self.radius, self.center + self.radius


class MappedDomain(DomainOracle):
    """Image of a base domain under an invertible conformal map; membership
    via the inverse map, exits via the generic bisection."""

    def __init__(self, base: DomainOracle, forward, inverse, scale=None):
        self.base = base
        self.forward = forward
        self.inverse = inverse
        self.n = base.n
        self.convex = False
        self.scale = base.scale if scale is None else float(scale)

    def contains(self, x):
        try:
            pre = self.inverse(np.asarray(x, dtype=float))
        except (ValueError, ZeroDivisionError, FloatingPointError):
            return False
        return self.base.contains(pre)

    def contains_many(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return np.fromiter((self.contains(row) for row in X), dtype=bool, count=len(X))


class GraphDomain(DomainOracle):
    """Region between the graphs of two Lipschitz functions over a base box.

    f_minus / f_plus are vectorized callables Q (m, n) -> (m,) or None for
    -inf / +inf.  Lipschitz bounds are declared by the constructor and
    audited by `audit_lipschitz`, never inferred.
    """

    causally_convex = True

    def __init__(self, base_lo, base_hi, f_minus=None, f_plus=None,
                 lipschitz_minus: float = 1.0, lipschitz_plus: float = 1.0,
                 convex: bool = False):
        self.base_lo = np.asarray(base_lo, dtype=float)
        self.base_hi = np.asarray(base_hi, dtype=float)
        if self.base_lo.shape != self.base_hi.shape or self.base_lo.ndim != 1:
            raise DimensionError("base box bounds must be vectors of equal length")
        if not np.all(self.base_lo < self.base_hi):
            raise ValueError("empty base box")
        self.n = self.base_lo.size
        self.f_minus = f_minus
        self.f_plus = f_plus
        self.lipschitz_minus = float(lipschitz_minus)
        self.lipschitz_plus = float(lipschitz_plus)
        self.convex = convex
        self.future_complete = f_plus is None
        self.bounded = f_minus is not None and f_plus is not None
        self.scale = float(np.linalg.norm(self.base_hi - self.base_lo)) + 1.0

    def _graph_vals(self, Q):
        lo = self.f_minus(Q) if self.f_minus is not None else np.full(len(Q), -np.inf)
        hi = self.f_plus(Q) if self.f_plus is not None else np.full(len(Q), np.inf)
        return np.asarray(lo, float), np.asarray(hi, float)

    def contains_many(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        Q = X[:, 1:]
        in_base = np.all((Q > self.base_lo) & (Q < self.base_hi), axis=1)
        out = np.zeros(len(X), dtype=bool)
        if np.any(in_base):
            lo, hi = self._graph_vals(Q[in_base])
            out[in_base] = (X[in_base, 0] > lo) & (X[in_base, 0] < hi)
        return out

    def contains(self, x):
        return bool(self.contains_many(np.asarray(x, float)[None, :])[0])

    def audit_lipschitz(self, rng, count: int = 4000, tol: float = 1e-9):
        """Sampled Lipschitz quotients never exceed the declared bounds."""
        Q = rng.uniform(self.base_lo, self.base_hi, size=(count, self.n))
        Q2 = rng.uniform(self.base_lo, self.base_hi, size=(count, self.n))
        gaps = np.linalg.norm(Q - Q2, axis=1)
        ok = gaps > 1e-12
        report = {}
        for name, f, bound in (("minus", self.f_minus, self.lipschitz_minus),
                               ("plus", self.f_plus, self.lipschitz_plus)):
            if f is None:
                continue
            quot = np.abs(f(Q[ok]) - f(Q2[ok])) / gaps[ok]
            worst = float(np.max(quot)) if len(quot) else 0.0
            report[name] = worst
            if worst > bound + tol:
                raise ValueError("declared Lipschitz bound %g violated: sampled quotient %g" % (bound, worst))
        return report

    def _boundary_distance_one(self, x):
        x = np.asarray(x, dtype=float)
        t, p = x[0], x[1:]
        best = math.inf

        for f in (self.f_minus, self.f_plus):
            if f is None:
                continue

            def gap(q, f=f):
                q = np.clip(q, self.base_lo, self.base_hi)
                return float(np.hypot(t - f(q[None, :])[0], np.linalg.norm(p - q)))

            seeds = [p]
            span = self.base_hi - self.base_lo
            for k in range(4):
                seeds.append(np.clip(p + (k + 1) / 8.0 * span * np.cos(k * np.ones(self.n)), self.base_lo, self.base_hi))
            for q0 in seeds:
                res = optimize.minimize(gap, q0, method="Nelder-Mead",
                                        options={"xatol": 1e-9, "fatol": 1e-12, "maxiter": 400})
                best = min(best, float(res.fun))
        lateral = float(np.min(np.minimum(p - self.base_lo, self.base_hi - p)))
        return min(best, lateral)

    def cosmo_time(self, x, sign: str = PAST):
        val, _ = self._cosmo_argmax(x, sign)
        return val

    def initial_singularity_point(self, x, sign: str = PAST):
        val, point = self._cosmo_argmax(x, sign)
        if not np.isfinite(val):
            raise DomainError("cosmological time is infinite on that side")
        return point

    def _cosmo_argmax(self, x, sign):
        """Multistart Nelder-Mead maximization of T over the causal
        boundary graph on the requested side."""
        x = self.require_member(x)
        f = self.f_minus if sign == PAST else self.f_plus
        if f is None:
            return math.inf, None
        t, p = x[0], x[1:]
        orient = 1.0 if sign == PAST else -1.0

        def neg_T2(q):
            q = np.clip(q, self.base_lo, self.base_hi)
            ft = f(q[None, :])[0]
            dt = orient * (t - ft)
            rr = float(np.linalg.norm(p - q))
            if dt <= rr:
                # Outside the causal cone of x: infeasible, slope back in.
                return (rr - dt) + 1.0
            return -(dt * dt - rr * rr)

        rng = np.random.default_rng(12345)
        seeds = [p.copy()]
        span = self.base_hi - self.base_lo
        while len(seeds) < COSMO_SEEDS:
            seeds.append(rng.uniform(self.base_lo, self.base_hi))
        best = math.inf
        best_q = p
        for q0 in seeds:
            res = optimize.minimize(neg_T2, q0, method="Nelder-Mead",
                                    options={"xatol": 1e-10, "fatol": 1e-14,
                                             "maxiter": 600})
            if res.fun < best:
                best = float(res.fun)
                best_q = np.clip(np.asarray(res.x, float), self.base_lo, self.base_hi)
        if best >= 0:
            raise DomainError("no causal boundary point found below/above x")
        tau = math.sqrt(-best)
        point = np.concatenate(([f(best_q[None, :])[0]], best_q))
        return tau, point

    def default_box(self):
        mid = 0.5 * (self.base_lo + self.base_hi)
        lo_t = self.f_minus(mid[None, :])[0] if self.f_minus is not None else -1.0
        hi_t = self.f_plus(mid[None, :])[0] if self.f_plus is not None else lo_t + 2.0
        if not np.isfinite(hi_t):
            hi_t = lo_t + 2.0
        return (np.concatenate(([lo_t], self.base_lo)),
                np.concatenate(([hi_t], self.base_hi)))

    def graph_form(self):
        return self.f_minus, self.f_plus, max(self.lipschitz_minus, self.lipschitz_plus)


# ---------------------------------------------------------------------------
# Causal boundary, acausality, cosmological time dispatch
# ---------------------------------------------------------------------------

@dataclass
class BoundaryGraph:
    """One causal boundary component as a graph t = f(q)."""
    f: object  # vectorized callable or None (empty component)
    lipschitz: float = 1.0

    @property
    def empty(self) -> bool:
        return self.f is None


@dataclass
class CausalBoundary:
    past: BoundaryGraph
    future: BoundaryGraph


def causal_boundary(domain: DomainOracle) -> CausalBoundary:
    """The two causal boundary graphs of a causally convex domain."""
    if not domain.causally_convex:
        raise DomainError("causal boundary requires a causally convex domain")
    if not hasattr(domain, "graph_form"):
        raise DomainError("domain is not in graph form")
    f_minus, f_plus, lip = domain.graph_form()
    return CausalBoundary(past=BoundaryGraph(f_minus, lip), future=BoundaryGraph(f_plus, lip))


STABLE = "stable"
NOT_STABLY_ACAUSAL = "not stably acausal"
ACAUSAL_FOR_ALL = "acausal for all eps"


@dataclass(frozen=True)
class AcausalityVerdict:
    verdict: str
    epsilon_hat: float  # inf for "acausal for all eps", nan when unstable
    lipschitz: float


def stable_acausality_epsilon(samples) -> AcausalityVerdict:
    """Estimate the acausality margin of a sampled hypersurface.

    L_hat = max |dt| / ||dp|| over sample pairs; (t,p), (t',p') are
    b_eps-acausal iff |dt| < ||dp|| / (1+eps), so eps_hat = 1/L_hat - 1.
    """
    S = np.atleast_2d(np.asarray(samples, dtype=float))
    if len(S) < 2:
        raise ValueError("need at least 2 samples")
    dt = np.abs(S[:, None, 0] - S[None, :, 0])
    dp = np.linalg.norm(S[:, None, 1:] - S[None, :, 1:], axis=2)
    iu = np.triu_indices(len(S), k=1)
    dt, dp = dt[iu], dp[iu]
    degenerate = (dp <= 1e-300) & (dt > 0)
    if np.any(degenerate):
        return AcausalityVerdict(NOT_STABLY_ACAUSAL, math.nan, math.inf)
    with np.errstate(divide="ignore", invalid="ignore"):
        quot = np.where(dp > 0, dt / dp, 0.0)
    L = float(np.max(quot)) if len(quot) else 0.0
    if L == 0.0:
        return AcausalityVerdict(ACAUSAL_FOR_ALL, math.inf, 0.0)
    if L >= 1.0:
        return AcausalityVerdict(NOT_STABLY_ACAUSAL, math.nan, L)
    return AcausalityVerdict(STABLE, 1.0 / L - 1.0, L)


def cosmological_time(domain: DomainOracle, x, sign: str = PAST) -> float:
    """tau^-(x) (sign=past) or tau^+(x): sup of T to the corresponding
    causal boundary; +inf on a complete side."""
    if sign not in (PAST, FUTURE):
        raise ValueError("sign must be 'past' or 'future'")
    domain.require_member(x)
    return domain.cosmo_time(x, sign)


def initial_singularity(domain: DomainOracle, x, sign: str = PAST):
    """The boundary argmax realizing the cosmological time."""
    if sign not in (PAST, FUTURE):
        raise ValueError("sign must be 'past' or 'future'")
    domain.require_member(x)
    return domain.initial_singularity_point(x, sign)


def causal_structure_checks(domain: DomainOracle, rng=None, samples: int = 40) -> dict:
    """Sampled verification of the structural flags.

    (a) diamonds of member pairs stay inside; (b) future causal rays from
    members never exit; (c) no lightlike direction through a member has
    two infinite exits.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    pts = domain.sample(rng, samples)
    n = domain.n

    causally_convex = True
    for _ in range(samples):
        i, j = rng.integers(0, len(pts), size=2)
        x, y = pts[i], pts[j]
        if not is_future_causal(y - x):
            continue
        # Sample the ambient causal diamond J(x, y).
        lo = np.minimum(x, y) - wick_norm(y - x)
        hi = np.maximum(x, y) + wick_norm(y - x)
        cand = rng.uniform(lo, hi, size=(64, n + 1))
        keep = np.array([is_future_causal(z - x) and is_future_causal(y - z) for z in cand])
        if np.any(keep) and not np.all(domain.contains_many(cand[keep])):
            causally_convex = False
            break

    future_complete = True
    for x in pts[: samples // 2]:
        u = rng.normal(size=n)
        u = u / np.linalg.norm(u)
        speed = rng.uniform(0.0, 0.99)
        v = np.concatenate(([1.0], speed * u))
        if np.isfinite(domain.exit_param(x, v)):
            future_complete = False
            break

    lightlike_line_free = True
    for x in pts[: samples // 2]:
        u = rng.normal(size=n)
        u = u / np.linalg.norm(u)
        v = np.concatenate(([1.0], u))
        s_plus = domain.exit_param(x, v)
        s_minus = domain.exit_param(x, -v)
        if not np.isfinite(s_plus) and not np.isfinite(s_minus):
            lightlike_line_free = False
            break

    return {"causally_convex": causally_convex,
            "future_complete": future_complete,
            "lightlike_line_free": lightlike_line_free}
