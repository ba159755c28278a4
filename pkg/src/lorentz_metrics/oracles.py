"""Closed-form distances and times for special domains, used as ground
truth by the tests and as containment witnesses by the solvers.

The R^{1,1} formulas exploit null coordinates U = t + p, W = t - p: a
diamond is a coordinate box, a cone is a quadrant and the chord of any
null line is read off coordinate-wise, so the chain infimum decouples
into two interval problems.
"""

from __future__ import annotations

import math

import numpy as np

from .core import (
    CausalityError,
    PAST,
    as_event,
    causally_related,
    is_future_causal,
    minkowski_form,
    null_coords,
    time_separation,
)
from .domains import (
    ConePiece,
    Diamond,
    DomainOracle,
    GraphDomain,
    HalfSpaceFuture,
)


def delta_cone_future(a, x, y) -> float:
    """Markowitz distance on I^+(a) for a causal pair: 2 |ln(T(a,y)/T(a,x))|."""
    a, x, y = as_event(a), as_event(x), as_event(y)
    if not (is_future_causal(x - a) and is_future_causal(y - a)):
        raise CausalityError("points must lie in the chronological future of a")
    if np.array_equal(x, y):
        return 0.0
    if not causally_related(x, y):
        raise CausalityError("closed form covers causally related pairs only")
    Tx = time_separation(a, x)
    Ty = time_separation(a, y)
    if Tx <= 0 or Ty <= 0:
        raise CausalityError("points must be chronological, not lightlike, from a")
    return 2.0 * abs(math.log(Ty / Tx))


def delta_halfspace(H, x, y) -> float:
    """Markowitz distance on the future of a spacelike hyperplane for a
    causal pair: |ln(T(p_H(y), y) / T(p_H(x), x))|."""
    H = _as_halfspace(H, x)
    x, y = as_event(x), as_event(y)
    if np.array_equal(x, y):
        return 0.0
    if not causally_related(x, y):
        raise CausalityError("closed form covers causally related pairs only")
    hx, hy = H.lorentz_height(x), H.lorentz_height(y)
    if hx <= 0 or hy <= 0:
        raise CausalityError("points must lie strictly above the hyperplane")
    return abs(math.log(hy / hx))


def _as_halfspace(H, ref) -> HalfSpaceFuture:
    if isinstance(H, HalfSpaceFuture):
        return H
    if H is None:
        return HalfSpaceFuture(n=as_event(ref).size - 1)
    raise TypeError("H must be a HalfSpaceFuture (or None for {t>0})")


# --- diamonds in R^{1,1} ----------------------------------------------------

def _diamond_box(a, b):
    Ua, Wa = null_coords(a)
    Ub, Wb = null_coords(b)
    if not (Ua < Ub and Wa < Wb):
        raise CausalityError("diamond needs a << b")
    return Ua, Ub, Wa, Wb


def diamond_projective_time(a, b, x) -> float:
    """tau(x) = T(a,x)^2 / T(x,b)^2 on the diamond I(a,b)."""
    a, b, x = as_event(a), as_event(b), as_event(x)
    Ta = time_separation(a, x)
    Tb = time_separation(x, b)
    return (Ta / Tb) ** 2


def delta_diamond_2d(a, b, x, y) -> float:
    """Markowitz distance on a plain diamond of R^{1,1}, all pair types.

    Causal pairs use |ln tau(y) - ln tau(x)| with the projective time
    tau = T(a,.)^2 / T(.,b)^2; non-causal pairs use the corner formula
    |ln( b(x-e1)b(y-e2) / (b(y-e1)b(x-e2)) )| with e1, e2 the lightcone
    intersection points of a and b.  The two conventions agree on the
    overlap (pairs differing in a single null coordinate).
    """
    a, b = as_event(a), as_event(b)
    x, y = as_event(x), as_event(y)
    Ua, Ub, Wa, Wb = _diamond_box(a, b)
    Ux, Wx = null_coords(x)
    Uy, Wy = null_coords(y)
    for U, W in ((Ux, Wx), (Uy, Wy)):
        if not (Ua < U < Ub and Wa < W < Wb):
            raise ValueError("point outside the diamond")
    if np.array_equal(x, y):
        return 0.0
    dU = Uy - Ux
    dW = Wy - Wx
    if dU * dW >= 0:
        # Causal (or null-coordinate degenerate) pair.
        sx = min(x, y, key=lambda z: z[0])
        sy = max(x, y, key=lambda z: z[0])
        taux = diamond_projective_time(a, b, sx)
        tauy = diamond_projective_time(a, b, sy)
        return abs(math.log(tauy) - math.log(taux))
    e1, e2 = Diamond(a, b).corner_points_2d()
    num = minkowski_form(x - e1, x - e1) * minkowski_form(y - e2, y - e2)
    den = minkowski_form(y - e1, y - e1) * minkowski_form(x - e2, x - e2)
    return abs(math.log(num / den))


def diamond_log_coords(a, b, P):
    """Interval log coordinates (phi_U, phi_W) of points of the diamond;
    the Markowitz distance is |d phi_U| + |d phi_W|."""
    Ua, Ub, Wa, Wb = _diamond_box(a, b)
    P = np.atleast_2d(np.asarray(P, float))
    U = P[:, 0] + P[:, 1]
    W = P[:, 0] - P[:, 1]
    phiU = np.log(U - Ua) - np.log(Ub - U)
    phiW = np.log(W - Wa) - np.log(Wb - W)
    return phiU, phiW


def delta_diamond_matrix(a, b, P) -> np.ndarray:
    """Pairwise Markowitz distances on a plain diamond of R^{1,1}."""
    phiU, phiW = diamond_log_coords(a, b, P)
    return (np.abs(phiU[:, None] - phiU[None, :])
            + np.abs(phiW[:, None] - phiW[None, :]))


def diamond_point_from_log_coords(a, b, phiU, phiW):
    """Inverse of diamond_log_coords (vectorized)."""
    Ua, Ub, Wa, Wb = _diamond_box(as_event(a), as_event(b))
    phiU = np.asarray(phiU, float)
    phiW = np.asarray(phiW, float)
    sU = 1.0 / (1.0 + np.exp(-phiU))
    sW = 1.0 / (1.0 + np.exp(-phiW))
    U = Ua + (Ub - Ua) * sU
    W = Wa + (Wb - Wa) * sW
    return np.stack([(U + W) / 2.0, (U - W) / 2.0], axis=-1)


# --- cones and half-spaces in R^{1,1}, all pair types ----------------------

def delta_cone_exact_2d(apex, x, y) -> float:
    """Markowitz distance on I^+(apex) in R^{1,1} for any pair: the null
    quadrant decouples into |d ln U| + |d ln W|."""
    apex = as_event(apex)
    Ux, Wx = null_coords(as_event(x) - apex)
    Uy, Wy = null_coords(as_event(y) - apex)
    for U, W in ((Ux, Wx), (Uy, Wy)):
        if not (U > 0 and W > 0):
            raise ValueError("point outside the cone")
    return abs(math.log(Uy / Ux)) + abs(math.log(Wy / Wx))


def delta_halfspace_exact_2d(H, x, y) -> float:
    """Markowitz distance on the future of a spacelike hyperplane in
    R^{1,1} for any pair.

    Equals the null distance of ln tau (tau the Lorentzian height): for a
    non-causal pair the optimal chain rises to the null meet point, giving
    2 ln tau(meet) - ln tau(x) - ln tau(y).
    """
    H = _as_halfspace(H, x)
    x, y = as_event(x), as_event(y)
    hx, hy = H.lorentz_height(x), H.lorentz_height(y)
    if hx <= 0 or hy <= 0 or not (H.contains(x) and H.contains(y)):
        raise ValueError("point outside the half-space")
    if causally_related(x, y):
        return abs(math.log(hy / hx))
    d = y - x
    dt = -minkowski_form(d, H.normal)  # height increment
    dsp = d + minkowski_form(d, H.normal) * H.normal
    gap = math.sqrt(max(0.0, minkowski_form(dsp, dsp)))
    h_meet = 0.5 * (hx + hy + gap)
    return 2.0 * math.log(h_meet) - math.log(hx) - math.log(hy)


def delta_halfspace_matrix(P) -> np.ndarray:
    """Pairwise Markowitz distances on the standard half-space {t > 0} of
    R^{1,1} (vectorized over a point set)."""
    P = np.atleast_2d(np.asarray(P, float))
    t = P[:, 0]
    p = P[:, 1]
    dt = np.abs(t[:, None] - t[None, :])
    dp = np.abs(p[:, None] - p[None, :])
    causal = dt >= dp
    lt = np.log(t)
    out = np.abs(lt[:, None] - lt[None, :])
    t_meet = 0.5 * (t[:, None] + t[None, :] + dp)
    zig = 2.0 * np.log(t_meet) - lt[:, None] - lt[None, :]
    return np.where(causal, out, zig)


def delta_slab_pair(height: float, tx: float, ty: float, lateral: float,
                    grid: int = 2001) -> float:
    """Markowitz distance on the spacelike slab {|t| < height} of R^{1,n}
    between points at times tx, ty with Euclidean lateral separation
    `lateral`.  Every lightlike leg in the slab costs the increment of
    phi(t) = ln((h+t)/(h-t)) along its time profile while contributing its
    time variation as freely oriented lateral displacement, so the
    distance is a one dimensional variational problem over the turning
    level u of the time profile: total variation of phi on tx -> u -> ty
    plus zigzag cost phi'(v) per unit of the remaining lateral deficit,
    taken at the level v nearest t = 0 that the profile visits."""
    h = float(height)
    u = np.linspace(-h, h, grid + 2)[1:-1]
    phi_u = np.log((h + u) / (h - u))
    phi_x = math.log((h + tx) / (h - tx))
    phi_y = math.log((h + ty) / (h - ty))
    tv_phi = np.abs(phi_x - phi_u) + np.abs(phi_u - phi_y)
    tv_t = np.abs(tx - u) + np.abs(u - ty)
    lo = np.minimum(np.minimum(tx, ty), u)
    hi = np.maximum(np.maximum(tx, ty), u)
    v = np.clip(0.0, lo, hi)
    rate = 2.0 * h / (h * h - v * v)
    best = float(np.min(tv_phi + rate * np.maximum(0.0, lateral - tv_t)))
    # monotone profile without a turning point (covers coincident times
    # that fall between grid levels)
    v0 = min(max(0.0, min(tx, ty)), max(tx, ty))
    rate0 = 2.0 * h / (h * h - v0 * v0)
    direct = abs(phi_x - phi_y) + rate0 * max(0.0, lateral - abs(tx - ty))
    return min(best, direct)


def delta_slab_matrix(height: float, P, grid: int = 2001) -> np.ndarray:
    """Pairwise Markowitz distances on the slab {|t| < height} of R^{1,n}
    (vectorized over the turning-level grid of delta_slab_pair)."""
    P = np.atleast_2d(np.asarray(P, float))
    h = float(height)
    t = P[:, 0]
    lat = np.linalg.norm(P[:, None, 1:] - P[None, :, 1:], axis=2)
    u = np.linspace(-h, h, grid + 2)[1:-1]
    phi_u = np.log((h + u) / (h - u))
    phi_t = np.log((h + t) / (h - t))
    tv_phi = (np.abs(phi_t[:, None, None] - phi_u)
              + np.abs(phi_u - phi_t[None, :, None]))
    tv_t = np.abs(t[:, None, None] - u) + np.abs(u - t[None, :, None])
    lo = np.minimum(np.minimum(t[:, None, None], t[None, :, None]), u)
    hi = np.maximum(np.maximum(t[:, None, None], t[None, :, None]), u)
    v = np.clip(0.0, lo, hi)
    rate = 2.0 * h / (h * h - v * v)
    deficit = np.maximum(0.0, lat[:, :, None] - tv_t)
    best = np.min(tv_phi + rate * deficit, axis=2)
    v0 = np.clip(0.0, np.minimum(t[:, None], t[None, :]),
                 np.maximum(t[:, None], t[None, :]))
    rate0 = 2.0 * h / (h * h - v0 * v0)
    direct = np.abs(phi_t[:, None] - phi_t[None, :]) + rate0 * np.maximum(
        0.0, lat - np.abs(t[:, None] - t[None, :]))
    return np.minimum(best, direct)


def cosmo_time_closed(domain: DomainOracle, x, sign: str = PAST) -> float:
    """Closed-form cosmological time of a special domain."""
    if isinstance(domain, GraphDomain):
        raise TypeError("graph domains have no closed form; use cosmological_time")
    domain.require_member(x)
    return domain.cosmo_time(x, sign)
