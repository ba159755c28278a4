"""Minkowski linear algebra, causal predicates, projective interval
distances, and conformal transformations.

Conventions: an event of R^{1,n} is a float vector (t, p_1, ..., p_n) with
the time coordinate first.  The flat form is b = -dt^2 + sum dp_i^2 and the
widened form b_eps multiplies the time term by (1+eps)^2.  All Euclidean
style measurements use the Wick metric h = dt^2 + sum dp_i^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# Scale-invariant band around zero used to classify a vector as lightlike:
# |b(v,v)| <= LIGHTLIKE_BAND * wick_norm(v)^2.
LIGHTLIKE_BAND = 1e-10

# Tolerance for collinearity residuals in cross_ratio_log, relative to the
# segment length.
COLLINEARITY_TOL = 1e-8

TIMELIKE = "timelike"
LIGHTLIKE = "lightlike"
SPACELIKE = "spacelike"
FUTURE = "future"
PAST = "past"
NONE = "none"


class DimensionError(ValueError):
    """Inputs of mismatched or invalid dimension."""


class CausalityError(ValueError):
    """An operation required a causal relation that does not hold."""


class _AtInfinity:
    """Tagged sentinel for a ray exit that never leaves the domain."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "AT_INFINITY"


AT_INFINITY = _AtInfinity()


def is_infinite(x) -> bool:
    """True when x is the infinite-endpoint sentinel."""
    return x is AT_INFINITY


def as_event(x) -> np.ndarray:
    """Coerce to a 1-d float array (t, p_1, ..., p_n) with n >= 1."""
    a = np.asarray(x, dtype=float)
    if a.ndim != 1 or a.size < 2:
        raise DimensionError("an event needs at least a time and one space coordinate")
    if not np.all(np.isfinite(a)):
        raise ValueError("event coordinates must be finite")
    return a


def minkowski_form(u, v, eps: float = 0.0) -> float:
    """b_eps(u, v) = -(1+eps)^2 u_t v_t + sum u_i v_i.

    eps = 0 gives the flat form b; eps > 0 widens the lightcones.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise DimensionError("mismatched dimensions %s vs %s" % (u.shape, v.shape))
    if eps < 0:
        raise ValueError("eps must be >= 0")
    return float(-((1.0 + eps) ** 2) * u[0] * v[0] + u[1:] @ v[1:])


def wick_norm(u) -> float:
    """Euclidean norm of (t, p) under the Wick metric h."""
    return float(np.linalg.norm(np.asarray(u, dtype=float)))


@dataclass(frozen=True)
class CausalClass:
    kind: str  # timelike | lightlike | spacelike
    orientation: str  # future | past | none

    def __post_init__(self):
        if (self.orientation == NONE) != (self.kind == SPACELIKE):
            raise ValueError("orientation is none exactly for spacelike vectors")


def causal_classify(v, eps: float = 0.0) -> CausalClass:
    """Classify v against the (possibly widened) lightcone.

    The lightlike verdict uses the scale-invariant band
    |b_eps(v,v)| <= LIGHTLIKE_BAND * wick_norm(v)^2, so near-null directions
    produced by root finding are not misclassified.
    """
    v = np.asarray(v, dtype=float)
    q = minkowski_form(v, v, eps)
    w2 = float(v @ v)
    if w2 == 0.0:
        raise ValueError("cannot classify the zero vector")
    if abs(q) <= LIGHTLIKE_BAND * w2:
        kind = LIGHTLIKE
    elif q < 0:
        kind = TIMELIKE
    else:
        kind = SPACELIKE
    if kind == SPACELIKE:
        orientation = NONE
    else:
        orientation = FUTURE if v[0] > 0 else PAST
    return CausalClass(kind, orientation)


def is_lightlike(v, eps: float = 0.0) -> bool:
    v = np.asarray(v, dtype=float)
    w2 = float(v @ v)
    if w2 == 0.0:
        return False
    return abs(minkowski_form(v, v, eps)) <= LIGHTLIKE_BAND * w2


def is_future_causal(v, eps: float = 0.0) -> bool:
    """True when v is nonzero, causal for b_eps and future directed."""
    v = np.asarray(v, dtype=float)
    w2 = float(v @ v)
    if w2 == 0.0:
        return False
    q = minkowski_form(v, v, eps)
    return v[0] > 0 and q <= LIGHTLIKE_BAND * w2


def causally_related(x, y, eps: float = 0.0) -> bool:
    """True when x <= y or y <= x for the (widened) causal order."""
    d = as_event(y) - as_event(x)
    if float(d @ d) == 0.0:
        return True
    return is_future_causal(d, eps) or is_future_causal(-d, eps)


def time_separation(x, y) -> float:
    """T(x, y) = sqrt|b(y-x, y-x)| for a causal pair x <= y."""
    x = as_event(x)
    y = as_event(y)
    d = y - x
    if float(d @ d) == 0.0:
        return 0.0
    if not is_future_causal(d):
        raise CausalityError("pair is not causally related (x <= y required)")
    q = minkowski_form(d, d)
    return math.sqrt(max(0.0, -q))


@dataclass(frozen=True)
class ProjectiveInterval:
    """A strict open sub-interval of the real line; endpoints may be +-inf
    but not both."""

    lower: float
    upper: float

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ValueError("need lower < upper")
        if math.isinf(self.lower) and math.isinf(self.upper):
            raise ValueError("the whole line is not a strict interval")

    def contains(self, s: float) -> bool:
        return self.lower < s < self.upper

    def log_coordinate(self, s: float) -> float:
        """phi with rho_J(s, t) = |phi(t) - phi(s)|.

        For (a, b): ln((s-a)/(b-s)); for (a, inf): ln(s-a); for (-inf, b):
        -ln(b-s).  Each is the pushforward of the log coordinate of
        I = (-1, 1) under a homography.
        """
        if not self.contains(s):
            raise ValueError("point %r outside interval (%r, %r)" % (s, self.lower, self.upper))
        if math.isinf(self.upper):
            return math.log(s - self.lower)
        if math.isinf(self.lower):
            return -math.log(self.upper - s)
        return math.log((s - self.lower) / (self.upper - s))


INTERVAL_I = ProjectiveInterval(-1.0, 1.0)


def rho_interval(J: ProjectiveInterval, s: float, t: float) -> float:
    """Projective distance of the interval J between s and t.

    Pushforward of rho_I(s,t) = |ln((s-1)(t+1)/((s+1)(t-1)))| under any
    homography I -> J; half-lines give |ln((s-a)/(t-a))| style formulas.
    """
    return abs(J.log_coordinate(t) - J.log_coordinate(s))


def cross_ratio_log(a, p, q, b) -> float:
    """|ln( (|q-a| |b-p|) / (|p-a| |b-q|) )| for collinear a, p, q, b.

    a and b may be the AT_INFINITY sentinel (one-sided limits); both
    infinite gives 0.  The value does not depend on the norm used along
    the line.
    """
    p = as_event(p)
    q = as_event(q)
    if np.array_equal(p, q):
        return 0.0
    a_inf = is_infinite(a)
    b_inf = is_infinite(b)
    if a_inf and b_inf:
        return 0.0
    direction = q - p
    dlen = float(np.linalg.norm(direction))
    unit = direction / dlen

    def _param(z, name):
        z = as_event(z)
        rel = z - p
        s = float(rel @ unit)
        residual = float(np.linalg.norm(rel - s * unit))
        span = max(dlen, abs(s), 1.0)
        if residual > COLLINEARITY_TOL * span:
            raise ValueError("%s is not collinear with the segment (residual %g)" % (name, residual))
        return s

    # Affine parameters along the line: p at 0, q at dlen.
    sp, sq = 0.0, dlen
    if a_inf:
        sb = _param(b, "b")
        if not (sb > sq):
            raise ValueError("p, q must lie strictly between a and b")
        return abs(math.log((sb - sp) / (sb - sq)))
    if b_inf:
        sa = _param(a, "a")
        if not (sa < sp):
            raise ValueError("p, q must lie strictly between a and b")
        return abs(math.log((sq - sa) / (sp - sa)))
    sa = _param(a, "a")
    sb = _param(b, "b")
    if not (sa < sp and sq < sb):
        raise ValueError("p, q must lie strictly between a and b")
    J = ProjectiveInterval(sa, sb)
    return rho_interval(J, sp, sq)


@dataclass(frozen=True)
class Similarity:
    """g(x) = scale * A x + translation with A in O(1, n)."""

    scale: float
    linear: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        A = np.asarray(self.linear, dtype=float)
        tau = np.asarray(self.translation, dtype=float)
        if self.scale <= 0:
            raise ValueError("scale must be positive")
        d = A.shape[0]
        if A.shape != (d, d) or tau.shape != (d,):
            raise DimensionError("linear part and translation sizes disagree")
        eta = np.diag([-1.0] + [1.0] * (d - 1))
        if not np.allclose(A.T @ eta @ A, eta, atol=1e-9):
            raise ValueError("linear part does not preserve the Minkowski form")
        object.__setattr__(self, "linear", A)
        object.__setattr__(self, "translation", tau)

    @classmethod
    def identity(cls, n: int) -> "Similarity":
        return cls(1.0, np.eye(n + 1), np.zeros(n + 1))

    @classmethod
    def boost_1d(cls, phi: float, scale: float = 1.0, translation=None) -> "Similarity":
        """Standard boost of R^{1,1}: null directions scale by e^{+-phi}."""
        A = np.array([[math.cosh(phi), math.sinh(phi)], [math.sinh(phi), math.cosh(phi)]])
        tau = np.zeros(2) if translation is None else np.asarray(translation, dtype=float)
        return cls(scale, A, tau)

    def __call__(self, x):
        return self.scale * (self.linear @ as_event(x)) + self.translation

    def inverse(self) -> "Similarity":
        Ainv = np.linalg.inv(self.linear)
        return Similarity(1.0 / self.scale, Ainv, -(Ainv @ self.translation) / self.scale)


class LorentzInversion:
    """i(x) = x / b(x, x), defined off the lightcone of the origin."""

    def __call__(self, x):
        x = as_event(x)
        q = minkowski_form(x, x)
        if abs(q) <= LIGHTLIKE_BAND * float(x @ x):
            raise ValueError("inversion undefined on the lightcone of the origin")
        return x / q

    def inverse(self) -> "LorentzInversion":
        return self


def apply_conformal(g, x):
    """Apply a Similarity or LorentzInversion to an event."""
    if not isinstance(g, (Similarity, LorentzInversion)):
        raise TypeError("expected a Similarity or LorentzInversion")
    return g(x)


# --- 1+1 null coordinate helpers -------------------------------------------
# U = t + p, W = t - p; then b(x, x) = -U W and the lightlike directions are
# the coordinate lines of (U, W).

def null_coords(x) -> tuple[float, float]:
    x = as_event(x)
    if x.size != 2:
        raise DimensionError("null coordinates are specific to R^{1,1}")
    return float(x[0] + x[1]), float(x[0] - x[1])


def from_null(U: float, W: float) -> np.ndarray:
    return np.array([(U + W) / 2.0, (U - W) / 2.0])
