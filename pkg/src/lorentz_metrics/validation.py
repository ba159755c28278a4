"""Validation suite: the inequality and oracle-agreement checks that gate
the build.  Each criterion returns a machine-readable result with the
measured worst-case margin; the CLI `validate` subcommand and the
acceptance tests both run these functions.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .core import PAST, Similarity, LorentzInversion, causally_related, from_null, null_coords
from .domains import (
    Diamond,
    GraphDomain,
    HalfSpaceFuture,
    SpacelikeSlab,
    STABLE,
    NOT_STABLY_ACAUSAL,
    cone_future,
    stable_acausality_epsilon,
    stable_cone_complement,
    stable_diamond,
)
from .metrics import (
    LatticeEvaluator,
    Mesh,
    QhGrid,
    hilbert_distance,
    ln_tau_minus,
    markowitz_lower,
    markowitz_upper,
    null_distance,
    quasi_hyperbolic_distance,
)
from .hyplab import (
    AxisDepthSampler,
    BOUNDED,
    DiamondPhiSampler,
    GROWING,
    HalfSpaceLogSampler,
    SlabLateralSampler,
    causal_quasigeodesic,
    four_point_delta,
    matrix_evaluator_for,
)
from . import oracles

FAST = "fast"
FULL = "full"

REL_TOL = 0.03          # oracle agreement tolerance
LOWER_TOL = 1e-6        # containment witness tolerance
SANDWICH_REL = 0.05     # relative slack in inequality suites
SANDWICH_ABS = 0.05     # absolute slack in inequality suites
COSMO_REL = 1e-3
ACAUSAL_TOL = 1e-6


def _slack(v: float) -> float:
    return max(SANDWICH_REL * abs(v), SANDWICH_ABS)


@dataclass
class CriterionResult:
    name: str
    passed: bool
    margin: float           # smallest remaining slack; negative = failed
    details: dict = field(default_factory=dict)
    runtime_s: float = 0.0

    def row(self):
        return {"criterion": self.name, "passed": self.passed,
                "margin": self.margin, **{k: v for k, v in self.details.items()
                                          if np.isscalar(v)}}


def _sample_points(domain, rng, count, box=None, min_depth=0.0, batch=None):
    out = []
    batch = batch or max(4 * count, 64)
    for _ in range(200):
        P = domain.sample(rng, batch, box=box)
        if min_depth > 0:
            P = P[domain.boundary_distance_many(P) >= min_depth]
        out.append(P)
        if sum(len(p) for p in out) >= count:
            break
    P = np.vstack(out)
    if len(P) < count:
        raise RuntimeError("sampler starved; box/min_depth too restrictive")
    return P[:count]


def _noncausal_ok(x, y, gap_lo, gap_hi):
    g = float(np.linalg.norm(y - x))
    return gap_lo <= g <= gap_hi


def _sample_pairs(domain, rng, count, box=None, min_depth=0.0,
                  gap=(0.2, 1.2)):
    """Generic point pairs (mixed causal type) with depth and gap bounds."""
    pairs = []
    while len(pairs) < count:
        P = _sample_points(domain, rng, 2 * count, box=box, min_depth=min_depth)
        for i in range(0, len(P) - 1, 2):
            if _noncausal_ok(P[i], P[i + 1], *gap):
                pairs.append((P[i], P[i + 1]))
                if len(pairs) == count:
                    break
    return pairs


def _sample_causal_pairs(domain, rng, count, box=None, min_depth=0.0,
                         dt_range=(0.1, 0.8), speed=0.85):
    pairs = []
    while len(pairs) < count:
        P = _sample_points(domain, rng, 2 * count, box=box, min_depth=min_depth)
        for x in P:
            dt = rng.uniform(*dt_range)
            u = rng.normal(size=domain.n)
            u /= np.linalg.norm(u)
            v = np.concatenate(([1.0], rng.uniform(0.0, speed) * u))
            y = x + dt * v
            if domain.contains(y) and (min_depth == 0.0 or
                                       domain.boundary_distance(y) >= min_depth):
                pairs.append((x, y))
                if len(pairs) == count:
                    break
    return pairs


# ---------------------------------------------------------------------------
# Criteria
# ---------------------------------------------------------------------------

def criterion_diamond_oracles(seed=0, level=FAST) -> CriterionResult:
    """Chain solver and containment witness against the diamond closed
    form on 100 random pairs."""
    rng = np.random.default_rng(seed + 1)
    dom = Diamond((-1.0, 0.0), (1.0, 0.0))
    pairs = _sample_pairs(dom, rng, 100, min_depth=0.02, gap=(0.05, 1.8))
    worst_up = math.inf
    worst_lo = math.inf
    max_rel = 0.0
    for x, y in pairs:
        exact = oracles.delta_diamond_2d(dom.a, dom.b, x, y)
        up = markowitz_upper(dom, x, y, Mesh(k=128)).value
        lo = markowitz_lower(dom, x, y).value
        tol = REL_TOL * exact + 1e-12
        worst_up = min(worst_up, tol - (up - exact), up - exact + 1e-9 * (1 + exact))
        worst_lo = min(worst_lo, LOWER_TOL - (exact - lo), exact - lo + 1e-9 * (1 + exact))
        if exact > 1e-9:
            max_rel = max(max_rel, abs(up - exact) / exact)
    margin = min(worst_up, worst_lo)
    return CriterionResult("diamond_oracles", margin >= 0, margin,
                           {"pairs": len(pairs), "max_rel_upper_err": max_rel})


def criterion_cone_halfspace(seed=0, level=FAST) -> CriterionResult:
    """Solver vs closed form on the cone and half-space; null distance
    factors 2 (cone) and 1 (half-space)."""
    rng = np.random.default_rng(seed + 2)
    margin = math.inf
    details = {}

    cone = cone_future((0.0, 0.0))
    box = (np.array([0.3, -2.0]), np.array([2.2, 2.0]))
    pairs = _sample_causal_pairs(cone, rng, 50, box=box, min_depth=0.05)
    tau_c = ln_tau_minus(cone)
    worst = math.inf
    for x, y in pairs:
        ora = oracles.delta_cone_future(cone.apex, x, y)
        up = markowitz_upper(cone, x, y, Mesh(k=128)).value
        d = null_distance(cone, tau_c, x, y).value
        tol = REL_TOL * ora + 1e-12
        worst = min(worst, tol - abs(up - ora), tol - abs(2.0 * d - ora))
    details["cone_margin"] = worst
    margin = min(margin, worst)

    hs = HalfSpaceFuture(1)
    box = (np.array([0.2, -2.0]), np.array([2.2, 2.0]))
    pairs = _sample_causal_pairs(hs, rng, 50, box=box, min_depth=0.05)
    tau_h = ln_tau_minus(hs)
    worst = math.inf
    for x, y in pairs:
        ora = oracles.delta_halfspace(hs, x, y)
        up = markowitz_upper(hs, x, y, Mesh(k=128)).value
        d = null_distance(hs, tau_h, x, y).value
        tol = REL_TOL * ora + 1e-12
        worst = min(worst, tol - abs(up - ora), tol - abs(d - ora))
    details["halfspace_margin"] = worst
    margin = min(margin, worst)
    return CriterionResult("cone_halfspace_equalities", margin >= 0, margin, details)


def criterion_qh_sandwich(seed=0, level=FAST) -> CriterionResult:
    """Markowitz vs quasi-hyperbolic sandwich on stable diamonds in
    R^{1,1} and R^{1,2}."""
    rng = np.random.default_rng(seed + 3)
    eps = 1.0
    lo_c = eps / math.sqrt((2.0 + eps) ** 2 + eps ** 2)
    hi_c = 2.0 * math.sqrt(2.0)
    margin = math.inf
    details = {}
    for n, npairs, h in ((1, 30, 0.05), (2, 20, 0.07)):
        a = np.concatenate(([-1.0], np.zeros(n)))
        b = np.concatenate(([1.0], np.zeros(n)))
        dom = stable_diamond(a, b, eps)
        pairs = _sample_pairs(dom, rng, npairs, min_depth=0.2, gap=(0.35, 0.9))
        worst = math.inf
        for x, y in pairs:
            qh = quasi_hyperbolic_distance(dom, x, y, QhGrid(h=h))
            k_hat = qh.value
            if n == 1:
                delta = markowitz_upper(dom, x, y, Mesh(k=96)).value
            else:
                delta = markowitz_upper(dom, x, y, Mesh(nodes=170, zigzag=24),
                                        seed_paths=[qh.witness]).value
            s = max(SANDWICH_REL * k_hat, SANDWICH_ABS)
            worst = min(worst,
                        delta - (lo_c * k_hat - s),
                        (hi_c * k_hat + s) - delta)
        details["n%d_margin" % n] = worst
        margin = min(margin, worst)
    return CriterionResult("quasi_hyperbolic_sandwich", margin >= 0, margin, details)


def criterion_null_sandwich(seed=0, level=FAST) -> CriterionResult:
    """Null distance vs Markowitz with explicit constants on the stable
    cone complement (eps = 1)."""
    rng = np.random.default_rng(seed + 4)
    eps = 1.0
    dom = stable_cone_complement(eps, n=1)
    factor = math.sqrt(2.0 + 2.0 * (1.0 + eps) ** 2) / eps
    tau = ln_tau_minus(dom)
    box = (np.array([-0.2, -1.5]), np.array([1.8, 1.5]))
    pairs = _sample_pairs(dom, rng, 50, box=box, min_depth=0.1, gap=(0.2, 1.5))
    worst = math.inf
    for x, y in pairs:
        d = null_distance(dom, tau, x, y, Mesh(k=96)).value
        delta = markowitz_upper(dom, x, y, Mesh(k=96)).value
        worst = min(worst,
                    (factor * delta + SANDWICH_ABS) - d,
                    (2.0 * d + _slack(2.0 * d)) - delta)
    return CriterionResult("null_distance_sandwich", worst >= 0, worst,
                           {"pairs": len(pairs)})


def criterion_cosmo_closed_form(seed=0, level=FAST) -> CriterionResult:
    """Generic boundary maximizer against the closed-form cosmological
    time on the stable cone complement."""
    rng = np.random.default_rng(seed + 5)
    dims = (1,) if level == FAST else (1, 2, 3)
    worst = math.inf
    count = 0
    for n in dims:
        per_eps = 34 if level == FAST else 12
        for eps in (0.5, 1.0, 2.0):
            dom = stable_cone_complement(eps, n=n)
            fm, _, slope = dom.graph_form()
            graph = GraphDomain(-3.0 * np.ones(n), 3.0 * np.ones(n),
                                f_minus=fm, lipschitz_minus=slope)
            box = (np.concatenate(([0.1], -0.5 * np.ones(n))),
                   np.concatenate(([1.2], 0.5 * np.ones(n))))
            pts = _sample_points(dom, rng, per_eps, box=box)
            for x in pts:
                closed = dom.cosmo_time(x, PAST)
                generic = graph.cosmo_time(x, PAST)
                worst = min(worst, COSMO_REL - abs(generic - closed) / closed)
                count += 1
    return CriterionResult("cosmological_time_closed_form", worst >= 0, worst,
                           {"points": count})


def criterion_acausality(seed=0, level=FAST) -> CriterionResult:
    """Stable acausality margin of Lipschitz graphs: eps_hat = 1/L - 1,
    and the lightcone graph is not stably acausal."""
    ps = np.linspace(-2.0, 2.0, 33)
    if level == FULL:
        dims = (1, 2)
    else:
        dims = (1,)
    worst = math.inf
    ok = True
    for n in dims:
        if n == 1:
            Q = ps[:, None]
        else:
            Q = np.stack(np.meshgrid(ps[::4], ps[::4]), axis=-1).reshape(-1, 2)
        for L in (0.25, 0.5, 0.8):
            S = np.concatenate([L * np.linalg.norm(Q, axis=1)[:, None], Q], axis=1)
            v = stable_acausality_epsilon(S)
            ok &= v.verdict == STABLE
            worst = min(worst, ACAUSAL_TOL - abs(v.epsilon_hat - (1.0 / L - 1.0)))
        cone = np.concatenate([np.linalg.norm(Q, axis=1)[:, None], Q], axis=1)
        ok &= stable_acausality_epsilon(cone).verdict == NOT_STABLY_ACAUSAL
    return CriterionResult("stable_acausality_estimator", ok and worst >= 0,
                           worst if ok else -math.inf, {})


def criterion_hyperbolicity(seed=0, level=FAST) -> CriterionResult:
    """Four-point defect growth verdicts: bounded on the half-space and
    the stable diamond, growing on the slab and the plain diamond."""
    scales = (1.0, 2.0, 4.0, 8.0, 16.0)
    runs = []

    hs = HalfSpaceFuture(1)
    runs.append(("halfspace", BOUNDED, matrix_evaluator_for(hs),
                 HalfSpaceLogSampler(base=2.0), 64))

    sd = stable_diamond((-1.0, 0.0), (1.0, 0.0), 1.0)
    runs.append(("stable_diamond", BOUNDED,
                 matrix_evaluator_for(sd, k=128, ladders=28),
                 AxisDepthSampler(sd, -1.0, 1.0, base=1.0), 40))

    slab = SpacelikeSlab(1.0, 2)
    runs.append(("slab", GROWING, matrix_evaluator_for(slab),
                 SlabLateralSampler(slab, base=1.0), 64))

    dia = Diamond((-1.0, 0.0), (1.0, 0.0))
    runs.append(("diamond", GROWING, matrix_evaluator_for(dia),
                 DiamondPhiSampler(dia, base=2.0), 64))

    details = {}
    ok = True
    margin = math.inf
    for name, want, ev, sampler, npts in runs:
        rep = four_point_delta(ev, sampler, scales=scales, quadruples=2000,
                               seed=42 + seed, points_per_scale=npts)
        details[name + "_ratio"] = rep.growth_ratio
        details[name + "_verdict"] = rep.verdict
        good = rep.verdict == want
        ok &= good
        if want == BOUNDED:
            margin = min(margin, 1.5 - rep.growth_ratio)
        else:
            margin = min(margin, rep.growth_ratio - 2.0)
    return CriterionResult("hyperbolicity_discrimination", ok and margin >= 0,
                           margin, details)


def criterion_quasigeodesic(seed=0, level=FAST) -> CriterionResult:
    """(2,0)-quasi-geodesic certificate for equal-log-tau causal paths on
    the cone and the stable diamond."""
    rng = np.random.default_rng(seed + 7)
    worst = math.inf
    checked = 0
    cases = []
    cone = cone_future((0.0, 0.0))
    cases.append((cone, np.array([1.0, 0.0]), np.array([math.e ** 2, 0.0]),
                  dict(k=192, ladders=12)))
    sd = stable_diamond((-1.0, 0.0), (1.0, 0.0), 1.0)
    cases.append((sd, np.array([-0.55, 0.0]), np.array([0.6, 0.05]),
                  dict(k=192, ladders=24)))
    for dom, x, y, latkw in cases:
        path = causal_quasigeodesic(dom, x, y, m=24)
        verts = np.vstack(path.vertices)
        D = LatticeEvaluator(dom, verts, **latkw).pairwise()
        tau = np.asarray(path.tau_values)
        for _ in range(100):
            i, j = rng.choice(len(verts), size=2, replace=False)
            dl = abs(tau[j] - tau[i])
            worst = min(worst,
                        D[i, j] - (0.5 * dl - SANDWICH_ABS),
                        (2.0 * dl + SANDWICH_ABS) - D[i, j])
            checked += 1
    return CriterionResult("quasigeodesic_certificate", worst >= 0, worst,
                           {"pairs": checked})


def criterion_hilbert(seed=0, level=FAST) -> CriterionResult:
    """Hilbert metric below the Markowitz estimate on the diamond, with a
    finite empirical equivalence constant."""
    rng = np.random.default_rng(seed + 8)
    dom = Diamond((-1.0, 0.0), (1.0, 0.0))
    pairs = _sample_pairs(dom, rng, 100, min_depth=0.02, gap=(0.05, 1.8))
    worst = math.inf
    c_emp = 0.0
    for x, y in pairs:
        H = hilbert_distance(dom, x, y)
        up = markowitz_upper(dom, x, y, Mesh(k=96)).value
        worst = min(worst, (up + _slack(up)) - H)
        if H > 1e-9:
            c_emp = max(c_emp, up / H)
    finite = math.isfinite(c_emp) and c_emp > 0
    return CriterionResult("hilbert_vs_markowitz", worst >= 0 and finite, worst,
                           {"equivalence_constant": c_emp})


def criterion_conformal_invariance(seed=0, level=FAST) -> CriterionResult:
    """Markowitz estimates under random similarities (lattice-exact) and
    the Lorentz inversion on diamonds (3%)."""
    rng = np.random.default_rng(seed + 9)
    dom = Diamond((-1.0, 0.0), (1.0, 0.0))
    pairs = _sample_pairs(dom, rng, 10, min_depth=0.05, gap=(0.1, 1.5))
    worst = math.inf
    for x, y in pairs:
        g = Similarity.boost_1d(rng.uniform(-1.0, 1.0),
                                scale=rng.uniform(0.5, 2.0),
                                translation=rng.normal(size=2))
        img = Diamond(g(dom.a), g(dom.b))
        v1 = markowitz_upper(dom, x, y, Mesh(k=64)).value
        v2 = markowitz_upper(img, g(x), g(y), Mesh(k=64)).value
        worst = min(worst, 1e-6 * (1.0 + v1) - abs(v1 - v2))
    sim_margin = worst

    inv = LorentzInversion()
    dom2 = Diamond((1.0, 0.0), (3.0, 0.0))
    Ua, Wa = null_coords(dom2.a)
    Ub, Wb = null_coords(dom2.b)
    img = Diamond(from_null(-1.0 / Wa, -1.0 / Ua), from_null(-1.0 / Wb, -1.0 / Ub))
    pairs = _sample_pairs(dom2, rng, 10, min_depth=0.05, gap=(0.1, 1.2))
    worst = math.inf
    for x, y in pairs:
        v1 = markowitz_upper(dom2, x, y, Mesh(k=96)).value
        v2 = markowitz_upper(img, inv(x), inv(y), Mesh(k=96)).value
        worst = min(worst, REL_TOL * v1 + 1e-12 - abs(v1 - v2))
    margin = min(sim_margin, worst)
    return CriterionResult("conformal_invariance", margin >= 0, margin,
                           {"similarity_margin": sim_margin,
                            "inversion_margin": worst})


CRITERIA = [
    ("diamond_oracles", criterion_diamond_oracles),
    ("cone_halfspace_equalities", criterion_cone_halfspace),
    ("quasi_hyperbolic_sandwich", criterion_qh_sandwich),
    ("null_distance_sandwich", criterion_null_sandwich),
    ("cosmological_time_closed_form", criterion_cosmo_closed_form),
    ("stable_acausality_estimator", criterion_acausality),
    ("hyperbolicity_discrimination", criterion_hyperbolicity),
    ("quasigeodesic_certificate", criterion_quasigeodesic),
    ("hilbert_vs_markowitz", criterion_hilbert),
    ("conformal_invariance", criterion_conformal_invariance),
]


def run_criteria(level: str = FAST, seed: int = 0, names=None):
    """Run the validation suite; failures are collected, not raised."""
    if level not in (FAST, FULL):
        raise ValueError("level must be 'fast' or 'full'")
    out = []
    for name, fn in CRITERIA:
        if names is not None and name not in names:
            continue
        t0 = time.perf_counter()
        try:
            res = fn(seed=seed, level=level)
        except Exception as exc:  # noqa: BLE001 - reported, not swallowed
            res = CriterionResult(name, False, -math.inf, {"error": repr(exc)})
        res.runtime_s = time.perf_counter() - t0
        out.append(res)
    return out
