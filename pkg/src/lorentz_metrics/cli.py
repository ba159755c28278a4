"""Experiment runner: loads JSON configs, dispatches the distance and
hyperbolicity solvers, writes CSV result rows (and SVG scenes for R^{1,1}
domains), and exposes the validation suite.

Exit codes: 0 success, 1 validation suite failure, 2 invalid config,
3 domain construction failure, 4 solver failure (a diagnostic row is
still written).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .core import CausalityError, causally_related
from .domains import (
    Diamond,
    DomainError,
    DomainOracle,
    EuclideanBall,
    HalfSpaceFuture,
    SpacelikeSlab,
    cone_future,
    cone_past,
    stable_cone_complement,
    stable_diamond,
    stable_acausality_epsilon,
)
from .chaingraph import SolverError
from .metrics import (
    Mesh,
    QhGrid,
    hilbert_distance,
    ln_tau_minus,
    ln_tau_ratio,
    markowitz_lower,
    markowitz_upper,
    null_distance,
    quasi_hyperbolic_distance,
)
from .metrics import _self_exact
from .hyplab import (
    causal_triangle,
    causal_thinness,
    default_sampler_for,
    four_point_delta,
    matrix_evaluator_for,
    thin_triangle_defect,
    zigzag_axis_bigons,
)
from .validation import run_criteria

EXIT_OK = 0
EXIT_VALIDATE_FAIL = 1
EXIT_CONFIG = 2
EXIT_DOMAIN = 3
EXIT_SOLVER = 4

CSV_COLUMNS = ["experiment", "domain", "metric", "kind", "x", "y", "z", "w",
               "value", "mesh", "seed", "wall_ms"]

EXPERIMENTS = ("distance", "compare", "hyperbolicity", "acausality",
               "thinness", "validate")


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Config loading (strict JSON, version 1)
# ---------------------------------------------------------------------------

COMMON_KEYS = {"version", "experiment", "domain", "seed", "svg"}
EXPERIMENT_KEYS = {
    "distance": COMMON_KEYS | {"points", "mesh"},
    "compare": COMMON_KEYS | {"points", "mesh", "grid"},
    "hyperbolicity": COMMON_KEYS | {"scales", "quadruples",
                                    "points_per_scale", "sampler_base"},
    "acausality": COMMON_KEYS | {"surface"},
    "thinness": COMMON_KEYS | {"triangles", "bigons", "vertices_per_side"},
    "validate": COMMON_KEYS | {"level", "criteria"},
}

DOMAIN_KEYS = {
    "diamond": {"variant", "a", "b"},
    "stable_diamond": {"variant", "a", "b", "epsilon"},
    "cone_future": {"variant", "apex", "widening"},
    "cone_past": {"variant", "apex", "widening"},
    "cone_complement": {"variant", "epsilon", "n", "apex"},
    "half_space": {"variant", "n"},
    "slab": {"variant", "height", "n"},
    "ball": {"variant", "center", "radius"},
    "graph_scaled_abs": {"variant", "lipschitz", "n", "half_width"},
}

MESH_KEYS = {"k", "margin", "d", "nodes", "zigzag", "band", "seed"}
GRID_KEYS = {"h", "pad", "lightlike_only", "smooth_iters", "smooth_vertices"}


def load_config(path: str, experiment: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    if cfg.get("version") != 1:
        raise ConfigError("config must declare \"version\": 1")
    declared = cfg.get("experiment", experiment)
    if declared != experiment:
        raise ConfigError(f"config experiment {declared!r} does not match "
                          f"subcommand {experiment!r}")
    allowed = EXPERIMENT_KEYS[experiment]
    unknown = set(cfg) - allowed
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}")
    dom = cfg.get("domain")
    if experiment != "validate":
        if not isinstance(dom, dict) or "variant" in dom and \
                dom["variant"] not in DOMAIN_KEYS:
            raise ConfigError("domain must be an object with a known variant")
        if "variant" not in dom:
            raise ConfigError("domain descriptor needs a \"variant\" field")
        unknown = set(dom) - DOMAIN_KEYS[dom["variant"]]
        if unknown:
            raise ConfigError(f"unknown domain fields: {sorted(unknown)}")
    for key, keys in (("mesh", MESH_KEYS), ("grid", GRID_KEYS)):
        sub = cfg.get(key)
        if sub is not None:
            if not isinstance(sub, dict):
                raise ConfigError(f"{key} must be an object")
            unknown = set(sub) - keys
            if unknown:
                raise ConfigError(f"unknown {key} fields: {sorted(unknown)}")
    return cfg


def build_domain(desc: dict) -> DomainOracle:
    variant = desc["variant"]
    if variant == "diamond":
        return Diamond(desc["a"], desc["b"])
    if variant == "stable_diamond":
        return stable_diamond(desc["a"], desc["b"], float(desc["epsilon"]))
    if variant == "cone_future":
        return cone_future(desc["apex"], float(desc.get("widening", 0.0)))
    if variant == "cone_past":
        return cone_past(desc["apex"], float(desc.get("widening", 0.0)))
    if variant == "cone_complement":
        return stable_cone_complement(float(desc["epsilon"]),
                                      int(desc.get("n", 1)),
                                      desc.get("apex"))
    if variant == "half_space":
        return HalfSpaceFuture(int(desc.get("n", 1)))
    if variant == "slab":
        return SpacelikeSlab(float(desc["height"]), int(desc.get("n", 1)))
    if variant == "ball":
        return EuclideanBall(desc["center"], float(desc["radius"]))
    if variant == "graph_scaled_abs":
        # Future of the graph of L * |q| over a centered box; the sampled
        # surface is also what the acausality experiment diagnoses.
        from .domains import GraphDomain
        L = float(desc["lipschitz"])
        n = int(desc.get("n", 1))
        half = float(desc.get("half_width", 2.0))
        fm = lambda Q: L * np.linalg.norm(Q, axis=1)
        return GraphDomain(-half * np.ones(n), half * np.ones(n),
                           f_minus=fm, lipschitz_minus=max(L, 1e-9))
    raise DomainError(f"unknown domain variant {variant!r}")


# ---------------------------------------------------------------------------
# Result rows
# ---------------------------------------------------------------------------

def _fmt_point(x) -> str:
    if x is None:
        return ""
    return ";".join(format(float(c), ".12g") for c in np.atleast_1d(x))


def _fmt_mesh(desc: dict) -> str:
    return "|".join(f"{k}={v}" for k, v in sorted(desc.items()))


class RowWriter:
    """Collects ResultRow dicts and serializes them once (single writer)."""

    def __init__(self, experiment: str, domain_id: str, seed: int):
        self.experiment = experiment
        self.domain_id = domain_id
        self.seed = seed
        self.rows = []

    def add(self, metric, kind, value, mesh=None, x=None, y=None, z=None,
            w=None, wall_ms=0.0):
        self.rows.append({
            "experiment": self.experiment,
            "domain": self.domain_id,
            "metric": metric,
            "kind": kind,
            "x": _fmt_point(x), "y": _fmt_point(y),
            "z": _fmt_point(z), "w": _fmt_point(w),
            "value": format(float(value), ".12g"),
            "mesh": _fmt_mesh(mesh or {}),
            "seed": str(self.seed),
            "wall_ms": format(wall_ms, ".1f"),
        })

    def write(self, path: str):
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
            writer.writeheader()
            writer.writerows(self.rows)


def _domain_id(desc: dict) -> str:
    items = [f"{k}={desc[k]}" for k in sorted(desc) if k != "variant"]
    return desc["variant"] + ("[" + ",".join(items) + "]" if items else "")


def _worker_count(n_tasks: int) -> int:
    cap = os.environ.get("LORENTZ_METRICS_THREADS")
    workers = int(cap) if cap else (os.cpu_count() or 1)
    return max(1, min(workers, n_tasks))


def _pairs_from(cfg: dict, domain: DomainOracle):
    pts = cfg.get("points")
    if not pts:
        raise ConfigError("experiment needs a \"points\" list of pairs")
    out = []
    for entry in pts:
        pair = np.asarray(entry, dtype=float)
        if pair.shape != (2, (domain.n + 1)):
            raise ConfigError(f"each entry must be a pair of points of "
                              f"dimension {(domain.n + 1)}; got {pair.shape}")
        out.append((pair[0], pair[1]))
    return out


# ---------------------------------------------------------------------------
# Experiments
# ---------------------------------------------------------------------------

def run_distance(cfg, domain, writer, svg_scene):
    mesh = Mesh(**(cfg.get("mesh") or {}))
    pairs = _pairs_from(cfg, domain)

    def solve(pair):
        x, y = pair
        t0 = time.perf_counter()
        up = markowitz_upper(domain, x, y, mesh)
        lo = markowitz_lower(domain, x, y) if domain.convex else None
        exact = _self_exact(domain, x, y)
        return up, lo, exact, 1e3 * (time.perf_counter() - t0)

    with ThreadPoolExecutor(_worker_count(len(pairs))) as pool:
        results = list(pool.map(solve, pairs))
    for (x, y), (up, lo, exact, ms) in zip(pairs, results):
        writer.add("markowitz", up.kind, up.value, up.mesh, x, y, wall_ms=ms)
        if lo is not None:
            writer.add("markowitz", lo.kind, lo.value, lo.mesh, x, y)
        if exact is not None:
            writer.add("markowitz", "exact", exact[0], {"oracle": exact[1][1]},
                       x, y)
        if svg_scene is not None and up.witness is not None:
            svg_scene.add_polyline(getattr(up.witness, "vertices", None),
                                   "#c0392b")


def run_compare(cfg, domain, writer, svg_scene):
    mesh = Mesh(**(cfg.get("mesh") or {}))
    grid = QhGrid(**(cfg.get("grid") or {}))
    pairs = _pairs_from(cfg, domain)
    tau = None
    if domain.future_complete:
        tau = ln_tau_minus(domain)
    elif domain.bounded:
        tau = ln_tau_ratio(domain)
    for x, y in pairs:
        t0 = time.perf_counter()
        up = markowitz_upper(domain, x, y, mesh)
        writer.add("markowitz", up.kind, up.value, up.mesh, x, y,
                   wall_ms=1e3 * (time.perf_counter() - t0))
        t0 = time.perf_counter()
        qh = quasi_hyperbolic_distance(domain, x, y, grid)
        writer.add("quasi_hyperbolic", qh.kind, qh.value, qh.mesh, x, y,
                   wall_ms=1e3 * (time.perf_counter() - t0))
        if tau is not None:
            t0 = time.perf_counter()
            nd = null_distance(domain, tau, x, y, mesh)
            writer.add("null_distance_" + tau.name, nd.kind, nd.value,
                       nd.mesh, x, y,
                       wall_ms=1e3 * (time.perf_counter() - t0))
        if domain.convex and domain.bounded:
            writer.add("hilbert", "exact", hilbert_distance(domain, x, y),
                       {}, x, y)
        if svg_scene is not None:
            for est, color in ((up, "#c0392b"), (qh, "#2980b9")):
                svg_scene.add_polyline(getattr(est.witness, "vertices",
                                               est.witness), color)


def run_hyperbolicity(cfg, domain, writer, svg_scene):
    scales = tuple(cfg.get("scales", (1, 2, 4, 8, 16)))
    quadruples = int(cfg.get("quadruples", 2000))
    npts = int(cfg.get("points_per_scale", 64))
    base = float(cfg.get("sampler_base", 1.0))
    evaluator = matrix_evaluator_for(domain)
    sampler = default_sampler_for(domain, base=base)
    t0 = time.perf_counter()
    rep = four_point_delta(evaluator, sampler, scales=scales,
                           quadruples=quadruples, seed=writer.seed,
                           points_per_scale=npts)
    ms = 1e3 * (time.perf_counter() - t0)
    fingerprint = {"quadruples": quadruples, "points": npts}
    for scale, value in rep.series:
        writer.add("four_point_delta", "estimate", value,
                   {**fingerprint, "scale": scale})
    q = rep.worst_quadruple
    writer.add("four_point_delta", "estimate", rep.delta_hat, fingerprint,
               q[0], q[1], q[2], q[3], wall_ms=ms)
    writer.add("growth_ratio", rep.verdict, rep.growth_ratio, fingerprint)
    if svg_scene is not None:
        svg_scene.add_points(q, "#8e44ad")


def run_acausality(cfg, domain, writer, svg_scene):
    count = int((cfg.get("surface") or {}).get("samples", 33)) \
        if isinstance(cfg.get("surface"), dict) else 33
    f_minus, _f_plus, _lip = domain.graph_form()
    if f_minus is None:
        raise DomainError("acausality experiment needs a past boundary graph")
    lo, hi = domain.default_box()
    Q = np.linspace(lo[1:], hi[1:], count).reshape(count, -1)
    heights = f_minus(Q)
    S = np.concatenate([np.asarray(heights, float)[:, None], Q], axis=1)
    t0 = time.perf_counter()
    v = stable_acausality_epsilon(S)
    ms = 1e3 * (time.perf_counter() - t0)
    writer.add("epsilon_hat", v.verdict, v.epsilon_hat,
               {"samples": len(S)}, wall_ms=ms)
    writer.add("lipschitz_hat", v.verdict, v.lipschitz, {"samples": len(S)})
    if svg_scene is not None:
        svg_scene.add_polyline(S, "#27ae60")


def run_thinness(cfg, domain, writer, svg_scene):
    m = int(cfg.get("vertices_per_side", 32))
    evaluator = matrix_evaluator_for(domain)
    for entry in cfg.get("triangles") or []:
        tri_pts = np.asarray(entry, dtype=float)
        if tri_pts.shape != (3, (domain.n + 1)):
            raise ConfigError("each triangle needs three domain points")
        t0 = time.perf_counter()
        tri = causal_triangle(domain, *tri_pts, m=m)
        defect = thin_triangle_defect(evaluator, tri)
        writer.add("thin_triangle_defect", "estimate", defect,
                   {"vertices_per_side": m},
                   tri_pts[0], tri_pts[1], tri_pts[2],
                   wall_ms=1e3 * (time.perf_counter() - t0))
        if svg_scene is not None:
            for side in tri.sides:
                svg_scene.add_polyline(np.asarray(side, float), "#8e44ad")
    big = cfg.get("bigons")
    if big:
        pair = np.asarray(big["pair"], dtype=float)
        scales = tuple(big.get("scales", (1, 2, 3, 4)))
        bigons = zigzag_axis_bigons(domain, pair[0], pair[1], scales=scales)
        t0 = time.perf_counter()
        worst = causal_thinness(domain, evaluator, bigons)
        writer.add("causal_thinness", "estimate", worst,
                   {"scales": ";".join(str(s) for s in scales)},
                   pair[0], pair[1],
                   wall_ms=1e3 * (time.perf_counter() - t0))


def run_validate(cfg, writer, level: str, seed: int):
    names = cfg.get("criteria") if cfg else None
    results = run_criteria(level=level, seed=seed, names=names)
    all_pass = True
    for r in results:
        all_pass &= r.passed
        writer.add(r.name, "pass" if r.passed else "fail", r.margin,
                   {"level": level}, wall_ms=1e3 * r.runtime_s)
        print(f"{r.name:36s} {'PASS' if r.passed else 'FAIL':4s} "
              f"margin={r.margin:.6g} ({r.runtime_s:.1f}s)")
    return all_pass


# ---------------------------------------------------------------------------
# SVG scenes (R^{1,1} only)
# ---------------------------------------------------------------------------

class SvgScene:
    """Minimal SVG writer: the (p, t) plane with t pointing up."""

    def __init__(self, width: int = 640, height: int = 640):
        self.width = width
        self.height = height
        self.polylines = []
        self.points = []

    def add_polyline(self, verts, color: str):
        if verts is None:
            return
        V = np.atleast_2d(np.asarray(verts, float))
        if V.shape[1] == 2 and len(V) >= 2:
            self.polylines.append((V, color))

    def add_points(self, pts, color: str):
        P = np.atleast_2d(np.asarray(pts, float))
        if P.shape[1] == 2:
            self.points.append((P, color))

    def add_domain_outline(self, domain: DomainOracle):
        lo, hi = domain.default_box()
        anchor = 0.5 * (lo + hi)
        if not domain.contains(anchor):
            return
        radius = 2.0 * float(np.linalg.norm(hi - lo)) + 1.0
        ring = []
        for ang in np.linspace(0.0, 2.0 * math.pi, 257):
            v = np.array([math.sin(ang), math.cos(ang)])
            s = domain.exit_param(anchor, v)
            ring.append(anchor + min(s, radius) * v)
        self.polylines.insert(0, (np.asarray(ring), "#2c3e50"))

    def write(self, path: str):
        pts = np.vstack([V for V, _ in self.polylines]
                        + [P for P, _ in self.points]
                        or [np.zeros((1, 2))])
        lo = pts.min(axis=0)
        hi = pts.max(axis=0)
        span = max(float(np.max(hi - lo)), 1e-9)
        pad = 0.05 * span

        def sxy(tp):
            x = (tp[1] - lo[1] + pad) / (span + 2 * pad) * self.width
            y = self.height - (tp[0] - lo[0] + pad) / (span + 2 * pad) \
                * self.height
            return f"{x:.2f},{y:.2f}"

        parts = [f'<svg xmlns="http://www.w3.org/2000/svg" '
                 f'width="{self.width}" height="{self.height}">']
        for V, color in self.polylines:
            path_d = " ".join(sxy(v) for v in V)
            parts.append(f'<polyline fill="none" stroke="{color}" '
                         f'stroke-width="1.5" points="{path_d}"/>')
        for P, color in self.points:
            for p in P:
                x, y = sxy(p).split(",")
                parts.append(f'<circle cx="{x}" cy="{y}" r="3" '
                             f'fill="{color}"/>')
        parts.append("</svg>")
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(parts))


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lorentz-metrics",
        description="Conformal Lorentzian metric experiments on Minkowski "
                    "domains")
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=(name != "validate"))
        p.add_argument("--out", default=".")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--level", choices=("fast", "full"), default="fast")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    experiment = args.experiment

    cfg = {}
    if args.config:
        try:
            cfg = load_config(args.config, experiment)
        except ConfigError as exc:
            print(f"invalid config: {exc}", file=sys.stderr)
            return EXIT_CONFIG
    seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))

    if experiment == "validate":
        writer = RowWriter(experiment, "validation_suite", seed)
        level = cfg.get("level", args.level)
        all_pass = run_validate(cfg, writer, level, seed)
        writer.write(os.path.join(args.out, "validate.csv"))
        return EXIT_OK if all_pass else EXIT_VALIDATE_FAIL

    try:
        domain = build_domain(cfg["domain"])
    except (KeyError, DomainError, ValueError, TypeError) as exc:
        print(f"domain construction failed: {exc}", file=sys.stderr)
        return EXIT_DOMAIN

    writer = RowWriter(experiment, _domain_id(cfg["domain"]), seed)
    scene = None
    if cfg.get("svg") and domain.n == 1:
        scene = SvgScene()
        scene.add_domain_outline(domain)

    runners = {"distance": run_distance, "compare": run_compare,
               "hyperbolicity": run_hyperbolicity,
               "acausality": run_acausality, "thinness": run_thinness}
    code = EXIT_OK
    try:
        runners[experiment](cfg, domain, writer, scene)
    except ConfigError as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SolverError, CausalityError, DomainError) as exc:
        writer.add("error", "diagnostic", math.nan, {"message": str(exc)})
        print(f"solver failure: {exc}", file=sys.stderr)
        code = EXIT_SOLVER

    writer.write(os.path.join(args.out, f"{experiment}.csv"))
    if scene is not None:
        scene.write(os.path.join(args.out, f"{experiment}.svg"))
    return code


if __name__ == "__main__":
    sys.exit(main())
