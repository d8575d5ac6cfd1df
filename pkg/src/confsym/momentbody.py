"""Moment clouds, moment bodies, and the verification suite.

A cloud is a sampled batch pushed through the moment map (raw, lifted, and
chamber-reduced values).  Bodies are convex hulls of reduced clouds; cone
reports compare lifted clouds against the rescaled body; leaf stability
compares bodies across leaf levels; local cones estimate the cone spanned
by the moment image near a point.  run_suite orchestrates the enabled
checks for one scenario and produces a serializable report.

Determinism: everything downstream of a (scenario params, seed, config)
triple is reproducible bit for bit apart from wall-clock fields.
"""

from __future__ import annotations

import math
import time
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import nnls

from . import rng
from .cartan import FormField, VectorFieldMap, check_cartan, d_theta
from .liegroups import SO3, TORUS, UNITARY, DualVector, chamber_project, pair, rescale, random_group_element
from .numerics import (
    AltTensor,
    Polytope,
    RationalApprox,
    finite_d,
    hausdorff_distance,
    hull,
    interior,
    rank_of_form,
    rational_reconstruct,
    wedge,
)
from .scenarios import (
    FULL,
    SampleBatch,
    Scenario,
    Strategy,
    ball,
    leaf,
    lee_field,
    lee_type_check,
    moment_condition_residual,
    with_fault,
)


class TooFewRays(Exception):
    pass


# ---------------------------------------------------------------------------
# moment clouds
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class MomentCloud:
    scenario: Scenario
    batch: SampleBatch
    f_values: np.ndarray        # (m,)
    raw_components: np.ndarray  # (m, k) descended basis components
    tilde_components: np.ndarray
    raw_stack: np.ndarray       # kind-specific dual data (descended)
    tilde_stack: np.ndarray
    reduced: np.ndarray         # (m, chamber_dim)

    @property
    def count(self) -> int:
        return self.batch.points.shape[0]

    @property
    def tilde_reduced(self) -> np.ndarray:
        # chamber projection is positively homogeneous
        return self.reduced * np.exp(self.f_values)[:, None]

    def raw_dual(self, i: int) -> DualVector:
        return DualVector(self.scenario.group, self.raw_stack[i])

    def tilde_dual(self, i: int) -> DualVector:
        return DualVector(self.scenario.group, self.tilde_stack[i])


def compute_cloud(scenario: Scenario, count: int, seed: int,
                  strategy: Strategy = FULL, sigma: float = 1.0) -> MomentCloud:
    batch = scenario.sample(count, seed, strategy, sigma)
    pts = batch.points
    f = scenario.potential(pts)
    tilde = scenario.tilde_components(pts)
    raw = tilde * np.exp(-f)[:, None]
    raw_stack = scenario.dual_stack(pts)
    shape = (-1,) + (1,) * (raw_stack.ndim - 1)
    tilde_stack = raw_stack * np.exp(f).reshape(shape)
    reduced = scenario.reduce_stack_fn(raw_stack)
    return MomentCloud(scenario, batch, f, raw, tilde, raw_stack, tilde_stack,
                       np.asarray(reduced, dtype=np.float64))


def hull_tolerance(count: int, base: float = 2e-2) -> float:
    """Calibrated hull-discretization tolerance, scaled by sample count."""
    return max(1e-3, base * math.sqrt(1e4 / max(count, 1)))


# ---------------------------------------------------------------------------
# bodies
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BodyReport:
    polytope: Polytope
    max_facet_violation: float
    hausdorff_to_reference: float | None
    unbounded_suspected: bool
    facet_rationality: tuple       # per facet: tuple of RationalApprox | None
    facet_rational: tuple          # per facet: bool
    hull_normal_rationality: tuple  # per affine-hull normal: tuple of RationalApprox | None
    hull_normals_rational: bool | None
    direction_summary: dict | None  # conical-hull summary for unbounded bodies

    def to_dict(self) -> dict:
        def approx(a):
            return None if a is None else {
                "numerator": a.numerator, "denominator": a.denominator,
                "residual": a.residual,
            }

        return {
            "polytope": self.polytope.to_dict(),
            "max_facet_violation": float(self.max_facet_violation),
            "hausdorff_to_reference": (
                None if self.hausdorff_to_reference is None
                else float(self.hausdorff_to_reference)
            ),
            "unbounded_suspected": bool(self.unbounded_suspected),
            "facet_rationality": [[approx(a) for a in fac] for fac in self.facet_rationality],
            "facet_rational": list(self.facet_rational),
            "hull_normal_rationality": [
                [approx(a) for a in nor] for nor in self.hull_normal_rationality
            ],
            "hull_normals_rational": self.hull_normals_rational,
            "direction_summary": self.direction_summary,
        }


def _reconstruct_direction(direction: np.ndarray, max_den: int):
    """Per-coordinate rational reconstruction after normalizing the
    largest-magnitude coordinate to one."""
    ref = direction[int(np.argmax(np.abs(direction)))]
    if ref == 0.0:
        return tuple(None for _ in direction)
    scaled = direction / ref
    return tuple(rational_reconstruct(float(x), max_den) for x in scaled)


def body(cloud_points: np.ndarray, max_den: int = 10_000,
         reference: Polytope | None = None,
         unbounded_suspected: bool = False,
         base_point: np.ndarray | None = None) -> BodyReport:
    """Convex body of a reduced point cloud with rationality diagnostics.

    For unbounded-suspected clouds the truncated hull is reported together
    with a conical summary of directions from the base point, and
    polyhedrality assertions are left to the caller to suppress.
    """
    pts = np.asarray(cloud_points, dtype=np.float64)
    poly = hull(pts).with_flag(unbounded_suspected)
    violation = max((poly.violation(p) for p in pts), default=0.0)
    facet_rat = tuple(
        _reconstruct_direction(n, max_den) for n in poly.facet_normals
    )
    facet_ok = tuple(all(a is not None for a in fac) for fac in facet_rat)
    hull_rat = tuple(
        _reconstruct_direction(poly.complement[:, j], max_den)
        for j in range(poly.complement.shape[1])
    )
    hull_ok = (
        None if not hull_rat
        else all(all(a is not None for a in nor) for nor in hull_rat)
    )
    hausdorff = None if reference is None else hausdorff_distance(poly, reference)
    summary = None
    if unbounded_suspected:
        anchor = pts.mean(axis=0) if base_point is None else np.asarray(base_point)
        dirs = pts - anchor
        norms = np.linalg.norm(dirs, axis=1)
        keep = norms > 1e-12
        mean_dir = dirs[keep].mean(axis=0)
        mean_norm = np.linalg.norm(mean_dir)
        summary = {
            "base_point": [float(v) for v in anchor],
            "max_extent": float(norms.max(initial=0.0)),
            "mean_direction": [
                float(v) for v in (mean_dir / mean_norm if mean_norm > 0 else mean_dir)
            ],
            "note": "polyhedrality assertions suppressed (unbounded suspected)",
        }
    return BodyReport(poly, float(violation), hausdorff, unbounded_suspected,
                      facet_rat, facet_ok, hull_rat, hull_ok, summary)


def analytic_reference_body(scenario: Scenario) -> Polytope | None:
    """Exact moment body where a closed form is known (ellipsoid family)."""
    if scenario.metadata.get("family") != "ellipsoid":
        return None
    zeta = np.asarray(scenario.params["zeta"], dtype=np.float64)
    n = len(zeta)
    if scenario.params["subgroup"] == "torus":
        return hull(np.diag(1.0 / zeta))
    if np.allclose(zeta, zeta[0]):
        point = np.zeros(n)
        point[0] = 1.0 / zeta[0]
        return hull(point.reshape(1, -1))
    return None


# ---------------------------------------------------------------------------
# cone relations
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ConeReport:
    max_ray_deviation: float
    hyperplane_residual: float
    passed: bool
    tolerance: float

    def to_dict(self) -> dict:
        return {
            "max_ray_deviation": float(self.max_ray_deviation),
            "hyperplane_residual": float(self.hyperplane_residual),
            "passed": bool(self.passed),
            "tolerance": float(self.tolerance),
        }


def verify_cone(cloud: MomentCloud, body_report: BodyReport,
                tolerance: float = 1e-2,
                hyperplane_tolerance: float = 1e-9) -> ConeReport:
    """Check the lifted cloud against the rescaled body.

    Every lifted moment value, rescaled onto the Lee hyperplane and
    chamber-projected, must land inside the computed body (max facet
    violation = ray deviation); raw values must pair to one with the Lee
    element.
    """
    sc = cloud.scenario
    if sc.zeta is None:
        raise ValueError("cone verification needs a group-level Lee element")
    spec = sc.group
    poly = body_report.polytope
    worst = 0.0
    for i in range(cloud.count):
        mu = rescale(cloud.tilde_dual(i), sc.zeta)
        point = chamber_project(spec, mu)
        worst = max(worst, poly.violation(point))
    hyper = float(np.max(np.abs(cloud.raw_components @ sc.zeta_coeffs - 1.0)))
    passed = worst <= tolerance and hyper <= hyperplane_tolerance
    return ConeReport(float(worst), hyper, passed, tolerance)


# ---------------------------------------------------------------------------
# leaf stability
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LeafStabilityReport:
    levels: tuple
    bodies: tuple                 # BodyReport per level
    hausdorff_matrix: np.ndarray  # (L, L)
    corank_table: np.ndarray      # (L, probes)

    def max_pairwise_hausdorff(self) -> float:
        return float(np.max(self.hausdorff_matrix))

    def to_dict(self) -> dict:
        return {
            "levels": [float(t) for t in self.levels],
            "hausdorff_matrix": self.hausdorff_matrix.tolist(),
            "corank_table": self.corank_table.tolist(),
        }


def _theta_kernel_corank(scenario: Scenario, point) -> int:
    theta = scenario.potential_gradient(point)
    _, _, vt = np.linalg.svd(theta.reshape(1, -1))
    basis = vt[1:]  # orthonormal basis of ker(theta)
    omega_matrix = scenario.omega_at(point).as_matrix()
    restricted = basis @ omega_matrix @ basis.T
    restricted = 0.5 * (restricted - restricted.T)
    info = rank_of_form(restricted, tol=1e-8)
    return basis.shape[0] - info.rank


def leaf_stability(scenario: Scenario, levels, count: int, seed: int,
                   sigma: float = 1.0, probes_per_leaf: int = 10,
                   max_den: int = 10_000) -> LeafStabilityReport:
    """Bodies of leaf-pinned clouds plus pairwise Hausdorff and corank data."""
    if len(levels) < 2:
        raise ValueError("need at least two leaf levels")
    reports = []
    coranks = np.empty((len(levels), probes_per_leaf), dtype=int)
    for li, level in enumerate(levels):
        cloud = compute_cloud(scenario, count, seed + li, leaf(level), sigma)
        reports.append(body(cloud.reduced, max_den=max_den))
        for pi in range(probes_per_leaf):
            coranks[li, pi] = _theta_kernel_corank(scenario, cloud.batch.points[pi])
    n = len(levels)
    matrix = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d = hausdorff_distance(reports[i].polytope, reports[j].polytope)
            matrix[i, j] = matrix[j, i] = d
    return LeafStabilityReport(tuple(float(t) for t in levels), tuple(reports),
                               matrix, coranks)


# ---------------------------------------------------------------------------
# local cones
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LocalConeReport:
    apex: np.ndarray
    estimated_rays: np.ndarray      # (r, chamber_dim) unit directions
    containment_violation: float
    analytic_match_deg: float | None

    def to_dict(self) -> dict:
        return {
            "apex": self.apex.tolist(),
            "estimated_rays": self.estimated_rays.tolist(),
            "containment_violation": float(self.containment_violation),
            "analytic_match_deg": (
                None if self.analytic_match_deg is None
                else float(self.analytic_match_deg)
            ),
        }


def _cluster_directions(dirs: np.ndarray, angular_tol_rad: float) -> np.ndarray:
    """Greedy angular clustering; returns unit representatives."""
    sums: list[np.ndarray] = []
    for d in dirs:
        placed = False
        for k, s in enumerate(sums):
            rep = s / np.linalg.norm(s)
            if float(rep @ d) >= math.cos(angular_tol_rad):
                sums[k] = s + d
                placed = True
                break
        if not placed:
            sums.append(d.copy())
    return np.array([s / np.linalg.norm(s) for s in sums])


def cone_membership_residual(apex: np.ndarray, rays: np.ndarray, point) -> float:
    """Distance from (point - apex) to the conical hull of the rays."""
    d = np.asarray(point, dtype=np.float64) - apex
    if np.linalg.norm(d) <= 1e-12:
        return 0.0
    _, resid = nnls(rays.T, d)
    return float(resid)


def local_cone(scenario: Scenario, point, radius: float, count: int, seed: int,
               angular_tol_deg: float = 2.0,
               body_polytope: Polytope | None = None,
               analytic_rays=None) -> LocalConeReport:
    """Estimate the local moment cone at a point from a metric ball sample.

    Directions of reduced samples from the apex are clustered at the
    angular tolerance; the conical hull of the representatives is the
    estimated cone.  Raises TooFewRays when no direction survives
    clustering while the nearby moment image is nondegenerate.
    """
    batch = scenario.sample(count, seed, ball(np.asarray(point, float), radius))
    reduced = scenario.reduced(batch.points)
    apex = scenario.reduced(point)
    dirs = reduced - apex
    norms = np.linalg.norm(dirs, axis=1)
    spread = float(norms.max(initial=0.0))
    keep = norms > max(1e-12, 1e-6 * spread)
    if not np.any(keep):
        raise TooFewRays("no moment directions survive near the apex")
    unit = dirs[keep] / norms[keep, None]
    rays = _cluster_directions(unit, math.radians(angular_tol_deg))
    span_rank = np.linalg.matrix_rank(unit, tol=1e-8)
    if len(rays) < span_rank:
        raise TooFewRays(
            f"{len(rays)} ray(s) cannot span a rank-{span_rank} direction set"
        )
    violation = 0.0
    if body_polytope is not None:
        for v in body_polytope.vertices:
            violation = max(violation, cone_membership_residual(apex, rays, v))
    match = None
    if analytic_rays is not None:
        worst = 0.0
        for ar in np.asarray(analytic_rays, dtype=np.float64):
            cosines = rays @ ar
            worst = max(worst, math.degrees(math.acos(np.clip(np.max(cosines), -1, 1))))
        match = worst
    return LocalConeReport(apex, rays, float(violation), match)


# ---------------------------------------------------------------------------
# cartan residual batch (acceptance-grade structure check)
# ---------------------------------------------------------------------------


def random_polynomial_field(dim: int, bank: np.ndarray) -> VectorFieldMap:
    """Degree <= 2 polynomial vector field from a coefficient bank."""
    need = dim + dim * dim + dim * dim * dim
    coeffs = bank[:need]
    const = coeffs[:dim]
    lin = coeffs[dim : dim + dim * dim].reshape(dim, dim)
    quad = coeffs[dim + dim * dim :].reshape(dim, dim, dim)
    quad = 0.5 * (quad + np.transpose(quad, (0, 2, 1)))

    def evaluate(p):
        p = np.asarray(p, dtype=np.float64)
        return const + lin @ p + np.einsum("ijk,j,k->i", quad, p, p)

    return VectorFieldMap(dim, evaluate)


def field_bank(dim: int, seed: int, how_many: int, scale: float = 0.35) -> np.ndarray:
    need = dim + dim * dim + dim * dim * dim
    return scale * rng.normals(seed, np.arange(how_many), need)


def cartan_suite(scenario: Scenario, n_points: int, seed: int,
                 step: float = 1e-4) -> dict:
    """Worst check_cartan residuals over sampled points with random fields."""
    pts = scenario.sample(n_points, seed, FULL, 1.0).points
    dim = scenario.ambient_dim
    banks = field_bank(dim, seed + 101, 2 * n_points)
    worst: dict[str, float] = defaultdict(float)
    for i, p in enumerate(pts):
        X = random_polynomial_field(dim, banks[2 * i])
        Y = random_polynomial_field(dim, banks[2 * i + 1])
        residuals = check_cartan(scenario.omega_field, scenario.theta_field,
                                 X, Y, p, step)
        for name, value in residuals.items():
            worst[name] = max(worst[name], value)
    return dict(worst)


# ---------------------------------------------------------------------------
# the check suite
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CheckResult:
    name: str
    enabled: bool
    skipped: str | None           # reason, when not applicable
    passed: bool | None
    evidence: dict
    runtime_ms: float

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "enabled": self.enabled,
            "skipped": self.skipped,
            "passed": self.passed,
            "evidence": self.evidence,
            "runtime_ms": float(self.runtime_ms),
        }


@dataclass(frozen=True, eq=False)
class SuiteReport:
    scenario_name: str
    results: tuple
    polytopes: dict

    @property
    def passed(self) -> bool:
        return all(r.passed is not False for r in self.results if r.enabled)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario_name,
            "suite_pass": self.passed,
            "checks": [r.to_dict() for r in self.results],
        }


@dataclass(frozen=True)
class SuiteContext:
    count: int = 10_000
    seed: int = 0
    sigma: float = 1.0
    band: tuple = (-1.0, 1.0)
    leaf_levels: tuple = (-0.5, 0.0, 0.7)


CHECK_DEFAULTS: dict[str, dict] = {
    "structure": {
        "points": 20, "cartan_points": 4, "step": 1e-4,
        "cartan_tolerance": 1e-4, "form_tolerance": 1e-5,
    },
    "moment_condition": {"points": 100, "step": 1e-4, "tolerance": 1e-5},
    "equivariance": {"trials": 50, "tolerance": 1e-8},
    "lee_type": {"hyperplane_tolerance": 1e-9, "min_search_residual": 0.1},
    "body": {"max_den": 10_000, "tolerance": None, "growth_threshold": 1.2},
    "cone": {"tolerance": None, "hyperplane_tolerance": 1e-9},
    "leaf_stability": {"tolerance": 2e-2, "probes": 10, "expected_corank": 1},
    "local_cones": {
        "radius": 0.1, "count": 600, "angular_tolerance_deg": 2.0,
        "containment_tolerance": 1e-2,
    },
    "semirationality": {"max_den": 10_000},
    "first_kind": {
        "points": 50, "step": 1e-4, "transversal_tolerance": 1e-9,
        "volume_floor": 1e-2, "reeb_tolerance": 1e-6,
        "moment_match_tolerance": 1e-7, "cone_moment_tolerance": 1e-7,
    },
}

CHECK_NAMES = tuple(CHECK_DEFAULTS)


def check_applicability(scenario: Scenario, name: str) -> str | None:
    """Reason a check is skipped for this scenario, or None if it applies."""
    lee = scenario.zeta_coeffs is not None
    if name == "cone":
        if not lee:
            return "cone relations need a Lee-type scenario (zeta is None)"
        if scenario.zeta is None:
            return "cone rescaling needs a group-level Lee element"
        if not scenario.bounded_body:
            return "cone deviation against an unbounded body is not asserted"
    if name == "leaf_stability":
        if not scenario.leaf_supported:
            return "leaf sampling unsupported"
        if not scenario.bounded_body:
            return "leaf bodies are unbounded; stability not asserted"
    if name == "local_cones" and not scenario.local_cone_datums:
        return "no analytic local-cone data for this scenario"
    if name == "semirationality":
        if scenario.group.kind != TORUS or not lee or not scenario.bounded_body:
            return "semirationality grid runs on Lee-type torus scenarios"
    if name == "first_kind" and scenario.first_kind_direction is None:
        return "no transversal direction field (not a first-kind presentation)"
    return None


def _check_structure(scenario, opts, ctx):
    pts = scenario.sample(opts["points"], ctx.seed + 7, FULL, ctx.sigma).points
    step = opts["step"]
    worst_struct = 0.0
    worst_dtheta = 0.0
    theta_field = scenario.theta_field
    for p in pts:
        worst_struct = max(
            worst_struct,
            d_theta(scenario.omega_field, theta_field, p, step).norm(),
        )
        worst_dtheta = max(worst_dtheta, finite_d(theta_field, p, step).norm())
    residuals = cartan_suite(scenario, opts["cartan_points"], ctx.seed + 13, step)
    worst_cartan = max(residuals.values())
    passed = (
        worst_struct <= opts["form_tolerance"]
        and worst_dtheta <= opts["form_tolerance"]
        and worst_cartan <= opts["cartan_tolerance"]
    )
    return passed, {
        "d_theta_omega": worst_struct,
        "d_theta_closed": worst_dtheta,
        "cartan_residuals": residuals,
    }, {}


def _check_moment_condition(scenario, opts, ctx):
    pts = scenario.sample(opts["points"], ctx.seed + 17, FULL, ctx.sigma).points
    worst = 0.0
    for p in pts:
        worst = max(worst, float(np.max(moment_condition_residual(scenario, p, opts["step"]))))
    return worst <= opts["tolerance"], {"max_residual": worst}, {}


def _check_equivariance(scenario, opts, ctx):
    kind = scenario.group.kind
    pts = scenario.sample(opts["trials"], ctx.seed + 23, FULL, ctx.sigma).points
    worst = 0.0
    for i, p in enumerate(pts):
        g = random_group_element(scenario.group, ctx.seed + 29, i)
        moved = scenario.group_action(g, p)
        mu_moved = scenario.dual_at(moved)
        if kind == TORUS:
            expected = scenario.dual_at(p).data
            err = float(np.max(np.abs(mu_moved.data - expected)))
        else:
            from .liegroups import coadjoint

            expected = coadjoint(scenario.group, g, scenario.dual_at(p)).data
            err = float(np.max(np.abs(mu_moved.data - expected)))
        worst = max(worst, err)
    return worst <= opts["tolerance"], {"max_deviation": worst, "trials": opts["trials"]}, {}


def _check_lee_type(scenario, opts, ctx):
    verdict = lee_type_check(scenario)
    expected_lee = scenario.zeta_coeffs is not None
    if expected_lee:
        passed = verdict.lee_type and verdict.residual <= opts["hyperplane_tolerance"]
    else:
        passed = (not verdict.lee_type) and verdict.residual >= opts["min_search_residual"]
    return passed, {
        "lee_type": bool(verdict.lee_type),
        "residual": float(verdict.residual),
        "expected_lee_type": expected_lee,
    }, {}


def _check_body(scenario, opts, ctx):
    cloud = compute_cloud(scenario, ctx.count, ctx.seed, FULL, ctx.sigma)
    probe = compute_cloud(scenario, ctx.count, ctx.seed, FULL, 2.0 * ctx.sigma)
    base_diam = hull(cloud.reduced).diameter()
    probe_diam = hull(probe.reduced).diameter()
    unbounded = bool(probe_diam > opts["growth_threshold"] * max(base_diam, 1e-12))
    reference = analytic_reference_body(scenario)
    report = body(cloud.reduced, max_den=opts["max_den"], reference=reference,
                  unbounded_suspected=unbounded)
    tol = opts["tolerance"] or hull_tolerance(ctx.count)
    if unbounded:
        passed = True  # polyhedrality assertions suppressed, report-only
    else:
        passed = report.max_facet_violation <= 1e-8
        if report.hausdorff_to_reference is not None:
            passed = passed and report.hausdorff_to_reference <= tol
    evidence = {
        "vertices": report.polytope.vertices.tolist(),
        "affine_rank": report.polytope.affine_rank,
        "max_facet_violation": report.max_facet_violation,
        "hausdorff_to_reference": report.hausdorff_to_reference,
        "unbounded_suspected": unbounded,
        "tolerance": tol,
    }
    if report.direction_summary:
        evidence["direction_summary"] = report.direction_summary
    return passed, evidence, {"moment_body": report}


def _check_cone(scenario, opts, ctx):
    cloud = compute_cloud(scenario, ctx.count, ctx.seed, FULL, ctx.sigma)
    report = body(cloud.reduced)
    tol = opts["tolerance"] or max(1e-3, 1e-2 * math.sqrt(1e4 / ctx.count))
    cone = verify_cone(cloud, report, tolerance=tol,
                       hyperplane_tolerance=opts["hyperplane_tolerance"])
    return cone.passed, cone.to_dict(), {}


def _check_leaf_stability(scenario, opts, ctx):
    report = leaf_stability(scenario, ctx.leaf_levels, ctx.count, ctx.seed,
                            ctx.sigma, opts["probes"])
    worst = report.max_pairwise_hausdorff()
    coranks_ok = bool(np.all(report.corank_table == opts["expected_corank"]))
    passed = worst <= opts["tolerance"] and coranks_ok
    artifacts = {
        f"leaf_body_{level}": rep for level, rep in zip(report.levels, report.bodies)
    }
    return passed, {
        "max_pairwise_hausdorff": worst,
        "corank_values": sorted(set(int(c) for c in report.corank_table.ravel())),
        "levels": list(report.levels),
    }, artifacts


def _check_local_cones(scenario, opts, ctx):
    cloud = compute_cloud(scenario, ctx.count, ctx.seed, FULL, ctx.sigma)
    poly = body(cloud.reduced).polytope
    worst_angle = 0.0
    worst_containment = 0.0
    cones = {}
    for i, (point, apex, rays) in enumerate(scenario.local_cone_datums):
        report = local_cone(
            scenario, point, opts["radius"], opts["count"], ctx.seed + 31 + i,
            angular_tol_deg=opts["angular_tolerance_deg"],
            body_polytope=poly, analytic_rays=rays,
        )
        worst_angle = max(worst_angle, report.analytic_match_deg or 0.0)
        worst_containment = max(worst_containment, report.containment_violation)
        cones[f"local_cone_{i}"] = report
    passed = (
        worst_angle <= opts["angular_tolerance_deg"]
        and worst_containment <= opts["containment_tolerance"]
    )
    return passed, {
        "max_angular_deviation_deg": worst_angle,
        "max_containment_violation": worst_containment,
        "cones": len(cones),
    }, cones


def _check_semirationality(scenario, opts, ctx):
    cloud = compute_cloud(scenario, ctx.count, ctx.seed, FULL, ctx.sigma)
    report = body(cloud.reduced, max_den=opts["max_den"])
    zeta = np.asarray(scenario.params["zeta"], dtype=np.float64)
    expected = all(
        r is not None for r in _reconstruct_direction(zeta, opts["max_den"])
    )
    verdict = report.hull_normals_rational
    passed = verdict is not None and verdict == expected
    return passed, {
        "verdict_rational": verdict,
        "zeta_line_rational": expected,
        "max_den": opts["max_den"],
    }, {"moment_body_semirational": report}


def _check_first_kind(scenario, opts, ctx):
    b_field = scenario.first_kind_direction
    step = opts["step"]
    pts = scenario.sample(opts["points"], ctx.seed + 37, FULL, ctx.sigma).points
    dim = scenario.ambient_dim
    n = dim // 2

    def alpha_at(p):
        return interior(b_field(p), scenario.omega_at(p))

    alpha_field = FormField(dim, 1, alpha_at, scenario.domain)

    worst_transversal = 0.0
    min_volume = math.inf
    worst_reeb = 0.0
    worst_match = 0.0
    worst_cone = 0.0
    for p in pts:
        theta = scenario.theta_at(p)
        alpha = alpha_at(p)
        worst_transversal = max(
            worst_transversal, abs(float(theta.coeffs @ b_field(p)) - 1.0)
        )
        d_alpha = finite_d(alpha_field, p, step)
        vol = wedge(theta, alpha)
        for _ in range(n - 1):
            vol = wedge(vol, d_alpha)
        min_volume = min(min_volume, abs(float(vol.coeffs[0])))
        a_vec = lee_field(scenario, p)
        worst_reeb = max(
            worst_reeb,
            abs(float(alpha.coeffs @ a_vec) + 1.0),
            interior(a_vec, d_alpha).norm(),
        )
        raw = scenario.raw_components(p)
        for i in range(scenario.basis_size):
            psi = -float(alpha.coeffs @ scenario.infinitesimal(i, p))
            worst_match = max(worst_match, abs(psi - raw[i]))
        t = scenario.potential(p)
        base = scenario.first_kind_flow(-t, p)
        alpha0 = alpha_at(base)
        tilde = scenario.tilde_components(p)
        for i in range(scenario.basis_size):
            psi0 = -float(alpha0.coeffs @ scenario.infinitesimal(i, base))
            rel = abs(tilde[i] - math.exp(t) * psi0) / (1.0 + abs(tilde[i]))
            worst_cone = max(worst_cone, rel)
    passed = (
        worst_transversal <= opts["transversal_tolerance"]
        and min_volume >= opts["volume_floor"]
        and worst_reeb <= opts["reeb_tolerance"]
        and worst_match <= opts["moment_match_tolerance"]
        and worst_cone <= opts["cone_moment_tolerance"]
    )
    return passed, {
        "theta_of_b": worst_transversal,
        "min_volume_coefficient": min_volume,
        "reeb_residual": worst_reeb,
        "contact_moment_match": worst_match,
        "cone_moment_scaling": worst_cone,
    }, {}


_CHECK_IMPLS = {
    "structure": _check_structure,
    "moment_condition": _check_moment_condition,
    "equivariance": _check_equivariance,
    "lee_type": _check_lee_type,
    "body": _check_body,
    "cone": _check_cone,
    "leaf_stability": _check_leaf_stability,
    "local_cones": _check_local_cones,
    "semirationality": _check_semirationality,
    "first_kind": _check_first_kind,
}


def run_suite(scenario: Scenario, checks: dict | None = None,
              context: SuiteContext = SuiteContext(),
              fault_injection: dict | None = None) -> SuiteReport:
    """Run the enabled checks for one scenario.

    ``checks`` maps check names to {"enabled": bool, **option overrides};
    unknown names are rejected.  Fault injection (corrupting one moment
    component) is a first-class option so negative tests can guard against
    vacuously-passing checks.
    """
    checks = checks or {}
    unknown = set(checks) - set(CHECK_DEFAULTS)
    if unknown:
        raise ValueError(f"unknown checks: {sorted(unknown)}")
    if fault_injection:
        scenario = with_fault(scenario, int(fault_injection["component"]),
                              float(fault_injection["offset"]))
    results = []
    polytopes: dict = {}
    for name in CHECK_NAMES:
        settings = dict(checks.get(name, {}))
        enabled = bool(settings.pop("enabled", True))
        opts = {**CHECK_DEFAULTS[name], **settings}
        if not enabled:
            results.append(CheckResult(name, False, None, None, {}, 0.0))
            continue
        reason = check_applicability(scenario, name)
        if reason is not None:
            results.append(CheckResult(name, True, reason, None, {}, 0.0))
            continue
        start = time.perf_counter()
        passed, evidence, artifacts = _CHECK_IMPLS[name](scenario, opts, context)
        elapsed = 1000.0 * (time.perf_counter() - start)
        polytopes.update(artifacts)
        results.append(CheckResult(name, True, None, bool(passed), evidence, elapsed))
    return SuiteReport(scenario.name, tuple(results), polytopes)
