"""Catalog of explicit conformal symplectic Hamiltonian manifolds.

Each scenario presents a manifold through a covering domain in coordinate
space: an open subset of R^N carrying a potential f, a symplectic form
``omega_tilde``, per-basis moment components, and a deck group acting by
affine maps.  The conformal symplectic data descends as

    omega = exp(-f) * omega_tilde,      theta = df,
    moment components Phi^xi = exp(-f) * Phi_tilde^xi,

and quotient statements are verified through deck-equivariance identities,
so no atlas machinery is needed.

Complex coordinates are realized on R^{2n} with z_j = x_j + i y_j in block
layout (x_1..x_n, y_1..y_n) and omega_std = sum dx_j ^ dy_j.  The
infinitesimal action consistent with the moment conventions is
xi_M = d/dt|_0 exp(-t xi) . x (see the module docs of liegroups for the
pairing conventions; the flow helpers used by cross-checks implement
exactly this sign).

Catalog entries:

* ``hopf_ellipsoid``  -- punctured C^n with f = log(1/2 sum zeta_j |z_j|^2),
  torus or unitary-centralizer action, deck z -> cz.
* ``cylinder_contact`` -- same chart, trivial deck group, equipped with the
  transversal direction B = radial/2 (contact cylinder over an ellipsoid
  leaf).
* ``mapping_torus``   -- cylinder plus the rank-1 deck z -> cz.
* ``hyperboloid``     -- {x.y > 0} in T*R^3 with f = log(c x.y), circle
  times SO(3) action, deck (x, y) -> (e^c x, e^-c y).
* ``cotangent_circle`` -- T*(T^2) on its universal cover R^4 with
  theta = c d(phi), circle action on the second base factor; not of Lee
  type.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Callable

import numpy as np
from scipy.linalg import expm

from . import rng
from .cartan import FormField, VectorFieldMap, d_theta
from .liegroups import (
    SO3,
    TORUS,
    UNITARY,
    DualVector,
    GroupSpec,
    LeeElement,
    pair,
    chamber_project,
    so3,
    torus,
    unitary_centralizer,
)
from .numerics import AltTensor, default_step, finite_d, increasing_indices, interior, solve_skew


class BadParams(Exception):
    pass


class SmokeFail(Exception):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = None if witness is None else np.asarray(witness)


class BadStrategy(Exception):
    pass


class OutsideDomain(Exception):
    pass


# ---------------------------------------------------------------------------
# presentation plumbing
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DeckGenerator:
    mapping: Callable        # (m, N) -> (m, N), affine
    chi: float               # potential shift
    differential: np.ndarray  # constant Jacobian of the mapping


@dataclass(frozen=True, eq=False)
class Presentation:
    ambient_dim: int
    domain: Callable             # (m, N) -> bool mask
    potential: Callable          # (m, N) -> (m,)
    potential_gradient: Callable  # (m, N) -> (m, N)
    omega_tilde: Callable        # point -> AltTensor (rank 2)
    deck_generators: tuple
    rank: int


@dataclass(frozen=True)
class Strategy:
    kind: str                       # "full" | "leaf" | "ball"
    level: float = 0.0
    center: tuple | None = None
    radius: float = 0.0
    band: tuple = (-1.0, 1.0)

    def tag(self) -> str:
        if self.kind == "leaf":
            return f"leaf({self.level})"
        if self.kind == "ball":
            return f"ball(r={self.radius})"
        return "full"


FULL = Strategy("full")


def leaf(level: float, band=(-1.0, 1.0)) -> Strategy:
    return Strategy("leaf", level=float(level), band=band)


def ball(center, radius: float) -> Strategy:
    return Strategy("ball", center=tuple(float(c) for c in center), radius=float(radius))


@dataclass(frozen=True, eq=False)
class SampleBatch:
    points: np.ndarray
    strategy: Strategy
    seed: int
    sigma: float


# ---------------------------------------------------------------------------
# scenario
# ---------------------------------------------------------------------------


def _rows(points, dim):
    pts = np.asarray(points, dtype=np.float64)
    single = pts.ndim == 1
    if single:
        pts = pts.reshape(1, dim)
    if pts.shape[-1] != dim:
        raise ValueError("points have the wrong ambient dimension")
    return pts, single


@dataclass(frozen=True, eq=False)
class Scenario:
    """An explicit conformal symplectic Hamiltonian manifold.

    Immutable after construction; all evaluators are pure, so scenarios are
    shareable and evaluation is safe to parallelize over points.
    """

    name: str
    params: dict
    presentation: Presentation
    group: GroupSpec
    lie_basis: tuple
    zeta: LeeElement | None          # group-level Lee element (torus/unitary)
    zeta_coeffs: np.ndarray | None   # Lee element in the scenario basis
    first_kind_direction: VectorFieldMap | None
    leaf_supported: bool
    bounded_body: bool
    metadata: dict
    tilde_component_fn: Callable     # (m, N) -> (m, k)
    infinitesimal_fns: tuple         # per basis: (m, N) -> (m, N)
    dual_stack_fn: Callable          # (points, raw_comps, f) -> stack
    reduce_stack_fn: Callable        # stack -> (m, chamber_dim)
    group_action_fn: Callable        # (g, (m, N)) -> (m, N)
    flow_fn: Callable                # (basis index, t, (m, N)) -> (m, N)
    samplers: dict = field(default_factory=dict)
    first_kind_flow: Callable | None = None
    lee_analytic_fn: Callable | None = None
    local_cone_datums: tuple = ()

    # -- scalar structure ----------------------------------------------------

    @property
    def ambient_dim(self) -> int:
        return self.presentation.ambient_dim

    @property
    def basis_size(self) -> int:
        return len(self.lie_basis)

    def domain(self, points) -> np.ndarray:
        pts, single = _rows(points, self.ambient_dim)
        mask = np.asarray(self.presentation.domain(pts), dtype=bool)
        return bool(mask[0]) if single else mask

    def potential(self, points):
        pts, single = _rows(points, self.ambient_dim)
        vals = np.asarray(self.presentation.potential(pts), dtype=np.float64)
        return float(vals[0]) if single else vals

    def potential_gradient(self, points):
        pts, single = _rows(points, self.ambient_dim)
        g = np.asarray(self.presentation.potential_gradient(pts), dtype=np.float64)
        return g[0] if single else g

    def omega_at(self, point) -> AltTensor:
        if not self.domain(point):
            raise OutsideDomain(f"point outside scenario domain: {point}")
        return self.presentation.omega_tilde(np.asarray(point, float)) * math.exp(
            -self.potential(point)
        )

    def theta_at(self, point) -> AltTensor:
        if not self.domain(point):
            raise OutsideDomain(f"point outside scenario domain: {point}")
        return AltTensor.covector(self.ambient_dim, self.potential_gradient(point))

    @cached_property
    def omega_field(self) -> FormField:
        return FormField(self.ambient_dim, 2, self.omega_at, self.domain)

    @cached_property
    def theta_field(self) -> FormField:
        return FormField(self.ambient_dim, 1, self.theta_at, self.domain)

    # -- moment data -----------------------------------------------------------

    def tilde_components(self, points) -> np.ndarray:
        pts, single = _rows(points, self.ambient_dim)
        comps = np.asarray(self.tilde_component_fn(pts), dtype=np.float64)
        return comps[0] if single else comps

    def raw_components(self, points) -> np.ndarray:
        pts, single = _rows(points, self.ambient_dim)
        comps = np.asarray(self.tilde_component_fn(pts), dtype=np.float64)
        scale = np.exp(-self.presentation.potential(pts))
        out = comps * scale[:, None]
        return out[0] if single else out

    def zeta_pair(self, points):
        """<Phi(x), zeta> through the component expansion."""
        if self.zeta_coeffs is None:
            return None
        pts, single = _rows(points, self.ambient_dim)
        vals = self.raw_components(pts) @ self.zeta_coeffs
        return float(vals[0]) if single else vals

    def dual_stack(self, points, tilde: bool = False):
        pts, _ = _rows(points, self.ambient_dim)
        f = np.asarray(self.presentation.potential(pts), dtype=np.float64)
        comps = self.tilde_components(pts) * np.exp(-f)[:, None]
        stack = self.dual_stack_fn(pts, comps, f)
        if tilde:
            shape = (-1,) + (1,) * (stack.ndim - 1)
            stack = stack * np.exp(f).reshape(shape)
        return stack

    def reduced(self, points) -> np.ndarray:
        pts, single = _rows(points, self.ambient_dim)
        red = self.reduce_stack_fn(self.dual_stack(pts))
        return red[0] if single else red

    def dual_at(self, point, tilde: bool = False) -> DualVector:
        stack = self.dual_stack(np.asarray(point, float).reshape(1, -1), tilde=tilde)
        return DualVector(self.group, stack[0])

    def moment_component_field(self, index: int) -> FormField:
        """Descended component Phi^{xi_index} as a rank-0 form field."""

        def evaluate(p):
            return AltTensor.scalar(self.ambient_dim, float(self.raw_components(p)[index]))

        return FormField(self.ambient_dim, 0, evaluate, self.domain)

    def infinitesimal(self, index: int, points) -> np.ndarray:
        pts, single = _rows(points, self.ambient_dim)
        vecs = np.asarray(self.infinitesimal_fns[index](pts), dtype=np.float64)
        return vecs[0] if single else vecs

    def infinitesimal_field(self, index: int) -> VectorFieldMap:
        return VectorFieldMap(self.ambient_dim, lambda p: self.infinitesimal(index, p))

    def group_action(self, g, points) -> np.ndarray:
        pts, single = _rows(points, self.ambient_dim)
        out = self.group_action_fn(g, pts)
        return out[0] if single else out

    def flow(self, index: int, t: float, points) -> np.ndarray:
        pts, single = _rows(points, self.ambient_dim)
        out = self.flow_fn(index, float(t), pts)
        return out[0] if single else out

    def deck_apply(self, generator_index: int, points) -> np.ndarray:
        gen = self.presentation.deck_generators[generator_index]
        pts, single = _rows(points, self.ambient_dim)
        out = np.asarray(gen.mapping(pts), dtype=np.float64)
        if not np.all(self.presentation.domain(out)):
            raise OutsideDomain("deck image left the domain")
        return out[0] if single else out

    def sample(self, count: int, seed: int, strategy: Strategy = FULL,
               sigma: float = 1.0) -> SampleBatch:
        if count < 1:
            raise ValueError("count must be >= 1")
        sampler = self.samplers.get(strategy.kind)
        if sampler is None:
            raise BadStrategy(f"{self.name} does not support strategy {strategy.kind!r}")
        pts = sampler(count, int(seed), strategy, float(sigma))
        return SampleBatch(pts, strategy, int(seed), float(sigma))


# ---------------------------------------------------------------------------
# spec-level operations
# ---------------------------------------------------------------------------


def eval_structure(scenario: Scenario, point):
    """(omega, theta, f) at a point, with theta from the analytic gradient."""
    return (
        scenario.omega_at(point),
        scenario.theta_at(point),
        scenario.potential(point),
    )


def moment(scenario: Scenario, point) -> DualVector:
    if not scenario.domain(point):
        raise OutsideDomain(f"point outside scenario domain: {point}")
    return scenario.dual_at(point)


def reduced_moment(scenario: Scenario, point) -> np.ndarray:
    if not scenario.domain(point):
        raise OutsideDomain(f"point outside scenario domain: {point}")
    return scenario.reduced(point)


def hamiltonian_field(scenario: Scenario, f_field: FormField, point,
                      step: float | None = None) -> np.ndarray:
    """Twisted Hamiltonian vector field of a function at a point."""
    h = default_step(point) if step is None else step
    rhs = d_theta(f_field, scenario.theta_field, point, h)
    return solve_skew(scenario.omega_at(point), rhs)


def lee_field(scenario: Scenario, point) -> np.ndarray:
    """Hamiltonian field of the constant 1: solves iota(A) omega = theta."""
    return solve_skew(scenario.omega_at(point), scenario.theta_at(point))


@dataclass(frozen=True, eq=False)
class LeeTypeVerdict:
    lee_type: bool
    residual: float
    witness: np.ndarray | None  # basis coefficients found by the search

    def __repr__(self):
        kind = "LeeType" if self.lee_type else "NotLeeType"
        return f"{kind}(residual={self.residual:.3e})"


def lee_type_check(scenario: Scenario, probe_points=None,
                   search_tol: float = 1e-6) -> LeeTypeVerdict:
    """Decide Lee type on a probe set.

    With a declared Lee element the verdict reports max |<Phi, zeta> - 1|.
    Otherwise a least-squares search for basis coefficients c with
    sum_i c_i Phi^{xi_i} = 1 runs on the fixed probe design (first 64
    samples of seed 0) and the RMS residual decides.
    """
    if probe_points is None:
        probe_points = scenario.sample(64, 0, FULL, 1.0).points
    pts, _ = _rows(probe_points, scenario.ambient_dim)
    if pts.shape[0] < 8:
        raise ValueError("need at least 8 probe points")
    comps = scenario.raw_components(pts)
    if scenario.zeta_coeffs is not None:
        residual = float(np.max(np.abs(comps @ scenario.zeta_coeffs - 1.0)))
        return LeeTypeVerdict(True, residual, np.asarray(scenario.zeta_coeffs))
    target = np.ones(pts.shape[0])
    coeffs, *_ = np.linalg.lstsq(comps, target, rcond=None)
    rms = float(np.sqrt(np.mean((comps @ coeffs - target) ** 2)))
    return LeeTypeVerdict(rms <= search_tol, rms, coeffs)


def sample(scenario: Scenario, count: int, seed: int, strategy: Strategy = FULL,
           sigma: float = 1.0) -> SampleBatch:
    return scenario.sample(count, seed, strategy, sigma)


def deck_apply(scenario: Scenario, generator_index: int, points):
    return scenario.deck_apply(generator_index, points)


def moment_condition_residual(scenario: Scenario, point,
                              step: float | None = None) -> np.ndarray:
    """Per-basis max-coefficient residual of iota(xi_M) omega = d_theta Phi^xi."""
    h = default_step(point) if step is None else step
    w = scenario.omega_at(point)
    out = np.empty(scenario.basis_size)
    for i in range(scenario.basis_size):
        lhs = interior(scenario.infinitesimal(i, point), w)
        rhs = d_theta(scenario.moment_component_field(i), scenario.theta_field,
                      point, h)
        out[i] = (lhs - rhs).norm()
    return out


def infinitesimal_flow_residual(scenario: Scenario, point, dt: float = 1e-5) -> float:
    """Cross-check of the analytic infinitesimal action against the flow.

    Central difference of the one-parameter flow exp(-t xi) around t = 0,
    compared per basis element; returns the max deviation.
    """
    worst = 0.0
    for i in range(scenario.basis_size):
        plus = scenario.flow(i, dt, point)
        minus = scenario.flow(i, -dt, point)
        fd = (plus - minus) / (2.0 * dt)
        worst = max(worst, float(np.max(np.abs(fd - scenario.infinitesimal(i, point)))))
    return worst


def with_fault(scenario: Scenario, component_index: int, offset: float) -> Scenario:
    """Scenario with Phi^{xi_index} shifted by a constant (fault injection)."""
    if not 0 <= component_index < scenario.basis_size:
        raise ValueError("component index out of range")
    base = scenario.tilde_component_fn
    potential = scenario.presentation.potential

    def corrupted(points):
        comps = np.array(base(points), dtype=np.float64, copy=True)
        comps[:, component_index] += offset * np.exp(potential(points))
        return comps

    return replace(scenario, tilde_component_fn=corrupted,
                   metadata={**scenario.metadata,
                             "fault": {"component": component_index, "offset": offset}})


# ---------------------------------------------------------------------------
# shared chart helpers
# ---------------------------------------------------------------------------


def _standard_two_form(n: int) -> AltTensor:
    """sum dx_j ^ dy_j on R^{2n} in block layout."""
    dim = 2 * n
    coeffs = np.zeros(len(increasing_indices(dim, 2)))
    pos = {idx: k for k, idx in enumerate(increasing_indices(dim, 2))}
    for j in range(n):
        coeffs[pos[(j, n + j)]] = 1.0
    return AltTensor(dim, 2, coeffs)


def _to_complex(pts: np.ndarray, n: int) -> np.ndarray:
    return pts[..., :n] + 1j * pts[..., n:]

def _to_real(z: np.ndarray) -> np.ndarray:
    return np.concatenate([np.real(z), np.imag(z)], axis=-1)


def _ball_sampler(domain, dim):
    def sampler(count, seed, strategy, sigma):
        center = np.asarray(strategy.center, dtype=np.float64)
        if center.shape != (dim,):
            raise BadStrategy("ball center has the wrong dimension")
        radius = float(strategy.radius)
        if radius <= 0:
            raise BadStrategy("ball radius must be positive")
        pts = np.empty((count, dim))
        remaining = np.arange(count)
        wave = 0
        while remaining.size:
            u = rng.uniforms(seed, remaining, dim, base_slot=wave * dim) * 2.0 - 1.0
            cand = center + radius * u
            ok = (np.linalg.norm(u, axis=1) <= 1.0) & np.asarray(domain(cand), bool)
            pts[remaining[ok]] = cand[ok]
            remaining = remaining[~ok]
            wave += 1
            if wave > 512:
                raise BadStrategy("ball sampling kept rejecting; shrink the radius")
        return pts

    return sampler


# ---------------------------------------------------------------------------
# ellipsoid family (hopf_ellipsoid / cylinder_contact / mapping_torus)
# ---------------------------------------------------------------------------


def _unitary_centralizer_basis(n: int, zeta: np.ndarray):
    """Orthonormal real basis of the centralizer of i diag(zeta) in u(n).

    Diagonal elements i E_jj, then for each equal-zeta block the pairs
    (E_jk - E_kj)/sqrt2 and i(E_jk + E_kj)/sqrt2.
    """
    mats, labels = [], []
    for j in range(n):
        m = np.zeros((n, n), dtype=complex)
        m[j, j] = 1j
        mats.append(m)
        labels.append(f"i*E_{j}{j}")
    for j in range(n):
        for k in range(j + 1, n):
            if abs(zeta[j] - zeta[k]) > 1e-12:
                continue
            a = np.zeros((n, n), dtype=complex)
            a[j, k] = 1.0
            a[k, j] = -1.0
            mats.append(a / math.sqrt(2.0))
            labels.append(f"(E_{j}{k}-E_{k}{j})/sqrt2")
            s = np.zeros((n, n), dtype=complex)
            s[j, k] = 1j
            s[k, j] = 1j
            mats.append(s / math.sqrt(2.0))
            labels.append(f"i(E_{j}{k}+E_{k}{j})/sqrt2")
    return mats, labels


def _block_mask(n: int, zeta: np.ndarray) -> np.ndarray:
    mask = np.zeros((n, n))
    for j in range(n):
        for k in range(n):
            if abs(zeta[j] - zeta[k]) <= 1e-12:
                mask[j, k] = 1.0
    return mask


def _build_ellipsoid_family(name: str, params: dict) -> Scenario:
    n = int(params.get("n", 2))
    if n not in (2, 3, 4):
        raise BadParams("ellipsoid scenarios support n in {2, 3, 4}")
    zeta_vec = np.asarray(params.get("zeta", (1.0,) * n), dtype=np.float64)
    if zeta_vec.shape != (n,):
        raise BadParams("zeta must have n entries")
    if np.any(zeta_vec <= 0):
        raise BadParams("zeta must satisfy zeta_1 >= zeta_2 >= ... >= zeta_n > 0")
    subgroup = params.get("subgroup", "torus")
    if subgroup not in ("torus", "full"):
        raise BadParams("subgroup must be 'torus' or 'full'")
    if subgroup == "full" and np.any(np.diff(zeta_vec) > 1e-12):
        raise BadParams(
            "the unitary-centralizer subgroup needs zeta sorted descending "
            "(zeta_1 >= zeta_2 >= ... >= zeta_n > 0)"
        )
    deck_scale = float(params.get("deck_scale", math.sqrt(math.e)))
    if name in ("hopf_ellipsoid", "mapping_torus") and deck_scale <= 1.0:
        raise BadParams("deck_scale must exceed 1")

    dim = 2 * n
    weights = np.concatenate([zeta_vec, zeta_vec])
    omega_tilde_value = _standard_two_form(n)

    def domain(pts):
        return (pts * pts) @ weights > 0.0

    def potential(pts):
        return np.log(0.5 * (pts * pts) @ weights)

    def potential_gradient(pts):
        energy = 0.5 * (pts * pts) @ weights
        return pts * weights / energy[:, None]

    deck = ()
    rank = 0
    if name in ("hopf_ellipsoid", "mapping_torus"):
        c = deck_scale

        def deck_map(pts, _c=c):
            return _c * pts

        deck = (DeckGenerator(deck_map, 2.0 * math.log(c), c * np.eye(dim)),)
        rank = 1

    # moment components and infinitesimal actions
    if subgroup == "torus":
        group = torus(n)
        labels = tuple(f"i*E_{j}{j}" for j in range(n))

        def tilde_components(pts):
            return 0.5 * (pts[:, :n] ** 2 + pts[:, n:] ** 2)

        def make_inf(j):
            def inf(pts):
                out = np.zeros_like(pts)
                out[:, j] = pts[:, n + j]
                out[:, n + j] = -pts[:, j]
                return out

            return inf

        infinitesimals = tuple(make_inf(j) for j in range(n))
        basis_mats = [np.diag([1j if k == j else 0.0 for k in range(n)]) for j in range(n)]
        zeta_elem = LeeElement(group, zeta_vec)
        zeta_coeffs = zeta_vec.copy()

        def dual_stack_fn(pts, raw_comps, f):
            return raw_comps

        def reduce_stack_fn(stack):
            return np.asarray(stack, dtype=np.float64)

        def group_action_fn(angles, pts):
            z = _to_complex(pts, n) * np.exp(1j * np.asarray(angles))
            return _to_real(z)

    else:
        group = unitary_centralizer(n, zeta_vec)
        basis_mats, labels_list = _unitary_centralizer_basis(n, zeta_vec)
        labels = tuple(labels_list)
        mask = _block_mask(n, zeta_vec)
        stacked = np.stack(basis_mats)  # (k, n, n)

        def tilde_components(pts):
            z = _to_complex(pts, n)
            quad = np.einsum("mi,bij,mj->mb", z.conj(), stacked, z)
            return 0.5 * np.imag(quad)

        def make_inf(mat):
            def inf(pts):
                z = _to_complex(pts, n)
                return _to_real(-(z @ mat.T))

            return inf

        infinitesimals = tuple(make_inf(m) for m in basis_mats)
        zeta_elem = LeeElement(group, 1j * np.diag(zeta_vec))
        zeta_coeffs = np.zeros(len(basis_mats))
        zeta_coeffs[:n] = zeta_vec

        def dual_stack_fn(pts, raw_comps, f):
            z = _to_complex(pts, n)
            h = 0.5 * z[:, :, None] * z.conj()[:, None, :]
            return h * np.exp(-f)[:, None, None] * mask

        def reduce_stack_fn(stack):
            out = np.empty((stack.shape[0], group.chamber_dim))
            for i in range(stack.shape[0]):
                out[i] = chamber_project(group, DualVector(group, stack[i]))
            return out

        def group_action_fn(g, pts):
            z = _to_complex(pts, n)
            return _to_real(z @ np.asarray(g).T)

    def flow_fn(index, t, pts):
        g = expm(-t * basis_mats[index])
        z = _to_complex(pts, n)
        return _to_real(z @ g.T)

    def lee_analytic_fn(pts):
        out = np.empty_like(pts)
        out[:, :n] = zeta_vec * pts[:, n:]
        out[:, n:] = -zeta_vec * pts[:, :n]
        return out

    # samplers: direction Gaussians projected onto a leaf level
    def full_sampler(count, seed, strategy, sigma):
        idx = np.arange(count)
        z = rng.normals(seed, idx, dim)
        bad = (z * z) @ weights < 1e-12
        if np.any(bad):
            z[bad] = 0.0
            z[bad, 0] = 1.0
        lo, hi = strategy.band
        t = lo + (hi - lo) * rng.uniforms(seed, idx, 1, base_slot=dim)[:, 0]
        f = np.log(0.5 * (z * z) @ weights)
        return z * np.exp(0.5 * (t - f))[:, None]

    def leaf_sampler(count, seed, strategy, sigma):
        idx = np.arange(count)
        z = rng.normals(seed, idx, dim)
        bad = (z * z) @ weights < 1e-12
        if np.any(bad):
            z[bad] = 0.0
            z[bad, 0] = 1.0
        f = np.log(0.5 * (z * z) @ weights)
        return z * np.exp(0.5 * (strategy.level - f))[:, None]

    samplers = {
        "full": full_sampler,
        "leaf": leaf_sampler,
        "ball": _ball_sampler(domain, dim),
    }

    first_kind_direction = None
    first_kind_flow = None
    if name in ("cylinder_contact", "mapping_torus"):
        first_kind_direction = VectorFieldMap(dim, lambda p: 0.5 * np.asarray(p, float))

        def first_kind_flow(t, pts):
            return math.exp(0.5 * t) * pts

    # analytic local cones at the chamber vertices e_j / zeta_j (torus case)
    cone_datums = []
    if subgroup == "torus":
        for j in range(n):
            point = np.zeros(dim)
            point[j] = math.sqrt(2.0 / zeta_vec[j])  # leaf 0 representative
            apex = np.zeros(n)
            apex[j] = 1.0 / zeta_vec[j]
            rays = []
            for k in range(n):
                if k == j:
                    continue
                other = np.zeros(n)
                other[k] = 1.0 / zeta_vec[k]
                ray = other - apex
                rays.append(ray / np.linalg.norm(ray))
            cone_datums.append((point, apex, tuple(rays)))

    presentation = Presentation(dim, domain, potential, potential_gradient,
                                lambda p: omega_tilde_value, deck, rank)
    return Scenario(
        name=name,
        params={"n": n, "zeta": tuple(float(z) for z in zeta_vec),
                "subgroup": subgroup, "deck_scale": deck_scale},
        presentation=presentation,
        group=group,
        lie_basis=labels,
        zeta=zeta_elem,
        zeta_coeffs=zeta_coeffs,
        first_kind_direction=first_kind_direction,
        leaf_supported=True,
        bounded_body=True,
        metadata={"family": "ellipsoid", "n": n},
        tilde_component_fn=tilde_components,
        infinitesimal_fns=infinitesimals,
        dual_stack_fn=dual_stack_fn,
        reduce_stack_fn=reduce_stack_fn,
        group_action_fn=group_action_fn,
        flow_fn=flow_fn,
        samplers=samplers,
        first_kind_flow=first_kind_flow,
        lee_analytic_fn=lee_analytic_fn,
        local_cone_datums=tuple(cone_datums),
    )


# ---------------------------------------------------------------------------
# hyperboloid
# ---------------------------------------------------------------------------


def _build_hyperboloid(params: dict) -> Scenario:
    n = int(params.get("n", 3))
    if n != 3:
        raise BadParams("the hyperboloid scenario is implemented for n = 3")
    c = float(params.get("c", 1.0))
    if c <= 0:
        raise BadParams("the scale c must be positive (zeta = c * identity)")
    dim = 2 * n
    omega_tilde_value = _standard_two_form(n)
    group = so3()

    def split(pts):
        return pts[:, :n], pts[:, n:]

    def qform(pts):
        x, y = split(pts)
        return c * np.sum(x * y, axis=1)

    def domain(pts):
        return qform(pts) > 0.0

    def potential(pts):
        return np.log(qform(pts))

    def potential_gradient(pts):
        x, y = split(pts)
        q = qform(pts)
        return np.concatenate([c * y, c * x], axis=1) / q[:, None]

    def deck_map(pts):
        x, y = split(pts)
        return np.concatenate([math.exp(c) * x, math.exp(-c) * y], axis=1)

    deck_diff = np.diag([math.exp(c)] * n + [math.exp(-c)] * n)
    deck = (DeckGenerator(deck_map, 0.0, deck_diff),)

    labels = ("circle(zeta)", "J_1", "J_2", "J_3")

    def tilde_components(pts):
        x, y = split(pts)
        cross = np.cross(y, x)
        return np.concatenate([qform(pts)[:, None], cross], axis=1)

    def inf_circle(pts):
        x, y = split(pts)
        return np.concatenate([c * x, -c * y], axis=1)

    def make_inf_rot(axis):
        e = np.zeros(3)
        e[axis] = 1.0

        def inf(pts):
            x, y = split(pts)
            return -np.concatenate([np.cross(e, x), np.cross(e, y)], axis=1)

        return inf

    infinitesimals = (inf_circle,) + tuple(make_inf_rot(a) for a in range(3))

    def dual_stack_fn(pts, raw_comps, f):
        return raw_comps[:, 1:]

    def reduce_stack_fn(stack):
        return np.linalg.norm(stack, axis=1)[:, None]

    def group_action_fn(g, pts):
        x, y = split(pts)
        g = np.asarray(g, dtype=np.float64)
        return np.concatenate([x @ g.T, y @ g.T], axis=1)

    def _hat(e):
        return np.array([[0.0, -e[2], e[1]], [e[2], 0.0, -e[0]], [-e[1], e[0], 0.0]])

    def flow_fn(index, t, pts):
        x, y = split(pts)
        if index == 0:
            return np.concatenate([math.exp(c * t) * x, math.exp(-c * t) * y], axis=1)
        e = np.zeros(3)
        e[index - 1] = 1.0
        rot = expm(-t * _hat(e))
        return np.concatenate([x @ rot.T, y @ rot.T], axis=1)

    def lee_analytic_fn(pts):
        x, y = split(pts)
        return np.concatenate([c * x, -c * y], axis=1)

    def full_sampler(count, seed, strategy, sigma):
        idx = np.arange(count)
        x = rng.normals(seed, idx, n)
        tiny = np.sum(x * x, axis=1) < 1e-12
        if np.any(tiny):
            x[tiny] = 0.0
            x[tiny, 0] = 1.0
        qxx = c * np.sum(x * x, axis=1)
        y0 = x / qxx[:, None]
        w = sigma * rng.normals(seed, idx, n, base_slot=n)
        w -= x * (c * np.sum(x * w, axis=1) / qxx)[:, None]
        lo, hi = strategy.band
        t = lo + (hi - lo) * rng.uniforms(seed, idx, 1, base_slot=2 * n)[:, 0]
        y = (y0 + w) * np.exp(t)[:, None]
        return np.concatenate([x, y], axis=1)

    def leaf_sampler(count, seed, strategy, sigma):
        pinned = replace(strategy, kind="full", band=(strategy.level, strategy.level))
        return full_sampler(count, seed, pinned, sigma)

    samplers = {
        "full": full_sampler,
        "leaf": leaf_sampler,
        "ball": _ball_sampler(domain, dim),
    }

    presentation = Presentation(dim, domain, potential, potential_gradient,
                                lambda p: omega_tilde_value, deck, 0)
    return Scenario(
        name="hyperboloid",
        params={"n": n, "c": c},
        presentation=presentation,
        group=group,
        lie_basis=labels,
        zeta=None,
        zeta_coeffs=np.array([1.0, 0.0, 0.0, 0.0]),
        first_kind_direction=VectorFieldMap(dim, lambda p: 0.5 * np.asarray(p, float)),
        leaf_supported=True,
        bounded_body=False,
        metadata={"family": "hyperboloid", "n": n},
        tilde_component_fn=tilde_components,
        infinitesimal_fns=infinitesimals,
        dual_stack_fn=dual_stack_fn,
        reduce_stack_fn=reduce_stack_fn,
        group_action_fn=group_action_fn,
        flow_fn=flow_fn,
        samplers=samplers,
        first_kind_flow=lambda t, pts: math.exp(0.5 * t) * pts,
        lee_analytic_fn=lee_analytic_fn,
    )


# ---------------------------------------------------------------------------
# cotangent bundle of the two-torus (theta on one circle, action on the other)
# ---------------------------------------------------------------------------


def _build_cotangent_circle(params: dict) -> Scenario:
    c = float(params.get("c", 1.0))
    if c == 0.0:
        raise BadParams("the Lee coefficient c must be nonzero")
    dim = 4  # coordinates (phi, psi, p, s) on the universal cover of T*(T^2)
    pairs = {idx: k for k, idx in enumerate(increasing_indices(dim, 2))}

    def omega_tilde(point):
        phi, _psi, _p, s = np.asarray(point, dtype=np.float64)
        coeffs = np.zeros(len(pairs))
        coeffs[pairs[(0, 1)]] = c * s
        coeffs[pairs[(0, 2)]] = -1.0
        coeffs[pairs[(1, 3)]] = -1.0
        return AltTensor(dim, 2, coeffs * math.exp(c * phi))

    def domain(pts):
        return np.ones(pts.shape[0], dtype=bool)

    def potential(pts):
        return c * pts[:, 0]

    def potential_gradient(pts):
        g = np.zeros_like(pts)
        g[:, 0] = c
        return g

    def shift(axis, amount):
        def mapping(pts):
            out = np.array(pts, copy=True)
            out[:, axis] += amount
            return out

        return mapping

    deck = (
        DeckGenerator(shift(0, 2.0 * math.pi), 2.0 * math.pi * c, np.eye(dim)),
        DeckGenerator(shift(1, 2.0 * math.pi), 0.0, np.eye(dim)),
    )

    def tilde_components(pts):
        return (-pts[:, 3] * np.exp(c * pts[:, 0]))[:, None]

    def inf(pts):
        out = np.zeros_like(pts)
        out[:, 1] = 1.0
        return out

    def dual_stack_fn(pts, raw_comps, f):
        return raw_comps

    def reduce_stack_fn(stack):
        return np.asarray(stack, dtype=np.float64)

    def group_action_fn(angle, pts):
        out = np.array(pts, copy=True)
        out[:, 1] -= float(np.atleast_1d(angle)[0])
        return out

    def flow_fn(index, t, pts):
        out = np.array(pts, copy=True)
        out[:, 1] += t
        return out

    def lee_analytic_fn(pts):
        out = np.zeros_like(pts)
        out[:, 2] = c
        return out

    def full_sampler(count, seed, strategy, sigma):
        idx = np.arange(count)
        return sigma * rng.normals(seed, idx, dim)

    def leaf_sampler(count, seed, strategy, sigma):
        pts = full_sampler(count, seed, strategy, sigma)
        pts[:, 0] = strategy.level / c
        return pts

    samplers = {
        "full": full_sampler,
        "leaf": leaf_sampler,
        "ball": _ball_sampler(domain, dim),
    }

    presentation = Presentation(dim, domain, potential, potential_gradient,
                                omega_tilde, deck, 1)
    return Scenario(
        name="cotangent_circle",
        params={"c": c},
        presentation=presentation,
        group=torus(1),
        lie_basis=("d/dpsi",),
        zeta=None,
        zeta_coeffs=None,
        first_kind_direction=None,
        leaf_supported=True,
        bounded_body=False,
        metadata={"family": "cotangent"},
        tilde_component_fn=tilde_components,
        infinitesimal_fns=(inf,),
        dual_stack_fn=dual_stack_fn,
        reduce_stack_fn=reduce_stack_fn,
        group_action_fn=group_action_fn,
        flow_fn=flow_fn,
        samplers=samplers,
        lee_analytic_fn=lee_analytic_fn,
    )


# ---------------------------------------------------------------------------
# build + smoke test
# ---------------------------------------------------------------------------

SCENARIO_NAMES = (
    "hopf_ellipsoid",
    "cylinder_contact",
    "mapping_torus",
    "hyperboloid",
    "cotangent_circle",
)

CATALOG = (
    ("hopf_ellipsoid", {"n": 2, "zeta": (1.0, 2.0), "subgroup": "torus"}),
    ("hopf_ellipsoid", {"n": 2, "zeta": (1.0, 1.0), "subgroup": "full"}),
    ("hyperboloid", {"n": 3, "c": 1.0}),
    ("cylinder_contact", {"n": 2, "zeta": (1.0, 2.0), "subgroup": "torus"}),
    ("mapping_torus", {"n": 2, "zeta": (1.0, 2.0), "subgroup": "torus"}),
    ("cotangent_circle", {"c": 1.0}),
)


def build(name: str, params: dict | None = None, smoke: bool = True, **kw) -> Scenario:
    """Construct a catalog scenario and run its build-time smoke checks."""
    params = {**(params or {}), **kw}
    if name in ("hopf_ellipsoid", "cylinder_contact", "mapping_torus"):
        scenario = _build_ellipsoid_family(name, params)
    elif name == "hyperboloid":
        scenario = _build_hyperboloid(params)
    elif name == "cotangent_circle":
        scenario = _build_cotangent_circle(params)
    else:
        raise BadParams(f"unknown scenario {name!r}; known: {SCENARIO_NAMES}")
    if smoke:
        _run_smoke(scenario)
    return scenario


def catalog_scenarios() -> list:
    return [build(name, dict(params)) for name, params in CATALOG]


def _run_smoke(sc: Scenario, count: int = 64):
    """Build-time validation on a small sample; raises SmokeFail."""
    pts = sc.sample(count, 0, FULL, 1.0).points
    if not np.all(sc.domain(pts)):
        raise SmokeFail("sampler produced points outside the domain")
    f = sc.potential(pts)
    tilde = sc.tilde_components(pts)
    raw = sc.raw_components(pts)
    rel = np.max(np.abs(tilde - raw * np.exp(f)[:, None])) / (1.0 + np.max(np.abs(tilde)))
    if rel > 1e-10:
        raise SmokeFail("tilde components do not match exp(f) * raw components")

    # deck identities
    for gen in sc.presentation.deck_generators:
        image = gen.mapping(pts)
        df = sc.potential(image) - f - gen.chi
        if np.max(np.abs(df)) > 1e-10:
            worst = int(np.argmax(np.abs(df)))
            raise SmokeFail("deck potential shift violated", pts[worst])
        scale = math.exp(gen.chi)
        tilde_image = sc.tilde_components(image)
        rel = np.max(np.abs(tilde_image - scale * tilde)) / (1.0 + np.max(np.abs(tilde)))
        if rel > 1e-9:
            raise SmokeFail("deck scaling of the lifted moment violated")
        m = gen.differential
        for k in range(4):
            p = pts[k]
            lhs = m.T @ sc.presentation.omega_tilde(gen.mapping(p.reshape(1, -1))[0]).as_matrix() @ m
            rhs = scale * sc.presentation.omega_tilde(p).as_matrix()
            if np.max(np.abs(lhs - rhs)) > 1e-8 * (1.0 + np.max(np.abs(rhs))):
                raise SmokeFail("deck scaling of the symplectic form violated", p)

    # Lee hyperplane
    if sc.zeta_coeffs is not None:
        res = np.max(np.abs(raw @ sc.zeta_coeffs - 1.0))
        if res > 1e-9:
            raise SmokeFail(f"moment image left the Lee hyperplane (residual {res:.2e})")

    # pointwise finite-difference identities on a few points
    potential_field = FormField(
        sc.ambient_dim, 0,
        lambda q: AltTensor.scalar(sc.ambient_dim, sc.potential(q)),
        sc.domain,
    )
    for p in pts[:4]:
        h = 1e-4
        grad = sc.potential_gradient(p)
        fd = finite_d(potential_field, p, 1e-5)
        if np.max(np.abs(fd.coeffs - grad)) > 1e-8:
            raise SmokeFail("analytic potential gradient disagrees with finite differences", p)
        if d_theta(sc.omega_field, sc.theta_field, p, h).norm() > 1e-5:
            raise SmokeFail("structure equation d omega + theta ^ omega = 0 violated", p)
        res = moment_condition_residual(sc, p, h)
        if np.max(res) > 1e-5:
            raise SmokeFail(f"moment condition violated (residual {np.max(res):.2e})", p)
        if sc.lee_analytic_fn is not None:
            lee_err = np.max(np.abs(lee_field(sc, p) - sc.lee_analytic_fn(p.reshape(1, -1))[0]))
            if lee_err > 1e-6:
                raise SmokeFail("Lee field disagrees with its analytic formula", p)
