"""Low-dimensional numerical kernels.

Antisymmetric tensor algebra on coordinate charts, finite-difference
exterior derivatives, a cyclic-Jacobi Hermitian eigensolver, convex hulls
after affine-rank reduction (cap 3), and continued-fraction rational
reconstruction.

All operations are pure functions of their inputs; values are immutable
and freely shareable across threads.  Sizes are desk scale (ambient
dimension <= 8) and degenerate inputs are handled by explicit rank
reduction, never by perturbation, so identical inputs always give
identical outputs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np


class NumericsError(Exception):
    pass


class SingularForm(NumericsError):
    """2-form too close to degenerate for a skew solve."""


class NotHermitian(NumericsError):
    pass


class DomainExit(NumericsError):
    """A finite-difference stencil point left the field's domain."""

    def __init__(self, point):
        super().__init__(f"stencil point outside domain: {np.asarray(point)}")
        self.point = np.asarray(point, dtype=float)


class RankOverflow(NumericsError):
    """Wedge product would exceed the ambient dimension."""


class RankTooHigh(NumericsError):
    """Affine rank above the supported hull dimension (3)."""


class EmptyInput(NumericsError):
    pass


# ---------------------------------------------------------------------------
# multi-index tables (cached per dimension/rank)
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def increasing_indices(dim: int, rank: int) -> tuple:
    return tuple(itertools.combinations(range(dim), rank))


@lru_cache(maxsize=None)
def _positions(dim: int, rank: int) -> dict:
    return {idx: pos for pos, idx in enumerate(increasing_indices(dim, rank))}


def _merge_sign(left: tuple, right: tuple) -> int:
    # parity of the shuffle (left, right) -> sorted(left + right)
    inversions = sum(1 for a in left for b in right if a > b)
    return -1 if inversions % 2 else 1


@lru_cache(maxsize=None)
def _wedge_table(dim: int, p: int, q: int):
    out_pos, a_pos, b_pos, signs = [], [], [], []
    posp = _positions(dim, p)
    posq = _positions(dim, q)
    for opos, full in enumerate(increasing_indices(dim, p + q)):
        full_set = set(full)
        for left in itertools.combinations(full, p):
            right = tuple(sorted(full_set - set(left)))
            out_pos.append(opos)
            a_pos.append(posp[left])
            b_pos.append(posq[right])
            signs.append(_merge_sign(left, right))
    return (
        np.asarray(out_pos, dtype=np.intp),
        np.asarray(a_pos, dtype=np.intp),
        np.asarray(b_pos, dtype=np.intp),
        np.asarray(signs, dtype=np.float64),
    )


@lru_cache(maxsize=None)
def _interior_table(dim: int, rank: int):
    # (iota(v) a)_J = sum_i v_i * sign * a_{sort(i, J)}
    out_pos, dirs, in_pos, signs = [], [], [], []
    pos_in = _positions(dim, rank)
    for opos, rest in enumerate(increasing_indices(dim, rank - 1)):
        rest_set = set(rest)
        for i in range(dim):
            if i in rest_set:
                continue
            full = tuple(sorted((i,) + rest))
            below = sum(1 for j in rest if j < i)
            out_pos.append(opos)
            dirs.append(i)
            in_pos.append(pos_in[full])
            signs.append(-1.0 if below % 2 else 1.0)
    return (
        np.asarray(out_pos, dtype=np.intp),
        np.asarray(dirs, dtype=np.intp),
        np.asarray(in_pos, dtype=np.intp),
        np.asarray(signs, dtype=np.float64),
    )


@lru_cache(maxsize=None)
def _d_table(dim: int, rank: int):
    # (d a)_I = sum_j (-1)^j  d_{I_j} a_{I minus I_j}
    out_pos, dirs, in_pos, signs = [], [], [], []
    pos_in = _positions(dim, rank)
    for opos, full in enumerate(increasing_indices(dim, rank + 1)):
        for j, i in enumerate(full):
            rest = full[:j] + full[j + 1 :]
            out_pos.append(opos)
            dirs.append(i)
            in_pos.append(pos_in[rest])
            signs.append(-1.0 if j % 2 else 1.0)
    return (
        np.asarray(out_pos, dtype=np.intp),
        np.asarray(dirs, dtype=np.intp),
        np.asarray(in_pos, dtype=np.intp),
        np.asarray(signs, dtype=np.float64),
    )


# ---------------------------------------------------------------------------
# AltTensor
# ---------------------------------------------------------------------------


class AltTensor:
    """Value of a differential k-form at a point.

    Coefficients are stored on strictly increasing multi-indices in
    lexicographic order and expanded by sign on access.  Rank 0 stores a
    single scalar.
    """

    __slots__ = ("ambient_dim", "rank", "coeffs")

    def __init__(self, ambient_dim: int, rank: int, coeffs):
        if not 0 <= rank <= ambient_dim:
            raise ValueError(f"rank {rank} out of range for dimension {ambient_dim}")
        coeffs = np.asarray(coeffs, dtype=np.float64).reshape(-1)
        expected = math.comb(ambient_dim, rank)
        if coeffs.size != expected:
            raise ValueError(f"expected {expected} coefficients, got {coeffs.size}")
        self.ambient_dim = ambient_dim
        self.rank = rank
        self.coeffs = coeffs

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, ambient_dim: int, rank: int) -> "AltTensor":
        return cls(ambient_dim, rank, np.zeros(math.comb(ambient_dim, rank)))

    @classmethod
    def scalar(cls, ambient_dim: int, value: float) -> "AltTensor":
        return cls(ambient_dim, 0, np.array([float(value)]))

    @classmethod
    def covector(cls, ambient_dim: int, components) -> "AltTensor":
        return cls(ambient_dim, 1, components)

    @classmethod
    def dx(cls, ambient_dim: int, direction: int) -> "AltTensor":
        c = np.zeros(ambient_dim)
        c[direction] = 1.0
        return cls(ambient_dim, 1, c)

    @classmethod
    def from_matrix(cls, matrix) -> "AltTensor":
        """2-form from an antisymmetric coefficient matrix M[i, j] = a(e_i, e_j)."""
        matrix = np.asarray(matrix, dtype=np.float64)
        dim = matrix.shape[0]
        coeffs = np.array([matrix[i, j] for i, j in increasing_indices(dim, 2)])
        return cls(dim, 2, coeffs)

    # -- access --------------------------------------------------------------

    def coefficient(self, index: tuple) -> float:
        """Coefficient on an arbitrary multi-index, expanded by sign."""
        if len(index) != self.rank:
            raise ValueError("index length must equal rank")
        if len(set(index)) != len(index):
            return 0.0
        order = tuple(sorted(index))
        inversions = sum(
            1 for a, b in itertools.combinations(index, 2) if a > b
        )
        sign = -1.0 if inversions % 2 else 1.0
        return sign * self.coeffs[_positions(self.ambient_dim, self.rank)[order]]

    def as_matrix(self) -> np.ndarray:
        """Antisymmetric matrix of a 2-form."""
        if self.rank != 2:
            raise ValueError("as_matrix is defined for rank-2 tensors")
        m = np.zeros((self.ambient_dim, self.ambient_dim))
        for pos, (i, j) in enumerate(increasing_indices(self.ambient_dim, 2)):
            m[i, j] = self.coeffs[pos]
            m[j, i] = -self.coeffs[pos]
        return m

    def evaluate(self, vectors) -> float:
        """Value on a list of rank-many vectors (alternating multilinear)."""
        if self.rank == 0:
            return float(self.coeffs[0])
        mat = np.asarray(vectors, dtype=np.float64)
        if mat.shape != (self.rank, self.ambient_dim):
            raise ValueError("need rank-many vectors of ambient dimension")
        total = 0.0
        for pos, idx in enumerate(increasing_indices(self.ambient_dim, self.rank)):
            c = self.coeffs[pos]
            if c != 0.0:
                total += c * np.linalg.det(mat[:, idx])
        return float(total)

    def norm(self) -> float:
        return float(np.max(np.abs(self.coeffs))) if self.coeffs.size else 0.0

    # -- arithmetic ----------------------------------------------------------

    def _like(self, coeffs) -> "AltTensor":
        return AltTensor(self.ambient_dim, self.rank, coeffs)

    def __add__(self, other: "AltTensor") -> "AltTensor":
        self._check_compatible(other)
        return self._like(self.coeffs + other.coeffs)

    def __sub__(self, other: "AltTensor") -> "AltTensor":
        self._check_compatible(other)
        return self._like(self.coeffs - other.coeffs)

    def __neg__(self) -> "AltTensor":
        return self._like(-self.coeffs)

    def __mul__(self, scalar: float) -> "AltTensor":
        return self._like(self.coeffs * float(scalar))

    __rmul__ = __mul__

    def _check_compatible(self, other: "AltTensor"):
        if self.ambient_dim != other.ambient_dim or self.rank != other.rank:
            raise ValueError("incompatible tensors")

    def __repr__(self):
        return f"AltTensor(dim={self.ambient_dim}, rank={self.rank}, coeffs={self.coeffs})"


def wedge(a: AltTensor, b: AltTensor) -> AltTensor:
    """Exterior product with the shuffle (determinant) normalization."""
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("mismatched ambient dimensions")
    dim = a.ambient_dim
    if a.rank + b.rank > dim:
        raise RankOverflow(f"rank {a.rank}+{b.rank} exceeds dimension {dim}")
    if a.rank == 0:
        return b * float(a.coeffs[0])
    if b.rank == 0:
        return a * float(b.coeffs[0])
    out_pos, a_pos, b_pos, signs = _wedge_table(dim, a.rank, b.rank)
    vals = signs * a.coeffs[a_pos] * b.coeffs[b_pos]
    size = math.comb(dim, a.rank + b.rank)
    return AltTensor(dim, a.rank + b.rank, np.bincount(out_pos, weights=vals, minlength=size))


def interior(vector, a: AltTensor) -> AltTensor:
    """Contraction (iota(v) a)(w_1..w_{k-1}) = a(v, w_1, .., w_{k-1})."""
    if a.rank < 1:
        raise ValueError("interior product needs rank >= 1")
    v = np.asarray(vector, dtype=np.float64)
    out_pos, dirs, in_pos, signs = _interior_table(a.ambient_dim, a.rank)
    vals = signs * v[dirs] * a.coeffs[in_pos]
    size = math.comb(a.ambient_dim, a.rank - 1)
    return AltTensor(a.ambient_dim, a.rank - 1, np.bincount(out_pos, weights=vals, minlength=size))


def default_step(point) -> float:
    """Central-difference step h = 1e-4 * max(1, |point|)."""
    return 1e-4 * max(1.0, float(np.linalg.norm(point)))


def finite_d(field, point, step: float) -> AltTensor:
    """Numerical exterior derivative of a form field at a point.

    ``field`` must expose ``ambient_dim``, ``rank`` (<= 2), a pointwise
    ``__call__`` returning an AltTensor, and optionally ``contains`` for its
    domain.  Central differences, error O(step^2) for smooth fields.
    Raises DomainExit when a stencil point leaves the domain.
    """
    dim = field.ambient_dim
    rank = field.rank
    if rank > 2:
        raise ValueError("finite_d supports input rank <= 2")
    point = np.asarray(point, dtype=np.float64)
    contains = getattr(field, "contains", None)
    plus = np.empty((dim, math.comb(dim, rank)))
    minus = np.empty_like(plus)
    for i in range(dim):
        shift = np.zeros(dim)
        shift[i] = step
        for sgn, store in ((1.0, plus), (-1.0, minus)):
            q = point + sgn * shift
            if contains is not None and not contains(q):
                raise DomainExit(q)
            store[i] = field(q).coeffs
    derivs = (plus - minus) / (2.0 * step)  # derivs[i, c] = d_i alpha_c
    out_pos, dirs, in_pos, signs = _d_table(dim, rank)
    vals = signs * derivs[dirs, in_pos]
    size = math.comb(dim, rank + 1)
    return AltTensor(dim, rank + 1, np.bincount(out_pos, weights=vals, minlength=size))


# ---------------------------------------------------------------------------
# skew solves and form rank
# ---------------------------------------------------------------------------


def solve_skew(omega: AltTensor, theta: AltTensor):
    """Solve omega(A, .) = theta for the vector A.

    Raises SingularForm when the smallest singular value of the coefficient
    matrix is below 1e-12 times the largest (route degenerate forms through
    rank_of_form instead).
    """
    if omega.rank != 2 or theta.rank != 1:
        raise ValueError("solve_skew needs a 2-form and a 1-form")
    m = omega.as_matrix()
    s = np.linalg.svd(m, compute_uv=False)
    if s[0] == 0.0 or s[-1] < 1e-12 * s[0]:
        raise SingularForm(f"singular 2-form (condition {s[0]}/{s[-1]})")
    # omega(A, e_j) = sum_i A_i m[i, j]  ->  m.T A = theta
    return np.linalg.solve(m.T, theta.coeffs)


@dataclass(frozen=True, eq=False)
class FormRank:
    rank: int
    kernel: np.ndarray  # (dim, dim - rank) orthonormal kernel basis
    odd_rank_warning: bool


def rank_of_form(omega, tol: float = 1e-8) -> FormRank:
    """Numerical rank and kernel of a (possibly degenerate) 2-form.

    Accepts an AltTensor of rank 2 or a raw antisymmetric matrix.  Rank is
    the number of singular values above tol times the largest one.
    """
    m = omega.as_matrix() if isinstance(omega, AltTensor) else np.asarray(omega, float)
    dim = m.shape[0]
    if not np.allclose(m, -m.T, atol=1e-10 * (1.0 + np.max(np.abs(m)))):
        raise ValueError("matrix is not antisymmetric")
    u, s, vt = np.linalg.svd(m)
    if s.size == 0 or s[0] == 0.0:
        return FormRank(0, np.eye(dim), False)
    rank = int(np.sum(s > tol * s[0]))
    kernel = vt[rank:].T
    return FormRank(rank, kernel, bool(rank % 2))


# ---------------------------------------------------------------------------
# Hermitian eigenproblems (cyclic Jacobi, n <= 4)
# ---------------------------------------------------------------------------

_JACOBI_SWEEPS = 50


def hermitian_eig(H, hermitian_tol: float = 1e-12):
    """Eigen-decomposition of a small Hermitian matrix by cyclic Jacobi.

    Returns (eigenvalues descending, eigenvector columns).  Ties in the
    eigenvalue sort are broken by descending first significant eigenvector
    component, and eigenvector phases are canonicalized, so the output is
    deterministic.
    """
    H = np.asarray(H, dtype=np.complex128)
    n = H.shape[0]
    if H.shape != (n, n):
        raise ValueError("square matrix required")
    scale = float(np.max(np.abs(H))) if H.size else 0.0
    if np.max(np.abs(H - H.conj().T)) > hermitian_tol * (1.0 + scale):
        raise NotHermitian("matrix is not Hermitian within tolerance")
    A = 0.5 * (H + H.conj().T)
    V = np.eye(n, dtype=np.complex128)
    thresh = 1e-13 * np.linalg.norm(A)
    for _ in range(_JACOBI_SWEEPS):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off = max(off, abs(A[p, q]))
        if off <= thresh:
            break
        for p in range(n):
            for q in range(p + 1, n):
                z = A[p, q]
                r = abs(z)
                if r <= thresh:
                    continue
                phase = z / r
                tau = (A[q, q].real - A[p, p].real) / (2.0 * r)
                sgn = 1.0 if tau >= 0.0 else -1.0
                t = sgn / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                rot = np.eye(n, dtype=np.complex128)
                rot[p, p] = c
                rot[q, q] = c
                rot[p, q] = s * phase
                rot[q, p] = -s * np.conj(phase)
                A = rot.conj().T @ A @ rot
                V = V @ rot
    w = np.real(np.diag(A))
    # canonical phases: first significant component positive real
    keys = np.empty(n)
    for j in range(n):
        col = V[:, j]
        idx = int(np.argmax(np.abs(col) > 1e-12))
        ref = col[idx]
        if abs(ref) > 0:
            V[:, j] = col * (np.conj(ref) / abs(ref))
        keys[j] = V[idx, j].real
    order = sorted(range(n), key=lambda j: (-w[j], -keys[j]))
    return w[order], V[:, order]


def eig_desc(H) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, sorted descending."""
    w, _ = hermitian_eig(H)
    return w


# ---------------------------------------------------------------------------
# convex hulls (affine rank <= 3)
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Polytope:
    """Convex body: vertices plus facet inequalities <n, x> <= offset.

    ``basis`` spans the affine hull (orthonormal columns), ``complement``
    its orthogonal complement; facets live inside the affine hull and are
    lifted back to ambient coordinates.
    """

    ambient_dim: int
    affine_rank: int
    vertices: np.ndarray          # (nv, N); rank-2 vertices in CCW loop order
    facet_normals: np.ndarray     # (nf, N) unit vectors
    facet_offsets: np.ndarray     # (nf,)
    base_point: np.ndarray        # (N,)
    basis: np.ndarray             # (N, r)
    complement: np.ndarray        # (N, N - r)
    unbounded_suspected: bool = False
    _reduced_vertices: np.ndarray | None = None   # (nv, r)
    _reduced_normals: np.ndarray | None = None    # (nf, r)
    _reduced_offsets: np.ndarray | None = None    # (nf,)
    _triangles: tuple | None = None               # rank-3 facet triangles

    def with_flag(self, unbounded: bool) -> "Polytope":
        return Polytope(
            self.ambient_dim, self.affine_rank, self.vertices,
            self.facet_normals, self.facet_offsets, self.base_point,
            self.basis, self.complement, unbounded,
            self._reduced_vertices, self._reduced_normals,
            self._reduced_offsets, self._triangles,
        )

    # -- geometry ------------------------------------------------------------

    def _split(self, x):
        d = np.asarray(x, dtype=np.float64) - self.base_point
        y = self.basis.T @ d if self.affine_rank else np.zeros(0)
        off = d - (self.basis @ y if self.affine_rank else 0.0)
        return y, float(np.linalg.norm(off))

    def violation(self, x) -> float:
        """Signed infeasibility: 0 inside, distance-like positive outside."""
        y, off = self._split(x)
        worst = off
        if self._reduced_normals is not None and len(self._reduced_normals):
            excess = self._reduced_normals @ y - self._reduced_offsets
            worst = max(worst, float(np.max(excess)))
        return max(worst, 0.0)

    def contains(self, x, tol: float = 1e-9) -> bool:
        return self.violation(x) <= tol

    def distance(self, x) -> float:
        """Exact Euclidean distance from a point to the body."""
        y, off = self._split(x)
        r = self.affine_rank
        if r == 0:
            inplane = 0.0
        elif r == 1:
            u = float(y[0])
            lo = float(np.min(self._reduced_vertices[:, 0]))
            hi = float(np.max(self._reduced_vertices[:, 0]))
            inplane = max(lo - u, u - hi, 0.0)
        elif r == 2:
            inplane = _polygon_distance(self._reduced_vertices, y)
        else:
            inplane = _polyhedron_distance(
                self._reduced_vertices, self._reduced_normals,
                self._reduced_offsets, self._triangles, y,
            )
        return math.hypot(off, inplane)

    def diameter(self) -> float:
        v = self.vertices
        if len(v) < 2:
            return 0.0
        diffs = v[:, None, :] - v[None, :, :]
        return float(np.sqrt(np.max(np.sum(diffs * diffs, axis=-1))))

    def to_dict(self) -> dict:
        return {
            "ambient_dim": int(self.ambient_dim),
            "affine_rank": int(self.affine_rank),
            "vertices": self.vertices.tolist(),
            "facets": [
                {"normal": n.tolist(), "offset": float(o)}
                for n, o in zip(self.facet_normals, self.facet_offsets)
            ],
            "base_point": self.base_point.tolist(),
            "hull_normals": self.complement.T.tolist(),
            "unbounded_suspected": bool(self.unbounded_suspected),
        }


def _polygon_distance(verts2, y) -> float:
    """Distance from y to a CCW convex polygon given by its vertex loop."""
    nv = len(verts2)
    if nv == 1:
        return float(np.linalg.norm(y - verts2[0]))
    inside = True
    best = math.inf
    for i in range(nv):
        a = verts2[i]
        b = verts2[(i + 1) % nv]
        e = b - a
        cross = e[0] * (y[1] - a[1]) - e[1] * (y[0] - a[0])
        if cross < 0:
            inside = False
        best = min(best, _segment_distance(a, b, y))
    return 0.0 if inside else best


def _segment_distance(a, b, y) -> float:
    e = b - a
    denom = float(e @ e)
    t = 0.0 if denom == 0.0 else float(np.clip((y - a) @ e / denom, 0.0, 1.0))
    return float(np.linalg.norm(a + t * e - y))


def _triangle_distance(a, b, c, p) -> float:
    """Point-triangle distance in 3-D (project, then edge fallback)."""
    n = np.cross(b - a, c - a)
    nn = float(n @ n)
    if nn < 1e-300:
        return min(_segment_distance(a, b, p), _segment_distance(b, c, p),
                   _segment_distance(a, c, p))
    h = float((p - a) @ n) / nn
    q = p - h * n
    # barycentric sign tests against each edge
    for u, v in ((a, b), (b, c), (c, a)):
        edge_n = np.cross(v - u, n)
        if float((q - u) @ edge_n) > 0:
            return min(_segment_distance(a, b, p), _segment_distance(b, c, p),
                       _segment_distance(a, c, p))
    return abs(h) * math.sqrt(nn)


def _polyhedron_distance(verts3, normals, offsets, triangles, y) -> float:
    if len(normals) and np.all(normals @ y - offsets <= 1e-12):
        return 0.0
    best = math.inf
    for i, j, k in triangles:
        best = min(best, _triangle_distance(verts3[i], verts3[j], verts3[k], y))
    return best


def _monotone_chain(pts2, prune_tol: float):
    """Indices of convex-hull vertices of 2-D points, CCW, strict turns.

    Near-collinear chain points (within prune_tol of the closing edge) are
    dropped so that reported vertices are genuinely extreme.
    """
    order = np.lexsort((pts2[:, 1], pts2[:, 0]))

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    def build(idx_iter):
        chain = []
        for i in idx_iter:
            p = pts2[i]
            while len(chain) >= 2:
                o, a = pts2[chain[-2]], pts2[chain[-1]]
                area = cross(o, a, p)
                edge = float(np.linalg.norm(p - o))
                if area <= prune_tol * max(edge, 1e-300):
                    chain.pop()
                else:
                    break
            if chain and np.array_equal(pts2[chain[-1]], p):
                continue
            chain.append(i)
        return chain

    lower = build(order)
    upper = build(order[::-1])
    hull = lower[:-1] + upper[:-1]
    if not hull:
        hull = [int(order[0])]
    return hull


def hull(points, tol: float = 1e-7) -> Polytope:
    """Convex hull after affine-rank reduction.

    Affine rank is detected from singular values of the centered points
    (threshold tol * largest singular value, callers may override tol).
    Rank 0 gives a point, 1 a segment, 2 a planar hull by monotone chain,
    3 an incremental hull; rank above 3 raises RankTooHigh.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts.reshape(1, -1)
    if pts.size == 0:
        raise EmptyInput("hull of no points")
    m, dim = pts.shape
    base = pts.mean(axis=0)
    centered = pts - base
    _, svals, vt = np.linalg.svd(centered, full_matrices=True)
    spread = float(svals[0]) if svals.size else 0.0
    rank = int(np.sum(svals > tol * spread)) if spread > 0 else 0
    if rank > 3:
        raise RankTooHigh(f"affine rank {rank} exceeds the hull cap of 3")
    basis = vt[:rank].T
    complement = vt[rank:].T
    reduced = centered @ basis

    if rank == 0:
        return Polytope(dim, 0, pts[:1].copy(), np.zeros((0, dim)), np.zeros(0),
                        base, basis, complement,
                        _reduced_vertices=np.zeros((1, 0)),
                        _reduced_normals=np.zeros((0, 0)),
                        _reduced_offsets=np.zeros(0))

    if rank == 1:
        u = reduced[:, 0]
        lo, hi = int(np.argmin(u)), int(np.argmax(u))
        vert_idx = [lo, hi]
        rnormals = np.array([[1.0], [-1.0]])
        roffsets = np.array([float(u[hi]), float(-u[lo])])
        triangles = None
    elif rank == 2:
        prune = 1e-9 * max(spread, 1.0)
        vert_idx = _monotone_chain(reduced, prune)
        loop = reduced[vert_idx]
        nv = len(loop)
        rnormals, roffsets = [], []
        for i in range(nv):
            a, b = loop[i], loop[(i + 1) % nv]
            e = b - a
            ln = float(np.linalg.norm(e))
            if ln == 0.0:
                continue
            n = np.array([e[1], -e[0]]) / ln
            rnormals.append(n)
            roffsets.append(float(n @ a))
        rnormals = np.asarray(rnormals)
        roffsets = np.asarray(roffsets)
        triangles = None
    else:
        from scipy.spatial import ConvexHull as _QHull

        qh = _QHull(reduced)
        vert_idx = list(qh.vertices)
        remap = {v: i for i, v in enumerate(vert_idx)}
        triangles = tuple(
            tuple(remap[v] for v in simplex) for simplex in qh.simplices
        )
        eqs = qh.equations  # n . x + c <= 0
        rnormals = eqs[:, :3].copy()
        roffsets = -eqs[:, 3].copy()
        norms = np.linalg.norm(rnormals, axis=1)
        rnormals /= norms[:, None]
        roffsets /= norms

    vertices = pts[vert_idx].copy()
    rverts = reduced[vert_idx]
    ambient_normals = rnormals @ basis.T if len(rnormals) else np.zeros((0, dim))
    ambient_offsets = (
        roffsets + ambient_normals @ base if len(rnormals) else np.zeros(0)
    )
    return Polytope(dim, rank, vertices, ambient_normals, ambient_offsets,
                    base, basis, complement,
                    _reduced_vertices=rverts,
                    _reduced_normals=np.asarray(rnormals, dtype=float),
                    _reduced_offsets=np.asarray(roffsets, dtype=float),
                    _triangles=triangles)


def hausdorff_distance(p: Polytope, q: Polytope) -> float:
    """Hausdorff distance between convex bodies via their vertex sets."""
    d = 0.0
    for v in p.vertices:
        d = max(d, q.distance(v))
    for v in q.vertices:
        d = max(d, p.distance(v))
    return d


# ---------------------------------------------------------------------------
# rational reconstruction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RationalApprox:
    numerator: int
    denominator: int
    residual: float

    @property
    def value(self) -> float:
        return self.numerator / self.denominator


def rational_reconstruct(x: float, max_den: int):
    """First continued-fraction convergent p/q with q <= max_den and
    |x - p/q| <= 1e-8 / max_den; None when no convergent qualifies.
    """
    if max_den < 1:
        raise ValueError("max_den must be >= 1")
    x = float(x)
    if not math.isfinite(x):
        return None
    bound = 1e-8 / max_den
    a0 = math.floor(x)
    p_prev, q_prev = 1, 0
    p, q = int(a0), 1
    frac = x - a0
    for _ in range(64):
        if q > max_den:
            return None
        residual = abs(x - p / q)
        if residual <= bound:
            return RationalApprox(p, q, residual)
        if frac < 1e-18:
            return None
        recip = 1.0 / frac
        digit = math.floor(recip)
        frac = recip - digit
        p, p_prev = int(digit) * p + p_prev, p
        q, q_prev = int(digit) * q + q_prev, q
    return None
