"""Compact group descriptors, trace-form pairing, chamber projection,
coadjoint action, and the rescaling map onto the Lee hyperplane.

Supported kinds and conventions (fixed here once, every moment evaluator
conforms to them):

* ``torus(n)``: duals are real n-vectors, the pairing is the dot product,
  the chamber is all of the dual (projection is the identity), coadjoint
  action trivial.
* ``unitary_centralizer(n, zeta)``: the group is the centralizer of
  zeta = i diag(zeta_1..zeta_n) in U(n), with zeta_1 >= ... >= zeta_n > 0.
  Duals mu are stored as Hermitian matrices H = -i mu, so the trace-form
  pairing <mu, xi> = -tr(mu xi) becomes tr(H Xi) for xi = i Xi, and the
  chamber projection is eigenvalue sorting (per equal-zeta block, which is
  plain descending sort when all zeta entries coincide).  Coadjoint action
  is H -> g H g*.
* ``so3``: duals are real 3-vectors (the matrix hat(v) under the pairing
  <A, B> = -tr(AB)/2, which makes hat an isometry), the chamber is the
  half-line via the Euclidean norm, coadjoint action is rotation.

Group elements are supplied as explicit matrices; there is no group-word
machinery.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .numerics import eig_desc


class SpecMismatch(Exception):
    pass


class NotInGroup(Exception):
    pass


class OutsideHalfspace(Exception):
    """The pairing with the Lee element is not positive: the ray misses
    the Lee hyperplane."""


TORUS = "torus"
UNITARY = "unitary_centralizer"
SO3 = "so3"


@dataclass(frozen=True)
class GroupSpec:
    kind: str
    n: int
    zeta_vector: tuple | None = None  # descending positive, unitary kind only

    def __post_init__(self):
        if self.kind not in (TORUS, UNITARY, SO3):
            raise ValueError(f"unknown group kind {self.kind!r}")
        if self.kind == SO3 and self.n != 3:
            raise ValueError("so3 kind is three-dimensional")
        if self.kind == UNITARY:
            if self.zeta_vector is None or len(self.zeta_vector) != self.n:
                raise ValueError("unitary centralizer needs an n-entry zeta vector")
            z = np.asarray(self.zeta_vector, dtype=float)
            if np.any(z <= 0) or np.any(np.diff(z) > 1e-12):
                raise ValueError("zeta entries must be positive and sorted descending")

    @property
    def dual_dim(self) -> int:
        return {TORUS: self.n, UNITARY: self.n * self.n, SO3: 3}[self.kind]

    @property
    def chamber_dim(self) -> int:
        return {TORUS: self.n, UNITARY: self.n, SO3: 1}[self.kind]

    @cached_property
    def blocks(self) -> tuple:
        """Index ranges of equal-zeta blocks (unitary kind)."""
        if self.kind != UNITARY:
            return ()
        z = np.asarray(self.zeta_vector, dtype=float)
        out = []
        start = 0
        for i in range(1, self.n + 1):
            if i == self.n or abs(z[i] - z[start]) > 1e-12:
                out.append((start, i))
                start = i
        return tuple(out)


def torus(n: int) -> GroupSpec:
    return GroupSpec(TORUS, n)


def unitary_centralizer(n: int, zeta) -> GroupSpec:
    return GroupSpec(UNITARY, n, tuple(float(z) for z in zeta))


def so3() -> GroupSpec:
    return GroupSpec(SO3, 3)


@dataclass(frozen=True, eq=False)
class DualVector:
    """A coadjoint-dual value: real vector for torus/so3, Hermitian matrix
    H = -i mu for unitary kinds."""

    spec: GroupSpec
    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data)
        if self.spec.kind == UNITARY:
            if data.shape != (self.spec.n, self.spec.n):
                raise SpecMismatch("unitary dual must be an n x n matrix")
            if np.max(np.abs(data - data.conj().T)) > 1e-12 * (1.0 + np.max(np.abs(data))):
                raise SpecMismatch("unitary dual matrix must be Hermitian")
            object.__setattr__(self, "data", np.asarray(data, dtype=np.complex128))
        else:
            if data.shape != (self.spec.dual_dim,):
                raise SpecMismatch("dual vector has the wrong length")
            object.__setattr__(self, "data", np.asarray(data, dtype=np.float64))

    def flatten(self) -> np.ndarray:
        """Real coordinates: diagonal then (re, im) upper-triangle pairs for
        unitary kinds, the plain vector otherwise."""
        if self.spec.kind != UNITARY:
            return np.asarray(self.data, dtype=np.float64).copy()
        h = self.data
        n = self.spec.n
        parts = [np.real(np.diag(h))]
        for i in range(n):
            for j in range(i + 1, n):
                parts.append([h[i, j].real, h[i, j].imag])
        return np.concatenate([np.atleast_1d(np.asarray(p, float)) for p in parts])

    def scaled(self, factor: float) -> "DualVector":
        return DualVector(self.spec, self.data * float(factor))


@dataclass(frozen=True, eq=False)
class LeeElement:
    """A distinguished central Lie-algebra element; nonzero by definition.

    Stored as a real vector for torus kinds, an anti-Hermitian matrix
    (i diag(zeta)) for unitary kinds, an axis vector for so3.
    """

    spec: GroupSpec
    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data)
        if np.max(np.abs(data)) == 0:
            raise ValueError("a Lee element must be nonzero")
        if self.spec.kind == UNITARY:
            if data.shape != (self.spec.n, self.spec.n):
                raise SpecMismatch("unitary Lee element must be a matrix")
            if np.max(np.abs(data + data.conj().T)) > 1e-12 * (1.0 + np.max(np.abs(data))):
                raise SpecMismatch("unitary Lee element must be anti-Hermitian")
            object.__setattr__(self, "data", np.asarray(data, dtype=np.complex128))
        else:
            object.__setattr__(self, "data", np.asarray(data, dtype=np.float64))


def pair(mu: DualVector, xi) -> float:
    """Invariant pairing <mu, xi>.

    Dot product for torus/so3; for unitary kinds -tr(mu xi) with mu = i H,
    evaluated as tr(H Xi) where xi = i Xi.  ``xi`` may be a LeeElement or a
    raw array of the matching shape.
    """
    data = xi.data if isinstance(xi, LeeElement) else np.asarray(xi)
    if isinstance(xi, LeeElement) and xi.spec != mu.spec:
        raise SpecMismatch("Lee element belongs to a different group")
    if mu.spec.kind == UNITARY:
        if data.shape != mu.data.shape:
            raise SpecMismatch("algebra element has the wrong shape")
        return float(np.real(-np.trace((1j * mu.data) @ data)))
    if data.shape != mu.data.shape:
        raise SpecMismatch("algebra element has the wrong shape")
    return float(np.dot(mu.data, data))


def chamber_project(spec: GroupSpec, mu: DualVector) -> np.ndarray:
    """Project a dual value to chamber coordinates.

    Torus duals are unchanged; unitary duals give descending eigenvalues per
    equal-zeta block; so3 duals give the Euclidean norm.
    """
    if mu.spec != spec:
        raise SpecMismatch("dual vector belongs to a different group")
    if spec.kind == TORUS:
        return np.asarray(mu.data, dtype=float).copy()
    if spec.kind == SO3:
        return np.array([float(np.linalg.norm(mu.data))])
    out = np.empty(spec.n)
    for start, stop in spec.blocks:
        out[start:stop] = eig_desc(mu.data[start:stop, start:stop])
    return out


def coadjoint(spec: GroupSpec, g, mu: DualVector) -> DualVector:
    """Coadjoint action: H -> g H g* for matrix kinds, identity for tori."""
    if mu.spec != spec:
        raise SpecMismatch("dual vector belongs to a different group")
    if spec.kind == TORUS:
        return mu
    g = np.asarray(g)
    n = 3 if spec.kind == SO3 else spec.n
    if g.shape != (n, n):
        raise NotInGroup("group element has the wrong shape")
    err = np.max(np.abs(g @ g.conj().T - np.eye(n)))
    if err > 1e-10:
        raise NotInGroup(f"not unitary/orthogonal within 1e-10 (error {err:.2e})")
    if spec.kind == SO3:
        if abs(np.linalg.det(np.real(g)) - 1.0) > 1e-10:
            raise NotInGroup("so3 element must have determinant 1")
        return DualVector(spec, np.real(g) @ mu.data)
    return DualVector(spec, g @ mu.data @ g.conj().T)


def rescale(mu: DualVector, zeta: LeeElement) -> DualVector:
    """Projective rescaling v -> v / <v, zeta> onto the Lee hyperplane.

    Defined on the open halfspace <v, zeta> > 0; raises OutsideHalfspace
    otherwise (the ray through v misses the hyperplane).
    """
    c = pair(mu, zeta)
    if c <= 1e-14:
        raise OutsideHalfspace(f"pairing {c!r} is not positive")
    return mu.scaled(1.0 / c)


def random_group_element(spec: GroupSpec, seed: int, index: int) -> np.ndarray:
    """Deterministic pseudo-random element (QR of counter-keyed Gaussians).

    For unitary centralizers the element is block diagonal per equal-zeta
    block, i.e. a genuine element of the centralizer subgroup.
    """
    from . import rng

    if spec.kind == TORUS:
        angles = rng.uniforms(seed, [index], spec.n)[0] * 2.0 * np.pi
        return angles  # torus elements act through scenario-level rotations
    if spec.kind == SO3:
        raw = rng.normals(seed, [index], 9)[0].reshape(3, 3)
        q, r = np.linalg.qr(raw)
        signs = np.sign(np.diag(r))
        signs[signs == 0] = 1.0
        q = q * signs
        if np.linalg.det(q) < 0:
            q = q[:, [1, 0, 2]]
        return q
    n = spec.n
    out = np.zeros((n, n), dtype=np.complex128)
    offset = 0
    for start, stop in spec.blocks:
        k = stop - start
        vals = rng.normals(seed, [index], 2 * k * k, base_slot=offset)[0]
        offset += 2 * k * k
        raw = vals[: k * k].reshape(k, k) + 1j * vals[k * k :].reshape(k, k)
        q, r = np.linalg.qr(raw)
        phases = np.diag(r).copy()
        phases[np.abs(phases) == 0] = 1.0
        q = q @ np.diag(phases / np.abs(phases))
        out[start:stop, start:stop] = q
    return out
