"""Twisted Cartan calculus by finite differences.

The twisted differential of a closed 1-form theta is d_theta = d + theta ^ .
and the twisted Lie derivative of a vector field X is
L_theta(X) = L(X) + theta(X).  Both are evaluated pointwise here, with the
ordinary pieces obtained from central differences (Lie derivatives through
the magic formula iota(X) d + d iota(X), one differentiation layer, error
O(step^2)).  check_cartan evaluates both sides of the full
graded-commutator identity table and returns named residuals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .numerics import AltTensor, finite_d, interior, wedge


def _everywhere(_point) -> bool:
    return True


@dataclass(frozen=True)
class FormField:
    """A differential form as a pointwise evaluator with a domain predicate."""

    ambient_dim: int
    rank: int
    evaluator: Callable
    domain: Callable = field(default=_everywhere)

    def __call__(self, point) -> AltTensor:
        value = self.evaluator(point)
        if value.rank != self.rank or value.ambient_dim != self.ambient_dim:
            raise ValueError("evaluator returned a tensor of the wrong shape")
        return value

    def contains(self, point) -> bool:
        return bool(self.domain(point))


@dataclass(frozen=True)
class VectorFieldMap:
    """A vector field as a pointwise evaluator."""

    ambient_dim: int
    evaluator: Callable

    def __call__(self, point) -> np.ndarray:
        return np.asarray(self.evaluator(point), dtype=np.float64)


def constant_field(ambient_dim: int, vector) -> VectorFieldMap:
    vec = np.asarray(vector, dtype=np.float64)
    return VectorFieldMap(ambient_dim, lambda _p: vec)


def function_field(ambient_dim: int, func, domain=_everywhere) -> FormField:
    return FormField(
        ambient_dim, 0,
        lambda p: AltTensor.scalar(ambient_dim, func(p)),
        domain,
    )


def interior_field(X: VectorFieldMap, alpha: FormField) -> FormField:
    """iota(X) alpha as a derived field (for differentiating contractions)."""
    return FormField(
        alpha.ambient_dim, alpha.rank - 1,
        lambda p: interior(X(p), alpha(p)),
        alpha.domain,
    )


def d_theta(alpha: FormField, theta: FormField, point, step: float) -> AltTensor:
    """Twisted differential d(alpha) + theta ^ alpha at a point."""
    return finite_d(alpha, point, step) + wedge(theta(point), alpha(point))


def d_theta_field(alpha: FormField, theta: FormField, step: float) -> FormField:
    return FormField(
        alpha.ambient_dim, alpha.rank + 1,
        lambda p: d_theta(alpha, theta, p, step),
        alpha.domain,
    )


def lie(X: VectorFieldMap, alpha: FormField, point, step: float) -> AltTensor:
    """Ordinary Lie derivative via iota(X) d alpha + d(iota(X) alpha)."""
    if alpha.rank == 0:
        return interior(X(point), finite_d(alpha, point, step))
    contracted = interior_field(X, alpha)
    return interior(X(point), finite_d(alpha, point, step)) + finite_d(
        contracted, point, step
    )


def lie_theta(X: VectorFieldMap, alpha: FormField, theta: FormField,
              point, step: float) -> AltTensor:
    """Twisted Lie derivative L(X) alpha + theta(X) alpha at a point."""
    theta_x = float(theta(point).coeffs @ X(point))
    return lie(X, alpha, point, step) + theta_x * alpha(point)


def lie_theta_field(X: VectorFieldMap, alpha: FormField, theta: FormField,
                    step: float) -> FormField:
    return FormField(
        alpha.ambient_dim, alpha.rank,
        lambda p: lie_theta(X, alpha, theta, p, step),
        alpha.domain,
    )


def bracket(X: VectorFieldMap, Y: VectorFieldMap, point, step: float) -> np.ndarray:
    """[X, Y]^i = sum_j (X^j d_j Y^i - Y^j d_j X^i), central differences."""
    dim = X.ambient_dim
    point = np.asarray(point, dtype=np.float64)
    xv = X(point)
    yv = Y(point)
    out = np.zeros(dim)
    for j in range(dim):
        shift = np.zeros(dim)
        shift[j] = step
        dy = (Y(point + shift) - Y(point - shift)) / (2.0 * step)
        dx = (X(point + shift) - X(point - shift)) / (2.0 * step)
        out += xv[j] * dy - yv[j] * dx
    return out


def bracket_field(X: VectorFieldMap, Y: VectorFieldMap, step: float) -> VectorFieldMap:
    return VectorFieldMap(X.ambient_dim, lambda p: bracket(X, Y, p, step))


_DEFAULT_PROBE_COEFFS = (0.7, -0.4, 0.25, 0.55, -0.15, 0.35, 0.2, -0.6)


def _default_probe_function(dim: int, domain) -> FormField:
    w = np.asarray(_DEFAULT_PROBE_COEFFS[:dim])
    return function_field(dim, lambda p: float(np.dot(w, p)) + 0.3, domain)


def _memo_form(field: FormField) -> FormField:
    # nested stencils revisit points; cache per-point values for one check
    cache: dict = {}
    inner = field.evaluator

    def evaluator(p):
        key = np.asarray(p).tobytes()
        hit = cache.get(key)
        if hit is None:
            hit = cache[key] = inner(p)
        return hit

    return FormField(field.ambient_dim, field.rank, evaluator, field.domain)


def _memo_vector(vf: VectorFieldMap) -> VectorFieldMap:
    cache: dict = {}
    inner = vf.evaluator

    def evaluator(p):
        key = np.asarray(p).tobytes()
        hit = cache.get(key)
        if hit is None:
            hit = cache[key] = np.asarray(inner(p), dtype=np.float64)
        return hit

    return VectorFieldMap(vf.ambient_dim, evaluator)


def check_cartan(omega: FormField, theta: FormField, X: VectorFieldMap,
                 Y: VectorFieldMap, point, step: float,
                 probe_function: FormField | None = None) -> dict:
    """Residuals of the twisted Cartan identity table at a point.

    The eight checks: iota-iota anticommutation, [L(X), L(Y)] = L([X, Y]),
    [L(X), d] = 0, [L(X), iota(Y)] = iota([X, Y]), d o d = 0 on a 1-form
    probe, [iota(X), d] = L(X), d omega = 0, and d(d f) = 0 for a probe
    function (all operators twisted).  Residuals are max coefficient norms
    normalized by 1 + the largest input coefficient magnitude.
    """
    point = np.asarray(point, dtype=np.float64)
    if probe_function is None:
        probe_function = _default_probe_function(omega.ambient_dim, omega.domain)
    omega = _memo_form(omega)
    theta = _memo_form(theta)
    X = _memo_vector(X)
    Y = _memo_vector(Y)

    w = omega(point)
    th = theta(point)
    xv = X(point)
    yv = Y(point)
    scale = 1.0 + max(
        w.norm(), th.norm(),
        float(np.max(np.abs(xv))), float(np.max(np.abs(yv))),
    )

    alpha1 = _memo_form(interior_field(X, omega))  # rank-1 probe from omega
    d_alpha1 = _memo_form(d_theta_field(alpha1, theta, step))
    lie_y_omega = lie_theta_field(Y, omega, theta, step)
    lie_x_omega = lie_theta_field(X, omega, theta, step)
    xy = bracket_field(X, Y, step)
    lie_x_omega_at_p = lie_x_omega(point)
    dtw = d_theta(omega, theta, point, step)

    res = {}

    # [iota(X), iota(Y)] = 0 (graded anticommutator, exact algebra)
    res["iota_iota"] = (
        interior(xv, interior(yv, w)) + interior(yv, interior(xv, w))
    ).norm() / scale

    # [L(X), L(Y)] omega = L([X, Y]) omega
    lhs = (
        lie_theta(X, lie_y_omega, theta, point, step)
        - lie_theta(Y, lie_x_omega, theta, point, step)
    )
    rhs = lie_theta(xy, omega, theta, point, step)
    res["lie_lie"] = (lhs - rhs).norm() / scale

    # [L(X), d] alpha1 = 0
    lhs = lie_theta(X, d_alpha1, theta, point, step)
    rhs = d_theta(lie_theta_field(X, alpha1, theta, step), theta, point, step)
    res["lie_d"] = (lhs - rhs).norm() / scale

    # [L(X), iota(Y)] omega = iota([X, Y]) omega
    lhs = lie_theta(X, interior_field(Y, omega), theta, point, step)
    rhs = interior(yv, lie_x_omega_at_p) + interior(xy(point), w)
    res["lie_iota"] = (lhs - rhs).norm() / scale

    # d o d alpha1 = 0
    res["d_d"] = d_theta(d_alpha1, theta, point, step).norm() / scale

    # [iota(X), d] omega = L(X) omega
    lhs = interior(xv, dtw) + d_alpha1(point)
    res["iota_d_lie"] = (lhs - lie_x_omega_at_p).norm() / scale

    # structure equation: d omega + theta ^ omega = 0
    res["d_theta_omega"] = dtw.norm() / scale

    # d o d f = 0 for a probe function
    df = d_theta_field(probe_function, theta, step)
    res["d_theta_d_theta_f"] = d_theta(df, theta, point, step).norm() / scale

    return res
