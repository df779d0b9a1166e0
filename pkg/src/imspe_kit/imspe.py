"""Integrated mean-squared prediction error of a kriging design.

The central object is the pair of bordered (n+1) x (n+1) matrices: ``L``
with a zero corner, unit border, and pairwise-correlation body, and ``R``
with a unit corner and design-domain-averaged correlation products in the
border and body.  The criterion is ``imspe = 1 - tr(solve(L) @ R)`` (process
variance normalized to 1).

Small closed-form specializations (n = 1 for every family, n = 2 for the
exponential family) are provided alongside the general solve path, plus the
affine domain-rescaling rule under which the criterion is invariant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import erf

from . import integrals
from .errors import NearSingularError, SolveError, ValidationError
from .kernels import Family, Kernel, check_point, corr_pair

#: condition-number ceiling beyond which the solve path refuses to answer
COND_LIMIT = 1e13


def trace_of_product_sym(a: np.ndarray, b: np.ndarray) -> float:
    """tr(A B) for symmetric A, B as the sum of elementwise products."""
    return float(np.sum(a * b))


def inverse_sym_3x3(m: np.ndarray) -> np.ndarray:
    """Adjugate inverse of a symmetric 3x3 matrix.

    Used as a cross-check against the general solve path on two-point
    designs; not a production path.
    """
    m = np.asarray(m, dtype=float)
    a, b, c = m[0, 0], m[0, 1], m[0, 2]
    d, e = m[1, 1], m[1, 2]
    f = m[2, 2]
    det = a * d * f - a * e * e - b * b * f + 2.0 * b * c * e - c * c * d
    if det == 0.0 or not math.isfinite(det):
        raise SolveError(f"3x3 determinant {det} is singular")
    adj = np.array(
        [
            [d * f - e * e, c * e - b * f, b * e - c * d],
            [c * e - b * f, a * f - c * c, b * c - a * e],
            [b * e - c * d, b * c - a * e, a * d - b * b],
        ]
    )
    return adj / det


@dataclass(frozen=True)
class ImspeMatrices:
    """Assembled bordered matrices, the criterion value, and conditioning."""

    L: np.ndarray
    R: np.ndarray
    imspe: float
    cond_estimate: float


def _as_design(design, d: int) -> tuple[tuple[float, ...], ...]:
    pts = [check_point(p, d) for p in np.atleast_2d(np.asarray(design, dtype=float))]
    if not pts:
        raise ValidationError("design must contain at least one point")
    return tuple(pts)


def build_matrices(kernel: Kernel, design, *, strict: bool = True) -> ImspeMatrices:
    """Assemble L and R for a design and compute the criterion.

    ``strict`` requires pairwise-distinct points (L invertibility); the
    cluster-variable analysis deliberately relaxes this elsewhere.
    """
    pts = _as_design(design, kernel.d)
    n = len(pts)
    if strict:
        for i in range(n):
            for j in range(i + 1, n):
                if pts[i] == pts[j]:
                    raise NearSingularError(
                        f"design points {i} and {j} coincide at {pts[i]}", pair=(i, j)
                    )
    big_l = np.zeros((n + 1, n + 1))
    big_l[0, 1:] = 1.0
    big_l[1:, 0] = 1.0
    for i in range(n):
        big_l[1 + i, 1 + i] = 1.0
        for j in range(i + 1, n):
            v = corr_pair(kernel, pts[i], pts[j])
            big_l[1 + i, 1 + j] = v
            big_l[1 + j, 1 + i] = v
    big_r = np.zeros((n + 1, n + 1))
    big_r[0, 0] = 1.0
    for i in range(n):
        bi = integrals.r_border(kernel, pts[i])
        big_r[0, 1 + i] = bi
        big_r[1 + i, 0] = bi
        for j in range(i, n):
            v = integrals.r_inner(kernel, pts[i], pts[j])
            big_r[1 + i, 1 + j] = v
            big_r[1 + j, 1 + i] = v
    cond = float(np.linalg.cond(big_l))
    if not math.isfinite(cond) or cond > COND_LIMIT:
        raise SolveError(
            f"bordered matrix condition estimate {cond:.3e} exceeds {COND_LIMIT:.0e}",
            cond_estimate=cond,
        )
    try:
        solved = np.linalg.solve(big_l, big_r)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - cond check fires first
        raise SolveError(f"linear solve failed: {exc}", cond_estimate=cond) from exc
    value = 1.0 - float(np.trace(solved))
    if not math.isfinite(value):
        raise SolveError("criterion evaluated to a non-finite value", cond_estimate=cond)
    return ImspeMatrices(L=big_l, R=big_r, imspe=value, cond_estimate=cond)


def imspe(kernel: Kernel, design) -> float:
    """Criterion value for a design (solve path)."""
    return build_matrices(kernel, design).imspe


def _fold_cosh(t: float, x: float) -> float:
    """e^{-t} * cosh(t x) for |x| <= 1, via decaying exponentials only."""
    return 0.5 * (math.exp(-t * (1.0 - x)) + math.exp(-t * (1.0 + x)))


def imspe_closed_n1(kernel: Kernel, theta: float, x1: float) -> float:
    """Closed form for a single point in one dimension.

    Equals ``2 * (1 - border(x1))`` for every family, where ``border`` is the
    single-anchor design-average integral.
    """
    if kernel.d != 1:
        raise ValidationError("closed n=1 form requires d = 1")
    x1 = float(x1)
    check_point((x1,), 1)
    fam = kernel.family
    if fam is Family.EXP_P1:
        return 2.0 * (1.0 - (1.0 - _fold_cosh(theta, x1)) / theta)
    if fam is Family.GAUSS_P2:
        g = math.sqrt(theta)
        return 2.0 * (
            1.0
            - math.sqrt(math.pi / (16.0 * theta))
            * (erf(g * (1.0 + x1)) + erf(g * (1.0 - x1)))
        )
    # both Matern forms share the border-integral structure
    return 2.0 * (1.0 - integrals.border_1d(fam, x1, theta))


def imspe_closed_n2_exp(theta: float, x1: float, x2: float) -> float:
    """Six-term closed form for two points, one dimension, exponential family.

    All cosh products are folded into pure decaying exponentials so the form
    is overflow-safe at large theta.
    """
    theta = float(theta)
    if theta <= 0.0 or not math.isfinite(theta):
        raise ValidationError(f"theta = {theta} must be positive and finite")
    x1, x2 = float(x1), float(x2)
    check_point((x1,), 1)
    check_point((x2,), 1)
    if x1 == x2:
        raise NearSingularError(
            "coincident pair: the two-point closed form has a removable domain "
            "boundary here; use the cluster-variable analysis instead",
            pair=(0, 1),
        )
    s = abs(x1 - x2)
    e_s = math.exp(-theta * s)
    one_minus = 1.0 - e_s
    a1 = (1.0 - _fold_cosh(theta, x1)) / theta
    a2 = (1.0 - _fold_cosh(theta, x2)) / theta
    b1 = (1.0 - _fold_cosh(2.0 * theta, x1)) / (4.0 * theta * one_minus)
    b2 = (1.0 - _fold_cosh(2.0 * theta, x2)) / (4.0 * theta * one_minus)
    cross = 0.5 * (
        math.exp(-theta * (2.0 - (x1 + x2))) + math.exp(-theta * (2.0 + x1 + x2))
    )
    c = (e_s - cross + theta * s * e_s) / (2.0 * theta * one_minus)
    return (3.0 + e_s) / 2.0 + c - a1 - a2 - b1 - b2


def imspe_n2(kernel: Kernel, theta: float, x1: float, x2: float) -> float:
    """Two-point, one-dimensional criterion: closed form where one exists,
    otherwise the 3x3 bordered solve."""
    if kernel.d != 1:
        raise ValidationError("two-point form requires d = 1")
    if kernel.family is Family.EXP_P1:
        return imspe_closed_n2_exp(theta, x1, x2)
    k = Kernel(kernel.family, (float(theta),))
    if float(x1) == float(x2):
        raise NearSingularError(
            "coincident pair: use the cluster-variable analysis", pair=(0, 1)
        )
    return build_matrices(k, [[x1], [x2]]).imspe


def domain_transform(
    theta: float, x: float, from_interval: tuple[float, float], to_interval: tuple[float, float]
) -> tuple[float, float]:
    """Rescale (theta, x) between design domains so the criterion is invariant.

    The hyperparameter scales with the length ratio and the coordinate maps
    affinely; the round trip is the identity.
    """
    a, b = (float(v) for v in from_interval)
    at, bt = (float(v) for v in to_interval)
    if b <= a or bt <= at:
        raise ValidationError("intervals must have positive length")
    x = float(x)
    if not math.isfinite(x) or x < a or x > b:
        raise ValidationError(f"coordinate {x} outside [{a}, {b}]")
    ratio = (b - a) / (bt - at)
    theta_new = ratio * float(theta)
    x_new = at + (x - a) / ratio
    return theta_new, x_new


def build_matrices_unit_exp(theta: Sequence[float], design) -> ImspeMatrices:
    """Exponential-family criterion on the unit cube [0, 1]^d.

    Companion to :func:`domain_transform`; the averaged-matrix elements come
    from the unit-domain integrals.
    """
    theta = tuple(float(t) for t in theta)
    d = len(theta)
    kernel = Kernel(Family.EXP_P1, theta)
    pts = [check_point(p, d, 0.0, 1.0) for p in np.atleast_2d(np.asarray(design, dtype=float))]
    n = len(pts)
    big_l = np.zeros((n + 1, n + 1))
    big_l[0, 1:] = 1.0
    big_l[1:, 0] = 1.0
    for i in range(n):
        big_l[1 + i, 1 + i] = 1.0
        for j in range(i + 1, n):
            v = 1.0
            for t, a, b in zip(theta, pts[i], pts[j]):
                v *= math.exp(-t * abs(a - b))
            big_l[1 + i, 1 + j] = v
            big_l[1 + j, 1 + i] = v
    big_r = np.zeros((n + 1, n + 1))
    big_r[0, 0] = 1.0
    for i in range(n):
        bi = integrals.j_border(theta, pts[i])
        big_r[0, 1 + i] = bi
        big_r[1 + i, 0] = bi
        for j in range(i, n):
            v = integrals.j_inner(theta, pts[i], pts[j])
            big_r[1 + i, 1 + j] = v
            big_r[1 + j, 1 + i] = v
    cond = float(np.linalg.cond(big_l))
    if not math.isfinite(cond) or cond > COND_LIMIT:
        raise SolveError(
            f"bordered matrix condition estimate {cond:.3e} exceeds {COND_LIMIT:.0e}",
            cond_estimate=cond,
        )
    value = 1.0 - float(np.trace(np.linalg.solve(big_l, big_r)))
    _ = kernel  # constructed for validation of theta only
    return ImspeMatrices(L=big_l, R=big_r, imspe=value, cond_estimate=cond)
