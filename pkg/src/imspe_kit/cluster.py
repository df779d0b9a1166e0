"""Cluster-variable analysis of two-point, one-dimensional designs.

A proximal pair (x1, x2) is reparameterized as a center x_t = (x1+x2)/2 and
a signed half-separation delta = x1 - x_t.  For the Gaussian family the
criterion, viewed as a function of delta, is even and real-analytic in
theta*delta^2, so a short Taylor expansion

    imspe ~= c0 + c2 * theta * delta^2 + O(theta^2 delta^4)

is available in closed form.  Three independent routes to (c0, c2) are
implemented: the hand-collected closed form, a symmetry-operator route built
from the series coefficients of the generic border element, and (in the test
suite) finite-difference extraction.  The always-negative c2 at x_t = 0 is
what rules out coincident-pair optima for this family.

The exponential family's pair correlation is not smooth at delta = 0, so no
series is offered there; use the direct two-point closed form instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import erf

from .errors import ValidationError
from .imspe import imspe_n2
from .kernels import Family, Kernel

_SQRT_PI = math.sqrt(math.pi)

#: below sqrt(theta)*|delta| of this size, the quadratic model is the evaluator
#: (the direct solve and operator form both lose accuracy to cancellation there)
SMALL_DELTA_SWITCH = 1e-4


@dataclass(frozen=True)
class ClusterCoords:
    """Pair center and signed half-separation of a two-point design."""

    x_t: float
    delta: float


@dataclass(frozen=True)
class ExpansionSeries:
    """Quadratic expansion of the criterion in theta*delta^2.

    The remainder is O(theta^2 delta^4); no odd or negative powers occur.
    """

    c0: float
    c2: float
    remainder_order: str = "theta^2 delta^4"


def to_cluster(x1: float, x2: float) -> ClusterCoords:
    """Map a point pair to (center, signed half-separation)."""
    x1, x2 = float(x1), float(x2)
    for v in (x1, x2):
        if not math.isfinite(v) or abs(v) > 1.0:
            raise ValidationError(f"coordinate {v} outside [-1, 1]")
    x_t = (x1 + x2) / 2.0
    return ClusterCoords(x_t=x_t, delta=x1 - x_t)


def from_cluster(c: ClusterCoords) -> tuple[float, float]:
    """Inverse of :func:`to_cluster`; exact round trip in floating point."""
    x1 = c.x_t + c.delta
    x2 = c.x_t - c.delta
    for v in (x1, x2):
        if not math.isfinite(v) or abs(v) > 1.0:
            raise ValidationError(f"coordinate {v} outside [-1, 1]")
    return x1, x2


def _check_args(theta: float, x_t: float) -> tuple[float, float]:
    theta = float(theta)
    if not math.isfinite(theta) or theta <= 0.0:
        raise ValidationError(f"theta = {theta} must be positive and finite")
    x_t = float(x_t)
    if not math.isfinite(x_t) or abs(x_t) > 1.0:
        raise ValidationError(f"center {x_t} outside [-1, 1]")
    return theta, x_t


# ---------------------------------------------------------------------------
# derivative ladder of the paired error function
# ---------------------------------------------------------------------------

def _erf_deriv(k: int, x: float) -> float:
    """k-th derivative of erf at x, for k = 0..4."""
    if k == 0:
        return erf(x)
    e = math.exp(-x * x)
    if k == 1:
        return 2.0 / _SQRT_PI * e
    if k == 2:
        return -4.0 / _SQRT_PI * x * e
    if k == 3:
        return -4.0 / _SQRT_PI * (1.0 - 2.0 * x * x) * e
    if k == 4:
        return (24.0 * x - 16.0 * x ** 3) / _SQRT_PI * e
    raise ValidationError(f"derivative order {k} not supported")


def erf_pair_coeffs(c: float, theta: float, x_t: float) -> tuple[float, ...]:
    """Taylor coefficients of the paired error function in powers of sqrt(c*theta)*delta.

    The expanded map is delta -> erf[g(1+x_t+delta)] + erf[g(1-x_t-delta)]
    with g = sqrt(c*theta); coefficient k is
    (1/k!) [erf^(k)(g(1+x_t)) + (-1)^k erf^(k)(g(1-x_t))], orders 0..4.
    """
    theta, x_t = _check_args(theta, x_t)
    g = math.sqrt(c * theta)
    up, um = g * (1.0 + x_t), g * (1.0 - x_t)
    out = []
    fact = 1.0
    for k in range(5):
        if k > 1:
            fact *= k
        sign = -1.0 if k % 2 else 1.0
        out.append((_erf_deriv(k, up) + sign * _erf_deriv(k, um)) / fact)
    return tuple(out)


# ---------------------------------------------------------------------------
# series coefficients of the generic border element
# ---------------------------------------------------------------------------

def _r0(theta: float, x_t: float) -> float:
    """delta^0 coefficient of the border element."""
    g = math.sqrt(theta)
    return math.sqrt(math.pi / (16.0 * theta)) * (
        erf(g * (1.0 + x_t)) + erf(g * (1.0 - x_t))
    )


def _r2(theta: float, x_t: float) -> float:
    """Coefficient of theta*delta^2 in the border element."""
    ap, am = 1.0 + x_t, 1.0 - x_t
    return -0.5 * (ap * math.exp(-theta * ap * ap) + am * math.exp(-theta * am * am))


def _r4(theta: float, x_t: float) -> float:
    """Coefficient of theta^2*delta^4 in the border element."""
    ap, am = 1.0 + x_t, 1.0 - x_t
    return 0.25 * (
        (ap - 2.0 * theta / 3.0 * ap ** 3) * math.exp(-theta * ap * ap)
        + (am - 2.0 * theta / 3.0 * am ** 3) * math.exp(-theta * am * am)
    )


def border_element(theta: float, x_t: float, delta: float) -> float:
    """The generic Gaussian border element R(x_t, delta, theta)."""
    g = math.sqrt(theta)
    return math.sqrt(math.pi / (16.0 * theta)) * (
        erf(g * (1.0 + x_t + delta)) + erf(g * (1.0 - x_t - delta))
    )


# ---------------------------------------------------------------------------
# the expansion, two closed-form routes
# ---------------------------------------------------------------------------

def expansion_gauss(x_t: float, theta: float) -> ExpansionSeries:
    """Hand-collected quadratic expansion for the Gaussian family."""
    theta, x_t = _check_args(theta, x_t)
    ap, am = 1.0 + x_t, 1.0 - x_t
    e2p = math.exp(-2.0 * theta * ap * ap)
    e2m = math.exp(-2.0 * theta * am * am)
    e1p = math.exp(-theta * ap * ap)
    e1m = math.exp(-theta * am * am)
    g1 = math.sqrt(theta)
    g2 = math.sqrt(2.0 * theta)
    erf1 = erf(g1 * ap) + erf(g1 * am)
    erf2 = erf(g2 * ap) + erf(g2 * am)
    c0 = (
        2.0
        + 0.25 * (ap * e2p + am * e2m)
        - math.sqrt(math.pi / (4.0 * theta)) * erf1
        - math.sqrt(math.pi / (128.0 * theta)) * erf2
    )
    c2 = (
        -2.0
        + (0.25 + theta / 3.0 * ap * ap) * ap * e2p
        + (0.25 + theta / 3.0 * am * am) * am * e2m
        + ap * e1p
        + am * e1m
        - math.sqrt(math.pi / (128.0 * theta)) * erf2
    )
    return ExpansionSeries(c0=c0, c2=c2)


def expansion_gauss_operator(x_t: float, theta: float) -> ExpansionSeries:
    """Same expansion assembled from the border element's series coefficients.

    The criterion's pole in 1/(theta*delta^2) cancels against the
    doubled-theta border terms, leaving
    c0 = 2 - 2 R0(t) - R0(2t)/2 - R2(2t)/2 and
    c2 = -2 - 2 R2(t) - R2(2t) - R4(2t) - R0(2t)/2.
    """
    theta, x_t = _check_args(theta, x_t)
    t2 = 2.0 * theta
    c0 = 2.0 - 2.0 * _r0(theta, x_t) - 0.5 * _r0(t2, x_t) - 0.5 * _r2(t2, x_t)
    c2 = (
        -2.0
        - 2.0 * _r2(theta, x_t)
        - _r2(t2, x_t)
        - _r4(t2, x_t)
        - 0.5 * _r0(t2, x_t)
    )
    return ExpansionSeries(c0=c0, c2=c2)


def st_term(theta: float) -> float:
    """The centered second-term bracket: the theta*delta^2 coefficient at x_t = 0.

    Its strict negativity over the swept theta range is what excludes
    coincident-pair optima for the Gaussian family.
    """
    return expansion_gauss(0.0, theta).c2


def imspe_quadratic(theta: float, x_t: float, delta: float) -> float:
    """Quadratic-model criterion value c0 + c2*theta*delta^2."""
    series = expansion_gauss(x_t, theta)
    delta = float(delta)
    if not math.isfinite(delta):
        raise ValidationError("delta must be finite")
    return series.c0 + series.c2 * float(theta) * delta * delta


def _erf_central2(u: float, h: float) -> float:
    """erf(u+h) + erf(u-h) - 2 erf(u), without small-h cancellation.

    For small steps the direct difference of three O(1) erf values loses the
    O(h^2) result to round-off, so an even-order derivative series is used
    there instead.
    """
    if abs(h) > 0.125:
        return erf(u + h) + erf(u - h) - 2.0 * erf(u)
    # erf^{(k)}(u) = (2/sqrt(pi)) q_k(u) e^{-u^2} with q_1 = 1 and the
    # recurrence q_{k+1} = q_k' - 2 u q_k; only even orders survive the
    # symmetric difference
    q = [1.0]  # polynomial coefficients of q_k, ascending powers
    e = 2.0 / _SQRT_PI * math.exp(-u * u)
    h2 = h * h
    total = 0.0
    fact = 1.0
    h_pow = 1.0
    for k in range(2, 13):
        dq = [i * c for i, c in enumerate(q)][1:] or [0.0]
        shifted = [0.0] + [-2.0 * c for c in q]
        q = [a + b for a, b in zip(dq + [0.0] * (len(shifted) - len(dq)), shifted)]
        fact *= k
        if k % 2 == 0:
            h_pow *= h2
            qval = 0.0
            for c in reversed(q):
                qval = qval * u + c
            total += 2.0 * h_pow / fact * qval * e
    return total


def imspe_operator_form(theta: float, x_t: float, delta: float) -> float:
    """Criterion via the bordered trace written in paired-reflection operators.

    Every term is a sign-flip (delta -> -delta), doubling (theta -> 2 theta),
    or zeroing (delta -> 0) of the single generic border element.  Exact (not
    a truncation), but undefined at delta = 0 where 1/(1 - V) poles.  The
    pole-adjacent terms are grouped so their O(delta^2) cancellation happens
    analytically, keeping full accuracy down to the quadratic-model switch.
    """
    theta, x_t = _check_args(theta, x_t)
    delta = float(delta)
    if delta == 0.0:
        raise ValidationError(
            "operator form is singular at delta = 0; use the quadratic model there"
        )
    if abs(x_t) + abs(delta) > 1.0:
        raise ValidationError("x_t +- delta leaves [-1, 1]")
    u2 = theta * delta * delta
    one_minus_v = -math.expm1(-4.0 * u2)
    w_minus_1 = math.expm1(-2.0 * u2)
    r_plus = border_element(theta, x_t, delta)
    r_minus = border_element(theta, x_t, -delta)
    rd_zero = border_element(2.0 * theta, x_t, 0.0)
    # R_D(delta) + R_D(-delta) - 2 R_D(0) as paired second central differences
    g = math.sqrt(2.0 * theta)
    pref = math.sqrt(math.pi / (32.0 * theta))
    rd_spread = pref * (
        _erf_central2(g * (1.0 + x_t), g * delta)
        + _erf_central2(g * (1.0 - x_t), g * delta)
    )
    return (
        2.0
        - one_minus_v / 2.0
        - (r_plus + r_minus)
        + (2.0 * rd_zero * w_minus_1 - rd_spread) / (2.0 * one_minus_v)
    )


def imspe_gauss_cluster(theta: float, x_t: float, delta: float) -> float:
    """Gaussian two-point criterion in cluster coordinates, valid at any delta.

    Dispatches to the quadratic model below the small-separation switchover
    (where the direct solve is hopelessly ill-conditioned) and to the direct
    two-point evaluation elsewhere.
    """
    theta, x_t = _check_args(theta, x_t)
    delta = float(delta)
    if math.sqrt(theta) * abs(delta) < SMALL_DELTA_SWITCH:
        return imspe_quadratic(theta, x_t, delta)
    kernel = Kernel(Family.GAUSS_P2, (theta,))
    return imspe_n2(kernel, theta, x_t + delta, x_t - delta)
