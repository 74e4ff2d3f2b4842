"""Al-Salam-Chihara polynomials and their Motzkin-model specialization.

The polynomial family ``Q_n(x; a, b | q)`` on [-1, 1] is defined by

    2 x Q_n = Q_{n+1} + (a+b) q^n Q_n + (1 - q^n)(1 - a b q^{n-1}) Q_{n-1},

with ``Q_{-1} = 0``, ``Q_0 = 1`` and parameters ``a, b`` either both real or
a complex-conjugate pair.  The Motzkin specialization uses conjugate
parameters built from ``(q, sigma)`` and renormalized polynomials ``p_n``
supported on an interval ``[A, B]``; their values ``pi_n = p_n(B)`` at the
right endpoint drive the boundary chains.

The recurrences below run over the real coefficient pair
``(a+b, ab)``, so all public outputs of the Motzkin model are real; complex
arithmetic only enters the coefficient arrays of the convolution form of
``Q_n(1)`` and carries an imaginary-residue guard.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError
from .numerics import (
    DEFAULT_QUADRATURE,
    DEFAULT_TRUNCATION,
    QuadraturePolicy,
    TruncationPolicy,
    panel_rule,
)
from .qspecial import q_number, qpoch_infinite, qpoch_log_abs

__all__ = [
    "AscParams",
    "QModelParams",
    "SupportInterval",
    "asc_eval",
    "asc_eval_scaled",
    "asc_at_one",
    "asc_coeff_ratio_array",
    "asc_density",
    "density_times_sine",
    "nu_integrate",
    "s_value",
    "s_values",
    "pi_value",
    "pi_values",
    "pi_tilde_value",
    "motzkin_poly_eval",
    "motzkin_poly_table",
    "asc_endpoint_limit_fixed_q",
    "asc_endpoint_limit_q_to_1",
]

RECURRENCE_CAP = 100_000
_IMAG_GUARD = 1e-9


@dataclass(frozen=True)
class AscParams:
    """Parameter triple (a, b, q); a, b real or complex conjugates, |ab| < 1."""

    a: complex
    b: complex
    q: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.q < 1.0):
            raise ValueError(f"q must lie in [0, 1), got {self.q}")
        a, b = complex(self.a), complex(self.b)
        both_real = abs(a.imag) <= 1e-14 * (1 + abs(a)) and abs(b.imag) <= 1e-14 * (1 + abs(b))
        conjugate = abs(a - b.conjugate()) <= 1e-12 * (1 + abs(a))
        if not (both_real or conjugate):
            raise ValueError("a, b must be both real or complex conjugates")
        if abs(a * b) >= 1.0:
            raise ValueError(f"|ab| must be < 1, got {abs(a * b)}")

    @property
    def sum_ab(self) -> float:
        return (complex(self.a) + complex(self.b)).real

    @property
    def prod_ab(self) -> float:
        return (complex(self.a) * complex(self.b)).real


@dataclass(frozen=True)
class QModelParams:
    """Parameters of the q-weighted Motzkin model."""

    q: float
    sigma: float
    rho0: float = 0.0
    rho1: float = 0.0

    def __post_init__(self) -> None:
        if not (0.0 <= self.q < 1.0):
            raise ValueError(f"q must lie in [0, 1), got {self.q}")
        if not (0.0 < self.sigma <= 1.0):
            raise ValueError(f"sigma must lie in (0, 1], got {self.sigma}")
        for name, rho in (("rho0", self.rho0), ("rho1", self.rho1)):
            if not (0.0 <= rho < 1.0):
                raise ValueError(f"{name} must lie in [0, 1), got {rho}")

    @property
    def asc_a(self) -> complex:
        return -self.q * complex(self.sigma, math.sqrt(max(0.0, 1.0 - self.sigma**2)))

    @property
    def asc_b(self) -> complex:
        return self.asc_a.conjugate()

    def asc_params(self) -> AscParams:
        return AscParams(self.asc_a, self.asc_b, self.q)

    def support(self) -> "SupportInterval":
        return SupportInterval(
            A=-2.0 * (1.0 - self.sigma) / (1.0 - self.q),
            B=2.0 * (1.0 + self.sigma) / (1.0 - self.q),
        )


@dataclass(frozen=True)
class SupportInterval:
    """Orthogonality interval [A, B] of the Motzkin-model polynomials."""

    A: float
    B: float

    def __post_init__(self) -> None:
        if not self.B > self.A:
            raise ValueError(f"need B > A, got [{self.A}, {self.B}]")


def _check_order(n: int) -> None:
    if n < 0:
        raise ValueError(f"polynomial order must be nonnegative, got {n}")
    if n > RECURRENCE_CAP:
        raise OverflowError(f"recurrence order {n} exceeds cap {RECURRENCE_CAP}")


def asc_eval(n: int, x: float, p: AscParams) -> float:
    """Q_n(x; a, b | q) by forward recurrence."""
    _check_order(n)
    s1, s2, q = p.sum_ab, p.prod_ab, p.q
    prev, cur = 0.0, 1.0
    qn = 1.0  # q^k
    qn1 = 1.0 / q if q > 0 else 0.0  # q^(k-1); unused factor at k=0 since (1-q^0)=0
    for _ in range(n):
        prev, cur = cur, (2.0 * x - s1 * qn) * cur - (1.0 - qn) * (1.0 - s2 * qn1) * prev
        qn1 = qn
        qn *= q
    if not math.isfinite(cur):
        raise OverflowError(f"Q_{n}({x}) overflowed double precision")
    return cur


def asc_eval_scaled(n: int, x: float, p: AscParams) -> tuple[float, float]:
    """(sign, log|Q_n(x)|) by a rescaled forward recurrence.

    Stays usable where Q_n itself leaves the double-precision range (the
    q -> 1 endpoint scaling needs orders in the thousands with huge values).
    """
    _check_order(n)
    if n == 0:
        return 1.0, 0.0
    s1, s2, q = p.sum_ab, p.prod_ab, p.q
    prev, cur = 0.0, 1.0
    log_scale = 0.0
    qn = 1.0
    qn1 = 1.0 / q if q > 0 else 0.0
    for _ in range(n):
        prev, cur = cur, (2.0 * x - s1 * qn) * cur - (1.0 - qn) * (1.0 - s2 * qn1) * prev
        qn1 = qn
        qn *= q
        acur = abs(cur)
        if acur > 1e150:
            prev /= acur
            cur /= acur
            log_scale += math.log(acur)
    if cur == 0.0:
        return 0.0, -math.inf
    return math.copysign(1.0, cur), math.log(abs(cur)) + log_scale


def asc_coeff_ratio_array(c: complex, q: float, nmax: int) -> np.ndarray:
    """Array of (c; q)_k / (q; q)_k for k = 0..nmax."""
    ks = np.arange(nmax, dtype=float)
    qk = np.power(q, ks)  # q^0 .. q^(nmax-1)
    num = np.cumprod(1.0 - c * qk.astype(complex))
    den = np.cumprod(1.0 - q * qk)
    out = np.empty(nmax + 1, dtype=complex)
    out[0] = 1.0
    out[1:] = num / den
    return out


def asc_at_one(n: int, p: AscParams) -> float:
    """Q_n(1; a, b | q) / (q; q)_n as the convolution sum
    sum_k (a;q)_k (b;q)_{n-k} / ((q;q)_k (q;q)_{n-k})."""
    _check_order(n)
    A = asc_coeff_ratio_array(complex(p.a), p.q, n)
    B = asc_coeff_ratio_array(complex(p.b), p.q, n)
    val = complex(np.dot(A, B[::-1]))
    if abs(val.imag) > _IMAG_GUARD * max(1.0, abs(val.real)):
        raise ValueError(f"imaginary residue {val.imag} in Q_{n}(1) convolution")
    return val.real


def asc_density(x: float, p: AscParams, policy: TruncationPolicy = DEFAULT_TRUNCATION) -> float:
    """Orthogonality density g(x) of the Al-Salam-Chihara family on (-1, 1).

    Requires |a| < 1 and |b| < 1.
    """
    if abs(complex(p.a)) >= 1.0 or abs(complex(p.b)) >= 1.0:
        raise ValueError("density requires |a| < 1 and |b| < 1")
    if not -1.0 < x < 1.0:
        raise ValueError(f"density is supported on (-1, 1), got x={x}")
    q = p.q
    theta = math.acos(x)
    e2 = cmath.exp(2j * theta)
    e1 = cmath.exp(1j * theta)
    num = qpoch_infinite(q, q, policy) * qpoch_infinite(p.prod_ab, q, policy) \
        * abs(qpoch_infinite(e2, q, policy)) ** 2
    den = abs(qpoch_infinite(complex(p.a) * e1, q, policy)
              * qpoch_infinite(complex(p.b) * e1, q, policy)) ** 2
    return num / (2.0 * math.pi * math.sqrt(1.0 - x * x) * den)


def _qpoch_inf_grid(avec: np.ndarray, q: float, policy: TruncationPolicy) -> np.ndarray:
    """(a; q)_inf for an array of complex arguments with common base q."""
    if q == 0.0:
        return 1.0 - avec
    amax = float(np.max(np.abs(avec)))
    if amax == 0.0:
        return np.ones_like(avec)
    bound = policy.rel_tol * (1.0 - q) / amax
    k = 1 if bound >= 1.0 else int(math.ceil(math.log(bound) / math.log(q)))
    if k > policy.max_terms:
        raise ConvergenceError("grid q-product exceeds max_terms")
    out = np.ones_like(avec)
    qj = 1.0
    for _ in range(max(k, 1)):
        out *= 1.0 - avec * qj
        qj *= q
    return out


def density_times_sine(theta: np.ndarray, p: AscParams,
                       policy: TruncationPolicy = DEFAULT_TRUNCATION) -> np.ndarray:
    """g(cos theta) sin(theta) on a grid, in the form with the square-root
    edge factors absorbed (smooth at both endpoints):

    (2/pi) sin^2(theta) (q, ab; q)_inf |(q e^{2 i theta}; q)_inf|^2
        / |(a e^{i theta}, b e^{i theta}; q)_inf|^2.
    """
    q = p.q
    e1 = np.exp(1j * theta)
    e2 = e1 * e1
    num = qpoch_infinite(q, q, policy) * qpoch_infinite(p.prod_ab, q, policy) \
        * np.abs(_qpoch_inf_grid(q * e2, q, policy)) ** 2
    den = np.abs(_qpoch_inf_grid(complex(p.a) * e1, q, policy)
                 * _qpoch_inf_grid(complex(p.b) * e1, q, policy)) ** 2
    return (2.0 / math.pi) * np.sin(theta) ** 2 * num / den


def nu_integrate(f, m: QModelParams,
                 quad: QuadraturePolicy = DEFAULT_QUADRATURE,
                 trunc: TruncationPolicy = DEFAULT_TRUNCATION,
                 theta_lo: float = 0.0, theta_hi: float = math.pi) -> float:
    """Integral of a vectorized function against the Motzkin orthogonality
    measure, via the substitution x = 2 (cos theta + sigma)/(1 - q).

    The substituted weight g(cos theta) sin(theta) is smooth, so plain
    panel-doubling Gauss-Legendre in theta converges fast.  Restricting
    [theta_lo, theta_hi] integrates over the corresponding x-window.
    """
    from .errors import ConvergenceError as _CE

    p = m.asc_params()
    scale = 2.0 / (1.0 - m.q)
    eps = float(np.finfo(float).eps)
    prev = None
    panels = max(1, quad.min_nodes // 32)
    while panels * 32 <= quad.max_nodes:
        theta, w = panel_rule(theta_lo, theta_hi, panels)
        weight = w * density_times_sine(theta, p, trunc)
        x = scale * (np.cos(theta) + m.sigma)
        fv = np.asarray(f(x), dtype=float)
        val = float(np.dot(weight, fv))
        l1 = float(np.dot(np.abs(weight), np.abs(fv)))
        if prev is not None:
            sc = max(abs(val), abs(prev))
            if abs(val - prev) <= quad.rel_tol * sc + 64.0 * eps * l1 + 1e-300:
                return val
        prev = val
        panels *= 2
    raise _CE("orthogonality-measure quadrature did not converge")


# ------------------------------------------------------- Motzkin specialization

def s_values(nmax: int, m: QModelParams) -> np.ndarray:
    """Boundary convolution values s_0..s_nmax,
    s_n = sum_k (a;q)_k (b;q)_{n-k} / ((q;q)_k (q;q)_{n-k})."""
    _check_order(nmax)
    A = asc_coeff_ratio_array(m.asc_a, m.q, nmax)
    B = asc_coeff_ratio_array(m.asc_b, m.q, nmax)
    s = np.convolve(A, B)[: nmax + 1]
    worst = float(np.max(np.abs(s.imag) / np.maximum(1.0, np.abs(s.real))))
    if worst > _IMAG_GUARD:
        raise ValueError(f"imaginary residue {worst} in s-values")
    out = s.real
    if np.any(out <= 0.0):
        raise ValueError("s-values must be strictly positive")
    return out


def s_value(n: int, m: QModelParams) -> float:
    """s_n; equals n+1 when q = 0."""
    if n == -1:
        return 0.0
    return float(s_values(n, m)[n])


def pi_values(nmax: int, m: QModelParams) -> np.ndarray:
    """pi_n = s_n / [n+1]_q for n = 0..nmax (right-endpoint polynomial values)."""
    s = s_values(nmax, m)
    ns = np.arange(1, nmax + 2)
    qnum = (1.0 - np.power(m.q, ns)) / (1.0 - m.q) if m.q > 0 else np.ones(nmax + 1)
    return s / qnum


def pi_value(n: int, m: QModelParams) -> float:
    return float(pi_values(n, m)[n])


def pi_tilde_value(n: int, m: QModelParams) -> float:
    """Renormalized endpoint value; coincides with s_n."""
    return s_value(n, m)


def motzkin_poly_eval(n: int, x: float, m: QModelParams) -> float:
    """p_n(x) of the Motzkin model by forward recurrence with coefficients
    up [n+2]_q, flat 2 sigma [n+1]_q, down [n]_q."""
    _check_order(n)
    prev, cur = 0.0, 1.0
    for k in range(n):
        up = q_number(k + 2, m.q)
        flat = 2.0 * m.sigma * q_number(k + 1, m.q)
        down = q_number(k, m.q)
        prev, cur = cur, ((x - flat) * cur - down * prev) / up
    if not math.isfinite(cur):
        raise OverflowError(f"p_{n}({x}) overflowed double precision")
    return cur


def motzkin_poly_table(nmax: int, xs: np.ndarray, m: QModelParams) -> np.ndarray:
    """Matrix of p_n(x) values, shape (nmax+1, len(xs))."""
    _check_order(nmax)
    xs = np.asarray(xs, dtype=float)
    table = np.empty((nmax + 1, xs.size))
    table[0] = 1.0
    if nmax == 0:
        return table
    prev = np.zeros_like(xs)
    cur = np.ones_like(xs)
    for k in range(nmax):
        up = q_number(k + 2, m.q)
        flat = 2.0 * m.sigma * q_number(k + 1, m.q)
        down = q_number(k, m.q)
        prev, cur = cur, ((xs - flat) * cur - down * prev) / up
        table[k + 1] = cur
    return table


def asc_endpoint_limit_fixed_q(M: int, u: float, p: AscParams) -> float:
    """Scaled polynomial value (1/M) Q_M(1 - u^2 / (2 M^2)) whose large-M
    limit is (sin u / u) (a, b; q)_inf / (q; q)_inf."""
    if M < 1:
        raise ValueError(f"M must be positive, got {M}")
    if u < 0:
        raise ValueError(f"u must be nonnegative, got {u}")
    return asc_eval(M, 1.0 - u * u / (2.0 * M * M), p) / M


def asc_endpoint_limit_q_to_1(M: int, u: float, x: float, sigma: float,
                              policy: TruncationPolicy = DEFAULT_TRUNCATION) -> float:
    """Endpoint scaling with q = exp(-2/M) and conjugate unimodular
    parameters; converges to K_{i|u|}(exp(-x)) as M grows.

    Evaluates
        (q;q)_inf^2 / (M (a, b; q)_inf) * Q_m(cos(u/M)) / (q;q)_m
    with m = floor(M x) + floor(M log(M sqrt((1+a~)(1+b~)))), entirely in
    log space: the individual factors overflow double precision for
    M in the hundreds.
    """
    if M < 1:
        raise ValueError(f"M must be positive, got {M}")
    if not (0.0 < sigma <= 1.0):
        raise ValueError(f"sigma must lie in (0, 1], got {sigma}")
    q = math.exp(-2.0 / M)
    alpha = math.acos(sigma)
    ta = cmath.exp(1j * alpha)       # unimodular conjugate branch
    tb = ta.conjugate()
    a, b = -q * ta, -q * tb
    prod1 = ((1 + ta) * (1 + tb)).real  # = 2 (1 + sigma)
    midx = math.floor(M * x) + math.floor(M * math.log(M * math.sqrt(prod1)))
    if midx < 0:
        raise ValueError(f"index {midx} < 0: x={x} too negative for M={M}")
    params = AscParams(a, b, q)
    sign, logq_m = asc_eval_scaled(midx, math.cos(u / M), params)
    if sign == 0.0:
        return 0.0
    lqq_inf = qpoch_log_abs(q, q, None, policy)
    lab_inf = qpoch_log_abs(a, q, None, policy) + qpoch_log_abs(b, q, None, policy)
    lqq_m = qpoch_log_abs(q, q, midx, policy)
    return sign * math.exp(2.0 * lqq_inf - math.log(M) - lab_inf + logq_m - lqq_m)
