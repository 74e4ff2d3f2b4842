"""q-series and special-function primitives.

Covers q-numbers, finite and infinite q-Pochhammer symbols, the q-Gamma
function, a Ramanujan product ratio with a classical q->1 limit, the Jacobi
theta functions theta_1 and theta_4, the squared modulus of Gamma on the
imaginary axis, and the modified Bessel function K of purely imaginary
order.  Everything is a pure function; complex powers and logarithms use
the principal branch throughout.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import ConvergenceError
from .numerics import (
    DEFAULT_QUADRATURE,
    DEFAULT_TRUNCATION,
    QuadraturePolicy,
    TruncationPolicy,
    gauss_legendre,
)

__all__ = [
    "q_number",
    "qpoch_finite",
    "qpoch_infinite",
    "qpoch_log_abs",
    "q_gamma",
    "q_gamma_log",
    "ramanujan_ratio",
    "theta1",
    "theta4",
    "gamma_abs_imag_sq",
    "bessel_k_imag",
    "bessel_k_imag_grid",
]


def _check_q(q: float) -> float:
    if not (0.0 <= q < 1.0):
        raise ValueError(f"q must lie in [0, 1), got {q}")
    return float(q)


def q_number(n: int, q: float) -> float:
    """[n]_q = 1 + q + ... + q^(n-1); equals 0 at n = 0."""
    _check_q(q)
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if n == 0:
        return 0.0
    return (1.0 - q**n) / (1.0 - q)


def qpoch_finite(a: complex, q: float, n: int):
    """Finite q-Pochhammer symbol (a; q)_n = prod_{k<n} (1 - a q^k).

    Returns a float for real ``a`` and a complex number otherwise.  The
    empty product (n = 0) is 1.
    """
    _check_q(q)
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    result = 1.0 if not isinstance(a, complex) else 1.0 + 0.0j
    qk = 1.0
    for _ in range(n):
        result = result * (1.0 - a * qk)
        qk *= q
    return result


def _tail_index(amod: float, q: float, policy: TruncationPolicy) -> int:
    """Smallest k with amod * q^k / (1-q) below rel_tol (tail of the log of
    the infinite product)."""
    if amod == 0.0 or q == 0.0:
        return 1
    bound = policy.rel_tol * (1.0 - q) / amod
    if bound >= 1.0:
        return 1
    k = int(math.ceil(math.log(bound) / math.log(q)))
    return max(k, 1)


def qpoch_infinite(a: complex, q: float, policy: TruncationPolicy = DEFAULT_TRUNCATION):
    """Infinite q-Pochhammer symbol (a; q)_infty, truncated when the
    multiplicative tail bound |a| q^k / (1-q) drops below ``policy.rel_tol``.

    Raises :class:`ConvergenceError` if ``policy.max_terms`` factors are not
    enough.  Deterministic for fixed inputs.
    """
    _check_q(q)
    if a == 0:
        return 1.0
    k = _tail_index(abs(a), q, policy)
    if k > policy.max_terms:
        raise ConvergenceError(
            f"(a;q)_inf with |a|={abs(a):.3g}, q={q} needs {k} factors, "
            f"max_terms={policy.max_terms}"
        )
    ks = np.arange(k)
    factors = 1.0 - a * np.power(q, ks)
    result = complex(np.prod(factors))
    if not isinstance(a, complex):
        return float(result.real)
    return result


def qpoch_log_abs(a: complex, q: float, n: int | None = None,
                  policy: TruncationPolicy = DEFAULT_TRUNCATION) -> float:
    """log |(a; q)_n| with n = None meaning the infinite product.

    Safe replacement for ``log(abs(qpoch_*))`` when the product itself would
    overflow or underflow double precision.
    """
    _check_q(q)
    if a == 0:
        return 0.0
    if n is None:
        n = _tail_index(abs(a), q, policy)
        if n > policy.max_terms:
            raise ConvergenceError("infinite product exceeds max_terms")
    if n == 0:
        return 0.0
    ks = np.arange(n)
    factors = 1.0 - a * np.power(q + 0.0j, ks)
    mags = np.abs(factors)
    if np.any(mags == 0.0):
        return -math.inf
    return float(np.sum(np.log(mags)))


def _is_nonpositive_integer(z: complex, tol: float = 1e-12) -> bool:
    zr, zi = (z.real, z.imag) if isinstance(z, complex) else (float(z), 0.0)
    if abs(zi) > tol:
        return False
    k = round(zr)
    return k <= 0 and abs(zr - k) <= tol


def q_gamma_log(z: complex, q: float, policy: TruncationPolicy = DEFAULT_TRUNCATION) -> complex:
    """Principal-branch log of the q-Gamma function.

    Gamma_q(z) = (1-q)^(1-z) (q;q)_inf / (q^z;q)_inf.  The two infinite
    products are combined factor by factor, so the result stays finite even
    when each product alone would leave the double-precision range (q close
    to 1).
    """
    _check_q(q)
    if _is_nonpositive_integer(z):
        raise ValueError(f"q-Gamma pole at z={z}")
    z = complex(z)
    if q == 0.0:
        return 0.0 + 0.0j  # Gamma_0(z) = 1 for Re z > 0
    lnq = math.log(q)
    amod = q ** min(z.real, 1.0)
    n = max(_tail_index(amod, q, policy), _tail_index(q, q, policy))
    if n > policy.max_terms:
        raise ConvergenceError("q-Gamma product exceeds max_terms")
    ks = np.arange(n)
    top = 1.0 - np.exp((ks + 1.0) * lnq)               # 1 - q^(k+1)
    bot = 1.0 - np.exp((z + ks) * lnq)                 # 1 - q^(z+k)
    if np.any(np.abs(bot) == 0.0):
        raise ValueError(f"q-Gamma pole at z={z}")
    total = complex(np.sum(np.log(top.astype(complex)) - np.log(bot)))
    return (1.0 - z) * math.log(1.0 - q) + total


def q_gamma(z: complex, q: float, policy: TruncationPolicy = DEFAULT_TRUNCATION):
    """q-Gamma function (1-q)^(1-z) (q;q)_inf / (q^z;q)_inf.

    Returns a float for real ``z``.  Raises ``ValueError`` on the poles
    z = 0, -1, -2, ... (detected within 1e-12).
    """
    val = cmath.exp(q_gamma_log(z, q, policy))
    if not isinstance(z, complex):
        return float(val.real)
    return val


def ramanujan_ratio(z: complex, lam: complex, q: float,
                    policy: TruncationPolicy = DEFAULT_TRUNCATION):
    """(z; q)_inf / (z q^lam; q)_inf, which tends to (1-z)^lam as q -> 1.

    ``z`` must avoid the cut [1, infinity) on the real axis.  Factors of the
    two products are paired before exponentiation so the ratio survives q
    close to 1.
    """
    _check_q(q)
    zr, zi = (z.real, z.imag) if isinstance(z, complex) else (float(z), 0.0)
    if abs(zi) == 0.0 and zr >= 1.0:
        raise ValueError(f"z={z} lies on the cut [1, inf)")
    if z == 0 or lam == 0:
        return 1.0 if not (isinstance(z, complex) or isinstance(lam, complex)) else 1.0 + 0.0j
    if q == 0.0:
        if complex(lam).real <= 0.0:
            raise ValueError("q = 0 with Re(lam) <= 0 makes q^lam singular")
        out = 1.0 - complex(z)  # (z;0)_inf / (0;0)_inf
    else:
        lnq = math.log(q)
        qlam = cmath.exp(complex(lam) * lnq)
        mod = abs(z) * max(1.0, abs(qlam))
        n = _tail_index(mod, q, policy)
        if n > policy.max_terms:
            raise ConvergenceError("Ramanujan ratio exceeds max_terms")
        ks = np.arange(n)
        qk = np.exp(ks * lnq)
        top = 1.0 - z * qk.astype(complex)
        bot = 1.0 - z * qlam * qk.astype(complex)
        if np.any(np.abs(top) == 0.0) or np.any(np.abs(bot) == 0.0):
            raise ValueError("vanishing factor in Ramanujan ratio")
        out = cmath.exp(complex(np.sum(np.log(top) - np.log(bot))))
    if not (isinstance(z, complex) or isinstance(lam, complex)):
        return float(out.real)
    return out


def _theta_sum(terms, policy: TruncationPolicy) -> complex:
    """Sum a theta series until two consecutive terms are negligible and
    decreasing."""
    total = 0.0 + 0.0j
    scale = 0.0
    small_streak = 0
    prev_mag = math.inf
    for n, term in enumerate(terms):
        total += term
        mag = abs(term)
        scale = max(scale, mag, abs(total))
        if n >= 2 and mag <= policy.rel_tol * scale and mag <= prev_mag:
            small_streak += 1
            if small_streak >= 2:
                return total
        else:
            small_streak = 0
        prev_mag = mag
        if n + 1 >= policy.max_terms:
            raise ConvergenceError("theta series exceeded max_terms")
    return total


def theta1(v: complex, tau: complex, policy: TruncationPolicy = DEFAULT_TRUNCATION) -> complex:
    """Jacobi theta_1(v | tau) with nome exp(pi i tau); requires Im(tau) > 0.

    theta_1(v|tau) = 2 w^(1/4) sum_{n>=0} (-1)^n w^(n(n+1)) sin((2n+1) pi v),
    w = exp(pi i tau).
    """
    tau = complex(tau)
    if tau.imag <= 0.0:
        raise ValueError(f"Im(tau) must be positive, got {tau}")
    v = complex(v)
    ipit = 1j * math.pi * tau

    def terms():
        n = 0
        while True:
            yield (-1) ** n * cmath.exp(ipit * (n * (n + 1))) * cmath.sin((2 * n + 1) * math.pi * v)
            n += 1

    return 2.0 * cmath.exp(ipit / 4.0) * _theta_sum(terms(), policy)


def theta4(v: complex, tau: complex, policy: TruncationPolicy = DEFAULT_TRUNCATION) -> complex:
    """Jacobi theta_4(v | tau) = 1 + 2 sum_{n>=1} (-1)^n w^(n^2) cos(2 n pi v),
    w = exp(pi i tau); requires Im(tau) > 0."""
    tau = complex(tau)
    if tau.imag <= 0.0:
        raise ValueError(f"Im(tau) must be positive, got {tau}")
    v = complex(v)
    ipit = 1j * math.pi * tau

    def terms():
        n = 1
        while True:
            yield 2.0 * (-1) ** n * cmath.exp(ipit * (n * n)) * cmath.cos(2 * n * math.pi * v)
            n += 1

    return 1.0 + _theta_sum(terms(), policy)


def gamma_abs_imag_sq(u: float) -> float:
    """|Gamma(i u)|^2 = pi / (u sinh(pi u)); even in u, pole at u = 0."""
    if u == 0.0:
        raise ValueError("|Gamma(iu)|^2 diverges at u = 0")
    au = abs(float(u))
    x = math.pi * au
    if x > 700.0:
        # sinh overflows; use sinh(x) = exp(x)(1 - exp(-2x))/2
        return 2.0 * math.pi * math.exp(-x) / (au * (1.0 - math.exp(-2.0 * x)))
    return math.pi / (au * math.sinh(x))


def _bessel_horizon(x: float) -> float:
    # push the integrand below the double-precision floor: x*cosh(T) > 745
    return math.acosh(max(2.0, 746.0 / x)) + 1.0


def bessel_k_imag(u: float, x: float, policy: QuadraturePolicy = DEFAULT_QUADRATURE) -> float:
    """Modified Bessel function K_{iu}(x) of purely imaginary order.

    Evaluates the real integral K_{iu}(x) = int_0^inf exp(-x cosh t) cos(ut) dt
    by node-doubling Gauss-Legendre on a truncated horizon.  Requires x > 0;
    real-valued and even in u.
    """
    if x <= 0.0:
        raise ValueError(f"argument must be positive, got x={x}")
    if x < 1e-12:
        raise ConvergenceError(f"x={x} too small: integration horizon exceeds policy")
    u = float(u)
    T = _bessel_horizon(x)

    def integrand(t):
        return np.exp(-x * np.cosh(t)) * np.cos(u * t)

    return gauss_legendre(integrand, 0.0, T, policy)


def bessel_k_imag_grid(us: np.ndarray, x: float,
                       policy: QuadraturePolicy = DEFAULT_QUADRATURE) -> np.ndarray:
    """K_{iu}(x) for a whole array of orders ``us`` at once.

    Shares the cosh grid between orders; converges on the maximum absolute
    change across the grid, scaled by the largest value.
    """
    if x <= 0.0:
        raise ValueError(f"argument must be positive, got x={x}")
    if x < 1e-12:
        raise ConvergenceError(f"x={x} too small: integration horizon exceeds policy")
    from .numerics import panel_rule

    us = np.asarray(us, dtype=float)
    T = _bessel_horizon(x)
    eps = float(np.finfo(float).eps)
    prev = None
    panels = max(2, policy.min_nodes // 32)
    while panels * 32 <= policy.max_nodes:
        tt, w = panel_rule(0.0, T, panels)
        env = np.exp(-x * np.cosh(tt)) * w
        vals = np.cos(np.outer(us, tt)) @ env
        if prev is not None:
            scale = max(float(np.max(np.abs(vals))), 1e-300)
            floor = 64.0 * eps * float(np.sum(np.abs(env)))
            if float(np.max(np.abs(vals - prev))) <= policy.rel_tol * scale + floor:
                return vals
        prev = vals
        panels *= 2
    raise ConvergenceError("Bessel grid quadrature did not converge")
