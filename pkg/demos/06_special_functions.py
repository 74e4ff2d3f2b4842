#!/usr/bin/env python3
"""The q-series and special-function layer.

Everything the heavier modules lean on: q-Pochhammer symbols, the q-Gamma
function and its classical limit, a Ramanujan product-ratio limit, Jacobi
theta identities, the closed form of |Gamma(iu)|^2, and Bessel K of purely
imaginary order via a real integral.
"""

import cmath
import math

from motzkinq.qspecial import (
    bessel_k_imag,
    gamma_abs_imag_sq,
    q_gamma,
    qpoch_infinite,
    ramanujan_ratio,
    theta1,
    theta4,
)

print("q-Gamma tends to Euler Gamma as q -> 1 (value at 1/2, target sqrt(pi)):")
for M in (10, 100, 1000):
    v = q_gamma(0.5, math.exp(-2.0 / M))
    print(f"  M={M:5d}: Gamma_q(1/2) = {v:.8f}   error {abs(v - math.sqrt(math.pi)):.2e}")
print()

print("Ramanujan ratio (z;q)_inf/(z q^l; q)_inf -> (1-z)^l at z=-1, l=1/2:")
for M in (10, 100, 1000):
    v = ramanujan_ratio(-1.0, 0.5, math.exp(-2.0 / M))
    print(f"  M={M:5d}: ratio = {v:.8f}   error {abs(v - math.sqrt(2)):.2e}")
print()

v, tau = 0.3, 1j
w = cmath.exp(1j * math.pi * tau)
lhs = theta1(v, tau)
shift = 1j * w**0.25 * cmath.exp(-1j * math.pi * v) * theta4(v - tau / 2, tau)
modular = 1j * cmath.sqrt(1j / tau) * cmath.exp(-1j * math.pi * v**2 / tau) \
    * theta1(v / tau, -1 / tau)
w2 = w * w
triple = 2 * w**0.25 * cmath.sin(math.pi * v) * qpoch_infinite(w2, abs(w2)) \
    * qpoch_infinite(w2 * cmath.exp(2j * math.pi * v), abs(w2)) \
    * qpoch_infinite(w2 * cmath.exp(-2j * math.pi * v), abs(w2))
print(f"theta_1({v}|i) = {lhs:.12f}")
print(f"  via the theta_4 shift     : deviation {abs(lhs - shift):.1e}")
print(f"  via the modular transform : deviation {abs(lhs - modular):.1e}")
print(f"  via the triple product    : deviation {abs(lhs - triple):.1e}")
print()

print("|Gamma(iu)|^2 = pi/(u sinh(pi u)):", gamma_abs_imag_sq(1.0))
print()

print("Bessel K of imaginary order by real quadrature:")
for (u, x) in [(0.0, 1.0), (1.0, 1.0), (2.0, 0.5)]:
    print(f"  K_i{u}({x}) = {bessel_k_imag(u, x):.12f}")
