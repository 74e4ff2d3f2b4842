"""Continuum limit kernels and local-limit verification drivers.

Two scaling regimes of the boundary chain are covered:

* fixed q, space/time scaled 1:2 -- the limit is the 3d Bessel process,
  transition (y/x) q_{t/(1+sigma)}(x, y) with q_t the heat kernel of
  Brownian motion killed at 0, started from the density c^2 x exp(-c x);
* q -> 1 together with the scaling -- the limit is a Markov process built
  from Bessel K of imaginary order: transition
  [K_0(e^-y)/K_0(e^-x)] p_{t/(1+sigma)}(x, y) with the heat kernel

      p_t(x,y) = (2/pi) int_0^inf e^{-t u^2/2} K_{iu}(e^-x) K_{iu}(e^-y)
                 du / |Gamma(iu)|^2,

  started from 4 / (2^c Gamma(c/2)^2) e^{-c x} K_0(e^{-x}).

The lattice sides of the limit statements are computed exactly by
tridiagonal iteration of the chain (never Monte Carlo), so the reported
errors reflect convergence in N, not sampling noise.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .ascpoly import QModelParams, s_values
from .chains import ChainSpec, _iterate_tridiagonal, transition_arrays
from .errors import CapacityError, ConvergenceError
from .numerics import DEFAULT_QUADRATURE, QuadraturePolicy, panel_rule
from .qspecial import bessel_k_imag, bessel_k_imag_grid, qpoch_infinite

__all__ = [
    "KernelQuery",
    "LimitComparison",
    "killed_bm_kernel",
    "bessel3d_transition",
    "xi0_density",
    "yakubovich_kernel",
    "zeta_transition",
    "zeta0_density",
    "index_map",
    "local_limit_error_fixed_q",
    "initial_limit_fixed_q",
    "local_limit_error_q_to_1",
    "initial_limit_q_to_1",
    "error_table",
]


@dataclass(frozen=True)
class KernelQuery:
    """Evaluation point (t, x, y) with the flat-weight parameter sigma and
    the initial-law rate c."""

    t: float
    x: float
    y: float
    sigma: float = 1.0
    c: float = 1.0

    def __post_init__(self) -> None:
        if self.t <= 0.0:
            raise ValueError(f"t must be positive, got {self.t}")
        if not (0.0 < self.sigma <= 1.0):
            raise ValueError(f"sigma must lie in (0, 1], got {self.sigma}")
        if self.c <= 0.0:
            raise ValueError(f"c must be positive, got {self.c}")


@dataclass(frozen=True)
class LimitComparison:
    """Lattice value vs continuum target."""

    lhs: float
    rhs: float

    @property
    def rel_err(self) -> float:
        return abs(self.lhs - self.rhs) / abs(self.rhs)


def killed_bm_kernel(t: float, x: float, y: float) -> float:
    """Heat kernel of Brownian motion killed at 0:
    (2 pi t)^(-1/2) (exp(-(y-x)^2/2t) - exp(-(y+x)^2/2t)), x, y > 0."""
    if t <= 0.0 or x <= 0.0 or y <= 0.0:
        raise ValueError(f"killed kernel needs t, x, y > 0, got ({t}, {x}, {y})")
    return (math.exp(-((y - x) ** 2) / (2 * t)) - math.exp(-((y + x) ** 2) / (2 * t))) \
        / math.sqrt(2 * math.pi * t)


def bessel3d_transition(q: KernelQuery) -> float:
    """3d Bessel transition density (y/x) q_{t/(1+sigma)}(x, y)."""
    return q.y / q.x * killed_bm_kernel(q.t / (1.0 + q.sigma), q.x, q.y)


def xi0_density(x: float, c: float) -> float:
    """Initial density c^2 x exp(-c x) on x > 0."""
    if c <= 0.0:
        raise ValueError(f"c must be positive, got {c}")
    if x <= 0.0:
        return 0.0
    return c * c * x * math.exp(-c * x)


def _sinh(x: float) -> float:
    return math.sinh(x) if abs(x) < 700 else math.inf


def yakubovich_kernel(q: KernelQuery, quad: QuadraturePolicy = DEFAULT_QUADRATURE) -> float:
    """Heat kernel p_t(x, y) built from Bessel K of imaginary order,
    at time q.t (no sigma dilation here; see :func:`zeta_transition`).

    The u-integral truncates where the Gaussian factor reaches e^-40 and
    uses 1/|Gamma(iu)|^2 = u sinh(pi u)/pi in closed form.
    """
    t, x, y = q.t, q.x, q.y
    for z in (x, y):
        if math.exp(-z) < 1e-8:
            warnings.warn(f"kernel argument e^-{z} < 1e-8: Bessel accuracy degrades",
                          RuntimeWarning, stacklevel=2)
    U = max(math.sqrt(80.0 / t), 10.0)
    ex, ey = math.exp(-x), math.exp(-y)
    eps = float(np.finfo(float).eps)
    prev = None
    panels = max(2, quad.min_nodes // 32)
    while panels * 32 <= quad.max_nodes:
        us, w = panel_rule(0.0, U, panels)
        kx = bessel_k_imag_grid(us, ex, quad)
        ky = kx if ex == ey else bessel_k_imag_grid(us, ey, quad)
        f = (2.0 / math.pi**2) * np.exp(-t * us**2 / 2.0) * kx * ky * us * np.sinh(math.pi * us)
        val = float(np.dot(w, f))
        l1 = float(np.dot(w, np.abs(f)))
        # rounding noise of the Bessel grids is amplified by sinh(pi u), so
        # the attainable absolute accuracy scales with the L1 mass
        floor = 4096.0 * eps * l1 + 1e-300
        if prev is not None:
            scale = max(abs(val), abs(prev))
            if abs(val - prev) <= quad.rel_tol * scale + floor:
                if val < -floor:
                    raise ArithmeticError(f"kernel value {val} below noise floor yet negative")
                return max(val, 0.0)
        prev = val
        panels *= 2
    raise ConvergenceError("Yakubovich kernel quadrature did not converge")


def zeta_transition(q: KernelQuery, quad: QuadraturePolicy = DEFAULT_QUADRATURE) -> float:
    """Transition density [K_0(e^-y)/K_0(e^-x)] p_{t/(1+sigma)}(x, y)."""
    k0_from = bessel_k_imag(0.0, math.exp(-q.x))
    if k0_from == 0.0:
        raise ValueError(f"K_0(e^-x) underflows at x={q.x}; start point out of range")
    ratio = bessel_k_imag(0.0, math.exp(-q.y)) / k0_from
    dilated = KernelQuery(t=q.t / (1.0 + q.sigma), x=q.x, y=q.y, sigma=q.sigma, c=q.c)
    return ratio * yakubovich_kernel(dilated, quad)


def zeta0_density(x: float, c: float) -> float:
    """Initial density 4 / (2^c Gamma(c/2)^2) exp(-c x) K_0(exp(-x))."""
    if c <= 0.0:
        raise ValueError(f"c must be positive, got {c}")
    norm = 4.0 / (2.0**c * math.gamma(c / 2.0) ** 2)
    return norm * math.exp(-c * x) * bessel_k_imag(0.0, math.exp(-x))


def index_map(z: float, N: int, sigma: float) -> int:
    """Lattice index floor(z sqrt(N)) + floor(sqrt(N) log sqrt(2 N (1+sigma)))
    centering heights at the logarithmically growing bulk location."""
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    if not (0.0 < sigma <= 1.0):
        raise ValueError(f"sigma must lie in (0, 1], got {sigma}")
    rn = math.sqrt(N)
    return math.floor(z * rn) + math.floor(rn * math.log(math.sqrt(2.0 * N * (1.0 + sigma))))


# ------------------------------------------------------- lattice iteration

def _chain_point_evolution(model: QModelParams, m: int, n: int, k: int,
                           extra_hint: int) -> float:
    """P(X_k = n | X_0 = m) by tridiagonal iteration with an automatically
    grown state cap (leaked mass below 1e-9)."""
    if n > m + k:
        return 0.0  # unreachable: at most one level per step
    extra = extra_hint
    for _ in range(6):
        cap = max(m, n) + extra
        spec = ChainSpec(model, height=cap + 2)
        up, flat, down = transition_arrays(spec, cap)
        vec = np.zeros(cap + 1)
        vec[m] = 1.0
        out, lost = _iterate_tridiagonal(vec, k, up, flat, down)
        if lost <= 1e-9:
            return float(out[n])
        extra *= 2
    raise CapacityError("state cap kept leaking mass > 1e-9 while growing")


def local_limit_error_fixed_q(N: int, t: float, x: float, y: float,
                              model: QModelParams) -> LimitComparison:
    """sqrt(N) P(X_{floor(Nt)} = floor(y sqrt N) | X_0 = floor(x sqrt N))
    against the Bessel target (y/x) q_{t/(1+sigma)}(x, y)."""
    if x <= 0.0 or y <= 0.0 or t <= 0.0:
        raise ValueError("need x, y, t > 0")
    rn = math.sqrt(N)
    m, n, k = math.floor(x * rn), math.floor(y * rn), math.floor(N * t)
    extra = int(8.0 * math.sqrt(N * t / (1.0 + model.sigma))) + 64
    lhs = rn * _chain_point_evolution(model, m, n, k, extra)
    rhs = bessel3d_transition(KernelQuery(t=t, x=x, y=y, sigma=model.sigma))
    return LimitComparison(lhs=lhs, rhs=rhs)


def _initial_mass(model: QModelParams, level: int) -> float:
    """P(X_0 = level) under the chain initial law with weight rho0."""
    rho, q = model.rho0, model.q
    C = (qpoch_infinite(model.asc_a * rho, q) * qpoch_infinite(model.asc_b * rho, q)).real \
        / qpoch_infinite(rho, q) ** 2
    return rho**level * float(s_values(level, model)[level]) / C


def initial_limit_fixed_q(N: int, x: float, c: float, model: QModelParams) -> LimitComparison:
    """sqrt(N) P(X_0 = floor(x sqrt N)) with rho0 = exp(-c/sqrt(N)) against
    the density c^2 x exp(-c x)."""
    if x <= 0.0:
        raise ValueError("need x > 0")
    rn = math.sqrt(N)
    varying = QModelParams(q=model.q, sigma=model.sigma,
                           rho0=math.exp(-c / rn), rho1=model.rho1)
    m = math.floor(x * rn)
    lhs = rn * _initial_mass(varying, m)
    return LimitComparison(lhs=lhs, rhs=xi0_density(x, c))


def local_limit_error_q_to_1(N: int, t: float, x: float, y: float, sigma: float,
                             quad: QuadraturePolicy = DEFAULT_QUADRATURE) -> LimitComparison:
    """sqrt(N) P(X_{floor(Nt)} = J_y | X_0 = J_x) with q = exp(-2/sqrt(N))
    against [K_0(e^-y)/K_0(e^-x)] p_{t/(1+sigma)}(x, y)."""
    if t <= 0.0:
        raise ValueError("need t > 0")
    rn = math.sqrt(N)
    model = QModelParams(q=math.exp(-2.0 / rn), sigma=sigma)
    m, n, k = index_map(x, N, sigma), index_map(y, N, sigma), math.floor(N * t)
    if m < 0 or n < 0:
        raise CapacityError(f"index map gave negative level (x={x}, y={y}, N={N})")
    extra = int(8.0 * math.sqrt(N * t / (1.0 + sigma))) + 64
    lhs = rn * _chain_point_evolution(model, m, n, k, extra)
    rhs = zeta_transition(KernelQuery(t=t, x=x, y=y, sigma=sigma), quad)
    return LimitComparison(lhs=lhs, rhs=rhs)


def initial_limit_q_to_1(N: int, x: float, c: float, sigma: float) -> LimitComparison:
    """sqrt(N) P(X_0 = J_x) with q = exp(-2/sqrt(N)), rho0 = exp(-c/sqrt(N))
    against 4 / (2^c Gamma(c/2)^2) K_0(e^-x)."""
    rn = math.sqrt(N)
    model = QModelParams(q=math.exp(-2.0 / rn), sigma=sigma, rho0=math.exp(-c / rn))
    level = index_map(x, N, sigma)
    if level < 0:
        raise CapacityError(f"index map gave negative level (x={x}, N={N})")
    lhs = rn * _initial_mass(model, level)
    rhs = 4.0 / (2.0**c * math.gamma(c / 2.0) ** 2) * bessel_k_imag(0.0, math.exp(-x))
    return LimitComparison(lhs=lhs, rhs=rhs)


def error_table(regime: str, Ns: list[int], t: float, x: float, y: float,
                c: float, model: QModelParams | None = None,
                sigma: float = 1.0) -> list[dict]:
    """Rows (N, t, x, y, lhs, rhs, rel_err) for convergence tables.

    regime 'fixed-q' needs a q-model; 'q-to-1' sets q = exp(-2/sqrt(N))
    internally and uses ``sigma``.
    """
    rows = []
    for N in Ns:
        if regime == "fixed-q":
            if model is None:
                raise ValueError("fixed-q regime needs model parameters")
            cmp_ = local_limit_error_fixed_q(N, t, x, y, model)
        elif regime == "q-to-1":
            cmp_ = local_limit_error_q_to_1(N, t, x, y, sigma)
        else:
            raise ValueError(f"unknown regime {regime!r}")
        rows.append({"N": N, "t": t, "x": x, "y": y,
                     "lhs": cmp_.lhs, "rhs": cmp_.rhs, "rel_err": cmp_.rel_err})
    return rows
