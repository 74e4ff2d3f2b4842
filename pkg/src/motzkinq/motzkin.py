"""Weighted Motzkin paths: enumeration, transfer-operator computations,
the equivalent orthogonal-polynomial integral representation, and exact
path sampling.

A path of length L is its altitude sequence (g_0, ..., g_L) with steps in
{-1, 0, +1} staying nonnegative.  A weight model assigns multiplicative
edge weights by the altitude at the left end of each step (up a_n, flat
b_n, down c_n) plus boundary weights alpha_{g_0}, beta_{g_L}; the path
probability is alpha beta w(path) / C_L.

All transfer computations use the tridiagonal structure directly (O(S) per
step); dense operator matrices are never formed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .ascpoly import QModelParams, motzkin_poly_table, nu_integrate, q_number
from .errors import CapacityError, ConvergenceError
from .numerics import (
    DEFAULT_QUADRATURE,
    DEFAULT_TRUNCATION,
    QuadraturePolicy,
    TruncationPolicy,
)

__all__ = [
    "MotzkinPath",
    "WeightModel",
    "ENUMERATION_CAP",
    "enumerate_paths",
    "path_weight",
    "horizontal_count",
    "partition_weight",
    "normalizing_constant",
    "log_normalizing_constant",
    "matrix_ansatz_expectation",
    "integral_expectation",
    "integral_normalizing_constant",
    "sample_path",
    "sample_paths",
    "path_line",
    "parse_path_line",
]

ENUMERATION_CAP = 14


@dataclass(frozen=True)
class MotzkinPath:
    """Altitude sequence of a Motzkin path."""

    altitudes: tuple[int, ...]

    def __post_init__(self) -> None:
        alts = self.altitudes
        if len(alts) < 1:
            raise ValueError("a path needs at least one altitude")
        if any(a < 0 for a in alts):
            raise ValueError(f"altitudes must be nonnegative: {alts}")
        if any(abs(b - a) > 1 for a, b in zip(alts, alts[1:])):
            raise ValueError(f"steps must lie in {{-1,0,1}}: {alts}")

    @property
    def length(self) -> int:
        return len(self.altitudes) - 1

    def __iter__(self):
        return iter(self.altitudes)


def horizontal_count(path: MotzkinPath) -> int:
    """Number of flat steps H(path)."""
    alts = path.altitudes
    return sum(1 for a, b in zip(alts, alts[1:]) if a == b)


@dataclass(frozen=True)
class WeightModel:
    """Edge weights (up, flat, down) by left altitude plus boundary weights.

    ``qmodel`` tags instances that come from the q-weighted specialization
    (up [n+2]_q, flat 2 sigma [n+1]_q, down [n]_q, alpha_n rho0^n [n+1]_q,
    beta_n rho1^n); those unlock the orthogonal-polynomial machinery.
    """

    up: Callable[[int], float]
    flat: Callable[[int], float]
    down: Callable[[int], float]
    alpha: Callable[[int], float]
    beta: Callable[[int], float]
    qmodel: QModelParams | None = field(default=None, compare=False)

    @staticmethod
    def from_qmodel(m: QModelParams) -> "WeightModel":
        q = m.q
        return WeightModel(
            up=lambda n: q_number(n + 2, q),
            flat=lambda n: 2.0 * m.sigma * q_number(n + 1, q),
            down=lambda n: q_number(n, q),
            alpha=lambda n: m.rho0**n * q_number(n + 1, q),
            beta=lambda n: m.rho1**n,
            qmodel=m,
        )

    @staticmethod
    def unit() -> "WeightModel":
        """All edge and boundary weights 1 (counting measure; boundary sums
        diverge, so only enumeration-style operations apply)."""
        one = lambda n: 1.0
        return WeightModel(up=one, flat=one, down=one, alpha=one, beta=one)

    def weight_arrays(self, size: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        ns = range(size)
        a = np.array([self.up(n) for n in ns])
        b = np.array([self.flat(n) for n in ns])
        c = np.array([self.down(n) for n in ns])
        if np.any(a <= 0.0) or np.any(b < 0.0) or np.any(c[1:] <= 0.0) or c[0] < 0.0:
            raise ValueError("need up > 0, flat >= 0, down > 0 (down at 0 may be 0)")
        return a, b, c

    def boundary_arrays(self, size: int) -> tuple[np.ndarray, np.ndarray]:
        av = np.array([self.alpha(n) for n in range(size)])
        bv = np.array([self.beta(n) for n in range(size)])
        if np.any(av < 0.0) or np.any(bv < 0.0):
            raise ValueError("boundary weights must be nonnegative")
        return av, bv


# -------------------------------------------------------------- enumeration

def enumerate_paths(L: int, m: int, n: int) -> list[MotzkinPath]:
    """All Motzkin paths of length L from altitude m to altitude n.

    Exhaustive with pruning; guarded at L <= 14.
    """
    if L < 0 or m < 0 or n < 0:
        raise ValueError("L, m, n must be nonnegative")
    if L > ENUMERATION_CAP:
        raise CapacityError(f"enumeration guard: L={L} exceeds {ENUMERATION_CAP}")
    out: list[MotzkinPath] = []
    prefix = [m]

    def walk(h: int, remaining: int) -> None:
        if abs(h - n) > remaining:
            return
        if remaining == 0:
            out.append(MotzkinPath(tuple(prefix)))
            return
        for step in (1, 0, -1):
            nh = h + step
            if nh < 0:
                continue
            prefix.append(nh)
            walk(nh, remaining - 1)
            prefix.pop()

    walk(m, L)
    return out


def path_weight(path: MotzkinPath, model: WeightModel) -> float:
    """Product of edge weights taken at the left altitude of each step."""
    w = 1.0
    alts = path.altitudes
    for a, b in zip(alts, alts[1:]):
        if b > a:
            w *= model.up(a)
        elif b < a:
            w *= model.down(a)
        else:
            w *= model.flat(a)
    return w


# --------------------------------------------------------- transfer operator

def _row_step(v: np.ndarray, a: np.ndarray, b: np.ndarray, c: np.ndarray, t: float) -> np.ndarray:
    """One application w <- w M_t for a row vector w."""
    new = b * v
    new[1:] += t * a[:-1] * v[:-1]
    new[:-1] += (c[1:] / t) * v[1:]
    return new


def _col_step(v: np.ndarray, a: np.ndarray, b: np.ndarray, c: np.ndarray, t: float) -> np.ndarray:
    """One application v <- M_t v for a column vector v."""
    new = b * v
    new[:-1] += t * a[:-1] * v[1:]
    new[1:] += (c[1:] / t) * v[:-1]
    return new


def partition_weight(L: int, m: int, n: int, model: WeightModel,
                     height_cap: int | None = None) -> float:
    """Total weight of all paths of length L from m to n.

    Exact (no truncation) whenever the operator size covers max(m, n) + L,
    because a path cannot climb more than one level per step.
    """
    if L < 0 or m < 0 or n < 0:
        raise ValueError("L, m, n must be nonnegative")
    need = max(m, n) + L + 2
    S = need if height_cap is None else height_cap + 2
    if height_cap is not None and height_cap < max(m, n) + L:
        raise CapacityError(
            f"height_cap={height_cap} < max(m,n)+L={max(m, n) + L}; result would truncate")
    a, b, c = model.weight_arrays(S)
    v = np.zeros(S)
    v[m] = 1.0
    for _ in range(L):
        v = _row_step(v, a, b, c, 1.0)
    return float(v[n])


def _boundary_cutoff(model: WeightModel, tail_tol: float) -> int:
    """Index beyond which boundary weights are negligible.

    Exact geometric bound for the q-model; a heuristic decay scan otherwise
    (the scan checks summability numerically, it does not prove it).
    """
    if model.qmodel is not None:
        qm = model.qmodel
        rho = max(qm.rho0, qm.rho1)
        if rho == 0.0:
            return 4
        # alpha_n <= rho^n (n+1); solve rho^T (T+1) < tail_tol * (1-rho)
        T = 4
        while rho**T * (T + 1) >= tail_tol * (1.0 - rho) and T < 100_000:
            T = int(T * 1.5) + 1
        return T
    best = 0.0
    T = None
    for nlev in range(10_000):
        term = model.alpha(nlev) + model.beta(nlev)
        best = max(best, term)
        if term < tail_tol * max(best, 1.0):
            T = nlev + 8
            break
    if T is None:
        raise ConvergenceError("boundary weights do not appear summable")
    return T


def _bilinear_log(model: WeightModel, z0: float, z1: float, tlist: list[float],
                  S: int) -> tuple[float, float]:
    """(mantissa, log_scale) of V_alpha(z0)^T M_{t_1} ... M_{t_L} W_beta(z1)
    on the truncated operator of size S."""
    a, b, c = model.weight_arrays(S)
    av, bv = model.boundary_arrays(S)
    powers = np.power(float(z0), np.arange(S))
    v = av * powers
    log_scale = 0.0
    for t in tlist:
        v = _row_step(v, a, b, c, t)
        peak = float(np.max(np.abs(v)))
        if peak == 0.0:
            return 0.0, -math.inf
        if peak > 1e200 or peak < 1e-200:
            v = v / peak
            log_scale += math.log(peak)
    w = bv * np.power(float(z1), np.arange(S))
    return float(np.dot(v, w)), log_scale


def _bilinear_adaptive(model: WeightModel, z0: float, z1: float, tlist: list[float],
                       L: int, height_cap: int | None, tail_tol: float) -> tuple[float, float]:
    """Bilinear form with the boundary truncation grown until the value is
    stable to tail_tol (or a user cap is hit)."""
    T = _boundary_cutoff(model, tail_tol)
    if height_cap is not None:
        S = height_cap + 2
        val, lg = _bilinear_log(model, z0, z1, tlist, S)
        ref, lg2 = _bilinear_log(model, z0, z1, tlist, S + 16)
        if abs(ref * math.exp(lg2 - lg) - val) > 4.0 * tail_tol * abs(ref * math.exp(lg2 - lg)):
            raise CapacityError(f"height_cap={height_cap} too small for tail_tol={tail_tol}")
        return val, lg
    S = T + L + 2
    val, lg = _bilinear_log(model, z0, z1, tlist, S)
    for _ in range(10):
        S2 = S + max(16, S // 4)
        val2, lg2 = _bilinear_log(model, z0, z1, tlist, S2)
        rel = abs(val2 * math.exp(lg2 - lg) - val)
        if rel <= tail_tol * max(abs(val2 * math.exp(lg2 - lg)), 1e-300):
            return val2, lg2
        S, val, lg = S2, val2, lg2
    raise ConvergenceError("boundary truncation did not stabilize; weights may not be summable")


def log_normalizing_constant(L: int, model: WeightModel, tail_tol: float = 1e-12,
                             height_cap: int | None = None) -> float:
    """log of the normalizing constant C_L = sum alpha_m W_{m,n} beta_n."""
    val, lg = _bilinear_adaptive(model, 1.0, 1.0, [1.0] * L, L, height_cap, tail_tol)
    if val <= 0.0:
        raise ValueError("normalizing constant must be positive")
    return math.log(val) + lg


def normalizing_constant(L: int, model: WeightModel, tail_tol: float = 1e-12,
                         height_cap: int | None = None) -> float:
    lg = log_normalizing_constant(L, model, tail_tol, height_cap)
    if lg > 700.0:
        raise OverflowError(f"normalizing constant exp({lg:.1f}) overflows; "
                            "use log_normalizing_constant")
    return math.exp(lg)


def matrix_ansatz_expectation(z0: float, z1: float, t: list[float], s: list[float],
                              L: int, model: WeightModel,
                              height_cap: int | None = None,
                              tail_tol: float = 1e-12) -> float:
    """Joint generating functional
    E[z0^{g_0} prod_j t_j^{g_j - g_{j-1}} prod_j s_j^{-(g_{L-j+1} - g_{L-j})} z1^{g_L}]
    via the transfer-operator product sandwiched between boundary vectors.
    """
    t, s = list(t), list(s)
    K = len(t)
    if len(s) != K:
        raise ValueError("t and s must have equal length")
    if 2 * K > L:
        raise ValueError(f"need 2K <= L, got K={K}, L={L}")
    if not (0.0 < z0 <= 1.0 and 0.0 < z1 <= 1.0):
        raise ValueError("z0, z1 must lie in (0, 1]")
    if any(tj <= 0 for tj in t) or any(sj <= 0 for sj in s):
        raise ValueError("t_j and s_j must be positive")
    tlist = t + [1.0] * (L - 2 * K) + [1.0 / sj for sj in reversed(s)]
    num, lg_num = _bilinear_adaptive(model, z0, z1, tlist, L, height_cap, tail_tol)
    den, lg_den = _bilinear_adaptive(model, 1.0, 1.0, [1.0] * L, L, height_cap, tail_tol)
    return num / den * math.exp(lg_num - lg_den)


# ------------------------------------------------- integral representation

def _require_qmodel(model: WeightModel) -> QModelParams:
    if model.qmodel is None:
        raise ValueError("this operation needs the q-model orthogonality measure")
    return model.qmodel


def _psi_functions(model: WeightModel, z0: float, z1: float,
                   t: list[float], s: list[float], S: int):
    """Row vector V_alpha(z0)^T M_{t_1}..M_{t_K} and column vector
    M_{1/s_K}..M_{1/s_1} W_beta(z1), truncated at S."""
    a, b, c = model.weight_arrays(S)
    av, bv = model.boundary_arrays(S)
    v = av * np.power(float(z0), np.arange(S))
    for tj in t:
        v = _row_step(v, a, b, c, tj)
    w = bv * np.power(float(z1), np.arange(S))
    for sj in s:
        w = _col_step(w, a, b, c, 1.0 / sj)
    return v, w


def integral_expectation(z0: float, z1: float, t: list[float], s: list[float],
                         L: int, model: WeightModel,
                         quad: QuadraturePolicy = DEFAULT_QUADRATURE,
                         trunc: TruncationPolicy = DEFAULT_TRUNCATION,
                         tail_tol: float = 1e-12) -> float:
    """Same expectation as :func:`matrix_ansatz_expectation`, evaluated as
    (1/C_L) int x^{L-2K} Psi_0(x) Psi_1(x) nu(dx) against the q-model
    orthogonality measure.  Powers are taken of x/B so the integrand stays
    bounded for large L.
    """
    qm = _require_qmodel(model)
    t, s = list(t), list(s)
    K = len(t)
    if len(s) != K:
        raise ValueError("t and s must have equal length")
    if 2 * K > L:
        raise ValueError(f"need 2K <= L, got K={K}, L={L}")
    B = qm.support().B
    T = _boundary_cutoff(model, tail_tol)
    S = T + 2 * K + 8
    v, w = _psi_functions(model, z0, z1, t, s, S)
    v1, w1 = _psi_functions(model, 1.0, 1.0, [], [], S)
    qnum = np.array([q_number(i + 1, qm.q) for i in range(S)])
    wtilde = w * qnum    # column against renormalized polynomials
    w1tilde = w1 * qnum

    def numerator(x):
        table = motzkin_poly_table(S - 1, x, qm)
        return (x / B) ** (L - 2 * K) * (v @ table) * (wtilde @ table)

    def denominator(x):
        table = motzkin_poly_table(S - 1, x, qm)
        return (x / B) ** L * (v1 @ table) * (w1tilde @ table)

    num = nu_integrate(numerator, qm, quad, trunc)
    den = nu_integrate(denominator, qm, quad, trunc)
    return num / den / B ** (2 * K)


def integral_normalizing_constant(L: int, model: WeightModel,
                                  quad: QuadraturePolicy = DEFAULT_QUADRATURE,
                                  trunc: TruncationPolicy = DEFAULT_TRUNCATION,
                                  tail_tol: float = 1e-12) -> float:
    """C_L as the moment integral int x^L (V^T P)(W^T Q) nu(dx)."""
    qm = _require_qmodel(model)
    B = qm.support().B
    T = _boundary_cutoff(model, tail_tol)
    S = T + 8
    v1, w1 = _psi_functions(model, 1.0, 1.0, [], [], S)
    qnum = np.array([q_number(i + 1, qm.q) for i in range(S)])
    w1tilde = w1 * qnum

    def integrand(x):
        table = motzkin_poly_table(S - 1, x, qm)
        return (x / B) ** L * (v1 @ table) * (w1tilde @ table)

    scaled = nu_integrate(integrand, qm, quad, trunc)
    return scaled * B**L


# ------------------------------------------------------------------ sampling

def _backward_vectors(model: WeightModel, L: int, S: int) -> np.ndarray:
    """Rows u_k = M_1^{L-k} W_beta(1), max-normalized per row (ratios of
    consecutive rows are renormalized at sampling time)."""
    a, b, c = model.weight_arrays(S)
    _, bv = model.boundary_arrays(S)
    u = np.empty((L + 1, S))
    cur = bv.astype(float)
    u[L] = cur / np.max(cur)
    for k in range(L - 1, -1, -1):
        cur = _col_step(u[k + 1], a, b, c, 1.0)
        peak = float(np.max(cur))
        if peak <= 0.0:
            raise ValueError("backward partition vector collapsed to zero")
        u[k] = cur / peak
    return u


def sample_paths(L: int, model: WeightModel, count: int, seed: int,
                 height_cap: int | None = None, tail_tol: float = 1e-12) -> np.ndarray:
    """Exact samples from the path measure, as an int array (count, L+1).

    Sequential sampler: the initial altitude is drawn proportionally to
    alpha_m u_0[m], then every step proportionally to edge weight times the
    next backward vector.  Deterministic for a fixed seed.
    """
    if count < 1:
        raise ValueError("count must be positive")
    T = _boundary_cutoff(model, tail_tol)
    S = (T + L + 2) if height_cap is None else height_cap + 2
    u = _backward_vectors(model, L, S)
    a, b, c = model.weight_arrays(S)
    av, _ = model.boundary_arrays(S)
    p0 = av * u[0]
    top = S - L - 1
    lost = float(np.sum(p0[top:])) / float(np.sum(p0))
    if lost > tail_tol * 10:
        raise CapacityError(f"initial-altitude cap discards mass {lost:.2e} > tail_tol")
    p0 = p0[:top]
    p0 = p0 / np.sum(p0)
    rng = np.random.default_rng(seed)
    cdf = np.cumsum(p0)
    states = np.searchsorted(cdf, rng.random(count), side="right").astype(np.int64)
    paths = np.empty((count, L + 1), dtype=np.int64)
    paths[:, 0] = states
    for k in range(L):
        nxt = u[k + 1]
        pu = a[states] * nxt[states + 1]
        pf = b[states] * nxt[states]
        pd = np.where(states > 0, c[states] * nxt[np.maximum(states - 1, 0)], 0.0)
        total = pu + pf + pd
        r = rng.random(count) * total
        step = np.where(r < pu, 1, np.where(r < pu + pf, 0, -1))
        states = states + step
        paths[:, k + 1] = states
    return paths


def sample_path(L: int, model: WeightModel, height_cap: int | None = None,
                tail_tol: float = 1e-12, seed: int = 0) -> MotzkinPath:
    """One exact sample from the path measure."""
    row = sample_paths(L, model, 1, seed, height_cap, tail_tol)[0]
    return MotzkinPath(tuple(int(x) for x in row))


# ------------------------------------------------------------- serialization

def path_line(path: MotzkinPath) -> str:
    """One path per line: comma-separated altitudes."""
    return ",".join(str(a) for a in path.altitudes)


def parse_path_line(line: str) -> MotzkinPath:
    return MotzkinPath(tuple(int(tok) for tok in line.strip().split(",")))
