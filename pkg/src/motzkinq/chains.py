"""Boundary birth-death chains of the weighted Motzkin path measure.

As the path length grows, the altitudes near either endpoint converge to a
Markov chain whose one-step probabilities are built from the right-endpoint
polynomial values:

    up(n)   = (1 - q^{n+1}) s_{n+1} / (2 (1+sigma) s_n)
    flat(n) = (1 - q^{n+1}) sigma / (1 + sigma)
    down(n) = (1 - q^{n+1}) s_{n-1} / (2 (1+sigma) s_n)       (s_{-1} = 0)

with initial laws  P(X_0 = n) ~ rho0^n s_n  and  P(Y_0 = n) ~ rho1^n s_n.
k-step probabilities come either from tridiagonal iteration (default) or
from the orthogonality-measure integral

    P(X_k = n | X_0 = m) = (pi_n / pi_m) B^{-k} int x^k p_m(x) ptilde_n(x) nu(dx),

kept as a cross-validation route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ascpoly import QModelParams, motzkin_poly_table, nu_integrate, q_number, s_values
from .errors import CapacityError, ConvergenceError
from .motzkin import WeightModel, _col_step, _row_step
from .numerics import (
    DEFAULT_QUADRATURE,
    DEFAULT_TRUNCATION,
    QuadraturePolicy,
)
from .qspecial import qpoch_infinite

__all__ = [
    "Distribution",
    "ChainSpec",
    "transition_row",
    "transition_arrays",
    "initial_law",
    "kstep_distribution",
    "kstep_transition_integral",
    "simulate_chain",
    "finite_path_head_law",
    "chain_head_law",
    "tv_distance",
    "endpoint_pair_correlation",
]


@dataclass(frozen=True)
class Distribution:
    """Probability vector over consecutive nonnegative integers."""

    offset: int
    probs: np.ndarray

    def __post_init__(self) -> None:
        if self.offset < 0:
            raise ValueError("offset must be nonnegative")
        if np.any(np.asarray(self.probs) < 0.0):
            raise ValueError("probabilities must be nonnegative")

    def total(self) -> float:
        return float(np.sum(self.probs))

    def mean(self) -> float:
        ns = np.arange(self.offset, self.offset + len(self.probs))
        return float(np.dot(ns, self.probs)) / self.total()

    def prob(self, n: int) -> float:
        i = n - self.offset
        if 0 <= i < len(self.probs):
            return float(self.probs[i])
        return 0.0

    @staticmethod
    def point_mass(n: int) -> "Distribution":
        return Distribution(offset=n, probs=np.array([1.0]))

    def rows(self):
        for i, p in enumerate(self.probs):
            yield self.offset + i, float(p)

    def to_csv(self) -> str:
        """CSV serialization with columns n, probability."""
        lines = ["n,probability"]
        lines.extend(f"{n},{p:.17g}" for n, p in self.rows())
        return "\n".join(lines) + "\n"


class ChainSpec:
    """Boundary chain of a weight model.

    For the q-model the endpoint values are cached as the convolution array
    s_0..s_height and extended on demand (growth is not thread-safe; build
    with the final height up front when sharing across threads).  A general
    model needs the endpoint B and a table of right-endpoint polynomial
    values pi_n.
    """

    def __init__(self, model: QModelParams, height: int = 256):
        self.model = model
        self._s = s_values(height + 2, model)

    @staticmethod
    def from_weight_model(wm: WeightModel, B: float, pis: np.ndarray) -> "GeneralChainSpec":
        return GeneralChainSpec(wm, B, pis)

    def _ensure(self, n: int) -> None:
        if n + 2 >= len(self._s):
            self._s = s_values(max(2 * len(self._s), n + 2), self.model)

    def s(self, n: int) -> float:
        if n < 0:
            return 0.0
        self._ensure(n)
        return float(self._s[n])

    def pi(self, n: int) -> float:
        if n < 0:
            return 0.0
        return self.s(n) / q_number(n + 1, self.model.q) if n else self.s(0)

    def up(self, n: int) -> float:
        m = self.model
        return (1.0 - m.q ** (n + 1)) * self.s(n + 1) / (2.0 * (1.0 + m.sigma) * self.s(n))

    def flat(self, n: int) -> float:
        m = self.model
        return (1.0 - m.q ** (n + 1)) * m.sigma / (1.0 + m.sigma)

    def down(self, n: int) -> float:
        if n == 0:
            return 0.0
        m = self.model
        return (1.0 - m.q ** (n + 1)) * self.s(n - 1) / (2.0 * (1.0 + m.sigma) * self.s(n))


class GeneralChainSpec:
    """Boundary chain from explicit weights, endpoint B, and pi values."""

    def __init__(self, wm: WeightModel, B: float, pis: np.ndarray):
        if B <= 0:
            raise ValueError("endpoint B must be positive")
        pis = np.asarray(pis, dtype=float)
        if np.any(pis <= 0.0):
            raise ValueError("pi values must be strictly positive")
        self.wm = wm
        self.B = B
        self._pi = pis

    def pi(self, n: int) -> float:
        if n < 0:
            return 0.0
        if n >= len(self._pi):
            raise CapacityError(f"pi table holds {len(self._pi)} levels, needs {n + 1}")
        return float(self._pi[n])

    def up(self, n: int) -> float:
        return self.wm.up(n) * self.pi(n + 1) / (self.B * self.pi(n))

    def flat(self, n: int) -> float:
        return self.wm.flat(n) / self.B

    def down(self, n: int) -> float:
        if n == 0:
            return 0.0
        return self.wm.down(n) * self.pi(n - 1) / (self.B * self.pi(n))


def transition_row(n: int, spec) -> Distribution:
    """One-step distribution from altitude n (support {n-1, n, n+1})."""
    if n < 0:
        raise ValueError("altitude must be nonnegative")
    up, flat, down = spec.up(n), spec.flat(n), spec.down(n)
    if n == 0:
        return Distribution(offset=0, probs=np.array([flat, up]))
    return Distribution(offset=n - 1, probs=np.array([down, flat, up]))


def transition_arrays(spec, cap: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(up, flat, down) probability tables for altitudes 0..cap."""
    if isinstance(spec, ChainSpec):
        spec._ensure(cap + 1)
        m = spec.model
        s = spec._s
        ns = np.arange(cap + 1)
        decay = 1.0 - np.power(m.q, ns + 1)
        up = decay * s[1:cap + 2] / (2.0 * (1.0 + m.sigma) * s[:cap + 1])
        flat = decay * m.sigma / (1.0 + m.sigma)
        down = np.empty(cap + 1)
        down[0] = 0.0
        down[1:] = decay[1:] * s[:cap] / (2.0 * (1.0 + m.sigma) * s[1:cap + 1])
        return up, flat, down
    up = np.array([spec.up(n) for n in range(cap + 1)])
    flat = np.array([spec.flat(n) for n in range(cap + 1)])
    down = np.array([spec.down(n) for n in range(cap + 1)])
    return up, flat, down


def initial_law(which: str, spec: ChainSpec, tail_tol: float = 1e-12) -> Distribution:
    """Initial distribution of the head chain (which='X', weight rho0) or
    the tail chain (which='Y', weight rho1): P(n) = rho^n s_n / C with the
    closed-form normalizer C = (a rho, b rho; q)_inf / (rho; q)_inf^2.
    """
    m = spec.model
    if which not in ("X", "Y"):
        raise ValueError("which must be 'X' or 'Y'")
    rho = m.rho0 if which == "X" else m.rho1
    if not (0.0 <= rho < 1.0):
        raise ValueError(f"boundary weight rho={rho} must lie in [0, 1)")
    if rho == 0.0:
        return Distribution.point_mass(0)
    q = m.q
    C = (qpoch_infinite(m.asc_a * rho, q) * qpoch_infinite(m.asc_b * rho, q)).real \
        / qpoch_infinite(rho, q) ** 2
    probs = []
    acc = 0.0
    n = 0
    while True:
        term = rho**n * spec.s(n) / C
        probs.append(term)
        acc += term
        if n > 10 and term < tail_tol * acc * (1.0 - rho) / 2.0:
            break
        if n > 1_000_000:
            raise ConvergenceError("initial law truncation did not terminate")
        n += 1
    return Distribution(offset=0, probs=np.array(probs))


def _iterate_tridiagonal(vec: np.ndarray, k: int, up: np.ndarray, flat: np.ndarray,
                         down: np.ndarray) -> tuple[np.ndarray, float]:
    """k tridiagonal steps; returns (vector, mass lost past the cap)."""
    v = vec.astype(float).copy()
    lost = 0.0
    for _ in range(k):
        lost += up[-1] * v[-1]
        new = flat * v
        new[1:] += up[:-1] * v[:-1]
        new[:-1] += down[1:] * v[1:]
        v = new
    return v, lost


def kstep_distribution(start: Distribution, k: int, spec, height_cap: int,
                       strict: bool = True) -> Distribution:
    """Distribution after k steps from ``start`` on states 0..height_cap.

    With ``strict`` the cap must cover the reachable support (no truncation
    loss); otherwise the leaked mass must stay below 1e-9.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    max_support = start.offset + len(start.probs) - 1
    if strict and height_cap < max_support + k:
        raise CapacityError(
            f"height_cap={height_cap} < max support + k = {max_support + k}")
    up, flat, down = transition_arrays(spec, height_cap)
    vec = np.zeros(height_cap + 1)
    vec[start.offset: start.offset + len(start.probs)] = start.probs
    out, lost = _iterate_tridiagonal(vec, k, up, flat, down)
    if lost > 1e-9 * max(start.total(), 1e-300):
        raise CapacityError(f"cap leaked probability mass {lost:.3e}")
    return Distribution(offset=0, probs=out)


def kstep_transition_integral(m: int, n: int, k: int, spec: ChainSpec,
                              quad: QuadraturePolicy = DEFAULT_QUADRATURE) -> float:
    """P(X_k = n | X_0 = m) through the orthogonality-measure moment
    integral; cross-validates the tridiagonal route.

    The factor x^k concentrates near the right endpoint, so node doubling is
    capped (a :class:`ConvergenceError` is preferable to a silently
    inaccurate value).
    """
    qm = spec.model
    B = qm.support().B
    nmax = max(m, n)

    def integrand(x):
        tbl = motzkin_poly_table(nmax, x, qm)
        return (x / B) ** k * tbl[m] * tbl[n]

    val = nu_integrate(integrand, qm, quad, DEFAULT_TRUNCATION)
    return spec.pi(n) / spec.pi(m) * q_number(n + 1, qm.q) * val


def simulate_chain(spec, steps: int, seed: int, start: int | None = None) -> np.ndarray:
    """Trajectory of the boundary chain, drawn from the initial law unless a
    fixed start altitude is given.  Deterministic per seed."""
    rng = np.random.default_rng(seed)
    if start is None:
        law = initial_law("X", spec)
        cdf = np.cumsum(law.probs)
        state = int(law.offset + np.searchsorted(cdf, rng.random() * cdf[-1], side="right"))
    else:
        state = int(start)
    cap = state + 4 * int(math.sqrt(steps + 1)) + 64
    up, flat, down = transition_arrays(spec, cap)
    out = np.empty(steps + 1, dtype=np.int64)
    out[0] = state
    draws = rng.random(steps)
    for i in range(steps):
        if state + 1 >= cap:
            cap = 2 * cap + 16
            up, flat, down = transition_arrays(spec, cap)
        r = draws[i]
        if r < up[state]:
            state += 1
        elif r < up[state] + flat[state]:
            pass
        else:
            state -= 1 if state > 0 else 0
            # residual rounding mass joins the down branch; at state 0 the
            # row has no down component so the flat branch absorbs it
        out[i + 1] = state
    return out


# ----------------------------------------------- exact finite-length laws

def finite_path_head_law(wm: WeightModel, L: int, K: int,
                         tail_tol: float = 1e-10) -> dict[tuple[int, ...], float]:
    """Exact joint law of (g_0, ..., g_K) under the length-L path measure,
    computed by conditioning transfer vectors (no sampling).

    Tuples with initial altitude above the boundary-decay cutoff are
    dropped; the missing mass is below tail_tol.
    """
    from .motzkin import _boundary_cutoff

    if K >= L:
        raise ValueError("need K < L")
    T = _boundary_cutoff(wm, tail_tol)
    S = T + L + 2
    a, b, c = wm.weight_arrays(S)
    av, bv = wm.boundary_arrays(S)
    u = bv.astype(float)
    scale = 0.0
    for j in range(L - K):
        u = _col_step(u, a, b, c, 1.0)
        peak = float(np.max(u))
        u /= peak
        scale += math.log(peak)
    # u ~ M_1^{L-K} W_beta up to exp(scale); same factor cancels in C below
    uk = u
    u0 = uk.copy()
    for j in range(K):
        u0 = _col_step(u0, a, b, c, 1.0)
    C = float(np.dot(av, u0))
    law: dict[tuple[int, ...], float] = {}

    def walk(prefix: list[int], weight: float) -> None:
        h = prefix[-1]
        if len(prefix) == K + 1:
            p = weight * uk[h] / C
            if p > 0.0:
                law[tuple(prefix)] = p
            return
        for step in (1, 0, -1):
            nh = h + step
            if nh < 0 or nh >= S - 1:
                continue
            w = a[h] if step == 1 else (b[h] if step == 0 else c[h])
            if w == 0.0:
                continue
            prefix.append(nh)
            walk(prefix, weight * w)
            prefix.pop()

    for m in range(T + 1):
        if av[m] > 0.0:
            walk([m], float(av[m]))
    return law


def chain_head_law(spec: ChainSpec, which: str, K: int,
                   tail_tol: float = 1e-10) -> dict[tuple[int, ...], float]:
    """Joint law of the first K+1 chain states (X_0..X_K or Y_0..Y_K)."""
    init = initial_law(which, spec, tail_tol)
    law: dict[tuple[int, ...], float] = {}

    def walk(prefix: list[int], p: float) -> None:
        if p <= 0.0:
            return
        if len(prefix) == K + 1:
            law[tuple(prefix)] = p
            return
        h = prefix[-1]
        row = transition_row(h, spec)
        for nh, pr in row.rows():
            prefix.append(nh)
            walk(prefix, p * pr)
            prefix.pop()

    for n, p in init.rows():
        walk([n], p)
    return law


def tv_distance(law1: dict[tuple[int, ...], float],
                law2: dict[tuple[int, ...], float]) -> float:
    """Total-variation distance of two (possibly truncated) discrete laws;
    unassigned mass counts toward the distance, making this an upper bound."""
    keys = set(law1) | set(law2)
    diff = sum(abs(law1.get(k, 0.0) - law2.get(k, 0.0)) for k in keys)
    tail1 = max(0.0, 1.0 - sum(law1.values()))
    tail2 = max(0.0, 1.0 - sum(law2.values()))
    return 0.5 * (diff + tail1 + tail2)


def endpoint_pair_correlation(wm: WeightModel, L: int,
                              tail_tol: float = 1e-10) -> float:
    """Correlation of (g_0, g_L) under the exact length-L path measure."""
    from .motzkin import _boundary_cutoff

    T = _boundary_cutoff(wm, tail_tol)
    S = T + L + 2
    a, b, c = wm.weight_arrays(S)
    av, bv = wm.boundary_arrays(S)
    joint = np.zeros((T + 1, S))
    for m in range(T + 1):
        if av[m] == 0.0:
            continue
        v = np.zeros(S)
        v[m] = 1.0
        scale = 0.0
        for _ in range(L):
            v = _row_step(v, a, b, c, 1.0)
            peak = float(np.max(v))
            if peak > 1e250:
                v /= peak
                scale += math.log(peak)
        joint[m] = av[m] * v * bv * math.exp(scale)
    joint /= joint.sum()
    ms = np.arange(T + 1)
    ns = np.arange(S)
    pm = joint.sum(axis=1)
    pn = joint.sum(axis=0)
    em, en = float(np.dot(ms, pm)), float(np.dot(ns, pn))
    vm = float(np.dot(ms**2, pm)) - em**2
    vn = float(np.dot(ns**2, pn)) - en**2
    cov = float(ms @ joint @ ns) - em * en
    return cov / math.sqrt(vm * vn)
