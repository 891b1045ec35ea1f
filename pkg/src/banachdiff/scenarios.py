"""Worked example equations, the scalar 2-cycle analysis and parameter scans."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .algebra import Algebra, GridAlgebra, RealAlgebra
from .equations import CoefficientSequence, LinearArgEquation, NonlinearitySpec
from .errors import ConfigError

GLOBAL = "global_convergence"
LOCAL = "local_basin"
REPELLING = "repelling_origin"
INVALID = "invalid"


# -- equation builders ------------------------------------------------------

def make_dham(
    a: float,
    k: int,
    sigma: float,
    sequence: CoefficientSequence | None = None,
) -> LinearArgEquation:
    """``x_{n+1} = a x_n + alpha_n tanh(x_n - a^k x_{n-k})`` on the reals.

    ``alpha_n`` comes from ``sequence`` (bounded by ``sigma``) or is the
    constant ``sigma``. The common root ``rho = a`` is attached.
    """
    if not 0 < abs(a) < 1:
        raise ConfigError(f"0 < |a| < 1 violated: a = {a}")
    if k < 1:
        raise ConfigError(f"delay k must be at least 1, got {k}")
    alg = RealAlgebra()
    a_coef = (a,) + (0.0,) * k
    b_coef = (1.0,) + (0.0,) * (k - 1) + (-(a**k),)
    g = NonlinearitySpec("pointwise_tanh", sigma, sequence)
    eq = LinearArgEquation(alg, a_coef, b_coef, g, known_root=a, name="dham",
                           params={"a": a, "k": k, "sigma": sigma})
    eq.require_nondegenerate()
    return eq


def make_gla0(alg: Algebra, a: Any, b_head: Sequence[Any], g: NonlinearitySpec) -> LinearArgEquation:
    """``x_{n+1} = a x_n + g_n(b_0 x_n + ... + b_k x_{n-k})``.

    ``b_head`` holds ``b_0..b_{k-1}``; ``b_k`` is chosen so that ``a`` is a
    root of ``Q``: ``b_k = -(b_0 a^k + ... + b_{k-1} a)``.
    """
    b_head = [alg.element(v) for v in b_head]
    a = alg.element(a)
    k = len(b_head)
    if k < 1:
        raise ConfigError("need at least one leading argument coefficient")
    b_k = alg.neg(alg.sum(alg.mul(b_i, alg.power(a, k - i)) for i, b_i in enumerate(b_head)))
    eq = LinearArgEquation(alg, (a,) + (alg.zero(),) * k, tuple(b_head) + (b_k,), g,
                           known_root=a, name="gla0")
    eq.require_nondegenerate()
    return eq


def make_gla1(
    alg: Algebra,
    a_head: Sequence[Any],
    b: Any,
    g: NonlinearitySpec,
    a_last: Any = None,
) -> LinearArgEquation:
    """``x_{n+1} = sum a_i x_{n-i} + g_n(x_n - b x_{n-1})``.

    ``a_head`` holds ``a_0..a_{k-1}``. Without ``a_last`` the final
    coefficient is solved from ``a_0 b^k + ... + a_k = b^(k+1)`` so that
    ``b`` is a common root; the product order is kept for matrices.
    """
    a_head = [alg.element(v) for v in a_head]
    b = alg.element(b)
    k = len(a_head)
    if k < 1:
        raise ConfigError("need at least one leading linear coefficient")
    if a_last is None:
        a_last = alg.power(b, k + 1)
        for i, a_i in enumerate(a_head):
            a_last = alg.sub(a_last, alg.mul(a_i, alg.power(b, k - i)))
    else:
        a_last = alg.element(a_last)
    b_arg = (alg.one(), alg.neg(b)) + (alg.zero(),) * (k - 1)
    eq = LinearArgEquation(alg, tuple(a_head) + (a_last,), b_arg, g, known_root=b, name="gla1")
    eq.require_nondegenerate()
    return eq


def make_gla2(
    a0: Any,
    b: Any,
    g: NonlinearitySpec,
    a1: Any = None,
    alg: Algebra | None = None,
) -> LinearArgEquation:
    """``x_{n+1} = a_0 x_n + a_1 x_{n-1} + g_n(x_n - b x_{n-1})``.

    ``a1`` defaults to ``b^2 - a_0 b`` which makes ``b`` a common root.
    """
    alg = RealAlgebra() if alg is None else alg
    eq = make_gla1(alg, [a0], b, g, a_last=a1)
    return LinearArgEquation(eq.alg, eq.a, eq.b, eq.g, known_root=eq.known_root, name="gla2")


def make_c01(
    alpha: float,
    beta: float,
    sigma: float,
    m: int = 101,
    phi: str = "sin",
    sequence: CoefficientSequence | None = None,
) -> LinearArgEquation:
    """The integral equation on C[0,1] with coefficient functions

    ``a_0(r) = alpha r/(r+1)``, ``a_1(r) = beta(beta - alpha r)/(r+1)^2``,
    ``b(r) = beta/(r+1)`` and ``g_n(x)(r) = int_0^r phi_n(x(s)) ds``.
    """
    if not 0 < beta < 1:
        raise ConfigError(f"0 < β < 1 violated: beta = {beta}")
    if not 3 * beta <= alpha:
        raise ConfigError(f"3β ≤ α violated: 3*beta = {3 * beta}, alpha = {alpha}")
    if not alpha < 2 + beta:
        raise ConfigError(f"α < 2+β violated: alpha = {alpha}, 2+beta = {2 + beta}")
    bound = (2 + beta - alpha) / 2
    if not sigma < bound:
        raise ConfigError(f"σ < (2+β−α)/2 violated: sigma = {sigma}, bound = {bound}")
    alg = GridAlgebra(m)
    a0 = alg.from_function(lambda r: alpha * r / (r + 1))
    a1 = alg.from_function(lambda r: beta * (beta - alpha * r) / (r + 1) ** 2)
    b = alg.from_function(lambda r: beta / (r + 1))
    g = NonlinearitySpec("cumulative_integral", sigma, sequence, phi=phi)
    b_arg = (alg.one(), alg.neg(b))
    eq = LinearArgEquation(alg, (a0, a1), b_arg, g, known_root=b, name="c01",
                           params={"alpha": alpha, "beta": beta, "sigma": sigma, "m": m})
    eq.require_nondegenerate()
    return eq


def make_th(a: float, b: float, sigma: float) -> LinearArgEquation:
    """``x_{n+1} = a x_n + b(b-a) x_{n-1} + sigma tanh(x_n - b x_{n-1})``."""
    _check_th(a, b, sigma)
    g = NonlinearitySpec("pointwise_tanh", sigma)
    eq = LinearArgEquation(RealAlgebra(), (a, b * (b - a)), (1.0, -b), g, known_root=b,
                           name="th", params={"a": a, "b": b, "sigma": sigma})
    eq.require_nondegenerate()
    return eq


def _check_th(a: float, b: float, sigma: float) -> None:
    if not sigma > 0:
        raise ConfigError(f"σ > 0 violated: sigma = {sigma}")
    if not 0 < b < 1:
        raise ConfigError(f"0 < b < 1 violated: b = {b}")
    if not a < b:
        raise ConfigError(f"a < b violated: a = {a}, b = {b}")


# -- the scalar factor map ---------------------------------------------------

def h_map(a: float, b: float, sigma: float, xi: float) -> float:
    """``h(xi) = (a - b) xi + sigma tanh(xi)``."""
    return (a - b) * xi + sigma * math.tanh(xi)


def _cycle_gap(a, b, sigma, tau):
    # zero exactly where h(tau) = -tau
    return sigma * math.tanh(tau) - (b - a - 1) * tau


def find_tau(a: float, b: float, sigma: float, tol: float = 1e-12) -> float | None:
    """Positive ``tau`` with ``h(tau) = -tau``, i.e. the 2-cycle ``{-tau, tau}``.

    Bisection on ``sigma tanh(tau) - (b - a - 1) tau``. None when no
    positive solution exists (``a >= b - 1`` or ``a <= b - sigma - 1``).
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    slope = b - a - 1
    if slope <= 0 or sigma <= slope:
        return None
    lo = tol
    while _cycle_gap(a, b, sigma, lo) <= 0:
        lo *= 0.5
        if lo < 1e-300:
            return None
    hi = 1.0
    while _cycle_gap(a, b, sigma, hi) >= 0:
        hi *= 2
        if hi > 1e6:
            return None
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _cycle_gap(a, b, sigma, mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def sig_ok(a: float, b: float, sigma: float) -> bool:
    """``sigma < 1 - a + b``."""
    return sigma < 1 - a + b


def classify_regime(a: float, b: float, sigma: float) -> str:
    """Dynamic regime of the origin for the tanh second-order model.

    ``invalid`` marks parameters outside ``a < b`` or ``sigma < 1 - a + b``.
    """
    if not (a < b and sig_ok(a, b, sigma)):
        return INVALID
    if a >= b - 1:
        return GLOBAL
    if a > b - sigma - 1:
        return LOCAL
    return REPELLING


def basin_probe(
    a: float,
    b: float,
    sigma: float,
    t0: float,
    N: int = 10_000,
    bound: float = 1e6,
    eps: float = 1e-9,
) -> str:
    """Iterate ``t_{n+1} = h(t_n)`` and report its fate."""
    t = t0
    for _ in range(N + 1):
        if abs(t) < eps:
            return "converged"
        if abs(t) > bound:
            return "diverged"
        t = h_map(a, b, sigma, t)
    return "undecided"


@dataclass
class ScanRecord:
    a: float
    sig_ok: bool
    regime: str
    tau: float | None


@dataclass
class BifurcationScan:
    b: float
    sigma: float
    a_grid: list
    records: list = field(default_factory=list)

    def regimes(self) -> list[str]:
        return [r.regime for r in self.records]

    def bands(self) -> list[tuple[str, float, float]]:
        """Contiguous runs of one regime as ``(regime, a_first, a_last)``."""
        out = []
        for r in self.records:
            if out and out[-1][0] == r.regime:
                out[-1] = (r.regime, out[-1][1], r.a)
            else:
                out.append((r.regime, r.a, r.a))
        return out


def bifurcation_scan(
    b: float,
    sigma: float,
    a_min: float,
    a_max: float,
    steps: int,
    tol: float = 1e-12,
) -> BifurcationScan:
    """Classify every point of a uniform grid of ``a`` values."""
    if steps < 2:
        raise ValueError("steps must be at least 2")
    grid = [float(a) for a in np.linspace(a_min, a_max, steps)]
    scan = BifurcationScan(b, sigma, grid)
    for a in grid:
        regime = classify_regime(a, b, sigma)
        tau = find_tau(a, b, sigma, tol) if regime == LOCAL else None
        scan.records.append(ScanRecord(a, sig_ok(a, b, sigma), regime, tau))
    return scan


# -- random models for property checks --------------------------------------

def random_init(alg: Algebra, order: int, rng: np.random.Generator, scale: float = 1.0) -> list:
    """``order`` random states with entries uniform on ``[-scale, scale]``."""
    return [alg.scale(scale, alg.random_element(rng)) for _ in range(order)]


_FAMILIES_BY_KIND = {
    "real": ("linear_scale", "norm_saturated", "pointwise_tanh", "pointwise_sin",
             "pointwise_arctan", "rational_cubic"),
    "complex": ("linear_scale", "norm_saturated"),
    "matrix": ("linear_scale", "norm_saturated"),
    "grid": ("linear_scale", "norm_saturated", "pointwise_tanh", "pointwise_sin",
             "cumulative_integral"),
}


def random_contractive(alg: Algebra, rng: np.random.Generator, k_max: int = 4) -> LinearArgEquation:
    """Random equation whose direct bound ``sum(|a_i| + sigma |b_i|)`` lies in [0.3, 0.97).

    The nonlinearity uses a seeded random coefficient sequence so the
    model is genuinely non-autonomous.
    """
    k = int(rng.integers(1, k_max + 1))
    family = str(rng.choice(_FAMILIES_BY_KIND[alg.kind]))
    sigma = float(rng.uniform(0.1, 2.0))
    seq = CoefficientSequence("random", seed=int(rng.integers(0, 2**31)), bound=sigma)
    g = NonlinearitySpec(family, sigma, seq, phi=str(rng.choice(["sin", "tanh", "arctan"])))
    a = [alg.random_element(rng) for _ in range(k + 1)]
    b = [alg.random_element(rng) for _ in range(k + 1)]
    raw = sum(alg.norm(x) for x in a) + sigma * sum(alg.norm(x) for x in b)
    target = float(rng.uniform(0.3, 0.97))
    c = target / raw
    eq = LinearArgEquation(alg, tuple(alg.scale(c, x) for x in a),
                           tuple(alg.scale(c, x) for x in b), g, name="random")
    eq.require_nondegenerate()
    return eq
