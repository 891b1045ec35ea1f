"""Difference equations with linear arguments and their iteration.

The model is

    x[n+1] = sum_i a_i x[n-i] + g_n( sum_i b_i x[n-i] ),   i = 0..k,

over any :class:`~banachdiff.algebra.Algebra`. Coefficients multiply the
state on the left. ``g_n`` comes from a small catalog of families, each
bounded by a declared ``sigma`` in the sense ``|g_n(xi)| <= sigma |xi|``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .algebra import Algebra
from .errors import ConfigError

#: iteration stops once a state norm exceeds this value
DIVERGENCE_GUARD = 1e12

POINTWISE_MAPS = {
    "sin": np.sin,
    "tanh": np.tanh,
    "arctan": np.arctan,
    "identity": lambda t: t,
}

# family name -> algebra kinds it may be used with (None: any)
FAMILIES: dict[str, frozenset[str] | None] = {
    "linear_scale": None,
    "norm_saturated": None,
    "pointwise_tanh": frozenset({"real", "grid"}),
    "pointwise_sin": frozenset({"real", "grid"}),
    "pointwise_arctan": frozenset({"real", "grid"}),
    "rational_cubic": frozenset({"real"}),
    "cumulative_integral": frozenset({"grid"}),
}


@dataclass(frozen=True)
class CoefficientSequence:
    """Per-step real multipliers ``c_n`` of a nonlinearity.

    ``rule`` is one of ``constant`` (``values[0]`` for all n), ``periodic``
    (``values[n % len(values)]``) or ``random`` (uniform on
    ``[-bound, bound]``, reproducible from ``seed`` for any n in any order).
    """

    rule: str = "constant"
    values: tuple[float, ...] = ()
    seed: int = 0
    bound: float | None = None

    def __post_init__(self):
        if self.rule not in ("constant", "periodic", "random"):
            raise ConfigError(f"unknown sequence rule {self.rule!r}")
        if self.rule in ("constant", "periodic") and not self.values:
            raise ConfigError(f"{self.rule} sequence needs at least one value")
        if self.rule == "random" and (self.bound is None or self.bound < 0):
            raise ConfigError("random sequence needs a nonnegative bound")
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    def __call__(self, n: int) -> float:
        if self.rule == "constant":
            return self.values[0]
        if self.rule == "periodic":
            return self.values[n % len(self.values)]
        rng = np.random.default_rng((self.seed, n))
        return float(rng.uniform(-self.bound, self.bound))

    def max_abs(self) -> float:
        if self.rule == "random":
            return float(self.bound)
        return max(abs(v) for v in self.values)


@dataclass(frozen=True)
class NonlinearitySpec:
    """A family of maps ``g_n`` together with its declared bound ``sigma``.

    Every family has the form ``g_n(xi) = c_n * base(xi)`` where ``base``
    satisfies ``|base(xi)| <= |xi|`` and ``|c_n| <= sigma``. Without an
    explicit sequence, ``c_n = sigma`` for every n.
    """

    family: str
    sigma: float
    sequence: CoefficientSequence | None = None
    phi: str = "sin"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown nonlinearity family {self.family!r}")
        if not self.sigma > 0:
            raise ConfigError(f"sigma must be positive, got {self.sigma}")
        if self.phi not in POINTWISE_MAPS:
            raise ConfigError(f"unknown integrand map {self.phi!r}")
        if self.sequence is not None and self.sequence.max_abs() > self.sigma:
            raise ConfigError(
                f"coefficient sequence reaches {self.sequence.max_abs()}, "
                f"above the declared sigma={self.sigma} (|g_n(xi)| <= sigma|xi|)"
            )

    def coefficient(self, n: int) -> float:
        if self.sequence is None:
            return self.sigma
        return self.sequence(n)

    def supports(self, alg: Algebra) -> bool:
        kinds = FAMILIES[self.family]
        return kinds is None or alg.kind in kinds

    def __call__(self, alg: Algebra, n: int, xi: Any) -> Any:
        return apply_nonlinearity(self, alg, n, xi)


def cumulative_trapezoid(values: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Running trapezoid integral starting at 0 on the first point."""
    steps = np.diff(points) * 0.5 * (values[1:] + values[:-1])
    return np.concatenate(([0.0], np.cumsum(steps)))


def apply_nonlinearity(g: NonlinearitySpec, alg: Algebra, n: int, xi: Any) -> Any:
    """Evaluate ``g_n(xi)``."""
    if not g.supports(alg):
        raise ConfigError(f"nonlinearity {g.family!r} is not defined on the {alg.kind} algebra")
    xi = alg.check(xi)
    c = g.coefficient(n)
    family = g.family
    if family == "linear_scale":
        return alg.scale(c, xi)
    if family == "norm_saturated":
        return alg.scale(c / max(1.0, alg.norm(xi)), xi)
    if family == "pointwise_tanh":
        return alg.check(c * np.tanh(xi)) if alg.kind == "grid" else c * float(np.tanh(xi))
    if family == "pointwise_sin":
        return alg.check(c * np.sin(xi)) if alg.kind == "grid" else c * float(np.sin(xi))
    if family == "pointwise_arctan":
        return alg.check(c * np.arctan(xi)) if alg.kind == "grid" else c * float(np.arctan(xi))
    if family == "rational_cubic":
        return c * xi**3 / (1.0 + xi**2)
    if family == "cumulative_integral":
        integrand = c * POINTWISE_MAPS[g.phi](xi)
        return cumulative_trapezoid(integrand, alg.points)
    raise ConfigError(f"unknown nonlinearity family {family!r}")  # pragma: no cover


def sigma_spot_check(g: NonlinearitySpec, alg: Algebra, samples: int = 1000, seed: int = 0) -> float:
    """Largest observed ``|g_n(xi)| / |xi|`` over random ``n`` and ``xi``.

    Magnitudes of ``xi`` are spread over six decades so that saturating
    families are probed both near zero and far out.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        xi = alg.random_element(rng)
        xi = alg.scale(10.0 ** rng.uniform(-3, 3), xi)
        nxi = alg.norm(xi)
        if nxi == 0.0:
            continue
        n = int(rng.integers(0, 10_000))
        worst = max(worst, alg.norm(apply_nonlinearity(g, alg, n, xi)) / nxi)
    return worst


@dataclass(frozen=True, eq=False)
class LinearArgEquation:
    """Coefficients ``a_0..a_k``, ``b_0..b_k`` and the maps ``g_n``.

    ``known_root`` optionally carries a common root of the associated
    polynomials, attached by the scenario builders.
    """

    alg: Algebra
    a: tuple
    b: tuple
    g: NonlinearitySpec
    known_root: Any = None
    name: str = "general"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.a) != len(self.b) or not self.a:
            raise ConfigError(
                f"need equally many a and b coefficients, got {len(self.a)} and {len(self.b)}"
            )
        object.__setattr__(self, "a", tuple(self.alg.check(x) for x in self.a))
        object.__setattr__(self, "b", tuple(self.alg.check(x) for x in self.b))
        if not self.g.supports(self.alg):
            raise ConfigError(
                f"nonlinearity {self.g.family!r} is not defined on the {self.alg.kind} algebra"
            )

    @property
    def k(self) -> int:
        return len(self.a) - 1

    @property
    def order(self) -> int:
        return len(self.a)

    @property
    def sigma(self) -> float:
        return self.g.sigma

    def require_nondegenerate(self) -> None:
        """Enforce ``a_k != 0 or b_k != 0`` so the order is what it claims."""
        if self.alg.norm(self.a[-1]) == 0.0 and self.alg.norm(self.b[-1]) == 0.0:
            raise ConfigError("a_k ≠ 0 or b_k ≠ 0 violated: both last coefficients are zero")


def step(eq: LinearArgEquation, history: Sequence[Any], n: int) -> Any:
    """One application of the recurrence; ``history`` is newest first."""
    if len(history) != eq.order:
        raise ConfigError(f"history must hold {eq.order} states, got {len(history)}")
    alg = eq.alg
    linear = alg.zero()
    argument = alg.zero()
    for a_i, b_i, h_i in zip(eq.a, eq.b, history):
        linear = alg.add(linear, alg.mul(a_i, h_i))
        argument = alg.add(argument, alg.mul(b_i, h_i))
    return alg.add(linear, apply_nonlinearity(eq.g, alg, n, argument))


@dataclass(eq=False)
class Trajectory:
    """States ``x_{-k} .. x_N`` in time order plus their norms."""

    alg: Algebra
    k: int
    values: list
    norms: np.ndarray
    diverged: bool = False
    start: int = 0
    meta: dict = field(default_factory=dict)

    @classmethod
    def from_values(cls, alg: Algebra, k: int, values: Sequence[Any], **kw) -> "Trajectory":
        values = [alg.check(v) for v in values]
        if len(values) < k + 1:
            raise ConfigError(f"a trajectory needs at least {k + 1} states")
        norms = np.array([alg.norm(v) for v in values])
        return cls(alg, k, values, norms, **kw)

    @property
    def mu(self) -> float:
        return float(self.norms[: self.k + 1].max())

    @property
    def steps(self) -> int:
        return len(self.values) - self.k - 1

    @property
    def times(self) -> np.ndarray:
        return np.arange(-self.k, self.steps + 1) + self.start

    def at(self, n: int) -> Any:
        """State at time ``n`` (``-k + start <= n <= steps + start``)."""
        idx = n - self.start + self.k
        if not 0 <= idx < len(self.values):
            raise IndexError(f"time {n} outside trajectory")
        return self.values[idx]

    def tail(self) -> list:
        """The last ``k+1`` states, oldest first (initial values to resume from)."""
        return self.values[-(self.k + 1):]


def iterate(
    eq: LinearArgEquation,
    init: Sequence[Any],
    N: int,
    start: int = 0,
    guard: float = DIVERGENCE_GUARD,
) -> Trajectory:
    """Run ``N`` steps from ``init = (x_{-k}, ..., x_0)``.

    ``start`` is the time index of ``x_0``; it selects ``g_start`` for the
    first step so that runs can be resumed exactly. Iteration halts early,
    with ``diverged`` set, once a norm exceeds ``guard`` or stops being finite.
    """
    if N < 0:
        raise ValueError(f"N must be nonnegative, got {N}")
    if len(init) != eq.order:
        raise ConfigError(f"need {eq.order} initial values, got {len(init)}")
    alg = eq.alg
    values = [alg.check(v) for v in init]
    norms = [alg.norm(v) for v in values]
    history = deque(reversed(values), maxlen=eq.order)
    diverged = False
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(N):
            x = step(eq, history, start + i)
            nx = alg.norm(x)
            values.append(x)
            norms.append(nx)
            history.appendleft(x)
            if not np.isfinite(nx) or nx > guard:
                diverged = True
                break
    meta = {"equation": eq.name, "N": N, "params": dict(eq.params)}
    return Trajectory(alg, eq.k, values, np.array(norms), diverged, start, meta)


@dataclass
class EnvelopeReport:
    holds: bool
    alpha: float
    mu: float
    worst_margin: float
    first_violation: int | None


def envelope_check(traj: Trajectory, alpha: float, k: int | None = None, tol: float = 1e-9) -> EnvelopeReport:
    """Test ``|x_n| <= alpha**(n/(k+1)) * mu`` for every ``n >= 1``.

    ``worst_margin`` is the smallest value of bound minus norm (negative
    when violated); ``first_violation`` is the first time index exceeding
    the bound by more than ``tol``.
    """
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    k = traj.k if k is None else k
    mu = traj.mu
    n = np.arange(1, traj.steps + 1)
    if n.size == 0:
        return EnvelopeReport(True, alpha, mu, float("inf"), None)
    bound = alpha ** (n / (k + 1)) * mu
    margin = bound - traj.norms[traj.k + 1:]
    bad = np.nonzero(margin < -tol)[0]
    first = int(n[bad[0]]) + traj.start if bad.size else None
    return EnvelopeReport(first is None, alpha, mu, float(margin.min()), first)
