"""Sufficient conditions for global attractivity of the origin.

Every check here is one-sided: a condition that fails yields an
inconclusive result, never a claim of instability.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, NamedTuple, Sequence

from .equations import LinearArgEquation
from .errors import ConfigError
from .reduction import ReductionResult, eval_P, eval_Q, initial_t, reduce_order

THEOREM1A = "Theorem1a"
THEOREM1B = "Theorem1b"
COROLLARY1 = "Corollary1"
COROLLARY2 = "Corollary2"
THEOREM2 = "Theorem2-conditional"
NONE = "none"

#: verdicts that conclude convergence of every solution on their own
UNCONDITIONAL = (THEOREM1A, THEOREM1B, COROLLARY1, COROLLARY2)


class SigmaBound(NamedTuple):
    """Supremum of admissible sigma; ``valid`` is False when no sigma > 0 works."""

    value: float
    valid: bool


def alpha_direct(eq: LinearArgEquation, sigma: float | None = None) -> float:
    """``sum_i (|a_i| + sigma |b_i|)`` over ``i = 0..k``."""
    s = eq.sigma if sigma is None else sigma
    n = eq.alg.norm
    return sum(n(a_i) + s * n(b_i) for a_i, b_i in zip(eq.a, eq.b))


def alpha_factored(red: ReductionResult, sigma: float) -> float:
    """``sum_i (|p_i| + sigma |q_i|)`` over ``i = 0..k-1``."""
    n = red.factor.alg.norm
    return sum(n(p_i) + sigma * n(q_i) for p_i, q_i in zip(red.p, red.q))


@dataclass
class Corollary1Report:
    a_norm: float
    a_is_unit: bool
    residual: float
    q_sum: float
    sigma: float
    tol: float

    @property
    def root_ok(self) -> bool:
        return self.a_is_unit and self.residual <= self.tol

    @property
    def holds(self) -> bool:
        return self.root_ok and self.a_norm < 1 and self.q_sum < 1.0 / self.sigma


@dataclass
class Corollary2Report:
    b_norm: float
    b_is_unit: bool
    residual: float
    p_sum: float
    sigma: float
    tol: float

    @property
    def root_ok(self) -> bool:
        return self.b_is_unit and self.residual <= self.tol

    @property
    def holds(self) -> bool:
        return self.root_ok and self.b_norm < 1 and self.p_sum < 1.0 - self.sigma


@dataclass
class StabilityReport:
    alpha_direct: float
    direct_holds: bool
    sigma: float
    rho_used: Any = None
    rho_norm: float | None = None
    alpha_factored: float | None = None
    factored_holds: bool | None = None
    corollary_checks: dict = field(default_factory=dict)
    verdicts: list = field(default_factory=list)
    sigma_bounds: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "+".join(self.verdicts) if self.verdicts else NONE

    @property
    def concluded(self) -> bool:
        """True when some verdict proves convergence of every solution."""
        return any(v in UNCONDITIONAL for v in self.verdicts)


def check_theorem1(
    eq: LinearArgEquation,
    rho: Any = None,
    root_tol: float | None = None,
    sigma: float | None = None,
) -> StabilityReport:
    """Evaluate both branches of the two-branch convergence theorem.

    Branch (a) is the direct bound ``alpha_direct < 1``. Branch (b) needs a
    common root ``rho`` (defaults to ``eq.known_root``) with ``|rho| < 1`` and
    the factor-equation bound below 1. ``RootRejected`` and ``NotAUnit``
    from the root validation propagate.
    """
    s = eq.sigma if sigma is None else sigma
    ad = alpha_direct(eq, s)
    report = StabilityReport(ad, ad < 1, s)
    if ad < 1:
        report.verdicts.append(THEOREM1A)
    rho = eq.known_root if rho is None else rho
    if rho is not None:
        red = reduce_order(eq, rho, root_tol)
        report.rho_used = red.rho
        report.rho_norm = eq.alg.norm(red.rho)
        report.alpha_factored = alpha_factored(red, s)
        report.factored_holds = report.rho_norm < 1 and report.alpha_factored < 1
        if report.factored_holds:
            report.verdicts.append(THEOREM1B)
    return report


def _require_units_zero(eq: LinearArgEquation, coeffs: Sequence[Any], tol: float, what: str) -> None:
    for i, c in enumerate(coeffs):
        if eq.alg.norm(c) > tol:
            raise ConfigError(f"{what}: coefficient {i + 1} must vanish, has norm {eq.alg.norm(c):.3e}")


def is_gla0(eq: LinearArgEquation, tol: float = 1e-12) -> bool:
    """``a = (a, 0, ..., 0)``."""
    return all(eq.alg.norm(c) <= tol for c in eq.a[1:])


def is_gla1(eq: LinearArgEquation, tol: float = 1e-12) -> bool:
    """Argument coefficients ``(1, -b, 0, ..., 0)``."""
    alg = eq.alg
    return (
        alg.distance(eq.b[0], alg.one()) <= tol
        and all(alg.norm(c) <= tol for c in eq.b[2:])
    )


def check_corollary1(eq: LinearArgEquation, tol: float = 1e-9, sigma: float | None = None) -> Corollary1Report:
    """Check the single-lag-coefficient case with ``rho = a``.

    Reports ``|Q(a)|`` against ``tol`` and the sum
    ``sum_{i<k} |b_0 a^i + ... + b_i|`` against ``1/sigma``.
    """
    _require_units_zero(eq, eq.a[1:], 1e-12, "single-coefficient shape")
    alg = eq.alg
    s = eq.sigma if sigma is None else sigma
    a = eq.a[0]
    is_unit = alg.try_inverse(a) is not None
    residual = alg.norm(eval_Q(alg, eq.b, a))
    q_sum = 0.0
    for i in range(eq.k):
        q_i = alg.sum(alg.mul(eq.b[j], alg.power(a, i - j)) for j in range(i + 1))
        q_sum += alg.norm(q_i)
    return Corollary1Report(alg.norm(a), is_unit, residual, q_sum, s, tol)


def check_corollary2(eq: LinearArgEquation, tol: float = 1e-9, sigma: float | None = None) -> Corollary2Report:
    """Check the ``g_n(x_n - b x_{n-1})`` case with ``rho = b``.

    Reports ``|P(b)|`` against ``tol`` and the sum
    ``sum_{i<k} |b^(i+1) - a_0 b^i - ... - a_i|`` against ``1 - sigma``.
    """
    if not is_gla1(eq):
        raise ConfigError("argument coefficients must be (1, -b, 0, ..., 0)")
    alg = eq.alg
    s = eq.sigma if sigma is None else sigma
    b = alg.neg(eq.b[1])
    is_unit = alg.try_inverse(b) is not None
    residual = alg.norm(eval_P(alg, eq.a, b))
    p_sum = 0.0
    for i in range(eq.k):
        p_i = alg.power(b, i + 1)
        for j in range(i + 1):
            p_i = alg.sub(p_i, alg.mul(eq.a[j], alg.power(b, i - j)))
        p_sum += alg.norm(p_i)
    return Corollary2Report(alg.norm(b), is_unit, residual, p_sum, s, tol)


def sigma_bound_er(a_norm: float, k: int) -> SigmaBound:
    """``(1 - |a|) / (1 - |a|^k)``, the sigma range of the delayed tanh model
    obtained through its factor equation."""
    if not 0 < a_norm < 1:
        return SigmaBound(0.0, False)
    return SigmaBound((1 - a_norm) / (1 - a_norm**k), True)


def sigma_bound_wc(eq: LinearArgEquation) -> SigmaBound:
    """Largest sigma for which the direct bound stays below 1:
    ``(1 - sum |a_i|) / sum |b_i|``."""
    n = eq.alg.norm
    head = 1.0 - sum(n(a_i) for a_i in eq.a)
    tail = sum(n(b_i) for b_i in eq.b)
    if head <= 0:
        return SigmaBound(0.0, False)
    return SigmaBound(head / tail if tail > 0 else math.inf, True)


def sigma_bound_factored(red: ReductionResult) -> SigmaBound:
    """Largest sigma for which the factor-equation bound stays below 1."""
    n = red.factor.alg.norm
    if n(red.rho) >= 1:
        return SigmaBound(0.0, False)
    head = 1.0 - sum(n(p_i) for p_i in red.p)
    tail = sum(n(q_i) for q_i in red.q)
    if head <= 0:
        return SigmaBound(0.0, False)
    return SigmaBound(head / tail if tail > 0 else math.inf, True)


def theorem2_factor(eq: LinearArgEquation, tol: float = 1e-9) -> LinearArgEquation:
    """First-order equation ``t_{n+1} = (a_0 - b) t_n + g_n(t_n)``.

    If this equation drives ``t_0 = x_0 - b x_{-1}`` to zero, the matching
    solution of the second-order equation converges as well.
    """
    if eq.k != 1 or not is_gla1(eq):
        raise ConfigError("expects a second-order equation with argument x_n - b x_{n-1}")
    b = eq.alg.neg(eq.b[1])
    if eq.alg.norm(b) >= 1:
        raise ConfigError(f"|b| < 1 violated: |b| = {eq.alg.norm(b)}")
    red = reduce_order(eq, b, tol)
    return red.factor


def check(eq: LinearArgEquation, rho: Any = None, root_tol: float | None = None, tol: float = 1e-9) -> StabilityReport:
    """Run every applicable criterion and collect the verdicts."""
    report = check_theorem1(eq, rho, root_tol)
    alg = eq.alg
    if eq.k >= 1 and is_gla0(eq) and alg.norm(eq.b[-1]) > 0:
        c1 = check_corollary1(eq, tol)
        report.corollary_checks["corollary1"] = c1
        if c1.holds:
            report.verdicts.append(COROLLARY1)
        if c1.a_norm < 1:
            report.sigma_bounds["single_lag"] = sigma_bound_er(c1.a_norm, eq.k)
    if eq.k >= 1 and is_gla1(eq):
        c2 = check_corollary2(eq, tol)
        report.corollary_checks["corollary2"] = c2
        if c2.holds:
            report.verdicts.append(COROLLARY2)
        if c2.root_ok and c2.b_norm < 1:
            report.sigma_bounds["difference_argument"] = SigmaBound(max(0.0, 1.0 - c2.p_sum), c2.p_sum < 1)
            if eq.k == 1 and not report.concluded:
                report.verdicts.append(THEOREM2)
    report.sigma_bounds["direct"] = sigma_bound_wc(eq)
    if report.rho_used is not None:
        report.sigma_bounds["factored"] = sigma_bound_factored(reduce_order(eq, report.rho_used, root_tol))
    return report


def factored_bound(n: int, rho_norm: float, alpha: float, k: int, x0_norm: float, mu_t: float) -> float:
    """Norm bound on ``x_n`` obtained from the factor equation:

    ``|rho|^n |x_0| + mu_t * sum_{j=1}^n |rho|^(n-j) alpha^(j/(k+1))``.
    """
    c = alpha ** (1.0 / (k + 1))
    total = rho_norm**n * x0_norm
    for j in range(1, n + 1):
        total += rho_norm ** (n - j) * c**j * mu_t
    return total


def convergence_horizon(
    report: StabilityReport,
    eq: LinearArgEquation,
    init: Sequence[Any],
    eps: float = 1e-6,
    n_max: int = 100_000,
) -> int | None:
    """First n at which a proven norm bound on ``x_n`` drops below ``eps``.

    Uses the direct envelope when it holds, otherwise the factored bound.
    Returns None when no branch applies or the horizon exceeds ``n_max``.
    """
    alg = eq.alg
    norms = [alg.norm(x) for x in init]
    mu = max(norms)
    if mu == 0:
        return 0
    if report.direct_holds:
        alpha = report.alpha_direct
        if alpha == 0:
            return 1
        n = math.ceil((eq.k + 1) * math.log(eps / mu) / math.log(alpha))
        n = max(n, 1)
        return n if n <= n_max else None
    if report.factored_holds:
        t0 = initial_t(alg, init, report.rho_used)
        mu_t = max(alg.norm(t) for t in t0)
        c = report.alpha_factored ** (1.0 / (eq.k + 1))
        r = report.rho_norm
        # the bound is a sum of two decaying geometric terms; scan for it
        total = 0.0
        for n in range(1, n_max + 1):
            total = r * total + c**n * mu_t
            if r**n * norms[-1] + total < eps:
                return n
    return None
