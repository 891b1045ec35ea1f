"""Order reduction through a common root of two polynomials.

For the recurrence in :mod:`banachdiff.equations` put

    P(xi) = xi^(k+1) - sum_i a_i xi^(k-i),    Q(xi) = sum_i b_i xi^(k-i).

If a unit ``rho`` annihilates both, the substitution ``t_n = x_n - rho x_{n-1}``
splits the equation into a factor equation of order k in ``t`` and the
cofactor ``x_{n+1} = rho x_n + t_{n+1}``. Products are always formed with
the coefficient on the left, so everything here is valid for matrices.
Roots are verified, never solved for.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

from .algebra import Algebra
from .equations import LinearArgEquation, iterate
from .errors import ConfigError, NotAUnit, RootRejected

DEFAULT_ROOT_TOL = {"real": 1e-9, "complex": 1e-9, "grid": 1e-9, "matrix": 1e-8}


def default_root_tol(alg: Algebra) -> float:
    return DEFAULT_ROOT_TOL.get(alg.kind, 1e-9)


def eval_P(alg: Algebra, a: Sequence[Any], rho: Any) -> Any:
    """``rho^(k+1) - a_0 rho^k - ... - a_k``, term by term."""
    k = len(a) - 1
    value = alg.power(rho, k + 1)
    for i, a_i in enumerate(a):
        value = alg.sub(value, alg.mul(a_i, alg.power(rho, k - i)))
    return value


def eval_Q(alg: Algebra, b: Sequence[Any], rho: Any) -> Any:
    """``b_0 rho^k + b_1 rho^(k-1) + ... + b_k``, term by term."""
    k = len(b) - 1
    return alg.sum(alg.mul(b_i, alg.power(rho, k - i)) for i, b_i in enumerate(b))


def factor_coefficients(alg: Algebra, a: Sequence[Any], b: Sequence[Any], rho: Any) -> tuple[list, list]:
    """Coefficients ``p_0..p_{k-1}`` and ``q_0..q_{k-1}`` of the factor equation.

    ``p_i = rho^(i+1) - a_0 rho^i - ... - a_i`` and
    ``q_i = b_0 rho^i + b_1 rho^(i-1) + ... + b_i``.
    """
    if alg.try_inverse(rho) is None:
        raise NotAUnit(f"rho is not a unit of the {alg.kind} algebra")
    k = len(a) - 1
    p, q = [], []
    for i in range(k):
        p_i = alg.power(rho, i + 1)
        q_i = alg.zero()
        for j in range(i + 1):
            rho_pow = alg.power(rho, i - j)
            p_i = alg.sub(p_i, alg.mul(a[j], rho_pow))
            q_i = alg.add(q_i, alg.mul(b[j], rho_pow))
        p.append(p_i)
        q.append(q_i)
    return p, q


@dataclass(eq=False)
class ReductionResult:
    rho: Any
    residual_P: float
    residual_Q: float
    p: list
    q: list
    factor: LinearArgEquation
    root_tol: float

    @property
    def k(self) -> int:
        return len(self.p)


def reduce_order(eq: LinearArgEquation, rho: Any, root_tol: float | None = None) -> ReductionResult:
    """Validate ``rho`` and build the factor equation.

    The factor equation is ``t_{n+1} = -sum p_i t_{n-i} + g_n(sum q_i t_{n-i})``
    with the same maps ``g_n`` as ``eq``.

    Raises
    ------
    NotAUnit
        ``rho`` cannot be inverted.
    RootRejected
        ``|P(rho)|`` or ``|Q(rho)|`` exceeds ``root_tol``.
    """
    if eq.k < 1:
        raise ConfigError("order reduction needs k >= 1")
    alg = eq.alg
    rho = alg.check(rho)
    tol = default_root_tol(alg) if root_tol is None else root_tol
    if alg.try_inverse(rho) is None:
        raise NotAUnit(f"rho is not a unit of the {alg.kind} algebra")
    res_P = alg.norm(eval_P(alg, eq.a, rho))
    res_Q = alg.norm(eval_Q(alg, eq.b, rho))
    if res_P > tol or res_Q > tol:
        raise RootRejected(res_P, res_Q, tol)
    p, q = factor_coefficients(alg, eq.a, eq.b, rho)
    factor = LinearArgEquation(
        alg,
        tuple(alg.neg(p_i) for p_i in p),
        tuple(q),
        eq.g,
        name=f"{eq.name}:factor",
    )
    return ReductionResult(rho, res_P, res_Q, p, q, factor, tol)


def initial_t(alg: Algebra, init_x: Sequence[Any], rho: Any) -> list:
    """Factor initial values from ``(x_{-k}, ..., x_0)``, oldest first.

    Returns ``(t_{-k+1}, ..., t_0)`` with ``t_{-i} = x_{-i} - rho x_{-i-1}``.
    """
    xs = [alg.check(x) for x in init_x]
    return [alg.sub(xs[j], alg.mul(rho, xs[j - 1])) for j in range(1, len(xs))]


def cofactor_reconstruct(alg: Algebra, rho: Any, x0: Any, t: Sequence[Any]) -> list:
    """``x_1..x_N`` from ``x_{n+1} = rho x_n + t_{n+1}`` given ``t_1..t_N``."""
    xs = []
    x = alg.check(x0)
    for t_n in t:
        x = alg.add(alg.mul(rho, x), t_n)
        xs.append(x)
    return xs


def cofactor_closed_form(alg: Algebra, rho: Any, x0: Any, t: Sequence[Any], n: int) -> Any:
    """``x_n = rho^n x_0 + sum_{j=1}^n rho^(n-j) t_j``."""
    value = alg.mul(alg.power(rho, n), x0)
    for j in range(1, n + 1):
        value = alg.add(value, alg.mul(alg.power(rho, n - j), t[j - 1]))
    return value


def split_consistency_check(
    eq: LinearArgEquation,
    rho: Any,
    init: Sequence[Any],
    N: int,
    root_tol: float | None = None,
) -> float:
    """Max over ``n <= N`` of ``|x_n(direct) - x_n(factor + cofactor)|``.

    Both paths are run for the full horizon; a diverging direct run
    truncates the comparison to the common length.
    """
    red = reduce_order(eq, rho, root_tol)
    alg = eq.alg
    direct = iterate(eq, init, N)
    t_traj = iterate(red.factor, initial_t(alg, init, red.rho), N)
    t_new = t_traj.values[red.factor.order:]
    rebuilt = cofactor_reconstruct(alg, red.rho, init[-1], t_new)
    direct_new = direct.values[eq.order:]
    worst = 0.0
    for x_d, x_r in zip(direct_new, rebuilt):
        worst = max(worst, alg.distance(x_d, x_r))
    return worst
