"""Concrete Banach algebras with identity.

Four instances are provided: the real line, the complex plane, real d x d
matrices under the induced infinity-norm, and C[0,1] sampled on a uniform
grid with the sup norm over the samples. Elements are plain payloads
(``float``, ``complex`` or ``numpy.ndarray``); every operation goes through
the algebra object so that non-commutative products keep their order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .errors import ShapeError

#: samples with magnitude below this are treated as zeros of a grid function
GRID_ZERO_THRESHOLD = 1e-12


class Algebra:
    """Base class for the algebra instances.

    Subclasses implement the payload-specific pieces; the generic
    operations (power, subtraction, closeness) live here.
    """

    kind: str = "abstract"

    # -- construction -------------------------------------------------
    def element(self, value: Any) -> Any:
        raise NotImplementedError

    def check(self, x: Any) -> Any:
        raise NotImplementedError

    def zero(self) -> Any:
        raise NotImplementedError

    def one(self) -> Any:
        raise NotImplementedError

    def constant(self, c: complex) -> Any:
        """The constant ``c * 1``."""
        return self.scale(c, self.one())

    # -- arithmetic ---------------------------------------------------
    def add(self, x: Any, y: Any) -> Any:
        return self.check(x) + self.check(y)

    def neg(self, x: Any) -> Any:
        return -self.check(x)

    def sub(self, x: Any, y: Any) -> Any:
        return self.check(x) - self.check(y)

    def mul(self, x: Any, y: Any) -> Any:
        raise NotImplementedError

    def scale(self, alpha: complex, x: Any) -> Any:
        return alpha * self.check(x)

    def norm(self, x: Any) -> float:
        raise NotImplementedError

    def try_inverse(self, x: Any, tol: float = 1e-9) -> Any | None:
        """Return the inverse of ``x`` or ``None`` when ``x`` is not a unit."""
        raise NotImplementedError

    def power(self, x: Any, j: int) -> Any:
        if j < 0:
            raise ValueError(f"power exponent must be nonnegative, got {j}")
        x = self.check(x)
        result = self.one()
        for _ in range(j):
            result = self.mul(x, result)
        return result

    def sum(self, items) -> Any:
        total = self.zero()
        for item in items:
            total = self.add(total, item)
        return total

    def distance(self, x: Any, y: Any) -> float:
        return self.norm(self.sub(x, y))

    def is_zero(self, x: Any, tol: float = 0.0) -> bool:
        return self.norm(x) <= tol

    # -- sampling and serialization -----------------------------------
    def random_element(self, rng: np.random.Generator) -> Any:
        raise NotImplementedError

    def random_scalar(self, rng: np.random.Generator) -> complex:
        return float(rng.uniform(-2.0, 2.0))

    def components(self, x: Any) -> list[float]:
        """Flatten a payload into real numbers (for CSV columns)."""
        raise NotImplementedError

    def component_names(self) -> list[str]:
        raise NotImplementedError

    def to_json(self, x: Any) -> Any:
        raise NotImplementedError

    def describe(self) -> dict:
        return {"kind": self.kind}

    def _verify_inverse(self, x: Any, inv: Any, tol: float) -> Any | None:
        one = self.one()
        left = self.distance(self.mul(inv, x), one)
        right = self.distance(self.mul(x, inv), one)
        if not (left <= tol and right <= tol):
            return None
        return inv


def _check_tol(tol: float) -> None:
    if not tol > 0:
        raise ValueError(f"tolerance must be positive, got {tol}")


class RealAlgebra(Algebra):
    kind = "real"

    def element(self, value: Any) -> float:
        if isinstance(value, complex) or np.iscomplexobj(value):
            raise ShapeError(f"real algebra cannot hold {value!r}")
        try:
            return float(value)
        except (TypeError, ValueError) as exc:
            raise ShapeError(f"real algebra cannot hold {value!r}") from exc

    def check(self, x: Any) -> float:
        if isinstance(x, (float, int, np.floating, np.integer)) and not isinstance(x, bool):
            return float(x)
        raise ShapeError(f"expected a real scalar, got {type(x).__name__}")

    def zero(self) -> float:
        return 0.0

    def one(self) -> float:
        return 1.0

    def mul(self, x, y):
        return self.check(x) * self.check(y)

    def scale(self, alpha, x):
        return float(alpha) * self.check(x)

    def norm(self, x) -> float:
        return abs(self.check(x))

    def try_inverse(self, x, tol=1e-9):
        _check_tol(tol)
        x = self.check(x)
        if x == 0.0:
            return None
        inv = 1.0 / x
        if not math.isfinite(inv):
            return None
        return self._verify_inverse(x, inv, tol)

    def random_element(self, rng):
        return float(rng.uniform(-1.0, 1.0))

    def components(self, x):
        return [self.check(x)]

    def component_names(self):
        return ["x"]

    def to_json(self, x):
        return self.check(x)


class ComplexAlgebra(Algebra):
    kind = "complex"

    def element(self, value: Any) -> complex:
        if isinstance(value, (list, tuple)) and len(value) == 2:
            return complex(float(value[0]), float(value[1]))
        if isinstance(value, dict):
            return complex(float(value.get("re", 0.0)), float(value.get("im", 0.0)))
        try:
            return complex(value)
        except (TypeError, ValueError) as exc:
            raise ShapeError(f"complex algebra cannot hold {value!r}") from exc

    def check(self, x: Any) -> complex:
        if isinstance(x, (complex, float, int, np.number)) and not isinstance(x, bool):
            return complex(x)
        raise ShapeError(f"expected a complex scalar, got {type(x).__name__}")

    def zero(self) -> complex:
        return 0j

    def one(self) -> complex:
        return 1 + 0j

    def mul(self, x, y):
        return self.check(x) * self.check(y)

    def scale(self, alpha, x):
        return complex(alpha) * self.check(x)

    def norm(self, x) -> float:
        return abs(self.check(x))

    def try_inverse(self, x, tol=1e-9):
        _check_tol(tol)
        x = self.check(x)
        if x == 0:
            return None
        return self._verify_inverse(x, 1.0 / x, tol)

    def random_element(self, rng):
        re, im = rng.uniform(-1.0, 1.0, size=2)
        return complex(re, im)

    def random_scalar(self, rng):
        re, im = rng.uniform(-2.0, 2.0, size=2)
        return complex(re, im)

    def components(self, x):
        x = self.check(x)
        return [x.real, x.imag]

    def component_names(self):
        return ["re", "im"]

    def to_json(self, x):
        x = self.check(x)
        return [x.real, x.imag]


@dataclass(frozen=True)
class MatrixAlgebra(Algebra):
    """Real ``dim x dim`` matrices with the max-absolute-row-sum norm."""

    dim: int = 2
    kind: str = field(default="matrix", init=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"matrix dimension must be positive, got {self.dim}")

    def element(self, value: Any) -> np.ndarray:
        arr = np.asarray(value, dtype=float)
        if arr.ndim == 0:
            arr = float(arr) * np.eye(self.dim)
        return self.check(arr)

    def check(self, x: Any) -> np.ndarray:
        if not isinstance(x, np.ndarray) or x.shape != (self.dim, self.dim):
            shape = getattr(x, "shape", type(x).__name__)
            raise ShapeError(f"expected a {self.dim}x{self.dim} matrix, got {shape}")
        return x

    def zero(self):
        return np.zeros((self.dim, self.dim))

    def one(self):
        return np.eye(self.dim)

    def mul(self, x, y):
        return self.check(x) @ self.check(y)

    def scale(self, alpha, x):
        return float(alpha) * self.check(x)

    def norm(self, x) -> float:
        return float(np.abs(self.check(x)).sum(axis=1).max())

    def try_inverse(self, x, tol=1e-9):
        _check_tol(tol)
        x = self.check(x)
        try:
            inv = np.linalg.inv(x)
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(inv)):
            return None
        return self._verify_inverse(x, inv, tol)

    def random_element(self, rng):
        return rng.uniform(-1.0, 1.0, size=(self.dim, self.dim))

    def components(self, x):
        return [float(v) for v in self.check(x).ravel()]

    def component_names(self):
        return [f"m{i}{j}" for i in range(self.dim) for j in range(self.dim)]

    def to_json(self, x):
        return self.check(x).tolist()

    def describe(self):
        return {"kind": self.kind, "dim": self.dim}


@dataclass(frozen=True)
class GridAlgebra(Algebra):
    """C[0,1] sampled at ``r_j = j/(m-1)``; products are pointwise."""

    size: int = 101
    kind: str = field(default="grid", init=False)

    def __post_init__(self):
        if self.size < 2:
            raise ValueError(f"grid needs at least 2 points, got {self.size}")

    @property
    def points(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.size)

    def from_function(self, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        """Sample a vectorized function of ``r`` on the grid."""
        return self.element(np.broadcast_to(f(self.points), (self.size,)))

    def element(self, value: Any) -> np.ndarray:
        if callable(value):
            return self.from_function(value)
        arr = np.asarray(value, dtype=float)
        if arr.ndim == 0:
            arr = np.full(self.size, float(arr))
        return self.check(np.array(arr))

    def check(self, x: Any) -> np.ndarray:
        if not isinstance(x, np.ndarray) or x.shape != (self.size,):
            shape = getattr(x, "shape", type(x).__name__)
            raise ShapeError(f"expected {self.size} grid samples, got {shape}")
        return x

    def zero(self):
        return np.zeros(self.size)

    def one(self):
        return np.ones(self.size)

    def mul(self, x, y):
        return self.check(x) * self.check(y)

    def scale(self, alpha, x):
        return float(alpha) * self.check(x)

    def norm(self, x) -> float:
        return float(np.abs(self.check(x)).max())

    def try_inverse(self, x, tol=1e-9):
        _check_tol(tol)
        x = self.check(x)
        if np.any(np.abs(x) < GRID_ZERO_THRESHOLD):
            return None
        return self._verify_inverse(x, 1.0 / x, tol)

    def random_element(self, rng):
        return rng.uniform(-1.0, 1.0, size=self.size)

    def components(self, x):
        return [float(v) for v in self.check(x)]

    def component_names(self):
        return [f"s{j}" for j in range(self.size)]

    def to_json(self, x):
        return self.check(x).tolist()

    def describe(self):
        return {"kind": self.kind, "grid_size": self.size}


def make_algebra(kind: str, dim: int = 2, grid_size: int = 101) -> Algebra:
    """Build an algebra from its kind name."""
    if kind == "real":
        return RealAlgebra()
    if kind == "complex":
        return ComplexAlgebra()
    if kind == "matrix":
        return MatrixAlgebra(dim)
    if kind == "grid":
        return GridAlgebra(grid_size)
    raise ValueError(f"unknown algebra kind {kind!r}")


@dataclass
class AxiomReport:
    kind: str
    samples: int
    tol: float
    violations: dict[str, float]

    @property
    def passed(self) -> bool:
        return all(v <= self.tol for v in self.violations.values())

    def failures(self) -> list[str]:
        return [name for name, v in self.violations.items() if v > self.tol]


AXIOMS = (
    "submultiplicative",
    "triangle",
    "unit_norm",
    "homogeneity",
    "associativity",
    "left_distributivity",
    "right_distributivity",
    "scalar_compatibility",
    "identity_law",
)


def check_axioms(alg: Algebra, sample_count: int = 1000, seed: int = 0, tol: float = 1e-12) -> AxiomReport:
    """Sample random triples and record the worst violation of each axiom.

    Violations are absolute: for inequalities the excess over the bound,
    for identities the norm of the difference of both sides.
    """
    if sample_count < 1:
        raise ValueError("sample_count must be at least 1")
    rng = np.random.default_rng(seed)
    worst = dict.fromkeys(AXIOMS, 0.0)
    one = alg.one()
    worst["unit_norm"] = abs(alg.norm(one) - 1.0)

    def bump(name, value):
        if value > worst[name]:
            worst[name] = value

    for _ in range(sample_count):
        x, y, z = (alg.random_element(rng) for _ in range(3))
        s = alg.random_scalar(rng)
        nx, ny = alg.norm(x), alg.norm(y)
        xy = alg.mul(x, y)
        bump("submultiplicative", alg.norm(xy) - nx * ny)
        bump("triangle", alg.norm(alg.add(x, y)) - nx - ny)
        bump("homogeneity", abs(alg.norm(alg.scale(s, x)) - abs(s) * nx))
        bump("associativity", alg.distance(alg.mul(xy, z), alg.mul(x, alg.mul(y, z))))
        bump(
            "left_distributivity",
            alg.distance(alg.mul(x, alg.add(y, z)), alg.add(xy, alg.mul(x, z))),
        )
        bump(
            "right_distributivity",
            alg.distance(alg.mul(alg.add(x, y), z), alg.add(alg.mul(x, z), alg.mul(y, z))),
        )
        sxy = alg.scale(s, xy)
        bump(
            "scalar_compatibility",
            max(
                alg.distance(sxy, alg.mul(alg.scale(s, x), y)),
                alg.distance(sxy, alg.mul(x, alg.scale(s, y))),
            ),
        )
        bump(
            "identity_law",
            max(alg.distance(alg.mul(one, x), x), alg.distance(alg.mul(x, one), x)),
        )
    return AxiomReport(alg.kind, sample_count, tol, {k: float(v) for k, v in worst.items()})
