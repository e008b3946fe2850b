"""Model, coefficient sequences, scalar backends and the one-step map.

The recurrence is ``z[n+k] = z[n] / (A[n] + B[n] * z[n])``.  Index ``n`` only
ever couples to ``n + k``, so the order-``k`` equation splits into ``k``
independent first-order strands ``{z[k*m + j]}``, ``j = 0..k-1``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from numbers import Number
from typing import Callable, Iterator, Optional, Sequence, Union

from .formula import Formula, parse_formula

__all__ = [
    "Backend",
    "BevHoltError",
    "CoefficientSequence",
    "ConfigError",
    "Constant",
    "DomainError",
    "Model",
    "Periodic",
    "Sampled",
    "SingularityError",
    "Trajectory",
    "as_sequence",
    "coefficients_from_ecology",
    "step",
]

Scalar = Union[Fraction, float, complex]


class BevHoltError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(BevHoltError, ValueError):
    """An argument lies outside the domain where an operation is defined."""


class ConfigError(BevHoltError, ValueError):
    """Inconsistent model or run configuration."""


class SingularityError(BevHoltError, ZeroDivisionError):
    """A denominator ``A[n] + B[n] z`` vanished (forbidden-set hit).

    ``n`` is the index the failing denominator belongs to and ``z`` the state
    that produced it.
    """

    def __init__(self, n: int, z, message: str | None = None):
        self.n = n
        self.z = z
        super().__init__(message or f"zero denominator A_n + B_n*z at n={n} (z={z})")


class Backend(str, Enum):
    RATIONAL = "rational"
    FLOAT = "float"
    COMPLEX = "complex"

    @property
    def exact(self) -> bool:
        return self is Backend.RATIONAL

    def convert(self, value) -> Scalar:
        """Coerce ``value`` into this backend's scalar type.

        Floats entering the rational backend are read by their shortest decimal
        representation, so ``0.1`` becomes ``1/10`` rather than the binary
        approximation.
        """
        if self is Backend.RATIONAL:
            if isinstance(value, Fraction):
                return value
            if isinstance(value, bool):
                raise TypeError("booleans are not scalars")
            if isinstance(value, int):
                return Fraction(value)
            if isinstance(value, float):
                if not math.isfinite(value):
                    raise DomainError(f"non-finite value {value!r} has no rational form")
                return Fraction(repr(value))
            if isinstance(value, complex):
                if value.imag != 0:
                    raise DomainError(f"complex value {value!r} in rational backend")
                return self.convert(value.real)
            if isinstance(value, str):
                return Fraction(value.strip())
            raise TypeError(f"cannot convert {type(value).__name__} to a rational")
        if self is Backend.FLOAT:
            if isinstance(value, complex):
                if value.imag != 0:
                    raise DomainError(f"complex value {value!r} in float backend")
                return float(value.real)
            if isinstance(value, str):
                return float(Fraction(value.strip()))
            return float(value)
        if isinstance(value, str):
            return complex(float(Fraction(value.strip())))
        return complex(value)

    def is_finite(self, value) -> bool:
        if self is Backend.RATIONAL:
            return True
        if self is Backend.COMPLEX:
            return cmath.isfinite(value)
        return math.isfinite(value)


def _check_number(value, what: str):
    if isinstance(value, bool) or not isinstance(value, Number):
        raise TypeError(f"{what} must be a number, got {type(value).__name__}")
    return value


# ---------------------------------------------------------------------------
# coefficient sequences
# ---------------------------------------------------------------------------


class CoefficientSequence:
    """A coefficient ``c[n]`` defined for every index ``n >= 0``."""

    #: Known period, or ``None`` when no period is declared.
    period: Optional[int] = None

    @property
    def exact(self) -> bool:
        """Whether samples are exact (integers or Fractions)."""
        raise NotImplementedError

    @property
    def is_constant(self) -> bool:
        return False

    def sample(self, n: int):
        raise NotImplementedError

    def values(self, count: int) -> list:
        return [self.sample(n) for n in range(count)]

    def is_periodic_with(self, k: int) -> bool:
        """True if ``c[n + k] == c[n]`` is known to hold for every n."""
        return self.period is not None and k % self.period == 0

    def _check_index(self, n: int) -> None:
        if n < 0:
            raise IndexError(f"coefficient index must be non-negative, got {n}")


@dataclass(frozen=True)
class Constant(CoefficientSequence):
    value: Number

    def __post_init__(self):
        _check_number(self.value, "constant coefficient")

    period = 1

    @property
    def exact(self) -> bool:
        return isinstance(self.value, (int, Fraction))

    @property
    def is_constant(self) -> bool:
        return True

    def sample(self, n: int):
        self._check_index(n)
        return self.value


@dataclass(frozen=True)
class Periodic(CoefficientSequence):
    values_: tuple

    def __init__(self, values: Sequence[Number]):
        values = tuple(values)
        if not values:
            raise DomainError("a periodic sequence needs at least one value")
        for v in values:
            _check_number(v, "periodic coefficient")
        object.__setattr__(self, "values_", values)

    @property
    def period(self) -> int:  # type: ignore[override]
        return len(self.values_)

    @property
    def exact(self) -> bool:
        return all(isinstance(v, (int, Fraction)) for v in self.values_)

    @property
    def is_constant(self) -> bool:
        return all(v == self.values_[0] for v in self.values_)

    def sample(self, n: int):
        self._check_index(n)
        return self.values_[n % len(self.values_)]

    def __repr__(self) -> str:
        return f"Periodic({list(self.values_)!r})"


@dataclass(frozen=True, eq=False)
class Sampled(CoefficientSequence):
    """Coefficient computed per index by a formula or callable; memoised.

    ``period`` may be declared when the formula is known to repeat.  Samples are
    then taken at ``n % period`` so the sequence repeats exactly in floating
    point too, and the periodic closed forms and fixed-point seeding accept it.
    """

    func: Callable[[int], Number]
    label: str = "<callable>"
    period: Optional[int] = None  # type: ignore[assignment]
    exact_: bool = False
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.period is not None and self.period < 1:
            raise DomainError("declared period must be a positive integer")

    @classmethod
    def from_formula(cls, formula: Union[str, Formula], period: Optional[int] = None) -> "Sampled":
        if isinstance(formula, str):
            formula = parse_formula(formula)
        if formula.transcendental:
            return cls(formula, formula.source, period, False)
        return cls(formula.exact, formula.source, period, True)

    @property
    def exact(self) -> bool:
        return self.exact_

    @property
    def formula(self) -> Optional[Formula]:
        f = self.func
        if isinstance(f, Formula):
            return f
        owner = getattr(f, "__self__", None)
        return owner if isinstance(owner, Formula) else None

    def sample(self, n: int):
        self._check_index(n)
        if self.period is not None:
            # a declared period is honoured bit for bit, even where the formula rounds
            n %= self.period
        try:
            return self._cache[n]
        except KeyError:
            value = self.func(n)
            self._cache[n] = value
            return value

    def __eq__(self, other) -> bool:
        if not isinstance(other, Sampled):
            return NotImplemented
        if self.formula is not None and other.formula is not None:
            return self.formula == other.formula and self.period == other.period
        return self is other

    def __hash__(self) -> int:
        return hash((self.label, self.period))


def as_sequence(value) -> CoefficientSequence:
    """Promote a number, list, formula string or sequence to a sequence."""
    if isinstance(value, CoefficientSequence):
        return value
    if isinstance(value, str):
        try:
            return Constant(Fraction(value.strip()))
        except ValueError:
            return Sampled.from_formula(value)
    if isinstance(value, (list, tuple)):
        return Periodic(value)
    if callable(value):
        return Sampled(value, getattr(value, "__name__", "<callable>"))
    return Constant(value)


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _combine(fn: Callable, label: str, *seqs: CoefficientSequence) -> CoefficientSequence:
    """Index-wise ``fn(n, *samples)`` preserving constancy and periodicity."""
    if all(isinstance(s, Constant) for s in seqs):
        return Constant(fn(0, *(s.value for s in seqs)))
    if all(isinstance(s, (Constant, Periodic)) for s in seqs):
        p = 1
        for s in seqs:
            p = _lcm(p, s.period)
        return Periodic([fn(j, *(s.sample(j) for s in seqs)) for j in range(p)])
    periods = [s.period for s in seqs]
    period = None
    if all(q is not None for q in periods):
        period = 1
        for q in periods:
            period = _lcm(period, q)
    return Sampled(
        lambda n: fn(n, *(s.sample(n) for s in seqs)),
        label,
        period,
        all(s.exact for s in seqs),
    )


def _growth_to_a(n: int, mu):
    if mu == 0:
        raise DomainError(f"growth rate mu is zero at index {n}")
    return 1 / Fraction(mu) if isinstance(mu, (int, Fraction)) else 1 / mu


def _growth_to_b(n: int, mu, K):
    if mu == 0:
        raise DomainError(f"growth rate mu is zero at index {n}")
    if K == 0:
        raise DomainError(f"carrying capacity K is zero at index {n}")
    if isinstance(mu, (int, Fraction)) and isinstance(K, (int, Fraction)):
        return (Fraction(mu) - 1) / (Fraction(K) * mu)
    return (mu - 1) / (K * mu)


def coefficients_from_ecology(mu, K) -> tuple[CoefficientSequence, CoefficientSequence]:
    """Map growth rate and carrying capacity to ``A = 1/mu``, ``B = (mu-1)/(K mu)``."""
    mu = as_sequence(mu)
    K = as_sequence(K)
    # finite sequences are checked eagerly, sampled ones when evaluated
    for seq, name in ((mu, "growth rate mu"), (K, "carrying capacity K")):
        if isinstance(seq, (Constant, Periodic)):
            for j in range(seq.period):
                if seq.sample(j) == 0:
                    raise DomainError(f"{name} is zero at index {j}")
    A = _combine(_growth_to_a, "1/mu", mu)
    B = _combine(_growth_to_b, "(mu-1)/(K*mu)", mu, K)
    return A, B


def _exact_if_possible(seq: CoefficientSequence, backend: Backend) -> CoefficientSequence:
    if not backend.exact:
        return seq
    if isinstance(seq, Constant):
        return Constant(backend.convert(seq.value))
    if isinstance(seq, Periodic):
        return Periodic([backend.convert(v) for v in seq.values_])
    return seq


# ---------------------------------------------------------------------------
# model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Model:
    """``z[n+k] = z[n] / (A[n] + B[n] z[n])`` with a fixed scalar backend.

    Build ecological models with :meth:`ecological`; those keep ``mu`` and
    ``K`` and enforce ``mu > 1``, ``K > 0`` on every sampled index.
    """

    k: int
    A: CoefficientSequence
    B: CoefficientSequence
    backend: Backend = Backend.RATIONAL
    mu: Optional[CoefficientSequence] = None
    K: Optional[CoefficientSequence] = None

    def __post_init__(self):
        if isinstance(self.k, bool) or not isinstance(self.k, int) or self.k < 1:
            raise ConfigError(f"order k must be a positive integer, got {self.k!r}")
        object.__setattr__(self, "backend", Backend(self.backend))
        object.__setattr__(self, "A", as_sequence(self.A))
        object.__setattr__(self, "B", as_sequence(self.B))
        if (self.mu is None) != (self.K is None):
            raise ConfigError("ecological mode needs both mu and K")
        if self.backend.exact:
            for seq, name in ((self.A, "A"), (self.B, "B"), (self.mu, "mu"), (self.K, "K")):
                if isinstance(seq, Sampled) and not seq.exact:
                    raise ConfigError(
                        f"coefficient {name} is not exactly representable; "
                        "use the float or complex backend"
                    )
        if self.mu is not None:
            for seq, name, check in (
                (self.mu, "mu", lambda v: v > 1),
                (self.K, "K", lambda v: v > 0),
            ):
                if isinstance(seq, (Constant, Periodic)):
                    for j in range(seq.period):
                        self._check_ecology(name, seq.sample(j), j, check)
        if isinstance(self.A, (Constant, Periodic)):
            for j in range(self.A.period):
                if self.A.sample(j) == 0:
                    raise DomainError(f"A_n must be nonzero (A_{j} = 0)")

    @classmethod
    def ecological(cls, k: int, mu, K, backend: Backend = Backend.RATIONAL) -> "Model":
        backend = Backend(backend)
        mu = _exact_if_possible(as_sequence(mu), backend)
        K = _exact_if_possible(as_sequence(K), backend)
        A, B = coefficients_from_ecology(mu, K)
        return cls(k, A, B, backend, mu, K)

    @property
    def mode(self) -> str:
        return "ecological" if self.mu is not None else "math"

    @staticmethod
    def _check_ecology(name, value, n, check):
        v = value.real if isinstance(value, complex) else value
        if (isinstance(value, complex) and value.imag != 0) or not check(v):
            bound = "> 1" if name == "mu" else "> 0"
            raise DomainError(f"ecological mode needs {name}_n {bound}; {name}_{n} = {value}")

    def a(self, n: int) -> Scalar:
        value = self.A.sample(n)
        if value == 0:
            raise DomainError(f"A_n must be nonzero (A_{n} = 0)")
        if self.mu is not None:
            self._check_ecology("mu", self.mu.sample(n), n, lambda v: v > 1)
        return self.backend.convert(value)

    def b(self, n: int) -> Scalar:
        if self.K is not None:
            self._check_ecology("K", self.K.sample(n), n, lambda v: v > 0)
        return self.backend.convert(self.B.sample(n))

    def growth(self, n: int) -> Scalar:
        if self.mu is None:
            raise ConfigError("model is not in ecological mode")
        self.a(n)
        return self.backend.convert(self.mu.sample(n))

    def capacity(self, n: int) -> Scalar:
        if self.K is None:
            raise ConfigError("model is not in ecological mode")
        self.b(n)
        return self.backend.convert(self.K.sample(n))

    @property
    def is_constant(self) -> bool:
        return self.A.is_constant and self.B.is_constant

    @property
    def is_k_periodic(self) -> bool:
        return self.A.is_periodic_with(self.k) and self.B.is_periodic_with(self.k)

    def step(self, z, n: int) -> Scalar:
        return step(self, z, n)


def step(model: Model, z, n: int) -> Scalar:
    """Return ``z / (A[n] + B[n] z)``, the state ``k`` indices after ``n``."""
    z = model.backend.convert(z)
    den = model.a(n) + model.b(n) * z
    if den == 0:
        raise SingularityError(n, z)
    out = z / den
    if not model.backend.is_finite(out):
        raise SingularityError(n, z, f"overflow: A_n + B_n*z underflowed at n={n} (z={z})")
    return out


# ---------------------------------------------------------------------------
# trajectories
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Trajectory:
    """Values ``z[0..len-1]`` of one solution, truncated at a singularity if any.

    ``truncated_at`` is the first index whose value is undefined; every index
    below it is defined.
    """

    k: int
    values: tuple
    horizon: int
    truncated_at: Optional[int] = None
    reason: Optional[str] = None

    @property
    def complete(self) -> bool:
        return self.truncated_at is None

    @property
    def status(self) -> str:
        if self.complete:
            return "complete"
        return f"truncated-at({self.truncated_at}, {self.reason})"

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, n):
        return self.values[n]

    def __iter__(self) -> Iterator:
        return iter(self.values)

    def strand(self, j: int) -> tuple:
        if not 0 <= j < self.k:
            raise IndexError(f"strand must be in 0..{self.k - 1}, got {j}")
        return self.values[j :: self.k]

    def strands(self) -> list[tuple]:
        return [self.strand(j) for j in range(self.k)]
