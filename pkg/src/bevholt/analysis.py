"""Equilibria, linear stability and periodicity of solutions."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from .core import DomainError, Model, Trajectory

__all__ = [
    "Certificate",
    "Classification",
    "EquilibriumReport",
    "PeriodReport",
    "certify_period",
    "characteristic_roots",
    "classify",
    "cyclic_period",
    "detect_period",
    "equilibria",
    "multiplier",
    "periodic_initial_conditions",
    "sufficient_stability",
]

ROOT_TOLERANCE = 1e-12
PERIOD_TOLERANCE = 1e-9


class Classification(str, Enum):
    STABLE = "locally-asymptotically-stable"
    UNSTABLE = "unstable"
    NON_HYPERBOLIC = "non-hyperbolic"


class Certificate(str, Enum):
    EXACT = "exact-equality"
    TOLERANCE = "tolerance"
    FIXED_POINT_SEED = "fixed-point-seed"
    CONSTANT_FIXED_POINT = "constant-fixed-point"
    ALTERNATING = "alternating-two-cycle"


def _require_constant(model: Model) -> None:
    if not model.is_constant:
        raise DomainError("equilibrium analysis needs constant coefficients A and B")


def equilibria(model: Model) -> list:
    """Fixed points of ``z -> z / (A + B z)``: ``0`` and, if it exists, ``(1-A)/B``."""
    _require_constant(model)
    a, b = model.a(0), model.b(0)
    one = model.backend.convert(1)
    zero = one - one
    if b == 0 or a == one:
        return [zero]
    return [zero, (one - a) / b]


def multiplier(model: Model, equilibrium) -> object:
    """``f'(z)`` of ``f(z) = z / (A + B z)`` at an equilibrium: ``A / (A + B z)**2``."""
    _require_constant(model)
    a, b = model.a(0), model.b(0)
    z = model.backend.convert(equilibrium)
    den = a + b * z
    if den == 0:
        raise DomainError(f"{equilibrium} is a pole of the map")
    gap = z * (den - 1)
    if gap != 0 and (model.backend.exact or abs(gap) > ROOT_TOLERANCE * max(1.0, abs(z))):
        raise DomainError(f"{equilibrium} is not an equilibrium of the model")
    return a / (den * den)


def _kth_roots(m, k: int) -> list[complex]:
    m = complex(m)
    r = abs(m) ** (1.0 / k)
    theta = cmath.phase(m)
    return [cmath.rect(r, (theta + 2 * math.pi * q) / k) for q in range(k)]


def characteristic_roots(model: Model, equilibrium) -> list[complex]:
    """The k roots of ``lam**k = f'(z)`` at ``equilibrium``."""
    if model.A.is_constant and model.a(0) == 0:
        raise DomainError("A = 0 has no characteristic equation")
    return _kth_roots(multiplier(model, equilibrium), model.k)


@dataclass(frozen=True)
class EquilibriumReport:
    equilibrium: object
    multiplier: object
    characteristic_roots: tuple
    classification: Classification

    @property
    def coefficients(self) -> tuple:
        """``p_0 .. p_{k-1}`` of the characteristic polynomial (only ``p_0`` is nonzero)."""
        k = len(self.characteristic_roots)
        return (self.multiplier,) + (0,) * (k - 1)

    @property
    def root_moduli(self) -> tuple:
        return tuple(abs(r) for r in self.characteristic_roots)


def classify(model: Model, equilibrium) -> EquilibriumReport:
    """Linear stability of ``equilibrium`` from the moduli of the characteristic roots.

    All roots share modulus ``|f'(z)|**(1/k)``, so the decision is taken on the
    multiplier itself; in the rational backend that comparison is exact.
    """
    m = multiplier(model, equilibrium)
    size = abs(m)
    if size < 1:
        cls = Classification.STABLE
    elif size > 1:
        cls = Classification.UNSTABLE
    else:
        cls = Classification.NON_HYPERBOLIC
    roots = tuple(_kth_roots(m, model.k))
    return EquilibriumReport(model.backend.convert(equilibrium), m, roots, cls)


def sufficient_stability(p: Sequence) -> bool:
    """True when ``sum |p_i| < 1``, which puts every characteristic root inside
    the unit disk.  False is inconclusive."""
    return sum(abs(c) for c in p) < 1


# ---------------------------------------------------------------------------
# periodicity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PeriodReport:
    minimal_period: Optional[int]
    certified_by: Certificate
    horizon: int
    tolerance: Optional[float] = None
    checked: int = 0

    def __str__(self) -> str:
        how = self.certified_by.value
        if self.certified_by is Certificate.TOLERANCE:
            how = f"tolerance({self.tolerance:g})"
        period = "none" if self.minimal_period is None else str(self.minimal_period)
        return f"minimal period: {period} (certified by {how}; {self.checked} of {self.horizon} terms checked)"


def _same(a, b, tol: Optional[float]) -> bool:
    if tol is None:
        return a == b
    return abs(a - b) <= tol * max(abs(a), abs(b)) or a == b


def _smallest_period(values: Sequence, tol: Optional[float], limit: int) -> Optional[int]:
    n = len(values)
    for p in range(1, limit + 1):
        # candidates are scanned upward, so every proper divisor of p has failed already
        if all(_same(values[i + p], values[i], tol) for i in range(n - p)):
            return p
    return None


def detect_period(traj, horizon: Optional[int] = None, tolerance: float = PERIOD_TOLERANCE) -> PeriodReport:
    """Smallest ``p <= N/2`` with ``z[n+p] == z[n]`` over the first ``N`` terms.

    Exact trajectories (all Fractions) are compared exactly; floating ones to a
    relative ``tolerance``.  A truncated trajectory is analysed on its defined
    prefix.
    """
    values = tuple(traj.values if isinstance(traj, Trajectory) else traj)
    if horizon is not None:
        values = values[:horizon]
    exact = all(isinstance(v, (int, Fraction)) for v in values)
    tol = None if exact else tolerance
    p = _smallest_period(values, tol, len(values) // 2)
    return PeriodReport(
        p,
        Certificate.EXACT if exact else Certificate.TOLERANCE,
        horizon if horizon is not None else getattr(traj, "horizon", len(values)),
        tol,
        len(values),
    )


def cyclic_period(seq: Sequence) -> int:
    """Smallest ``p`` dividing ``len(seq)`` with ``seq`` invariant under rotation by ``p``."""
    n = len(seq)
    for p in range(1, n + 1):
        if n % p == 0 and all(seq[i] == seq[(i + p) % n] for i in range(n)):
            return p
    return n


def periodic_initial_conditions(model: Model) -> list:
    """Seeds ``z[j] = (1 - A[j]) / B[j]`` that make the solution k-periodic."""
    if not model.is_k_periodic:
        raise DomainError("fixed-point seeding needs k-periodic coefficients A and B")
    one = model.backend.convert(1)
    seeds = []
    for j in range(model.k):
        a, b = model.a(j), model.b(j)
        if a == one:
            raise DomainError(f"A_{j} = 1 has no fixed point seed")
        if b == 0:
            raise DomainError(f"B_{j} = 0 has no fixed point seed")
        if model.backend.exact:
            seeds.append((one - a) / b)
        else:
            # correctly rounded; the fixed point is repelling whenever |A_j| > 1,
            # so every stray ulp here is amplified along the strand
            seeds.append(model.backend.convert(_rounded_fixed_point(a, b)))
    return seeds


def _rounded_fixed_point(a, b):
    """``(1 - a) / b`` computed exactly from the stored values, rounded once."""
    if isinstance(a, complex) or isinstance(b, complex):
        if a.imag != 0 or b.imag != 0:
            return (1 - a) / b
        a, b = a.real, b.real
    return float((1 - Fraction(a)) / Fraction(b))


def certify_period(model: Model, ic) -> Optional[PeriodReport]:
    """Period implied by the coefficient structure alone, without iterating.

    Recognised cases: fixed-point seeds on k-periodic coefficients (period is
    the cyclic period of the seed vector), and constant ``A = -1`` (the orbit
    alternates between the seeds and their images, period ``2k`` or the cyclic
    period of that 2k-block).  Returns ``None`` when neither applies.
    """
    seeds = [model.backend.convert(z) for z in ic]
    k = model.k
    exact = model.backend.exact
    tol = None if exact else PERIOD_TOLERANCE
    if model.is_k_periodic:
        one = model.backend.convert(1)
        fixed = all(
            model.a(j) != one and model.b(j) != 0 and _same(seeds[j], (one - model.a(j)) / model.b(j), tol)
            for j in range(k)
        )
        if fixed:
            if model.is_constant:
                return PeriodReport(1, Certificate.CONSTANT_FIXED_POINT, k, tol)
            return PeriodReport(cyclic_period(seeds), Certificate.FIXED_POINT_SEED, k, tol)
    if model.is_constant and model.a(0) == -1:
        b = model.b(0)
        if any(b * z - 1 == 0 for z in seeds):
            return None
        block = seeds + [z / (b * z - 1) for z in seeds]
        return PeriodReport(cyclic_period(block), Certificate.ALTERNATING, 2 * k, tol)
    return None
