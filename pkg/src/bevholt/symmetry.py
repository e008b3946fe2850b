"""Point symmetries of the recurrence and the linearising canonical coordinate.

A characteristic ``zeta(n, z)`` generates a symmetry when, for every ``n`` and
admissible ``z``,

    zeta(n + k, z / (A[n] + B[n] z)) == A[n] / (A[n] + B[n] z)**2 * zeta(n, z)

Three families are provided::

    zeta1 = alpha[n] + (B[n] / A[n]) alpha[n] z     A[n] alpha[n+k] = alpha[n]
    zeta2 = beta[n] z**2                            beta[n+k] = A[n] beta[n]
    zeta3 = lam[n] z + gamma[n] z**2                lam[n+k] = lam[n],
                                                    gamma[n+k] = A[n] gamma[n] - B[n] lam[n]

``zeta2`` and ``zeta3`` satisfy the condition identically.  ``zeta1`` only does
so when ``B[n+k] == -A[n+k] B[n]`` for all n (e.g. constant ``A = -1``); see
:func:`zeta1_obstruction`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .core import Backend, ConfigError, DomainError, Model
from .solver import InitialConditions, iterate

__all__ = [
    "Combination",
    "InfinitesimalFamily",
    "LinearizationReport",
    "build_alpha",
    "build_beta",
    "build_family",
    "build_gamma",
    "build_lambda",
    "canonical_coordinate",
    "characteristic_value",
    "linearized_trajectory",
    "symmetry_residual",
    "zeta1_obstruction",
]

KINDS = ("zeta1", "zeta2", "zeta3")


def _check_seeds(model: Model, seeds: Sequence) -> list:
    if len(seeds) != model.k:
        raise DomainError(f"need {model.k} seeds, got {len(seeds)}")
    return list(seeds)


def build_alpha(model: Model, seeds: Sequence, n_max: int) -> list:
    """``alpha[0..n_max]`` with ``alpha[n+k] = alpha[n] / A[n]``."""
    conv = model.backend.convert
    alpha = [conv(s) for s in _check_seeds(model, seeds)]
    for n in range(model.k, n_max + 1):
        alpha.append(alpha[n - model.k] / model.a(n - model.k))
    return alpha[: n_max + 1]


def build_beta(model: Model, seeds: Sequence, n_max: int) -> list:
    """``beta[0..n_max]`` with ``beta[n+k] = A[n] beta[n]``."""
    conv = model.backend.convert
    beta = [conv(s) for s in _check_seeds(model, seeds)]
    for n in range(model.k, n_max + 1):
        beta.append(model.a(n - model.k) * beta[n - model.k])
    return beta[: n_max + 1]


def _root_of_unity(p: int, k: int, n: int) -> complex:
    # reduce the angle first so lam[n+k] == lam[n] holds bit for bit
    r = (p * n) % k
    if (4 * r) % k == 0:
        return (1 + 0j, 1j, -1 + 0j, -1j)[(4 * r) // k]
    return cmath.exp(2j * math.pi * r / k)


def build_lambda(k: int, p: int, n_max: int, backend: Backend = Backend.COMPLEX) -> list:
    """``lam[n] = exp(2 pi i p n / k)`` for n = 0..n_max.

    ``p = 0`` gives the constant 1 in any backend; other modes need complex
    scalars.
    """
    if not 0 <= p < k:
        raise DomainError(f"mode p must be in 0..{k - 1}, got {p}")
    backend = Backend(backend)
    if p == 0:
        one = backend.convert(1)
        return [one] * (n_max + 1)
    if backend is not Backend.COMPLEX:
        raise ConfigError(f"lambda with p={p} is complex; use the complex backend")
    return [_root_of_unity(p, k, n) for n in range(n_max + 1)]


def build_gamma(model: Model, seeds: Sequence, p: int, n_max: int) -> list:
    """``gamma[0..n_max]`` by iterating ``gamma[n+k] = A[n] gamma[n] - B[n] lam[n]``."""
    k = model.k
    backend = model.backend if p == 0 else Backend.COMPLEX
    lam = build_lambda(k, p, n_max, backend)
    gamma = [backend.convert(s) for s in _check_seeds(model, seeds)]
    for n in range(k, n_max + 1):
        m = n - k
        gamma.append(model.a(m) * gamma[m] - model.b(m) * lam[m])
    return gamma[: n_max + 1]


@dataclass(frozen=True)
class InfinitesimalFamily:
    """One characteristic with its coefficient sequences built to ``n_max``."""

    kind: str
    model: Model
    seeds: tuple
    n_max: int
    p: int = 0
    coefficients: dict = field(default_factory=dict, compare=False, repr=False)

    def _coef(self, name: str, n: int):
        if not 0 <= n <= self.n_max:
            raise DomainError(f"{self.kind} coefficients are built for n <= {self.n_max}, got {n}")
        return self.coefficients[name][n]

    def value(self, n: int, z):
        if self.kind == "zeta1":
            alpha = self._coef("alpha", n)
            return alpha + (self.model.b(n) / self.model.a(n)) * alpha * z
        if self.kind == "zeta2":
            return self._coef("beta", n) * z * z
        return self._coef("lambda", n) * z + self._coef("gamma", n) * z * z

    def __rmul__(self, c) -> "Combination":
        return Combination(((c, self),))

    def __add__(self, other) -> "Combination":
        return Combination(((1, self),)) + other


@dataclass(frozen=True)
class Combination:
    """Linear combination ``sum c_i zeta_i`` of characteristics."""

    terms: tuple

    @property
    def n_max(self) -> int:
        return min(f.n_max for _, f in self.terms)

    def value(self, n: int, z):
        return sum(c * f.value(n, z) for c, f in self.terms)

    def __rmul__(self, c) -> "Combination":
        return Combination(tuple((c * ci, f) for ci, f in self.terms))

    def __add__(self, other) -> "Combination":
        if isinstance(other, InfinitesimalFamily):
            other = Combination(((1, other),))
        return Combination(self.terms + other.terms)


def build_family(model: Model, kind: str, seeds: Sequence, n_max: int, p: int = 0) -> InfinitesimalFamily:
    """Build the coefficient sequences of ``kind`` (zeta1/zeta2/zeta3) up to ``n_max``."""
    if kind not in KINDS:
        raise ValueError(f"unknown family {kind!r}; choose from {KINDS}")
    if kind == "zeta1":
        coefs = {"alpha": build_alpha(model, seeds, n_max)}
    elif kind == "zeta2":
        coefs = {"beta": build_beta(model, seeds, n_max)}
    else:
        backend = model.backend if p == 0 else Backend.COMPLEX
        coefs = {
            "lambda": build_lambda(model.k, p, n_max, backend),
            "gamma": build_gamma(model, seeds, p, n_max),
        }
    return InfinitesimalFamily(kind, model, tuple(seeds), n_max, p, coefs)


def characteristic_value(family, n: int, z):
    """Evaluate ``zeta(n, z)`` for a family or a combination of families."""
    return family.value(n, z)


def symmetry_residual(model: Model, family, n: int, z):
    """``zeta(n+k, z/(A+Bz)) - A/(A+Bz)**2 * zeta(n, z)`` at index ``n``.

    Zero for every ``(n, z)`` exactly when ``family`` generates a symmetry.
    """
    z = model.backend.convert(z) if not isinstance(z, complex) else z
    a = model.a(n)
    den = a + model.b(n) * z
    if den == 0:
        raise DomainError(f"z={z} is singular at n={n} (A_n + B_n z = 0)")
    return family.value(n + model.k, z / den) - a / (den * den) * family.value(n, z)


def zeta1_obstruction(model: Model, n_max: int) -> list[int]:
    """Indices ``n <= n_max`` where ``B[n+k] + A[n+k] B[n] != 0``.

    The zeta1 residual at ``(n, z)`` equals
    ``alpha[n] z (B[n+k] + A[n+k] B[n]) / (A[n] A[n+k] (A[n] + B[n] z))``,
    so zeta1 is a symmetry iff this list is empty.
    """
    k = model.k
    return [n for n in range(n_max + 1) if model.b(n + k) + model.a(n + k) * model.b(n) != 0]


def canonical_coordinate(family: InfinitesimalFamily, n: int, z):
    """``S = -1 / (beta[n] z)``, the coordinate in which zeta2 is a translation."""
    if family.kind != "zeta2":
        raise DomainError("the canonical coordinate is defined for the zeta2 family")
    beta = family._coef("beta", n)
    if beta == 0 or z == 0:
        raise DomainError(f"canonical coordinate undefined for beta_n={beta}, z={z}")
    return -1 / (beta * z)


@dataclass(frozen=True)
class LinearizationReport:
    """Reciprocal states ``S[n] = 1/z[n]`` checked against the affine recurrence.

    ``recurrence_residual`` is the largest ``|S[n+k] - A[n] S[n] - B[n]|`` and
    ``direct_residual`` the largest gap to the unrolled product/sum formula
    (absolute and exact in the rational backend, relative otherwise).
    """

    values: tuple
    direct: tuple
    horizon: int
    truncated_at: Optional[int]
    reason: Optional[str]
    recurrence_residual: object
    direct_residual: object
    exact: bool
    tolerance: float = 1e-10

    @property
    def recurrence_holds(self) -> bool:
        if self.exact:
            return self.recurrence_residual == 0
        return self.recurrence_residual <= self.tolerance

    @property
    def matches_direct(self) -> bool:
        if self.exact:
            return self.direct_residual == 0
        return self.direct_residual <= self.tolerance


def _unrolled(model: Model, s0, n: int, j: int):
    """``S[j] prod_{m<n} A[km+j] + sum_{l<n} B[kl+j] prod_{l<m<n} A[km+j]``."""
    k = model.k
    one = model.backend.convert(1)
    prod = one
    for m in range(n):
        prod = prod * model.a(k * m + j)
    total = one - one
    suffix = one
    for l in range(n - 1, -1, -1):
        total = total + model.b(k * l + j) * suffix
        suffix = suffix * model.a(k * l + j)
    return s0 * prod + total


def _gap(a, b, exact: bool):
    if exact:
        return abs(a - b)
    scale = max(abs(a), abs(b), 1.0)
    return abs(a - b) / scale


def linearized_trajectory(model: Model, ic, N: int, tolerance: float = 1e-10) -> LinearizationReport:
    """Map a trajectory to ``S = 1/z`` and check both linear forms hold."""
    traj = iterate(model, ic if isinstance(ic, InitialConditions) else InitialConditions(ic), N)
    values = []
    truncated_at, reason = traj.truncated_at, traj.reason
    for n, z in enumerate(traj):
        if z == 0:
            truncated_at, reason = n, f"zero state at n={n}"
            break
        values.append(1 / z)
    k = model.k
    exact = model.backend.exact
    worst_rec = 0 if exact else 0.0
    for n in range(len(values) - k):
        worst_rec = max(worst_rec, _gap(values[n + k], model.a(n) * values[n] + model.b(n), exact))
    direct = []
    worst_direct = 0 if exact else 0.0
    for g, s in enumerate(values):
        n, j = divmod(g, k)
        d = _unrolled(model, values[j], n, j)
        direct.append(d)
        worst_direct = max(worst_direct, _gap(s, d, exact))
    return LinearizationReport(
        tuple(values), tuple(direct), N, truncated_at, reason, worst_rec, worst_direct, exact, tolerance
    )
