"""Trajectories by direct iteration and by the closed-form solutions.

Every closed form here returns ``z[k*n + j]`` from the seed ``z[j]`` alone.
With ``P(n) = prod_{l<n} A[k*l+j]`` and
``T(n) = sum_{l<n} B[k*l+j] prod_{l<m<n} A[k*m+j]`` the general solution is
``z[j] / (P(n) + z[j] T(n))``; the periodic and constant variants replace the
product and sum by powers and a geometric series.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Sequence

from .core import (
    Backend,
    ConfigError,
    DomainError,
    Model,
    SingularityError,
    Trajectory,
    step,
)

__all__ = [
    "InitialConditions",
    "MethodComparison",
    "MethodResult",
    "closed_form_constant",
    "closed_form_ecological",
    "closed_form_general",
    "closed_form_k_periodic",
    "closed_form_trajectory",
    "compare_methods",
    "iterate",
]


@dataclass(frozen=True)
class InitialConditions:
    z: tuple

    def __init__(self, z: Sequence):
        object.__setattr__(self, "z", tuple(z))

    def __len__(self) -> int:
        return len(self.z)

    def __getitem__(self, j):
        return self.z[j]

    def __iter__(self):
        return iter(self.z)

    def for_model(self, model: Model) -> tuple:
        """Validate against ``model`` and convert to its backend."""
        if len(self.z) != model.k:
            raise DomainError(f"need {model.k} initial conditions, got {len(self.z)}")
        values = tuple(model.backend.convert(v) for v in self.z)
        if model.mode == "ecological":
            for j, v in enumerate(values):
                if isinstance(v, complex) or not v > 0:
                    raise DomainError(f"ecological initial conditions must be positive (z_{j} = {v})")
        return values


def _seeds(model: Model, ic) -> tuple:
    if not isinstance(ic, InitialConditions):
        ic = InitialConditions(ic)
    return ic.for_model(model)


def _check_strand(model: Model, n: int, j: int) -> None:
    if not 0 <= j < model.k:
        raise DomainError(f"strand j must be in 0..{model.k - 1}, got {j}")
    if n < 0:
        raise DomainError(f"n must be non-negative, got {n}")


def iterate(model: Model, ic, N: int) -> Trajectory:
    """Iterate the recurrence to produce ``z[0..N-1]``.

    A vanishing denominator ends the trajectory; ``truncated_at`` then holds
    the first index whose value could not be computed.
    """
    seeds = _seeds(model, ic)
    k = model.k
    if N < k:
        raise DomainError(f"horizon N={N} is shorter than the order k={k}")
    values = list(seeds)
    for n in range(k, N):
        try:
            values.append(step(model, values[n - k], n - k))
        except SingularityError as exc:
            return Trajectory(k, tuple(values), N, n, f"zero-denominator at n={exc.n}")
    return Trajectory(k, tuple(values), N)


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------


def _general_strand(model: Model, zj, j: int) -> Iterator:
    """Yield ``z[k*n + j]`` for n = 0, 1, ...

    The denominator ``P(n) + z[j] T(n)`` is accumulated in nested form,
    ``D(n+1) = A[kn+j] D(n) + B[kn+j] z[j]`` with ``D(0) = 1``, which expands
    to the same product and sum but keeps ``D == 1`` exact at a fixed point.
    """
    one = model.backend.convert(1)
    den = one
    n = 0
    while True:
        if den == 0:
            raise SingularityError(model.k * n + j, zj, f"zero denominator in closed form at (n={n}, j={j})")
        yield zj / den
        idx = model.k * n + j
        den = model.a(idx) * den + model.b(idx) * zj
        n += 1


def closed_form_general(model: Model, ic, n: int, j: int):
    """``z[k*n + j]`` from the general product/sum solution."""
    _check_strand(model, n, j)
    zj = _seeds(model, ic)[j]
    for m, value in enumerate(_general_strand(model, zj, j)):
        if m == n:
            return value


def _ecological_strand(model: Model, zj, j: int) -> Iterator:
    one = model.backend.convert(1)
    den = one
    n = 0
    while True:
        if den == 0:
            raise SingularityError(model.k * n + j, zj, f"zero denominator in closed form at (n={n}, j={j})")
        yield zj / den
        idx = model.k * n + j
        mu = model.growth(idx)
        K = model.capacity(idx)
        den = den / mu + zj * (mu - one) / (K * mu)
        n += 1


def closed_form_ecological(model: Model, ic, n: int, j: int):
    """Same as :func:`closed_form_general`, written in growth rate and capacity."""
    if model.mode != "ecological":
        raise ConfigError("closed_form_ecological needs a model built with Model.ecological")
    _check_strand(model, n, j)
    zj = _seeds(model, ic)[j]
    for m, value in enumerate(_ecological_strand(model, zj, j)):
        if m == n:
            return value


def _k_periodic_value(model: Model, zj, n: int, j: int):
    a = model.a(j)
    b = model.b(j)
    one = model.backend.convert(1)
    if a == one:
        raise DomainError(
            f"A_{j} = 1: the geometric-series form is 0/0 here; use closed_form_general "
            "or closed_form_constant"
        )
    # (1-A) A^n + B (1-A^n) z, grouped so the A^n term vanishes at the fixed point
    bz = b * zj
    den = bz + a**n * ((one - a) - bz)
    if den == 0:
        raise SingularityError(model.k * n + j, zj, f"zero denominator in closed form at (n={n}, j={j})")
    return (one - a) * zj / den


def closed_form_k_periodic(model: Model, ic, n: int, j: int):
    """Closed form for coefficients with ``A[n+k] = A[n]``, ``B[n+k] = B[n]``.

    Requires ``A[j] != 1`` on the requested strand.
    """
    if not model.is_k_periodic:
        raise DomainError("closed_form_k_periodic needs k-periodic coefficients A and B")
    _check_strand(model, n, j)
    return _k_periodic_value(model, _seeds(model, ic)[j], n, j)


def _constant_value(model: Model, zj, n: int, j: int):
    a = model.a(0)
    b = model.b(0)
    one = model.backend.convert(1)
    if a == one:
        den = one + n * b * zj
    else:
        c = zj * b / (one - a)
        den = c + a**n * (one - c)
    if den == 0:
        raise SingularityError(model.k * n + j, zj, f"zero denominator in closed form at (n={n}, j={j})")
    return zj / den


def closed_form_constant(model: Model, ic, n: int, j: int):
    """Closed form for constant ``A`` and ``B`` (both the ``A = 1`` and ``A != 1`` cases)."""
    if not model.is_constant:
        raise DomainError("closed_form_constant needs constant coefficients A and B")
    _check_strand(model, n, j)
    return _constant_value(model, _seeds(model, ic)[j], n, j)


def _strand_from_values(fn: Callable, model: Model, zj, j: int) -> Iterator:
    n = 0
    while True:
        yield fn(model, zj, n, j)
        n += 1


_METHODS = {
    "general": lambda model, zj, j: _general_strand(model, zj, j),
    "ecological": lambda model, zj, j: _ecological_strand(model, zj, j),
    "k_periodic": lambda model, zj, j: _strand_from_values(_k_periodic_value, model, zj, j),
    "constant": lambda model, zj, j: _strand_from_values(_constant_value, model, zj, j),
}


def applicable_methods(model: Model) -> dict[str, list[int]]:
    """Closed forms valid for ``model``, each with the strands it covers."""
    strands = list(range(model.k))
    methods = {"general": strands}
    if model.mode == "ecological":
        methods["ecological"] = strands
    if model.is_k_periodic:
        one = model.backend.convert(1)
        covered = [j for j in strands if model.a(j) != one]
        if covered:
            methods["k_periodic"] = covered
    if model.is_constant:
        methods["constant"] = strands
    return methods


def closed_form_trajectory(model: Model, ic, N: int, method: str = "general") -> Trajectory:
    """Assemble ``z[0..N-1]`` strand by strand from one closed form.

    Strands the method does not cover (``A[j] = 1`` for the periodic form) are
    left as ``None``.
    """
    if method not in _METHODS:
        raise ValueError(f"unknown closed form {method!r}; choose from {sorted(_METHODS)}")
    seeds = _seeds(model, ic)
    k = model.k
    if N < k:
        raise DomainError(f"horizon N={N} is shorter than the order k={k}")
    covered = applicable_methods(model).get(method)
    if covered is None:
        raise DomainError(f"closed form {method!r} does not apply to this model")
    values: list = [None] * N
    first_bad: Optional[int] = None
    for j in covered:
        gen = _METHODS[method](model, seeds[j], j)
        for g in range(j, N, k):
            if first_bad is not None and g >= first_bad:
                break
            try:
                values[g] = next(gen)
            except SingularityError:
                first_bad = g
                break
    if first_bad is None:
        return Trajectory(k, tuple(values), N)
    return Trajectory(k, tuple(values[:first_bad]), N, first_bad, "zero-denominator")


# ---------------------------------------------------------------------------
# oracle harness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MethodResult:
    method: str
    strands: tuple
    max_discrepancy: object
    compared: int
    truncated_at: Optional[int]
    truncation_agrees: bool


@dataclass(frozen=True)
class MethodComparison:
    """Discrepancies of every applicable closed form against iteration.

    In the rational backend discrepancies are exact absolute differences and
    must be zero; in floating backends they are relative errors compared
    against ``tolerance``.
    """

    backend: Backend
    horizon: int
    tolerance: float
    trajectory: Trajectory
    results: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        for r in self.results.values():
            if not r.truncation_agrees:
                return False
            if self.backend.exact:
                if r.max_discrepancy != 0:
                    return False
            elif not r.max_discrepancy <= self.tolerance:
                return False
        return True

    def table(self) -> str:
        rows = [("method", "strands", "compared", "max discrepancy", "truncated at", "status")]
        for r in self.results.values():
            good = r.truncation_agrees and (
                r.max_discrepancy == 0 if self.backend.exact else r.max_discrepancy <= self.tolerance
            )
            rows.append(
                (
                    r.method,
                    f"{len(r.strands)}/{self.trajectory.k}",
                    str(r.compared),
                    str(r.max_discrepancy) if self.backend.exact else f"{r.max_discrepancy:.3e}",
                    "-" if r.truncated_at is None else str(r.truncated_at),
                    "ok" if good else "MISMATCH",
                )
            )
        widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
        return "\n".join("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows)


def _discrepancy(a, b, exact: bool):
    if exact:
        return abs(a - b)
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


def compare_methods(model: Model, ic, N: int, tolerance: float = 1e-9) -> MethodComparison:
    """Run :func:`iterate` and every applicable closed form, index by index."""
    traj = iterate(model, ic, N)
    exact = model.backend.exact
    results = {}
    for method, strands in applicable_methods(model).items():
        other = closed_form_trajectory(model, ic, N, method)
        worst = 0 if exact else 0.0
        compared = 0
        for g in range(min(len(traj), len(other))):
            if g % model.k not in strands:
                continue
            d = _discrepancy(traj[g], other[g], exact)
            if d > worst:
                worst = d
            compared += 1
        if traj.truncated_at is not None and traj.truncated_at % model.k in strands:
            agrees = other.truncated_at == traj.truncated_at
        else:
            agrees = other.truncated_at is None or (
                traj.truncated_at is not None and other.truncated_at > traj.truncated_at
            )
        results[method] = MethodResult(method, tuple(strands), worst, compared, other.truncated_at, agrees)
    return MethodComparison(model.backend, N, tolerance, traj, results)
