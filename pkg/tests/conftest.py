import random
from fractions import Fraction

import pytest

from bevholt import Model, Periodic


def brute_force(A, B, ic, N):
    """Plain-loop oracle: z[n+k] = z[n] / (A(n) + B(n) z[n]) with callables A, B."""
    k = len(ic)
    z = list(ic)
    for n in range(k, N):
        z.append(z[n - k] / (A(n - k) + B(n - k) * z[n - k]))
    return z


def _nonzero_rational(rng, lo=-5, hi=5, den=6, exclude=()):
    while True:
        value = Fraction(rng.randint(lo, hi), rng.randint(1, den))
        if value != 0 and value not in exclude:
            return value


def random_rational_model(rng, k, constant=False):
    """k-periodic (or constant) rational model with A_j not in {0, 1}, B_j != 0."""
    if constant:
        a = [_nonzero_rational(rng, exclude=(1,))] * k
        b = [_nonzero_rational(rng)] * k
    else:
        a = [_nonzero_rational(rng, exclude=(1,)) for _ in range(k)]
        b = [_nonzero_rational(rng) for _ in range(k)]
    ic = [_nonzero_rational(rng, -9, 9, 4) for _ in range(k)]
    model = Model(k, Periodic(a), Periodic(b))
    return model, ic


@pytest.fixture
def rng():
    return random.Random(20240611)
