"""Seeded random polynomial saddles for property tests and sweeps."""
from __future__ import annotations

import random
from fractions import Fraction

from .errors import NonpositiveOmega, ResonanceDetected
from .series import multi_indices
from .solver import VectorField

MAX_REDRAWS = 1000


def _eigenvalues(rng: random.Random, n: int, sign: int) -> tuple[Fraction, ...]:
    vals = sorted(Fraction(rng.randint(2, 30), 10) for _ in range(n))
    return tuple(sign * v for v in (reversed(vals) if sign < 0 else vals))


def random_saddle(rng: random.Random, max_dim: int = 3, max_degree: int = 4, mode: str = "float") -> VectorField:
    """Draw a non-resonant saddle with d <= max_dim and deg F <= max_degree.

    Eigenvalues are tenths in [0.2, 3.0]; resonant draws are discarded and
    redrawn, so the result always passes the spectrum check.
    """
    for _ in range(MAX_REDRAWS):
        d = rng.randint(2, max_dim)
        ds = rng.randint(1, d - 1)
        lam = _eigenvalues(rng, ds, -1)
        mu = _eigenvalues(rng, d - ds, 1)
        degree = rng.randint(2, max_degree)
        terms = {}
        for _ in range(rng.randint(1, 3 * d)):
            k = rng.randint(2, degree)
            m = rng.choice(multi_indices(d, k))
            coeff = Fraction(rng.randint(-20, 20), 10)
            if coeff:
                terms[(rng.randrange(d), m)] = coeff
        vf = VectorField(lam, mu, terms, mode=mode)
        try:
            vf.spectrum
        except (ResonanceDetected, NonpositiveOmega):
            continue
        return vf
    raise RuntimeError("could not draw a non-resonant saddle")


def random_corpus(seed: int = 2024, size: int = 10, **kwargs) -> list[VectorField]:
    rng = random.Random(seed)
    return [random_saddle(rng, **kwargs) for _ in range(size)]
