import cmath
import random
from fractions import Fraction

import pytest

from psl2trop.hahn import HahnSeries
from psl2trop.mat2 import Mat2
from psl2trop.valuation import HahnMat2

QUARTER_GRID = [Fraction(k, 4) for k in range(-12, 13)]


def rand_complex(rng: random.Random) -> complex:
    return complex(rng.gauss(0.0, 1.0), rng.gauss(0.0, 1.0))


def rand_mat(rng: random.Random) -> Mat2:
    return Mat2(rand_complex(rng), rand_complex(rng), rand_complex(rng), rand_complex(rng))


def rand_det1(rng: random.Random) -> Mat2:
    """Random determinant-1 matrix, skipping near-singular draws."""
    while True:
        m = rand_mat(rng)
        d = m.det()
        if abs(d) > 1e-2:
            return m * (1.0 / cmath.sqrt(d))


def rand_unitary(rng: random.Random) -> Mat2:
    """Haar-ish random element of SU(2) from a normalized quaternion."""
    while True:
        w, x, y, z = (rng.gauss(0, 1) for _ in range(4))
        n = (w * w + x * x + y * y + z * z) ** 0.5
        if n > 1e-3:
            break
    w, x, y, z = w / n, x / n, y / n, z / n
    return Mat2(complex(w, z), complex(y, x), complex(-y, x), complex(w, -z))


def rand_series(rng: random.Random, min_terms=1, max_terms=3) -> HahnSeries:
    """Random series: quarter-integer exponents in [-3, 3], Gaussian coefficients."""
    n = rng.randint(min_terms, max_terms)
    exps = rng.sample(QUARTER_GRID, n)
    return HahnSeries([(e, rand_complex(rng)) for e in exps])


def rand_hahn_mat(rng: random.Random) -> HahnMat2:
    return HahnMat2(*(rand_series(rng) for _ in range(4)))


@pytest.fixture
def rng():
    return random.Random(20260810)
