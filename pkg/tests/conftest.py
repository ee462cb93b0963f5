"""Shared builders for randomized but seeded test data."""

import random
from fractions import Fraction

import pytest

from leafcoh.exact import ExactCoeff, GaussianRational
from leafcoh.fourier import TrigPoly
from leafcoh.leafwise import LeafwiseForm, LinearFoliation
from leafcoh.scalars import QuadraticIrrational, Rational, golden_ratio_conjugate


@pytest.fixture
def rng():
    return random.Random(20260808)


def random_real_poly(rng, dims, n_modes=6, max_freq=5, zero_mean=False):
    """Random real-valued trig polynomial with conjugate-symmetric coefficients."""
    coeffs = {}
    if not zero_mean:
        coeffs[(0,) * dims] = complex(rng.uniform(-1, 1), 0.0)
    tries = 0
    while len(coeffs) < 2 * n_modes + (0 if zero_mean else 1) and tries < 200:
        tries += 1
        k = tuple(rng.randint(-max_freq, max_freq) for _ in range(dims))
        if not any(k) or k in coeffs:
            continue
        c = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        coeffs[k] = c
        coeffs[tuple(-v for v in k)] = c.conjugate()
    return TrigPoly(dims, coeffs)


def random_complex_poly(rng, dims, n_modes=6, max_freq=5):
    coeffs = {}
    while len(coeffs) < n_modes:
        k = tuple(rng.randint(-max_freq, max_freq) for _ in range(dims))
        coeffs[k] = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
    return TrigPoly(dims, coeffs)


def random_gaussian_rational(rng, den_max=7):
    return GaussianRational(
        Fraction(rng.randint(-6, 6), rng.randint(1, den_max)),
        Fraction(rng.randint(-6, 6), rng.randint(1, den_max)),
    )


def random_exact_poly(rng, dims, n_modes=5, max_freq=4, real=False):
    """Trig polynomial with exact Gaussian-rational coefficients."""
    coeffs = {}
    while len(coeffs) < n_modes:
        k = tuple(rng.randint(-max_freq, max_freq) for _ in range(dims))
        g = random_gaussian_rational(rng)
        if g.is_zero():
            continue
        if real:
            coeffs[k] = ExactCoeff.from_gaussian(g)
            coeffs[tuple(-v for v in k)] = ExactCoeff.from_gaussian(g.conj())
        else:
            coeffs[k] = ExactCoeff.from_gaussian(g)
    return TrigPoly(dims, coeffs)


def random_exact_scalar(rng):
    """Random exact slope entry: rational or quadratic irrational."""
    if rng.random() < 0.5:
        return Rational(rng.randint(-5, 5), rng.randint(1, 9))
    d = rng.choice([2, 3, 5, 7])
    b = rng.choice([-2, -1, 1, 2])
    return QuadraticIrrational(rng.randint(-3, 3), b, rng.randint(1, 4), d)


def random_exact_foliation(rng, p=None, q=None):
    p = p if p is not None else rng.randint(1, 3)
    q = q if q is not None else rng.randint(1, 2)
    B = [[random_exact_scalar(rng) for _ in range(q)] for _ in range(p)]
    return LinearFoliation(p, q, B)


def random_exact_leafwise_form(rng, F, degree, n_modes=3):
    import itertools

    comps = {}
    for idx in itertools.combinations(range(F.p), degree):
        comps[idx] = random_exact_poly(rng, F.dims, n_modes=n_modes, max_freq=3)
    return LeafwiseForm(F, degree, comps)


def cat_map_foliation():
    """p = q = 1 foliation with the stable slope (1 - sqrt 5)/2 of [[2,1],[1,1]]."""
    return LinearFoliation(1, 1, [[QuadraticIrrational(1, -1, 2, 5)]])


def golden():
    return golden_ratio_conjugate()
