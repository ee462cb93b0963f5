import random
from fractions import Fraction

import pytest

from leafcoh.exact import ExactCoeff, GaussianRational, PhaseCoeff
from leafcoh.scalars import QuadraticIrrational, Rational, golden_ratio_conjugate


def test_gaussian_rational_field_ops():
    a = GaussianRational(Fraction(1, 2), Fraction(-3, 4))
    b = GaussianRational(Fraction(2, 3), Fraction(5))
    assert (a * b - b * a).is_zero()
    assert (a * a.inverse() - GaussianRational(1)).is_zero()
    assert a.conj().conj() == a


def test_exactcoeff_radical_multiplication():
    g = ExactCoeff.from_scalar(golden_ratio_conjugate())
    # golden conjugate satisfies x^2 + x - 1 = 0
    expr = g * g + g - ExactCoeff.from_fraction(1)
    assert expr.is_zero()
    s2 = ExactCoeff.from_scalar(QuadraticIrrational(0, 1, 1, 2))
    s8 = s2 * s2  # = 2
    assert s8 == ExactCoeff.from_fraction(2)
    mixed = s2 * ExactCoeff.from_scalar(QuadraticIrrational(0, 1, 1, 5))
    assert set(mixed.terms) == {(10, 0)}


def test_exactcoeff_inverse_random():
    rng = random.Random(5)
    for _ in range(40):
        terms = {}
        for d in rng.sample([1, 2, 3, 5], rng.randint(1, 3)):
            terms[(d, 0)] = GaussianRational(
                Fraction(rng.randint(-5, 5), rng.randint(1, 6)),
                Fraction(rng.randint(-5, 5), rng.randint(1, 6)),
            )
        x = ExactCoeff(terms)
        if x.is_zero():
            continue
        assert (x * x.inverse()) == ExactCoeff.from_fraction(1)


def test_exactcoeff_tau_grading():
    g = ExactCoeff.from_fraction(Fraction(3, 7)).times_tau(2).times_i()
    assert g.tau_degree() == 2
    inv = g.inverse()
    assert (g * inv) == ExactCoeff.from_fraction(1)
    mixed = g + ExactCoeff.from_fraction(1)
    assert mixed.tau_degree() is None
    with pytest.raises(ValueError):
        mixed.inverse()


def test_exactcoeff_to_complex():
    import math

    x = ExactCoeff.from_fraction(Fraction(1, 2)).times_tau(1)  # pi
    assert x.to_complex() == pytest.approx(math.pi)


def test_phasecoeff_transcendental_zero_test():
    lam = golden_ratio_conjugate()
    z = PhaseCoeff(lam, {3: GaussianRational(1), 0: GaussianRational(-1)})
    assert not z.is_zero()
    assert (z - z).is_zero()
    w = z.shift_phase(2) * z.conj()
    assert not w.is_zero()


def test_phasecoeff_cyclotomic_zero_test():
    third = Rational(1, 3)
    ones = PhaseCoeff(third, {0: GaussianRational(1), 1: GaussianRational(1), 2: GaussianRational(1)})
    assert ones.is_zero()
    quarter = Rational(1, 4)
    assert PhaseCoeff(quarter, {1: GaussianRational(1), 0: GaussianRational(0, -1)}).is_zero()
    # zeta_6 satisfies z^2 - z + 1 = 0
    sixth = Rational(1, 6)
    p = PhaseCoeff(
        sixth, {2: GaussianRational(1), 1: GaussianRational(-1), 0: GaussianRational(1)}
    )
    assert p.is_zero()
    assert not PhaseCoeff(sixth, {1: GaussianRational(1)}).is_zero()


def test_phasecoeff_numeric_evaluation():
    lam = Rational(1, 8)
    p = PhaseCoeff(lam, {1: GaussianRational(1)})
    v = p.to_complex()
    import cmath

    assert abs(v - cmath.exp(2j * cmath.pi / 8)) < 1e-15


def test_phasecoeff_slope_mixing_rejected():
    a = PhaseCoeff(Rational(1, 3), {0: GaussianRational(1)})
    b = PhaseCoeff(Rational(1, 4), {0: GaussianRational(1)})
    with pytest.raises(ValueError):
        _ = a + b


def test_exactcoeff_ring_axioms_random():
    rng = random.Random(12)

    def rand_coeff():
        terms = {}
        for _ in range(rng.randint(1, 3)):
            d = rng.choice([1, 2, 3, 5])
            j = rng.randint(-1, 2)
            terms[(d, j)] = GaussianRational(
                Fraction(rng.randint(-4, 4), rng.randint(1, 5)),
                Fraction(rng.randint(-4, 4), rng.randint(1, 5)),
            )
        return ExactCoeff(terms)

    for _ in range(30):
        a, b, c = rand_coeff(), rand_coeff(), rand_coeff()
        assert ((a * b) * c - a * (b * c)).is_zero()
        assert (a * (b + c) - (a * b + a * c)).is_zero()
        assert (a * b - b * a).is_zero()


def test_phasecoeff_zero_test_consistent_with_numerics():
    rng = random.Random(13)
    lams = [Rational(1, 3), Rational(2, 5), Rational(1, 6), golden_ratio_conjugate()]
    for _ in range(40):
        lam = rng.choice(lams)
        terms = {}
        for _ in range(rng.randint(1, 4)):
            terms[rng.randint(-6, 6)] = GaussianRational(
                Fraction(rng.randint(-3, 3), rng.randint(1, 4)),
                Fraction(rng.randint(-3, 3), rng.randint(1, 4)),
            )
        p = PhaseCoeff(lam, terms)
        numeric = abs(p.to_mpc(50))
        if p.is_zero():
            assert numeric < 1e-40
        else:
            assert numeric > 1e-30  # desk-scale coefficients cannot hide this low
