from fractions import Fraction

import pytest

from qwalk.exact import Dyadic, GaussianScaled, RootTwoScaled


def test_dyadic_normalization():
    assert Dyadic(4, 3) == Dyadic(1, 1)
    assert Dyadic(0, 7) == Dyadic(0, 0)
    assert Dyadic(6, 1) == Dyadic(3, 0)
    assert Dyadic(-4, 2) == Dyadic(-1, 0)


def test_dyadic_arithmetic():
    a, b = Dyadic(3, 2), Dyadic(1, 3)  # 3/4, 1/8
    assert (a + b).as_fraction() == Fraction(7, 8)
    assert (a - b).as_fraction() == Fraction(5, 8)
    assert (a * b).as_fraction() == Fraction(3, 32)
    assert (a * 2).as_fraction() == Fraction(3, 2)
    assert (2 * a - 1).as_fraction() == Fraction(1, 2)
    assert -a == Dyadic(-3, 2)
    assert a > b
    assert Dyadic(1, 1) < 1
    assert float(Dyadic(5, 2)) == 1.25


def test_dyadic_fraction_round_trip():
    for frac in (Fraction(5, 8), Fraction(-7, 16), Fraction(3), Fraction(0)):
        assert Dyadic.from_fraction(frac).as_fraction() == frac
    with pytest.raises(ValueError):
        Dyadic.from_fraction(Fraction(1, 3))


def test_dyadic_numerator_at():
    v = Dyadic(3, 2)
    assert v.numerator_at(4) == 12
    assert v.numerator_at(2) == 3
    with pytest.raises(ValueError):
        v.numerator_at(1)


def test_gaussian_arithmetic():
    x = GaussianScaled(1, 2, 1)  # (1+2i)/2
    y = GaussianScaled(3, -1, 2)  # (3-i)/4
    assert (x * y) == GaussianScaled(5, 5, 3)
    assert (x + y) == GaussianScaled(5, 3, 2)
    assert x.conjugate() == GaussianScaled(1, -2, 1)
    assert x.abs_squared() == Dyadic(5, 2)
    assert x.real == Dyadic(1, 1)
    assert x.imag == Dyadic(1, 0)
    assert GaussianScaled(0, 0, 5).is_zero()
    assert x.as_complex() == complex(0.5, 1.0)


def test_gaussian_unit_powers():
    powers = [GaussianScaled.unit_power(k) for k in range(4)]
    assert powers == [
        GaussianScaled(1, 0),
        GaussianScaled(0, 1),
        GaussianScaled(-1, 0),
        GaussianScaled(0, -1),
    ]
    assert GaussianScaled.unit_power(6) == GaussianScaled(-1, 0)
    assert GaussianScaled.unit_power(-1) == GaussianScaled(0, -1)


def test_root_two_pow_half():
    assert RootTwoScaled.pow2_half(0) == RootTwoScaled(1, 0, 0)
    assert RootTwoScaled.pow2_half(2) == RootTwoScaled(2, 0, 0)
    assert RootTwoScaled.pow2_half(1) == RootTwoScaled(0, 1, 0)
    assert RootTwoScaled.pow2_half(-1) == RootTwoScaled(0, 1, 1)
    assert RootTwoScaled.pow2_half(-2) == RootTwoScaled(1, 0, 1)
    for e in range(-8, 9):
        assert float(RootTwoScaled.pow2_half(e)) == pytest.approx(2.0 ** (e / 2))


def test_root_two_cos_table():
    import math

    for m in range(-10, 11):
        assert float(RootTwoScaled.cos_eighth(m)) == pytest.approx(
            math.cos(m * math.pi / 4), abs=1e-12
        )


def test_root_two_arithmetic():
    r2 = RootTwoScaled(0, 1, 0)
    assert r2 * r2 == RootTwoScaled(2, 0, 0)
    x = RootTwoScaled(1, 1, 1)  # (1 + sqrt2)/2
    assert (x * x) == RootTwoScaled(3, 2, 2)
    assert (x - x).is_dyadic()
    assert (x + x) == RootTwoScaled(1, 1, 0)
    with pytest.raises(ValueError):
        x.to_dyadic()
    assert RootTwoScaled(6, 0, 1).to_dyadic() == Dyadic(3, 0)
