import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from ntlab.ddreal import (CertifiedReal, PrecisionError, cos_table, dd_add,
                          dd_mul, dd_sum, two_prod, two_sum)

moderate = st.floats(min_value=-1e12, max_value=1e12,
                     allow_nan=False, allow_infinity=False)


@given(moderate, moderate)
def test_two_sum_is_exact(a, b):
    s, e = two_sum(a, b)
    assert Fraction(s) + Fraction(e) == Fraction(a) + Fraction(b)


@given(st.floats(min_value=-1e6, max_value=1e6, allow_nan=False),
       st.floats(min_value=-1e6, max_value=1e6, allow_nan=False))
def test_two_prod_is_exact(a, b):
    # splitting is exact only while the error term stays normal
    assume(a == 0 or b == 0 or abs(a * b) > 1e-280)
    s, e = two_prod(a, b)
    assert Fraction(s) + Fraction(e) == Fraction(a) * Fraction(b)


def test_dd_sum_near_exact():
    rng = np.random.default_rng(7)
    hi = rng.uniform(-1.0, 1.0, size=4001)
    lo = np.zeros_like(hi)
    got_h, got_l = dd_sum(hi, lo)
    exact = sum(Fraction(v) for v in hi)
    assert abs(Fraction(got_h) + Fraction(got_l) - exact) < Fraction(1, 2 ** 70)


def test_dd_add_mul_exact_on_representable_inputs():
    xs = np.array([1.5, -2.25, 3.0])
    ys = np.array([0.5, 4.0, -1.25])
    z = np.zeros(3)
    ah, al = dd_add(xs, z, ys, z)
    mh, ml = dd_mul(xs, z, ys, z)
    for i in range(3):
        assert Fraction(ah[i]) + Fraction(al[i]) == Fraction(xs[i]) + Fraction(ys[i])
        assert Fraction(mh[i]) + Fraction(ml[i]) == Fraction(xs[i]) * Fraction(ys[i])


@pytest.mark.parametrize("p", [7, 97, 499])
def test_cos_table_certified_against_mpmath(p):
    hi, lo, err = cos_table(p)
    assert err <= 1e-30
    with mpmath.workdps(60):
        for k in range(0, p, max(1, p // 23)):
            exact = mpmath.cos(2 * mpmath.pi * k / p)
            got = mpmath.mpf(hi[k]) + mpmath.mpf(lo[k])
            assert abs(got - exact) <= err


def test_round_to_integer_accepts_certified_values():
    assert CertifiedReal(41.0 + 1e-13, 1e-10).round_to_integer() == 41
    assert CertifiedReal(-3.0, 0.49).round_to_integer() == -3


def test_round_to_integer_rejects_weak_bounds():
    with pytest.raises(PrecisionError):
        CertifiedReal(41.0, 0.5).round_to_integer()
    with pytest.raises(PrecisionError):
        CertifiedReal(41.4, 0.2).round_to_integer()
    with pytest.raises(ValueError):
        CertifiedReal(1.0, -0.1)


@given(moderate, st.floats(min_value=0, max_value=10, allow_nan=False),
       moderate, st.floats(min_value=0, max_value=10, allow_nan=False))
def test_certified_arithmetic_propagates_bounds(x, ex, y, ey):
    a, b = CertifiedReal(x, ex), CertifiedReal(y, ey)
    assert (a + b).err >= ex + ey
    assert (a - b).err >= ex + ey
    assert (a * b).err >= abs(x) * ey + abs(y) * ex
