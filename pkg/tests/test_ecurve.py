import math

import pytest

from ntlab.ffield import make_field_ctx
from ntlab.ecurve import (ap_legendre, ap_table, curve_census,
                          curves_isomorphic, j_invariant, l_set, l_set_sizes,
                          short_weierstrass, torsion_class,
                          twist_relation_check)


@pytest.mark.parametrize("p", [11, 13])
def test_trace_against_point_count(p):
    ctx = make_field_ctx(p)
    for lam in range(2, p - 1):
        npoints = 1  # infinity
        for x in range(p):
            rhs = x * (x - 1) * (x - lam) % p
            npoints += 1 if rhs == 0 else (2 if ctx.qr[rhs] == 1 else 0)
        assert ap_legendre(ctx, lam) == p + 1 - npoints


@pytest.mark.parametrize("p", [11, 13, 17, 97])
def test_hasse_bound_and_table(p):
    ctx = make_field_ctx(p)
    aps = ap_table(ctx)
    for lam in range(2, p - 1):
        assert aps[lam] == ap_legendre(ctx, lam)
        assert abs(int(aps[lam])) <= 2 * math.isqrt(p) + 1


def test_lambda_guardrails(ctx11):
    for lam in (0, 1, 11, 12):
        with pytest.raises(ValueError):
            ap_legendre(ctx11, lam)
    # lambda = -1 is smooth (distinct roots 0, 1, -1) and has CM
    assert ap_legendre(ctx11, 10) == 0


@pytest.mark.parametrize("p", [11, 13, 17])
def test_twist_relations_exhaustive(p):
    ctx = make_field_ctx(p)
    for lam in range(2, p - 1):
        assert twist_relation_check(ctx, lam) == (True, True, True)


def test_j_invariant_constant_on_orbit(ctx13):
    p = 13
    for lam in range(2, p - 1):
        j = j_invariant(ctx13, lam)
        assert j == j_invariant(ctx13, pow(lam, p - 2, p))
        assert j == j_invariant(ctx13, (1 - lam) % p)


def test_torsion_class_partition(ctx13):
    buckets = {"2x2": 0, "2x4": 0, "4x4": 0}
    for lam in range(2, 12):
        buckets[torsion_class(ctx13, lam)] += 1
    assert sum(buckets.values()) == 10


def test_square_parameters_always_halve():
    # lambda a square forces a rational 4-torsion point
    for p in (13, 17, 29):
        ctx = make_field_ctx(p)
        for lam in range(2, p - 1):
            lam2 = lam * lam % p
            if lam2 in (0, 1, p - 1):
                continue
            assert torsion_class(ctx, lam2) in ("2x4", "4x4")


def test_short_weierstrass_preserves_trace(ctx11):
    p = 11
    for lam in range(2, p - 1):
        A, B = short_weierstrass(ctx11, lam)
        npoints = 1
        for x in range(p):
            rhs = (x ** 3 + A * x + B) % p
            npoints += 1 if rhs == 0 else (2 if ctx11.qr[rhs] == 1 else 0)
        assert p + 1 - npoints == ap_legendre(ctx11, lam)


def test_isomorphism_is_equivalence(ctx11):
    p = 11
    lams = [lam for lam in range(2, p - 1)]
    for a in lams:
        assert curves_isomorphic(ctx11, a, a)
        for b in lams:
            assert curves_isomorphic(ctx11, a, b) == curves_isomorphic(ctx11, b, a)


EXPECTED_SIZES = {
    7: {4: 4},
    11: {4: 8},
    13: {2: 2, 4: 8},
    17: {4: 8, 6: 6},
    29: {2: 2, 4: 12, 12: 12},
}


@pytest.mark.parametrize("p", sorted(EXPECTED_SIZES))
def test_l_set_size_census(p):
    from collections import Counter
    ctx = make_field_ctx(p)
    sizes = l_set_sizes(ctx)
    assert len(sizes) == p - 3
    hist = Counter(sizes.values())
    assert dict(hist) == EXPECTED_SIZES[p]
    # each class of size k shows up k times, and only even sizes occur
    assert all(v % k == 0 for k, v in hist.items())
    assert set(hist) <= {2, 4, 6, 12}


def test_l_set_matches_batched_sizes(ctx13):
    sizes = l_set_sizes(ctx13)
    for lam in range(2, 12):
        ls = l_set(ctx13, lam)
        assert len(ls) == sizes[lam]
        assert lam in ls
        for mu in ls:
            assert lam in l_set(ctx13, mu)


@pytest.mark.parametrize("p", [11, 13])
def test_census_covers_all_curves(p):
    ctx = make_field_ctx(p)
    census = curve_census(ctx)
    # mass formula: each class accounts for (p-1)/|Aut| models (A, B)
    smooth = sum(1 for A in range(p) for B in range(p)
                 if (4 * A ** 3 + 27 * B * B) % p != 0)
    assert all((p - 1) % c.aut == 0 for c in census)
    assert sum((p - 1) // c.aut for c in census) == smooth
    assert all(abs(c.a_p) <= 2 * math.sqrt(p) for c in census)
    assert all(c.two_rank in (0, 1, 2) for c in census)
