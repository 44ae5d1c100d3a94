from fractions import Fraction

import pytest

from ntlab.ffield import make_field_ctx
from ntlab import identities as idn
from ntlab import classnumber as cn


FROZEN_S4PHI = {7: -315, 11: 121, 13: -793, 17: -1717, 19: -1919,
                23: -299, 29: -8265, 31: 2077, 37: 1887}


@pytest.mark.parametrize("p", sorted(FROZEN_S4PHI))
def test_three_routes_agree_on_frozen_values(p, htable):
    ctx = make_field_ctx(p)
    want = FROZEN_S4PHI[p]
    assert idn.s4_direct(ctx) == want
    assert idn.s4_via_ap(ctx, corrected=True) == want
    assert idn.s4_via_classnumbers(ctx, htable, corrected=True) == want


@pytest.mark.parametrize("p", [7, 11, 13, 41, 43])
def test_uncorrected_routes_differ_by_2p_p_minus_2(p, htable):
    # the as-recorded constant is off by 2p(p-2) on both derivation routes
    ctx = make_field_ctx(p)
    truth = idn.s4_direct(ctx)
    assert idn.s4_via_ap(ctx, corrected=False) - truth == 2 * p * (p - 2)
    assert idn.s4_via_classnumbers(ctx, htable, corrected=False) - truth == 2 * p * (p - 2)


@pytest.mark.parametrize("p", [7, 11, 19])
def test_sheaf_offset_route(p):
    from ntlab.kloosterman import sheaf_moment
    ctx = make_field_ctx(p)
    s4 = idn.s4_direct(ctx)
    assert idn.sheaf_via_s4(ctx, s4) == s4 + 3 * p * p
    assert sheaf_moment(ctx, 4) == idn.sheaf_via_s4(ctx, s4)


def test_cp_count_routes(ctx7, ctx13):
    assert idn.cp_count(ctx7, "brute") == idn.cp_count(ctx7, "formula") == 214
    assert idn.cp_count(ctx13, "brute") == idn.cp_count(ctx13, "formula")
    with pytest.raises(ValueError):
        idn.cp_count(ctx7, "guess")
    with pytest.raises(ValueError):
        idn.cp_count(make_field_ctx(103), "brute", cap=100)


@pytest.mark.parametrize("p", [7, 11, 13, 31, 61])
def test_ap_second_moment(p):
    rec = idn.ap_second_moment_check(make_field_ctx(p))
    assert rec.match
    assert rec.lhs == rec.rhs


def _admissible(p):
    import math
    for n in (1, 2, 4):
        if (p - 1) % n:
            continue
        for s in range(-2 * math.isqrt(p), 2 * math.isqrt(p) + 1):
            if s * s < 4 * p and s % p != 0 and (p + 1 - s) % (n * n) == 0:
                yield n, s


@pytest.mark.parametrize("p", [7, 11, 13, 17])
def test_schoof_counts_exhaustive(p, htable):
    ctx = make_field_ctx(p)
    pairs = list(_admissible(p))
    assert any(n == 2 for n, _ in pairs)
    for n, s in pairs:
        rec = idn.schoof_count_check(ctx, n, s, htable)
        assert rec.match, (p, n, s, rec)
        assert "plain=H" in rec.detail and "weighted=H*" in rec.detail


def test_schoof_rejects_inadmissible(ctx13, htable):
    with pytest.raises(ValueError):
        idn.schoof_count_check(ctx13, 1, 13, htable)   # p | s
    with pytest.raises(ValueError):
        idn.schoof_count_check(ctx13, 1, 8, htable)    # s^2 > 4p
    with pytest.raises(ValueError):
        idn.schoof_count_check(ctx13, 4, 2, htable)    # 16 does not divide 12


@pytest.mark.parametrize("p", [13, 17, 29, 101])
def test_counting_lemma(p, htable):
    rec = idn.counting_lemma_check(make_field_ctx(p), htable)
    assert rec.match and rec.lhs == rec.rhs


def test_counting_lemma_needs_1_mod_4(ctx7, htable):
    with pytest.raises(ValueError):
        idn.counting_lemma_check(ctx7, htable)


@pytest.mark.parametrize("p", [13, 17, 23])
def test_torsion_census(p, htable):
    rec = idn.torsion_census_check(make_field_ctx(p), htable)
    assert rec.match


@pytest.mark.parametrize("p", [29, 37, 53])
def test_windows_collect_residue_classes(p):
    import math
    w8 = idn.window8(p)
    w16 = idn.window16(p)
    assert set(w16) <= set(w8)
    for s in w8:
        assert s * s < 4 * p and (p + 1 - s) % 8 == 0
        assert (4 * p - s * s) % 4 == 0
    for s in w16:
        assert (p + 1 - s) % 16 == 0 and (4 * p - s * s) % 16 == 0
    full = [s for s in range(-2 * math.isqrt(p) - 1, 2 * math.isqrt(p) + 2)
            if s * s < 4 * p and (p + 1 - s) % 8 == 0]
    assert sorted(w8) == sorted(full)


def test_sweep_claim_registry():
    assert set(idn.SWEEP_CLAIMS) == {"thm1.1", "cor1.2", "prop4.6", "prop4.8",
                                     "prop4.9", "prop4.11", "prop4.4"}


@pytest.mark.parametrize("which", ["thm1.1", "cor1.2"])
def test_moment_sweeps_bounded(which):
    recs = idn.asymptotic_sweep(100, 400, which)
    assert all(r.ratio is not None and r.ratio <= 4.0 for r in recs)
    assert [r.p for r in recs] == sorted(r.p for r in recs)


def test_window_sweeps_respect_residue_classes(htable):
    for which, mod, want in (("prop4.6", 4, 1), ("prop4.8", 4, 1),
                             ("prop4.9", 8, 3), ("prop4.11", 8, 7),
                             ("prop4.4", 8, 7)):
        recs = idn.asymptotic_sweep(7, 300, which, table=htable)
        assert recs, which
        assert all(r.p % mod == want for r in recs)
        assert all(r.ratio <= 4.0 for r in recs)


def test_alias_matches_original(htable):
    a = idn.asymptotic_sweep(7, 200, "prop4.4", table=htable)
    b = idn.asymptotic_sweep(7, 200, "prop4.11", table=htable)
    assert [(r.p, r.lhs) for r in a] == [(r.p, r.lhs) for r in b]
