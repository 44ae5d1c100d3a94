"""Legendre curves y^2 = x(x-1)(x-lambda) over F_p: traces, j-invariants,
twist relations, 2-power torsion, and F_p-isomorphism classes.

Isomorphism testing uses the cheap (j, a_p) key in the generic case and falls
back to explicit twist tests (quadratic / quartic / sextic, depending on j)
whenever the key is ambiguous (a_p = 0 or j in {0, 1728}).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ffield import FieldCtx


def _check_lambda(ctx: FieldCtx, lam: int) -> int:
    lam %= ctx.p
    if lam in (0, 1):
        raise ValueError(f"singular curve: lambda = {lam}")
    return lam


def ap_legendre(ctx: FieldCtx, lam: int) -> int:
    """a_p(lambda) = -sum over x of phi(x (x-1) (x-lambda)), exact."""
    p = ctx.p
    lam = _check_lambda(ctx, lam)
    x = np.arange(p, dtype=np.int64)
    vals = (x * ((x - 1) % p) % p) * ((x - lam) % p) % p
    qr = np.array(ctx.qr, dtype=np.int64)
    return -int(qr[vals].sum())


def ap_table(ctx: FieldCtx) -> np.ndarray:
    """a_p(lambda) for every lambda; entries 0 and 1 are set to 0 (singular)."""
    p = ctx.p
    out = np.zeros(p, dtype=np.int64)
    qr = np.array(ctx.qr, dtype=np.int64)
    x = np.arange(p, dtype=np.int64)
    base = x * ((x - 1) % p) % p
    chunk = max(1, (1 << 22) // p)
    for start in range(2, p, chunk):
        stop = min(start + chunk, p)
        lams = np.arange(start, stop, dtype=np.int64)
        vals = base[None, :] * ((x[None, :] - lams[:, None]) % p) % p
        out[start:stop] = -qr[vals].sum(axis=1)
    return out


def j_invariant(ctx: FieldCtx, lam: int) -> int:
    """j = 256 (lambda^2 - lambda + 1)^3 / (lambda^2 (lambda - 1)^2) mod p."""
    p = ctx.p
    lam = _check_lambda(ctx, lam)
    num = 256 * pow(lam * lam - lam + 1, 3, p)
    den = pow(lam, 2, p) * pow(lam - 1, 2, p) % p
    return num * pow(den, p - 2, p) % p


def twist_relation_check(ctx: FieldCtx, lam: int) -> tuple[bool, bool, bool]:
    """The three quadratic-twist trace relations along the lambda-orbit."""
    p = ctx.p
    lam = _check_lambda(ctx, lam)
    a = ap_legendre(ctx, lam)
    inv = pow(lam, p - 2, p)
    r1 = a == ctx.qr[lam] * ap_legendre(ctx, inv)
    r2 = a == ctx.qr[p - 1] * ap_legendre(ctx, (1 - lam) % p)
    mu = lam * pow(lam - 1, p - 2, p) % p
    r3 = a == ctx.qr[(1 - lam) % p] * ap_legendre(ctx, mu)
    return r1, r2, r3


def _halvable(ctx: FieldCtx, e: int, others: tuple[int, int]) -> bool:
    """(e, 0) is in 2 E(F_p) iff e - e' is a square for both other roots."""
    return all(ctx.qr[(e - o) % ctx.p] == 1 for o in others)


def torsion_class(ctx: FieldCtx, lam: int) -> str:
    """2-power torsion bucket of E_lambda: '2x2', '2x4' or '4x4'.

    All three 2-torsion points are rational; (e,0) halves iff the two root
    differences at e are squares. The halvable points form a subgroup of
    E[2] meeting 2E(F_p), so the count is 0, 1 or 3.
    """
    lam = _check_lambda(ctx, lam)
    roots = (0, 1, lam)
    n = sum(_halvable(ctx, roots[i], (roots[(i + 1) % 3], roots[(i + 2) % 3]))
            for i in range(3))
    if n == 0:
        return "2x2"
    if n == 1:
        return "2x4"
    if n == 3:
        return "4x4"
    raise AssertionError(f"halvable 2-torsion count {n} is not a subgroup size")


def short_weierstrass(ctx: FieldCtx, lam: int) -> tuple[int, int]:
    """E_lambda in the form y^2 = x^3 + Ax + B (depressed cubic)."""
    p = ctx.p
    lam = _check_lambda(ctx, lam)
    s1, s2 = (1 + lam) % p, lam
    inv3 = pow(3, p - 2, p)
    inv27 = pow(27, p - 2, p)
    A = (s2 - s1 * s1 % p * inv3) % p
    B = (s1 * s2 % p * inv3 - 2 * s1 * pow(s1, 2, p) % p * inv27) % p
    return A, B


def _nth_power(ctx: FieldCtx, x: int, n: int) -> bool:
    """Is x a (gcd(n, p-1))-th power in F_p^* ?"""
    if x % ctx.p == 0:
        raise ValueError("zero is not in F_p^*")
    return ctx.dlog[x % ctx.p] % math.gcd(n, ctx.p - 1) == 0


def curves_isomorphic(ctx: FieldCtx, lam1: int, lam2: int) -> bool:
    """F_p-isomorphism of E_lam1 and E_lam2 by explicit twist tests.

    Works at every j: quadratic twist factor for j not in {0, 1728},
    quartic at j = 1728, sextic at j = 0.
    """
    p = ctx.p
    j1 = j_invariant(ctx, lam1)
    if j1 != j_invariant(ctx, lam2):
        return False
    A1, B1 = short_weierstrass(ctx, lam1)
    A2, B2 = short_weierstrass(ctx, lam2)
    if B1 == 0:  # j = 1728, so B2 = 0 too; quartic twist class of A decides
        return _nth_power(ctx, A2 * pow(A1, p - 2, p) % p, 4)
    if A1 == 0:  # j = 0; sextic twist class of B decides
        return _nth_power(ctx, B2 * pow(B1, p - 2, p) % p, 6)
    # an iso scales (A, B) by (u^4, u^6); with equal j the element
    # d = (B2/B1)/(A2/A1) automatically satisfies d^2 = A2/A1 and
    # d^3 = B2/B1, so the iso exists iff d = u^2 for some u
    d = B2 * pow(B1, p - 2, p) % p * A1 % p * pow(A2, p - 2, p) % p
    return ctx.qr[d] == 1


def l_set(ctx: FieldCtx, lam: int, aps: np.ndarray | None = None) -> set[int]:
    """L(lambda): all mu (both signs) with E_{lambda^2} isomorphic to E_{mu^2}.

    Matching is by (j, a_p) key, with explicit twist tests whenever the key
    is degenerate (a_p = 0 or j in {0, 1728}).
    """
    p = ctx.p
    lam %= p
    if lam in (0, 1, p - 1):
        raise ValueError(f"lambda must avoid {{0, +-1}}, got {lam}")
    lam2 = lam * lam % p
    jt = j_invariant(ctx, lam2)
    at = ap_legendre(ctx, lam2) if aps is None else int(aps[lam2])
    degenerate = at == 0 or jt == 0 or jt == 1728 % p
    out = set()
    for mu in range(2, p - 1):
        mu2 = mu * mu % p
        if j_invariant(ctx, mu2) != jt:
            continue
        if degenerate:
            if curves_isomorphic(ctx, lam2, mu2):
                out.add(mu)
        else:
            am = ap_legendre(ctx, mu2) if aps is None else int(aps[mu2])
            if am == at:
                out.add(mu)
    return out


def l_set_sizes(ctx: FieldCtx) -> dict[int, int]:
    """|L(lambda)| for every lambda not in {0, +-1}, batched by (j, a_p) key."""
    p = ctx.p
    aps = ap_table(ctx)
    jcache: dict[int, int] = {}
    keys: dict[int, tuple] = {}
    degenerates: list[int] = []
    for mu in range(2, p - 1):
        mu2 = mu * mu % p
        if mu2 not in jcache:
            jcache[mu2] = j_invariant(ctx, mu2)
        j, a = jcache[mu2], int(aps[mu2])
        if a == 0 or j == 0 or j == 1728 % p:
            degenerates.append(mu)
            keys[mu] = None
        else:
            keys[mu] = (j, a)
    from collections import Counter
    tally = Counter(k for k in keys.values() if k is not None)
    sizes = {mu: tally[k] for mu, k in keys.items() if k is not None}
    for mu in degenerates:
        mu2 = mu * mu % p
        sizes[mu] = sum(
            1 for nu in degenerates
            if curves_isomorphic(ctx, mu2, nu * nu % p))
    return sizes


# --- full isomorphism-class census ------------------------------------------

@dataclass(frozen=True)
class CurveClass:
    A: int
    B: int
    j: int
    a_p: int
    two_rank: int        # 0, 1 or 2: rank of E[2](F_p)
    four_full: bool      # E[4] entirely rational
    aut: int             # |Aut_{F_p}| given rational CM at j = 0, 1728


def _ap_short(ctx: FieldCtx, A: int, B: int) -> int:
    p = ctx.p
    x = np.arange(p, dtype=np.int64)
    vals = (pow_arr(x, p) + A * x + B) % p
    qr = np.array(ctx.qr, dtype=np.int64)
    return -int(qr[vals].sum())


def pow_arr(x: np.ndarray, p: int) -> np.ndarray:
    return x * x % p * x % p


def _cubic_roots(p: int, A: int, B: int) -> list[int]:
    x = np.arange(p, dtype=np.int64)
    vals = (pow_arr(x, p) + A * x + B) % p
    return [int(r) for r in x[vals == 0]]


def _class_of(ctx: FieldCtx, A: int, B: int) -> CurveClass:
    p = ctx.p
    A %= p
    B %= p
    roots = _cubic_roots(p, A, B)
    two_rank = {0: 0, 1: 1, 3: 2}[len(roots)]
    four_full = False
    if two_rank == 2 and p % 4 == 1:
        four_full = all(
            ctx.qr[(roots[i] - roots[k]) % p] == 1
            for i in range(3) for k in range(3) if i != k)
    if B == 0:
        j = 1728 % p
        aut = 4 if p % 4 == 1 else 2
    elif A == 0:
        j = 0
        aut = 6 if p % 3 == 1 else 2
    else:
        num = 6912 * pow(A, 3, p)  # 1728 * 4A^3 / (4A^3 + 27B^2)
        den = (4 * pow(A, 3, p) + 27 * pow(B, 2, p)) % p
        j = num * pow(den, p - 2, p) % p
        aut = 2
    return CurveClass(A, B, j, _ap_short(ctx, A, B), two_rank, four_full, aut)


def curve_census(ctx: FieldCtx) -> list[CurveClass]:
    """One representative per F_p-isomorphism class of elliptic curves.

    j not in {0, 1728}: the standard model plus its quadratic twist;
    j = 1728: y^2 = x^3 + g^i x, i < gcd(4, p-1);
    j = 0:    y^2 = x^3 + g^i,   i < gcd(6, p-1).
    """
    p = ctx.p
    if p <= 3:
        raise ValueError("census needs p > 3")
    g = ctx.g
    out = []
    for i in range(math.gcd(4, p - 1)):
        out.append(_class_of(ctx, pow(g, i, p), 0))
    for i in range(math.gcd(6, p - 1)):
        out.append(_class_of(ctx, 0, pow(g, i, p)))
    d = next(x for x in range(2, p) if ctx.qr[x] == -1)
    for j in range(1, p):
        if j == 1728 % p:
            continue
        k = j * pow(1728 - j, p - 2, p) % p
        A, B = 3 * k % p, 2 * k % p
        out.append(_class_of(ctx, A, B))
        out.append(_class_of(ctx, A * d * d % p, B * pow(d, 3, p) % p))
    return out
