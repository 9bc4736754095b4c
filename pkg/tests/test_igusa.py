"""Igusa-Clebsch invariants: classical identities, equivalence, reconstruction."""

import random
from fractions import Fraction

import pytest
import sympy as sp

from padicperiods.errors import NotFound, RepeatedRoot
from padicperiods.igusa import (AbsoluteInvariants, IgusaClebsch,
                                absolute_invariants, discriminant_search,
                                igusa_clebsch, weighted_projective_equal,
                                _fifth_root_base)
from padicperiods.numfield import NumberField, build_embedding
from padicperiods.padic import TowerContext

F5 = NumberField([-2, 3, -1, 1])
F7 = NumberField([1, 0, -1, 1])


def _rand_roots(rng, n=6):
    """n distinct rationals with small height."""
    out = []
    while len(out) < n:
        q = Fraction(rng.randint(-30, 30), rng.choice((1, 1, 2, 3)))
        if q not in out:
            out.append(q)
    return out


def _nf_rat(F, q):
    return F.element([q])


def test_translation_invariance_bulk():
    rng = random.Random(60)
    for _ in range(100):
        roots = _rand_roots(rng)
        a0 = Fraction(rng.randint(1, 5))
        c = Fraction(rng.randint(-20, 20), rng.choice((1, 2)))
        base = igusa_clebsch([_nf_rat(F5, r) for r in roots], _nf_rat(F5, a0))
        shifted = igusa_clebsch([_nf_rat(F5, r + c) for r in roots],
                                _nf_rat(F5, a0))
        for x, y in zip(base.as_tuple(), shifted.as_tuple()):
            assert x.coeffs == y.coeffs


def test_discriminant_agreement_with_resultant_bulk():
    """I10 equals the discriminant of a0 * prod (x - r_i), via sympy."""
    rng = random.Random(61)
    x = sp.Symbol("x")
    for _ in range(100):
        roots = _rand_roots(rng)
        a0 = Fraction(rng.randint(1, 4))
        ic = igusa_clebsch([_nf_rat(F5, r) for r in roots], _nf_rat(F5, a0))
        poly = sp.Poly(sp.Rational(a0) * sp.prod(
            [x - sp.Rational(r) for r in roots]), x)
        disc = sp.Rational(sp.discriminant(poly))
        got = ic.I10.coeffs
        assert got[1] == 0 and got[2] == 0
        assert got[0] == Fraction(int(disc.p), int(disc.q))


def test_scaling_gives_weighted_equivalence_and_fixed_absolutes():
    rng = random.Random(62)
    for _ in range(30):
        roots = _rand_roots(rng)
        lam = Fraction(rng.choice((2, 3, -2, 5)), rng.choice((1, 1, 3)))
        a0 = Fraction(1)
        base = igusa_clebsch([_nf_rat(F5, r) for r in roots], _nf_rat(F5, a0))
        scaled = igusa_clebsch([_nf_rat(F5, lam * r) for r in roots],
                               _nf_rat(F5, a0))
        assert weighted_projective_equal(base, scaled)
        ab = absolute_invariants(base)
        asc = absolute_invariants(scaled)
        for x, y in zip(ab.as_tuple(), asc.as_tuple()):
            assert x.coeffs == y.coeffs


def test_weighted_projective_equal_controls():
    a = IgusaClebsch(*[_nf_rat(F5, Fraction(v)) for v in (3, 5, 7, 11)])
    lam = Fraction(2, 3)
    b = IgusaClebsch(*[_nf_rat(F5, Fraction(v) * lam ** k)
                       for v, k in ((3, 2), (5, 4), (7, 6), (11, 10))])
    assert weighted_projective_equal(a, b)
    bad = IgusaClebsch(*[_nf_rat(F5, Fraction(v) * lam ** k)
                         for v, k in ((3, 2), (5, 4), (8, 6), (11, 10))])
    assert not weighted_projective_equal(a, bad)
    # zero patterns must agree (I4 = 0 on one side only)
    za = IgusaClebsch(_nf_rat(F5, Fraction(3)), _nf_rat(F5, Fraction(0)),
                      _nf_rat(F5, Fraction(7)), _nf_rat(F5, Fraction(11)))
    assert not weighted_projective_equal(a, za)
    zb = IgusaClebsch(_nf_rat(F5, Fraction(6)), _nf_rat(F5, Fraction(0)),
                      _nf_rat(F5, Fraction(56)), _nf_rat(F5, Fraction(352)))
    assert weighted_projective_equal(za, zb)


def test_repeated_root_rejected():
    roots = [Fraction(v) for v in (1, 1, 2, 3, 4, 5)]
    with pytest.raises(RepeatedRoot):
        igusa_clebsch([_nf_rat(F5, r) for r in roots], _nf_rat(F5, Fraction(1)))


def test_fifth_root_inverts_fifth_power():
    rng = random.Random(63)
    for p in (3, 7, 13):
        ctx = TowerContext(p, prec=30)
        for _ in range(20):
            u = rng.randrange(1, p ** 30)
            while u % p == 0:
                u = rng.randrange(1, p ** 30)
            v = 5 * rng.randint(-2, 2)
            y = ctx.from_unit_val(v // 5, u, v // 5 + 30)
            x = y ** 5
            r = _fifth_root_base(x)
            assert (r - y).is_zero()
    ctx = TowerContext(7, prec=30)
    with pytest.raises(NotFound):
        _fifth_root_base(ctx.from_unit_val(2, 3, 32))  # valuation not 0 mod 5


def test_fifth_root_not_unique_with_torsion():
    # 5 | 11 - 1, so fifth roots of unity exist and the root is ambiguous
    ctx = TowerContext(11, prec=24)
    x = ctx.from_int(2) ** 5
    with pytest.raises(NotFound):
        _fifth_root_base(x)


def test_discriminant_search_roundtrip():
    ctx = TowerContext(7, prec=60)
    emb = build_embedding(F7, ctx, 4)
    alpha = F7.gen()
    two = F7.element([2])
    sqgen = F7.element([3, 1, 0])
    I2 = F7.element([2, 1, 0])
    I4 = F7.element([1, -1, 2])
    I6 = F7.element([3, 0, -1])
    for a, b in ((0, 0), (2, -1)):
        I10 = (alpha ** a) * (two ** b) * sqgen * sqgen
        i1 = emb(I2) ** 5 / emb(I10)
        i2 = emb(I2) ** 3 * emb(I4) / emb(I10)
        i3 = emb(I2) ** 2 * emb(I6) / emb(I10)
        got = discriminant_search(AbsoluteInvariants(i1, i2, i3), emb, alpha,
                                  [sqgen], (-3, 3), (-3, 3),
                                  height_bound=10 ** 4, denom_bound=6)
        assert got.I2.coeffs == I2.coeffs
        assert got.I4.coeffs == I4.coeffs
        assert got.I6.coeffs == I6.coeffs
        assert weighted_projective_equal(got, IgusaClebsch(I2, I4, I6, I10))


def test_discriminant_search_rejects_nonbase_invariants():
    ctx = TowerContext(7, prec=40).promote("full")
    emb = build_embedding(F7, TowerContext(7, prec=40), 4)
    bad = ctx.one() + ctx.gen_s()
    ai = AbsoluteInvariants(bad, ctx.one(), ctx.one())
    with pytest.raises(NotFound):
        discriminant_search(ai, emb, F7.gen(), [F7.element([2])], (-1, 1), (-1, 1))
