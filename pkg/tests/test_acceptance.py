"""End-to-end acceptance tests on the bundled worked examples.

The ``expected_*`` fixtures contain published reference values. Where the
computed results provably differ from a published value, the test asserting
the literal published value is left red on purpose (names ending in
``_published_literal`` / ``_published_pair``), and a companion test asserts
the computed value together with its exact relationship to the published one.
"""

import json
import os
from fractions import Fraction

import pytest

from padicperiods.errors import NotFound, PadicError
from padicperiods.igusa import (IgusaClebsch, discriminant_search,
                                igusa_clebsch, weighted_projective_equal)
from padicperiods.isogeny import (PadicLattice, kadziela_check, kadziela_find,
                                  recover_curve_lattice,
                                  solve_isogenous_lattice)
from padicperiods.linvariant import l_invariant
from padicperiods.mumford import (PeriodMatrix, curve_periods,
                                  periods_from_matrix, sextic_from_model)
from padicperiods.numfield import NumberField, build_embedding, recognize
from padicperiods.padic import (PadicElement, PadicPoly, TowerContext,
                                iwasawa_log, poly_roots)

FIXTURES = os.path.join(os.path.dirname(__file__), os.pardir, "fixtures")


def _fx(name):
    with open(os.path.join(FIXTURES, name), "r", encoding="utf-8") as fh:
        return json.load(fh)


def _lattice(name):
    data = _fx(name)
    ctx = TowerContext.from_json(data["ctx"])
    return PadicLattice([[PadicElement.from_json(ctx, data["matrix"][i][j])
                          for j in range(2)] for i in range(2)])


def _curve_field_emb(data, prec):
    F = NumberField.from_json(data["field"])
    ctx = TowerContext(data["embedding"]["p"]["p"], prec=prec)
    emb = build_embedding(F, ctx, data["embedding"]["residue"])
    h = [F.element([Fraction(c) for c in cs]) for cs in data["model"]["h"]]
    g = [F.element([Fraction(c) for c in cs]) for cs in data["model"]["g"]]
    return F, emb, h, g


def _digits_match(x, spec, digits, sign=False):
    """x agrees with the published (v, unit) to the given relative digits."""
    c = x.coords["1"]
    if c[0] != int(spec["v"]):
        return False
    n = min(digits, c[2] - c[0])
    m = x.ctx.p ** n
    u = int(spec["unit"])
    return (c[1] - u) % m == 0 or (sign and (c[1] + u) % m == 0)


# -- 5-adic end-to-end: curve -> periods -> isogeny with the given lattice ----

@pytest.fixture(scope="module")
def periods5():
    data = _fx("curve_5adic.json")
    F, emb, h, g = _curve_field_emb(data, prec=60)
    f = sextic_from_model(emb, h, g)
    return curve_periods(f, target_prec=55)


@pytest.fixture(scope="module")
def w5():
    return _lattice("lattice_5adic_W.json")


@pytest.mark.slow
def test_periods_precision_at_least_50_digits(periods5):
    for x in periods5.as_tuple():
        assert x.rel_prec() >= 50


def _relation_residuals(periods, w5, a0_correction=0):
    """The three residuals of 15 log(A, B, D) = M (log A0, log B0)."""
    lA, lB, lD = [iwasawa_log(x) for x in periods.as_tuple()]
    a0 = w5.m[0][0]
    if a0_correction:
        v, u, N = a0.coords["1"]
        u = (u + a0_correction * 5 ** (N - v - 1)) % 5 ** (N - v)
        a0 = a0.ctx.from_unit_val(v, u, N)
    la0 = iwasawa_log(a0)
    lb0 = iwasawa_log(w5.m[0][1])
    return [lA * 15 + la0 * 3 - lb0,
            lB * 15 - la0,
            lD * 15 + la0 * 2 - lb0], la0, lb0


@pytest.mark.slow
def test_log_relation_exact_to_41_digits(periods5, w5):
    """15 log(A, B, D) = (-3, 1; 1, 0; -2, 1) (log A0, log B0) holds to 41
    of the 42 digits carried by the transcribed A0, B0."""
    residuals, _, _ = _relation_residuals(periods5, w5)
    for r in residuals:
        assert r.truncate(41).is_zero()


@pytest.mark.slow
def test_log_relation_at_full_printed_precision(periods5, w5):
    """Red: the transcribed A0's topmost 5-adic digit is off by 2, so the
    exact relations fail in the final digit of the printed precision."""
    residuals, _, _ = _relation_residuals(periods5, w5)
    for r in residuals:
        assert r.is_zero()


@pytest.mark.slow
def test_log_relation_exact_after_a0_digit_correction(periods5, w5):
    """Adding 2 * 5^41 to A0's unit makes all three relations exact zero
    classes at the full transcribed precision — pinpointing the bad digit."""
    residuals, _, _ = _relation_residuals(periods5, w5, a0_correction=2)
    for r in residuals:
        assert r.is_zero()


@pytest.mark.slow
def test_log_relation_published_reconciliation(periods5, w5):
    """The published relation matrix is the computed one composed with the
    period relabeling (q1, q2, q3) -> (q3, q1, q2) and the power -45."""
    R = _fx("expected_5adic.json")["log_relation"]
    _, la0, lb0 = _relation_residuals(periods5, w5, a0_correction=2)
    lq = [iwasawa_log(q) for q in periods_from_matrix(periods5).as_tuple()]
    lq1, lq2, lq3 = lq
    relabeled = [(lq1 + lq2) * (-45),   # log A' =  log q2' + log q3'
                 lq2 * 45,              # log B' = -log q3'
                 (lq3 + lq2) * (-45)]   # log D' =  log q1' + log q3'
    for row, lhs in zip(R, relabeled):
        assert (lhs - (la0 * row[0] + lb0 * row[1])).is_zero()


@pytest.mark.slow
def test_log_relation_published_literal(periods5, w5):
    """Red: the published matrix applied to (log A0, log B0) does not equal
    the computed (log A, log B, log D) directly (see the reconciliation)."""
    R = _fx("expected_5adic.json")["log_relation"]
    la0 = iwasawa_log(w5.m[0][0])
    lb0 = iwasawa_log(w5.m[0][1])
    for l, row in zip([iwasawa_log(x) for x in periods5.as_tuple()], R):
        assert (l - (la0 * row[0] + lb0 * row[1])).is_zero()


@pytest.mark.slow
def test_isogeny_published_pair(periods5, w5):
    """Red: the published (Y, Z) do not satisfy V^Y = ^Z W."""
    exp = _fx("expected_5adic.json")
    A, B, D = periods5.as_tuple()
    V = PadicLattice([[A, B], [B, D]])
    assert kadziela_check(V, w5, exp["Y"], exp["Z"])


@pytest.mark.slow
def test_isogeny_search_between_curve_and_given_lattice(periods5, w5):
    """Red: no integer (Y, Z) with Y l(V) = l(W) Z exists at all for this
    pair (the two log matrices generate incompatible commutants)."""
    A, B, D = periods5.as_tuple()
    V = PadicLattice([[A, B], [B, D]])
    found = None
    try:
        found = kadziela_find(V, w5)
    except NotFound:
        pass
    assert found is not None and found.verified


# -- 7-adic reconstruction: lattice -> isogenous curve lattice ----------------

@pytest.fixture(scope="module")
def recovery7():
    W = _lattice("lattice_7adic_W.json")
    hecke = _fx("hecke_7adic.json")["matrix"]
    field = _fx("field_7adic.json")
    F = NumberField(field["minpoly"])
    emb = build_embedding(F, W.ctx, 4)
    p_gen = F.element([Fraction(c) for c in field["ideal_gens"]["p"]])
    d_gen = F.element([Fraction(c) for c in field["ideal_gens"]["d"]])
    # the attainable invariant precision (47 relative digits) supports
    # recognition up to height 5 * 10^6 over integers, which covers the
    # exact coefficients (largest is |I6's alpha coefficient| < 4.7 * 10^6)
    return recover_curve_lattice(W, hecke, emb, F.gen(), [p_gen, d_gen],
                                 target_prec=50, height_bound=5 * 10 ** 6,
                                 denom_bound=1), W, F


@pytest.mark.slow
def test_recovered_lattice_digits(recovery7):
    res, W, _ = recovery7
    exp = _fx("expected_7adic.json")
    V = res.lattice
    assert _digits_match(V.m[0][0], exp["A"], 40, sign=True)
    assert _digits_match(V.m[0][1], exp["B"], 40, sign=True)
    assert _digits_match(V.m[1][1], exp["D"], 40, sign=True)
    assert kadziela_check(V, W, res.Y, res.Z)


@pytest.mark.slow
def test_recovered_periods_digits(recovery7):
    res, _, _ = recovery7
    exp = _fx("expected_7adic.json")
    pm = PeriodMatrix(res.lattice.m[0][0], res.lattice.m[0][1],
                      res.lattice.m[1][1])
    q1, q2, q3 = periods_from_matrix(pm).as_tuple()
    assert _digits_match(q2, exp["q2"], 40, sign=True)
    assert _digits_match(q3, exp["q3"], 40, sign=True)
    # q1 is excluded: the published q1 repeats A's digits (transcription slip)


@pytest.mark.slow
def test_recovered_absolute_invariants_digits(recovery7):
    res, _, _ = recovery7
    exp = _fx("expected_7adic.json")
    i1, i2, i3 = res.invariants.as_tuple()
    assert _digits_match(i1, exp["i1"], 40)
    assert _digits_match(i2, exp["i2"], 40)
    assert _digits_match(i3, exp["i3"], 40)


def _published_igusa(F):
    exp = _fx("expected_7adic.json")
    field = _fx("field_7adic.json")
    p_gen = F.element([Fraction(c) for c in field["ideal_gens"]["p"]])
    d_gen = F.element([Fraction(c) for c in field["ideal_gens"]["d"]])
    sq = p_gen * d_gen
    I10 = (F.gen() ** exp["I10"]["unit_exp"]) \
        * (F.element([2]) ** exp["I10"]["two_exp"]) * sq * sq
    return IgusaClebsch(*[F.element([Fraction(c) for c in exp[k]])
                          for k in ("I2", "I4", "I6")], I10)


@pytest.mark.slow
def test_recovered_invariants_weighted_equal_published(recovery7):
    """The recovered exact tuple is the published one up to weighted scaling.

    The candidate exponents form one weighted-equivalence class (the unit and
    2 admit fifth-power rescalings), and the search's smallest-exponent hit
    is a smaller normalization than the published (a, b) = (-12, 12), which
    comes from the model discriminant rather than from exponent minimality.
    """
    res, _, F = recovery7
    assert weighted_projective_equal(res.igusa, _published_igusa(F))


@pytest.mark.slow
def test_discriminant_search_at_published_exponents(recovery7):
    """Pinned to a = -12, b = 12, recognition reproduces the published
    I2, I4, I6 coefficient-exactly."""
    res, W, F = recovery7
    field = _fx("field_7adic.json")
    emb = build_embedding(F, W.ctx, 4)
    p_gen = F.element([Fraction(c) for c in field["ideal_gens"]["p"]])
    d_gen = F.element([Fraction(c) for c in field["ideal_gens"]["d"]])
    ic = discriminant_search(res.invariants, emb, F.gen(), [p_gen, d_gen],
                             (-12, -12), (12, 12),
                             height_bound=5 * 10 ** 6, denom_bound=1)
    exp = _fx("expected_7adic.json")
    for key in ("I2", "I4", "I6"):
        assert list(getattr(ic, key).coeffs) == [Fraction(c) for c in exp[key]]


@pytest.mark.slow
def test_reconstruction_published_pair(recovery7):
    """Red: the published (Y, Z) describe the entrywise-inverse lattice and
    produce no admissible symmetric solution."""
    _, W, _ = recovery7
    exp = _fx("expected_7adic.json")
    try:
        cands = solve_isogenous_lattice(W, exp["Y"], exp["Z"])
    except PadicError:
        cands = []
    assert any(_digits_match(V.m[0][0], exp["A"], 40, sign=True)
               for V in cands)


# -- 7-adic cross-validation: model curve invariants over the number field ----

def test_model_curve_invariants_match_recovered_exactly():
    sp = pytest.importorskip("sympy")
    data = _fx("curve_7adic_verification.json")
    F, emb, h, g = _curve_field_emb(data, prec=90)
    # f = h^2 + 4g over F
    f = [F.element([0])] * 7
    for i, a in enumerate(h):
        for j, b in enumerate(h):
            f[i + j] = f[i + j] + a * b
    for i, b in enumerate(g):
        f[i] = f[i] + b * F.element([4])
    full = emb.ctx.promote("full")
    roots = poly_roots(PadicPoly(full, [emb(c).lift_to(full) for c in f]))
    assert sum(m for _, m in roots) == 6
    rs = []
    for r, m in roots:
        rs += [r] * m
    ic = igusa_clebsch(rs, full.one())
    I2 = recognize(ic.I2, emb, 10 ** 9, 1000)
    I4 = recognize(ic.I4, emb, 10 ** 9, 1000)
    I6 = recognize(ic.I6, emb, 10 ** 9, 1000)
    # I10 is the discriminant of the monic sextic; compute it exactly
    x, t = sp.symbols("x t")
    alpha = sp.CRootOf(sp.Poly(t ** 3 - t ** 2 + 1, t), 0)
    fx = sum(sum(sp.Rational(c) * alpha ** i for i, c in enumerate(coef.coeffs))
             * x ** k for k, coef in enumerate(f))
    disc = sp.to_number_field(sp.discriminant(sp.Poly(fx, x, extension=True)),
                              alpha)
    dco = disc.rep.to_list()[::-1]
    I10 = F.element([Fraction(int(sp.Rational(c).p), int(sp.Rational(c).q))
                     for c in dco])
    exact = IgusaClebsch(I2, I4, I6, I10)

    exp = _fx("expected_7adic.json")
    field = _fx("field_7adic.json")
    p_gen = F.element([Fraction(c) for c in field["ideal_gens"]["p"]])
    d_gen = F.element([Fraction(c) for c in field["ideal_gens"]["d"]])
    sq = p_gen * d_gen
    I10r = (F.gen() ** exp["I10"]["unit_exp"]) \
        * (F.element([2]) ** exp["I10"]["two_exp"]) * sq * sq
    recovered = IgusaClebsch(*[F.element([Fraction(c) for c in exp[k]])
                               for k in ("I2", "I4", "I6")], I10r)
    assert weighted_projective_equal(exact, recovered)


# -- L-invariants -------------------------------------------------------------

def test_l_invariant_5adic_canonical(w5):
    res = l_invariant(w5, _fx("hecke_5adic.json")["matrix"])
    la0 = iwasawa_log(w5.m[0][0])
    lb0 = iwasawa_log(w5.m[0][1])
    # unique pair; the transposed action fits: a = (log A0 + 2 log B0)/45,
    # b = log B0 / 45
    assert any("Tt" in tag for tag in res.conventions)
    assert (res.a * 45 - la0 - lb0 * 2).is_zero()
    assert (res.b * 45 - lb0).is_zero()
    # exact relationship to the published digits: b = 5 * published b
    exp = _fx("expected_5adic.json")["linv"]
    bv, bu, bp = res.b.coords["1"]
    assert bv == 1
    n = min(int(exp["modulus_exp"]) - 1, bp - bv)
    assert (bu - int(exp["b"])) % 5 ** n == 0


def test_l_invariant_5adic_published_literal(w5):
    """Red: the published digit strings are not the canonical (a, b)."""
    res = l_invariant(w5, _fx("hecke_5adic.json")["matrix"])
    exp = _fx("expected_5adic.json")["linv"]
    mod = 5 ** int(exp["modulus_exp"])
    av, au, _ = res.a.coords["1"]
    bv, bu, _ = res.b.coords["1"]
    assert (au * 5 ** av - int(exp["a"])) % mod == 0
    assert (bu * 5 ** bv - int(exp["b"])) % mod == 0


def test_l_invariant_7adic_canonical():
    W = _lattice("lattice_7adic_W.json")
    res = l_invariant(W, _fx("hecke_7adic.json")["matrix"])
    la0 = iwasawa_log(W.m[0][0])
    lB = iwasawa_log(W.m[0][1])
    # all four conventions coincide (the ord matrix is scalar):
    # a = (log B0 - 4 log A0)/16, b = log B0/16
    assert len(res.conventions) == 4
    assert (res.a * 16 + la0 * 4 - lB).is_zero()
    assert (res.b * 16 - lB).is_zero()


def test_l_invariant_7adic_published_literal():
    """Red: the published digits satisfy a = -(16 log A0 + 15 log B0)/64,
    b = -19 log B0/64, which no convention of the defined form produces."""
    W = _lattice("lattice_7adic_W.json")
    res = l_invariant(W, _fx("hecke_7adic.json")["matrix"])
    exp = _fx("expected_7adic.json")["linv"]
    mod = 7 ** int(exp["modulus_exp"])
    av, au, _ = res.a.coords["1"]
    bv, bu, _ = res.b.coords["1"]
    assert (au * 7 ** av - int(exp["a"])) % mod == 0
    assert (bu * 7 ** bv - int(exp["b"])) % mod == 0
