"""Igusa-Clebsch invariants of genus-2 curves and their reconstruction.

The classical invariants are computed as symmetric sums over the six
Weierstrass x-coordinates; with (ij) := x_i - x_j,

  I2  = a0^2  * sum over the 15 pair-partitions of (12)^2 (34)^2 (56)^2,
  I4  = a0^4  * sum over the 10 triple-partitions of
                (12)^2 (23)^2 (31)^2 (45)^2 (56)^2 (64)^2,
  I6  = a0^6  * sum over the 60 (partition, bijection) terms of
                (12)^2 (23)^2 (31)^2 (45)^2 (56)^2 (64)^2 (14)^2 (25)^2 (36)^2,
  I10 = a0^10 * product of all 15 squared differences.

They work verbatim over any field type supporting ring operations
(PadicElement or NFElement).  ``discriminant_search`` reconstructs the exact
tuple over a number field from p-adic absolute invariants by searching the
discriminant's unit/2-power exponents and recognizing I2, I4, I6.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .errors import NotFound, RepeatedRoot, ZeroDiscriminant
from .mumford import xcoords_from_halfperiods
from .numfield import recognize
from .padic import PadicElement, PadicPoly, poly_roots


class IgusaClebsch:
    __slots__ = ("I2", "I4", "I6", "I10")

    def __init__(self, I2, I4, I6, I10):
        self.I2, self.I4, self.I6, self.I10 = I2, I4, I6, I10
        if _is_zero(I10):
            raise ZeroDiscriminant("I10 vanishes")

    def as_tuple(self):
        return (self.I2, self.I4, self.I6, self.I10)

    def to_json(self):
        return {k: getattr(self, k).to_json() for k in ("I2", "I4", "I6", "I10")}


class AbsoluteInvariants:
    __slots__ = ("i1", "i2", "i3")

    def __init__(self, i1, i2, i3):
        self.i1, self.i2, self.i3 = i1, i2, i3

    def as_tuple(self):
        return (self.i1, self.i2, self.i3)

    def to_json(self):
        return {k: getattr(self, k).to_json() for k in ("i1", "i2", "i3")}


def _is_zero(x):
    return x.is_zero()


def _pair_partitions(items):
    """All partitions of a 6-element tuple into three unordered pairs."""
    if not items:
        yield ()
        return
    a = items[0]
    for idx in range(1, len(items)):
        b = items[idx]
        rest = items[1:idx] + items[idx + 1:]
        for sub in _pair_partitions(rest):
            yield ((a, b),) + sub


def _triple_partitions(items):
    """All 10 unordered partitions of 6 elements into two triples."""
    seen = set()
    for comb in itertools.combinations(range(6), 3):
        if 0 not in comb:
            continue  # fix item 0 in the first triple to kill the symmetry
        rest = tuple(i for i in range(6) if i not in comb)
        seen.add((comb, rest))
    return [(tuple(items[i] for i in c), tuple(items[i] for i in r))
            for c, r in sorted(seen)]


def _sq_diff(a, b):
    d = a - b
    return d * d


def _triangle(t):
    """(t0-t1)^2 (t1-t2)^2 (t2-t0)^2."""
    return _sq_diff(t[0], t[1]) * _sq_diff(t[1], t[2]) * _sq_diff(t[2], t[0])


def igusa_clebsch(roots, a0):
    """The classical (I2, I4, I6, I10) from six Weierstrass x-coordinates."""
    roots = tuple(roots)
    if len(roots) != 6:
        raise ValueError("expected six roots")
    for i in range(6):
        for j in range(i + 1, 6):
            if _is_zero(roots[i] - roots[j]):
                raise RepeatedRoot("roots %d and %d coincide" % (i, j))
    pairs = list(_pair_partitions(roots))
    assert len(pairs) == 15
    I2 = None
    for part in pairs:
        term = _sq_diff(*part[0]) * _sq_diff(*part[1]) * _sq_diff(*part[2])
        I2 = term if I2 is None else I2 + term
    triples = _triple_partitions(roots)
    assert len(triples) == 10
    I4 = None
    for t, tp in triples:
        term = _triangle(t) * _triangle(tp)
        I4 = term if I4 is None else I4 + term
    I6 = None
    count = 0
    for t, tp in triples:
        base = _triangle(t) * _triangle(tp)
        for perm in itertools.permutations(tp):
            cross = _sq_diff(t[0], perm[0]) * _sq_diff(t[1], perm[1]) * _sq_diff(t[2], perm[2])
            term = base * cross
            I6 = term if I6 is None else I6 + term
            count += 1
    assert count == 60
    diffs = [_sq_diff(roots[i], roots[j]) for i in range(6) for j in range(i + 1, 6)]
    assert len(diffs) == 15
    I10 = diffs[0]
    for dsq in diffs[1:]:
        I10 = I10 * dsq
    a2 = a0 * a0
    a4 = a2 * a2
    return IgusaClebsch(I2 * a2, I4 * a4, I6 * (a4 * a2), I10 * (a4 * a4 * a2))


def absolute_invariants(ic):
    """i1 = I2^5/I10, i2 = I2^3 I4/I10, i3 = I2^2 I6/I10."""
    I2, I4, I6, I10 = ic.as_tuple()
    if _is_zero(I10):
        raise ZeroDiscriminant("I10 vanishes")
    inv10 = 1 / I10
    I2sq = I2 * I2
    return AbsoluteInvariants(
        I2sq * I2sq * I2 * inv10,
        I2sq * I2 * I4 * inv10,
        I2sq * I6 * inv10,
    )


def weighted_projective_equal(a, b):
    """Whether b_k = lambda^k a_k (k = 2,4,6,10) for some scalar lambda.

    Decided without root extraction: since all weights are even, equality is
    governed by the halved weights k' = k/2; the zero patterns must agree and
    every pair of nonzero slots must satisfy b_k^{l'} a_l^{k'} = a_k^{l'} b_l^{k'}.
    """
    wa = a.as_tuple()
    wb = b.as_tuple()
    halved = (1, 2, 3, 5)
    nz = []
    for idx in range(4):
        za, zb = _is_zero(wa[idx]), _is_zero(wb[idx])
        if za != zb:
            return False
        if not za:
            nz.append(idx)
    for i in range(len(nz)):
        for j in range(i + 1, len(nz)):
            ki, kj = halved[nz[i]], halved[nz[j]]
            lhs = (wb[nz[i]] ** kj) * (wa[nz[j]] ** ki)
            rhs = (wa[nz[i]] ** kj) * (wb[nz[j]] ** ki)
            if not _is_zero(lhs - rhs):
                return False
    return True


def _moebius_constants(xs, count=2):
    """Small integers c with c mod p distinct from the finite points' residues."""
    ctx = xs[0].ctx
    p = ctx.p
    bad = {0 % p, 1 % p}
    for x in xs:
        v = x.valuation()
        if v is not None and v >= 0:
            c = x.coords.get("1")
            bad.add((c[1] % p) if c is not None and not c[0] else 0)
            if v > 0:
                bad.add(0)
    out = []
    c = 2
    while len(out) < count:
        if c % p not in bad and all(c % p != o % p for o in out):
            out.append(c)
        c += 1
    return out


def invariants_from_halfperiods(hp, target_prec=None, moebius=None):
    """Absolute invariants of the curve with normalized points (inf,0,1,x1,x2,x3)."""
    xs = xcoords_from_halfperiods(hp, target_prec, strict=False)
    ctx = xs[0].ctx
    for x in xs[1:]:
        ctx = ctx.join(x.ctx)
    xs = tuple(x.lift_to(ctx) for x in xs)
    if moebius is None:
        c1, c2 = _moebius_constants(xs)
    else:
        c1, c2 = moebius
    c1e = ctx.from_int(c1)
    c2e = ctx.from_int(c2)

    def move(x):
        return (x - c2e) / (x - c1e)

    pts = [ctx.one()] + [move(v) for v in
                         (ctx.zero(), ctx.one(), xs[0], xs[1], xs[2])]
    # the leading coefficient drops out of the absolute invariants
    ic = igusa_clebsch(pts, ctx.one())
    return absolute_invariants(ic)


def _fifth_root_base(x):
    """The fifth root in Q_p when x -> x^5 is a bijection (gcd(5, p-1) = 1)."""
    ctx = x.ctx
    p = ctx.p
    if not x.is_base() or x.is_zero():
        raise NotFound("fifth root not available")
    if p != 5 and (p - 1) % 5 != 0:
        # x -> x^5 is a bijection on units; invert the exponent directly
        v, unit, N = x.coords["1"]
        if v % 5 != 0:
            raise NotFound("valuation not divisible by five")
        r = N - v
        order = (p - 1) * p ** max(r - 1, 0)
        e = pow(5, -1, order)
        root_unit = pow(unit, e, p ** r)
        return ctx.from_unit_val(v // 5, root_unit, v // 5 + r)
    f = PadicPoly(ctx, [-x] + [ctx.zero(x.abs_prec_int())] * 4 + [ctx.one()])
    roots = [r for r, m in poly_roots(f)]
    if len(roots) != 1:
        raise NotFound("fifth root not unique in the base field")
    return roots[0]


def discriminant_search(ai, emb, unit, fixed_squares, a_range, b_range,
                        height_bound=10 ** 7, denom_bound=10):
    """Reconstruct exact (I2, I4, I6, I10) over F from p-adic absolute invariants.

    Candidates I10 = unit^a * 2^b * (product of fixed_squares)^2 are tried in
    order of increasing |a| + |b| (ties by a, then b); for each, I2 is the
    fifth root of i1*I10, I4 = i2*I10/I2^3, I6 = i3*I10/I2^2, and the three
    are recognized over F.
    """
    F = emb.field
    two = F.element([2])
    sq = F.one()
    for s in fixed_squares:
        sq = sq * s * s
    i1, i2, i3 = ai.as_tuple()
    for inv in (i1, i2, i3):
        if not inv.is_base():
            raise NotFound("absolute invariants do not lie in the base field")
    candidates = []
    for a in range(a_range[0], a_range[1] + 1):
        for b in range(b_range[0], b_range[1] + 1):
            candidates.append((abs(a) + abs(b), a, b))
    candidates.sort()
    for _, a, b in candidates:
        I10 = (unit ** a) * (two ** b) * sq
        I10p = emb(I10)
        try:
            I2p = _fifth_root_base(i1 * I10p)
        except NotFound:
            continue
        I2p3 = I2p * I2p * I2p
        I4p = i2 * I10p / I2p3
        I6p = i3 * I10p / (I2p * I2p)
        try:
            I2 = recognize(I2p, emb, height_bound, denom_bound)
            I4 = recognize(I4p, emb, height_bound, denom_bound)
            I6 = recognize(I6p, emb, height_bound, denom_bound)
        except NotFound:
            continue
        return IgusaClebsch(I2, I4, I6, I10)
    raise NotFound("no candidate I10 in the exponent bounds was recognized")
