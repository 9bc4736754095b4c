"""Isogeny testing for p-adic period lattices via mixed multiplicative powers.

For 2x2 lattices V, W of multiplicative periods, the mixed powers are

  (V^B)_ij  = prod_k v_kj^{b_ik}    (so that  lambda(V^B)  = B lambda(V)),
  (^C W)_ij = prod_k w_ik^{c_kj}    (so that  lambda(^C W) = lambda(W) C),

for any homomorphism lambda (ord or log).  Lattices are isogenous when
integer matrices (Y, Z) exist with V^Y = ^Z W; candidates are discovered
from the logarithm relation Y l(V) = l(W) Z by lattice reduction and
verified multiplicatively.  ``recover_curve_lattice`` inverts the relation:
given W and a Hecke action it searches for the isogenous lattice V whose
curve invariants are recognizable over the base number field.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import InsufficientPrecision, NotFound, ZeroEntry
from .errors import PadicError
from .igusa import discriminant_search, invariants_from_halfperiods
from .mumford import PeriodMatrix, halfperiods_from_periods, periods_from_matrix
from .numfield import lll_reduce
from .padic import PadicPoly, iwasawa_log, poly_roots


class PadicLattice:
    """2x2 matrix of nonzero p-adic periods (columns generate the lattice)."""

    __slots__ = ("m",)

    def __init__(self, entries):
        self.m = [[entries[i][j] for j in range(2)] for i in range(2)]
        for row in self.m:
            for x in row:
                if x.is_zero():
                    raise ZeroEntry("lattice entries must be nonzero")
        o = self.ord_matrix()
        if o[0][0] * o[1][1] - o[0][1] * o[1][0] == 0:
            raise ZeroEntry("lattice is not discrete: ord matrix is singular")

    @property
    def ctx(self):
        return self.m[0][0].ctx

    def ord_matrix(self):
        return [[Fraction(x.valuation()) for x in row] for row in self.m]

    def log_matrix(self):
        return [[iwasawa_log(x) for x in row] for row in self.m]

    def to_json(self):
        return {"ctx": self.ctx.to_json(),
                "matrix": [[x.to_json() for x in row] for row in self.m]}

    def entry(self, i, j):
        return self.m[i][j]


def _pow_entry(x, e):
    return x ** e


def mat_power_right(V, B):
    """(V^B)_ij = prod_k v_kj^{b_ik};  lambda(V^B) = B lambda(V)."""
    m = V.m
    out = [[None, None], [None, None]]
    for i in range(2):
        for j in range(2):
            out[i][j] = _pow_entry(m[0][j], B[i][0]) * _pow_entry(m[1][j], B[i][1])
    return PadicLattice(out)


def mat_power_left(W, C):
    """(^C W)_ij = prod_k w_ik^{c_kj};  lambda(^C W) = lambda(W) C."""
    m = W.m
    out = [[None, None], [None, None]]
    for i in range(2):
        for j in range(2):
            out[i][j] = _pow_entry(m[i][0], C[0][j]) * _pow_entry(m[i][1], C[1][j])
    return PadicLattice(out)


def kadziela_check(V, W, Y, Z):
    """Whether the multiplicative relation V^Y = ^Z W holds within precision."""
    lhs = mat_power_right(V, Y)
    rhs = mat_power_left(W, Z)
    for i in range(2):
        for j in range(2):
            if not (lhs.m[i][j] - rhs.m[i][j]).is_zero():
                return False
    return True


def _lift_log(x, N):
    """Integer lift of a (base-layer, non-negative valuation) log value."""
    from .numfield import _lift_base
    return _lift_base(x.truncate(N), N)


class KadzielaResult:
    __slots__ = ("Y", "Z", "verified", "solution_dim", "solutions")

    def __init__(self, Y, Z, verified, solution_dim, solutions):
        self.Y, self.Z = Y, Z
        self.verified = verified
        self.solution_dim = solution_dim
        self.solutions = solutions

    def to_json(self):
        return {"Y": self.Y, "Z": self.Z, "verified": self.verified,
                "solution_dim": self.solution_dim}


def kadziela_find(V, W, bound=64, slack=5):
    """Integer (Y, Z) with Y l(V) = l(W) Z, from an 8-unknown congruence lattice."""
    lV = V.log_matrix()
    lW = W.log_matrix()
    p = V.ctx.p
    prec = min(int(x.abs_prec()) for row in lV + lW for x in row)
    N = prec - slack
    if N < 10:
        raise InsufficientPrecision("logs carry too few digits for the search")
    mod = p ** N
    lVi = [[_lift_log(x, N) for x in row] for row in lV]
    lWi = [[_lift_log(x, N) for x in row] for row in lW]
    # unknowns u = (y11, y12, y21, y22, z11, z12, z21, z22); equations indexed
    # by (i, j): sum_k y_ik lV[k][j] - sum_k lW[i][k] z_kj = 0 (mod p^N)
    eqs = []
    for i in range(2):
        for j in range(2):
            coeff = [0] * 8
            for k in range(2):
                coeff[2 * i + k] = lVi[k][j]
                coeff[4 + 2 * k + j] = (-lWi[i][k]) % mod
            eqs.append(coeff)
    K = mod
    rows = []
    for u in range(8):
        e = [0] * 8
        e[u] = 1
        rows.append(e + [K * eqs[q][u] for q in range(4)])
    for q in range(4):
        r = [0] * 12
        r[8 + q] = K * mod
        rows.append(r)
    reduced, _ = lll_reduce(rows)
    sols = []
    for row in reduced:
        u = row[:8]
        if all(x == 0 for x in u):
            continue
        if any(row[8 + q] != 0 for q in range(4)):
            continue
        if max(abs(x) for x in u) > bound:
            continue
        for q in range(4):
            if sum(c * x for c, x in zip(eqs[q], u)) % mod != 0:
                raise AssertionError("lattice produced an inexact relation")
        sols.append(u)
    if not sols:
        raise NotFound("no integer solution within the bound")
    dim = _rank(sols)
    for u in sols:
        Y = [[u[0], u[1]], [u[2], u[3]]]
        Z = [[u[4], u[5]], [u[6], u[7]]]
        if all(x == 0 for x in u[:4]) or all(x == 0 for x in u[4:]):
            continue
        verified = kadziela_check(V, W, Y, Z)
        return KadzielaResult(Y, Z, verified, dim, sols)
    raise NotFound("solutions found but all have a zero Y or Z block")


def _rank(vectors):
    rows = [[Fraction(x) for x in v] for v in vectors]
    rank = 0
    col = 0
    n = len(rows[0])
    while rows and col < n:
        piv = next((r for r in range(len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            col += 1
            continue
        rows[0], rows[piv] = rows[piv], rows[0]
        top = rows.pop(0)
        rows = [[x - (r[col] / top[col]) * y for x, y in zip(r, top)]
                if r[col] != 0 else r for r in rows]
        rank += 1
        col += 1
    return rank


# -- solving V from W and (Y, Z) ----------------------------------------------

def _adj(Y):
    return [[Y[1][1], -Y[0][1]], [-Y[1][0], Y[0][0]]]


def _det(Y):
    return Y[0][0] * Y[1][1] - Y[0][1] * Y[1][0]


def solve_isogenous_lattice(W, Y, Z):
    """All symmetric lattices V with V^Y = ^Z W (entrywise n-th root torsion).

    Right-powering the relation by adj(Y) gives entrywise V^det(Y) = ^Z W^adj(Y);
    after cancelling the content of (adj(Y), det(Y)) each entry of V is an n-th
    root of the corresponding target entry.  Returns the list of symmetric
    candidates (torsion choices); empty if the roots do not exist.
    """
    n = _det(Y)
    if n == 0:
        raise ZeroEntry("Y is singular")
    A = _adj(Y)
    g = math.gcd(abs(n), math.gcd(*[abs(x) for row in A for x in row]))
    n //= g
    A = [[x // g for x in row] for row in A]
    T = mat_power_left(mat_power_right(W, A), Z)
    invert = n < 0
    n = abs(n)
    if invert:
        T = PadicLattice([[x.inverse() for x in row] for row in T.m])
    if not (T.m[0][1] - T.m[1][0]).is_zero():
        return []
    ctx = T.ctx
    roots = {}
    for key, x in (("A", T.m[0][0]), ("B", T.m[0][1]), ("D", T.m[1][1])):
        if n == 1:
            roots[key] = [x]
            continue
        f = PadicPoly(ctx, [-x] + [ctx.zero(x.abs_prec_int())] * (n - 1)
                      + [ctx.one(x.abs_prec_int())])
        roots[key] = [r for r, m in poly_roots(f)]
        if not roots[key]:
            return []
    out = []
    for a in roots["A"]:
        for b in roots["B"]:
            for d in roots["D"]:
                out.append(PadicLattice([[a, b], [b, d]]))
    return out


# -- searching for the curve lattice ------------------------------------------

def _hecke_generator(H):
    """Primitive traceless integer generator G of Z[H] with G^2 scalar."""
    t = H[0][0] + H[1][1]
    G2 = [[2 * H[0][0] - t, 2 * H[0][1]], [2 * H[1][0], 2 * H[1][1] - t]]
    g = math.gcd(*[abs(x) for row in G2 for x in row])
    if g == 0:
        raise ValueError("Hecke matrix is scalar")
    G = [[x // g for x in row] for row in G2]
    m = G[0][0] * G[0][0] + G[0][1] * G[1][0]
    assert G[0][1] * (G[0][0] + G[1][1]) == 0 and G[1][0] * (G[0][0] + G[1][1]) == 0
    return G, m


def _alg(a, b, G):
    return [[a + b * G[0][0], b * G[0][1]], [b * G[1][0], a + b * G[1][1]]]


def _mat_mul_frac(Am, Bm):
    return [[sum(Fraction(Am[i][k]) * Bm[k][j] for k in range(2)) for j in range(2)]
            for i in range(2)]


class RecoveredLattice:
    __slots__ = ("lattice", "Y", "Z", "invariants", "igusa")

    def __init__(self, lattice, Y, Z, invariants, igusa):
        self.lattice = lattice
        self.Y, self.Z = Y, Z
        self.invariants = invariants
        self.igusa = igusa


def recover_curve_lattice(W, hecke, emb, unit, fixed_squares,
                          a_range=(-15, 15), b_range=(-15, 15),
                          coeff_bound=4, target_prec=None,
                          height_bound=10 ** 7, denom_bound=10):
    """Search for the curve period lattice V isogenous to W.

    Candidate pairs (Y, Z) range over the commutant Z[G] of the Hecke action
    (Y = aI + bG, Z = cI + dG, coefficients bounded); each is pruned by the
    rational ord relation (symmetry, half-integrality, period-valuation
    admissibility), realized by entrywise roots, and accepted when the
    resulting curve invariants are recognized over the number field by
    ``discriminant_search``.
    """
    G, _gsq = _hecke_generator(hecke)
    oW = W.ord_matrix()
    seen = set()
    cands = []
    rng = range(-coeff_bound, coeff_bound + 1)
    for a in rng:
        for b in rng:
            Y = _alg(a, b, G)
            dY = _det(Y)
            if dY == 0:
                continue
            for c in rng:
                for d in rng:
                    if c == 0 and d == 0:
                        continue
                    # scalar multiples (kY, kZ) encode the same relation:
                    # keep only the primitive, sign-normalized pair
                    g = math.gcd(math.gcd(abs(a), abs(b)),
                                 math.gcd(abs(c), abs(d)))
                    prim = (a // g, b // g, c // g, d // g)
                    if next(x for x in prim if x != 0) < 0:
                        prim = tuple(-x for x in prim)
                    if prim in seen:
                        continue
                    seen.add(prim)
                    Z = _alg(c, d, G)
                    adjY = _adj(Y)
                    oV = _mat_mul_frac([[Fraction(adjY[i][j], dY) for j in range(2)]
                                        for i in range(2)], _mat_mul_frac(oW, Z))
                    if oV[0][1] != oV[1][0]:
                        continue
                    if any(x.denominator > 2 for row in oV for x in row):
                        continue
                    vA, vB, vD = oV[0][0], oV[0][1], oV[1][1]
                    if vA * vD - vB * vB == 0:
                        continue
                    vq = (vB + vD, vA + vB, -vB)
                    if any(v > 0 for v in vq) or sum(1 for v in vq if v == 0) > 1:
                        continue
                    size = sum(abs(v) for v in vq)
                    cands.append((size, abs(a) + abs(b) + abs(c) + abs(d),
                                  (a, b, c, d), Y, Z))
    cands.sort(key=lambda t: (t[0], t[1], t[2]))
    for _, _, _, Y, Z in cands:
        try:
            realized = solve_isogenous_lattice(W, Y, Z)
        except PadicError:
            continue
        for V in realized:
            try:
                pm = PeriodMatrix(V.m[0][0], V.m[0][1], V.m[1][1])
                qs = periods_from_matrix(pm)
                hp = halfperiods_from_periods(qs)
                ai = invariants_from_halfperiods(hp, target_prec)
                ic = discriminant_search(ai, emb, unit, fixed_squares,
                                         a_range, b_range,
                                         height_bound, denom_bound)
            except PadicError:
                continue
            return RecoveredLattice(V, Y, Z, ai, ic)
    raise NotFound("no candidate lattice produced recognizable invariants")
