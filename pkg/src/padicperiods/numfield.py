"""Exact number-field arithmetic, p-adic embeddings, LLL, and recognition.

A number field F = Q(alpha) is given by a monic integer minimal polynomial.
Elements are stored as rational coefficient vectors in the power basis.
``recognize`` expresses a p-adic number as an element of F of bounded height
via an integer-relation lattice reduced with exact-rational LLL.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import (
    DependentRows,
    DivisionByZero,
    InsufficientPrecision,
    NoSimpleResidueRoot,
    NotFound,
)
from .padic import PadicElement, _cis_zero


def _parse_rat(x):
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


class NumberField:
    """Q(alpha) for alpha a root of a monic integer polynomial."""

    __slots__ = ("minpoly", "degree", "units", "ideal_gens")

    def __init__(self, minpoly, units=None, ideal_gens=None):
        coeffs = [int(c) for c in minpoly]
        if len(coeffs) < 2 or coeffs[-1] != 1:
            raise ValueError("minimal polynomial must be monic of degree >= 1")
        # irreducibility guard: no rational root (sufficient for degree <= 3)
        c0 = coeffs[0]
        if c0 == 0:
            raise ValueError("minimal polynomial is reducible (root 0)")
        for r in _divisors(abs(c0)):
            for root in (r, -r):
                if sum(c * root ** i for i, c in enumerate(coeffs)) == 0:
                    raise ValueError("minimal polynomial has rational root %d" % root)
        self.minpoly = tuple(coeffs)
        self.degree = len(coeffs) - 1
        self.units = tuple(self.element(u) for u in (units or []))
        self.ideal_gens = {k: self.element(v) for k, v in (ideal_gens or {}).items()}

    def element(self, coeffs):
        if isinstance(coeffs, NFElement):
            return coeffs
        cs = [_parse_rat(c) for c in coeffs]
        if len(cs) > self.degree:
            raise ValueError("coefficient vector longer than the field degree")
        cs += [Fraction(0)] * (self.degree - len(cs))
        return NFElement(self, tuple(cs))

    def zero(self):
        return self.element([])

    def one(self):
        return self.element([1])

    def gen(self):
        return self.element([0, 1])

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.minpoly == other.minpoly

    def __hash__(self):
        return hash(self.minpoly)

    def __repr__(self):
        return "NumberField(minpoly=%r)" % (list(self.minpoly),)

    def to_json(self):
        out = {"minpoly": list(self.minpoly)}
        if self.units:
            out["units"] = [[str(c) for c in u.coeffs] for u in self.units]
        if self.ideal_gens:
            out["ideal_gens"] = {k: [str(c) for c in v.coeffs]
                                 for k, v in self.ideal_gens.items()}
        return out

    @classmethod
    def from_json(cls, data):
        return cls(data["minpoly"], data.get("units"), data.get("ideal_gens"))


def _divisors(n):
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            out.append(n // d)
        d += 1
    return sorted(set(out))


class NFElement:
    """Element of a NumberField in the power basis 1, alpha, ..., alpha^(d-1)."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = tuple(Fraction(c) for c in coeffs)

    def _co(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.element([Fraction(other)])
        if not isinstance(other, NFElement) or other.field != self.field:
            raise TypeError("operands belong to different fields")
        return other

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def __eq__(self, other):
        try:
            other = self._co(other)
        except TypeError:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __add__(self, other):
        other = self._co(other)
        return NFElement(self.field, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        other = self._co(other)
        return NFElement(self.field, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return NFElement(self.field, [-a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return NFElement(self.field, [a * other for a in self.coeffs])
        other = self._co(other)
        d = self.field.degree
        prod = [Fraction(0)] * (2 * d - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        prod[i + j] += a * b
        return NFElement(self.field, _reduce_mod_minpoly(prod, self.field.minpoly))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("inverse of zero in the number field")
        # extended Euclid over Q[x] for gcd(self, minpoly) = 1
        f = [Fraction(c) for c in self.field.minpoly]
        g = list(self.coeffs)
        while len(g) > 1 and g[-1] == 0:
            g.pop()
        # invariants: s*g + t*f = r  (t not tracked)
        r0, r1 = f, g
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while True:
            r1 = _poly_trim(r1)
            if len(r1) == 1 and r1[0] == 0:
                raise DivisionByZero("element shares a factor with the minimal polynomial")
            if len(r1) == 1:
                inv = [c / r1[0] for c in s1]
                return NFElement(self.field,
                                 _reduce_mod_minpoly(inv, self.field.minpoly))
            q, rem = _poly_divmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionByZero("division by zero")
            return self * Fraction(1, 1) / self.field.element([Fraction(other)])
        other = self._co(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def height(self):
        """max(|numerator|) over coefficients in lowest terms."""
        return max((abs(c.numerator) for c in self.coeffs), default=0)

    def denom(self):
        return math.lcm(*[c.denominator for c in self.coeffs]) if self.coeffs else 1

    def __repr__(self):
        return "NFElement(%s)" % (", ".join(str(c) for c in self.coeffs))

    def to_json(self):
        return [str(c) for c in self.coeffs]


def _poly_trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _poly_divmod(a, b):
    a = [Fraction(c) for c in a]
    b = _poly_trim([Fraction(c) for c in b])
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(_poly_trim(a)) >= len(b) and not (len(a) == 1 and a[0] == 0):
        a = _poly_trim(a)
        if len(a) < len(b):
            break
        coef = a[-1] / b[-1]
        deg = len(a) - len(b)
        q[deg] = coef
        for i, c in enumerate(b):
            a[deg + i] -= coef * c
        a = a[:-1]
    return q, _poly_trim(a)


def _reduce_mod_minpoly(coeffs, minpoly):
    d = len(minpoly) - 1
    cs = list(coeffs) + [Fraction(0)] * max(0, d - len(coeffs))
    for i in range(len(cs) - 1, d - 1, -1):
        c = cs[i]
        if c:
            for j in range(d):
                cs[i - d + j] -= c * minpoly[j]
        cs.pop()
    return cs[:d]


# -- embeddings ----------------------------------------------------------------

class Embedding:
    """An embedding F -> Q_p determined by the image of alpha."""

    __slots__ = ("field", "ctx", "alpha")

    def __init__(self, field, ctx, alpha):
        self.field = field
        self.ctx = ctx
        self.alpha = alpha

    def __call__(self, e):
        return embed(e, self)


def build_embedding(field, ctx, residue_choice):
    """Hensel-lift the simple root of the minimal polynomial at the residue."""
    p = ctx.p
    r = residue_choice % p
    f = field.minpoly
    if sum(c * pow(r, i, p) for i, c in enumerate(f)) % p != 0:
        raise NoSimpleResidueRoot("residue %d is not a root modulo %d" % (r, p))
    if sum(i * c * pow(r, i - 1, p) for i, c in enumerate(f) if i) % p == 0:
        raise NoSimpleResidueRoot("residue root %d is not simple modulo %d" % (r, p))
    N = ctx.default_prec
    m = p
    x = r
    while m < p ** N:
        m = min(m * m, p ** N)
        fx = sum(c * pow(x, i, m) for i, c in enumerate(f)) % m
        dfx = sum(i * c * pow(x, i - 1, m) for i, c in enumerate(f) if i) % m
        x = (x - fx * pow(dfx, -1, m)) % m
    return Embedding(field, ctx, ctx.from_int(x, N))


def embed(e, emb):
    """Evaluate an NFElement at the embedded generator."""
    acc = emb.ctx.zero(emb.ctx.default_prec)
    for c in reversed(e.coeffs):
        acc = acc * emb.alpha + emb.ctx.from_fraction(c)
    return acc


# -- LLL -----------------------------------------------------------------------

def _gso(b):
    """Exact Gram-Schmidt data: (mu, Bnorm) with Fractions."""
    n = len(b)
    mu = [[Fraction(0)] * n for _ in range(n)]
    Bn = [Fraction(0)] * n
    bstar = []
    for i in range(n):
        v = [Fraction(x) for x in b[i]]
        for j in range(i):
            if Bn[j] == 0:
                raise DependentRows("rows are linearly dependent")
            mu[i][j] = Fraction(sum(Fraction(b[i][k]) * bstar[j][k] for k in range(len(v)))) / Bn[j]
            v = [x - mu[i][j] * y for x, y in zip(v, bstar[j])]
        bstar.append(v)
        Bn[i] = sum(x * x for x in v)
    if any(x == 0 for x in Bn):
        raise DependentRows("rows are linearly dependent")
    return mu, Bn


def _round_frac(q):
    return (2 * q.numerator + q.denominator) // (2 * q.denominator)


def lll_reduce(basis, delta=Fraction(99, 100)):
    """LLL-reduce integer rows; returns (reduced_basis, unimodular_transform)."""
    b = [list(map(int, row)) for row in basis]
    n = len(b)
    if n == 0:
        return [], []
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    mu, Bn = _gso(b)
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = _round_frac(mu[k][j])
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                U[k] = [x - q * y for x, y in zip(U[k], U[j])]
                for jj in range(j + 1):
                    mu[k][jj] -= q * mu[j][jj] if jj < j else q
        if Bn[k] >= (delta - mu[k][k - 1] ** 2) * Bn[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            U[k], U[k - 1] = U[k - 1], U[k]
            mu, Bn = _gso(b)
            k = max(k - 1, 1)
    return b, U


# -- recognition ---------------------------------------------------------------

def _lift_base(x, prec):
    """Integer representative of a base-layer p-adic number modulo p^prec."""
    if not x.is_base():
        raise ValueError("value does not lie in the base layer")
    c = x.base_coord()
    if _cis_zero(c):
        return 0
    v, unit, _ = c
    if v < 0:
        raise ValueError("value is not a p-adic integer")
    return (unit * x.ctx.p ** v) % x.ctx.p ** prec


def recognize(x, emb, height_bound, denom_bound):
    """Express a p-adic number as an NFElement of bounded height, or NotFound."""
    p = emb.ctx.p
    d = emb.field.degree
    v = x.valuation()
    if v is None:
        return emb.field.zero()
    shift = 0
    if v < 0:
        if Fraction(v).denominator != 1:
            raise ValueError("cannot recognize an element of fractional valuation")
        shift = -int(v)
    y = x * p ** shift if shift else x
    N = int(y.abs_prec())
    need = math.ceil(d * math.log(max(height_bound * denom_bound, 2), p)) + 20
    if N < need:
        raise InsufficientPrecision(
            "have %d digits, need at least %d for bounds (%d, %d)"
            % (N, need, height_bound, denom_bound))
    lifts = []
    acc = emb.ctx.one(N)
    for i in range(d):
        lifts.append(_lift_base(acc.truncate(N), N))
        if i + 1 < d:
            acc = acc * emb.alpha
    xlift = _lift_base(y.truncate(N), N)
    mod = p ** N
    rows = []
    for i in range(d):
        e = [0] * (d + 1)
        e[i] = 1
        rows.append(e + [lifts[i]])
    ex = [0] * (d + 1)
    ex[d] = 1
    rows.append(ex + [(-xlift) % mod])
    rows.append([0] * (d + 1) + [mod])
    reduced, _ = lll_reduce(rows)
    slack = 5
    for row in reduced:
        cx = row[d]
        if cx == 0:
            continue
        # the residual in the value column is a rational integer, i.e. a small
        # multiple of alpha^0: fold it into the constant coefficient
        coeffs = list(row[:d])
        coeffs[0] -= row[d + 1]
        num = [Fraction(c, cx) for c in coeffs]
        cand = emb.field.element(num)
        if cand.height() > height_bound or cand.denom() > denom_bound:
            continue
        img = embed(cand, emb)
        if (img - y.truncate(N)).truncate(N - slack).is_zero():
            if shift:
                cand = cand * Fraction(1, p ** shift)
            return cand
    raise NotFound("no element of the field within the given bounds")


def integer_relation(values, modulus_prec, bound):
    """Small integer vector c with sum(c_i * values_i) = 0 mod p^modulus_prec."""
    if not values:
        raise ValueError("empty value list")
    ctx = values[0].ctx
    p = ctx.p
    vmin = min((v.valuation() for v in values if v.valuation() is not None),
               default=Fraction(0))
    shift = max(0, int(-vmin)) if vmin is not None else 0
    vals = [v * p ** shift for v in values]
    N = modulus_prec
    if any(int(v.abs_prec()) < N for v in vals):
        raise InsufficientPrecision("values carry fewer than %d digits" % N)
    mod = p ** N
    lifts = [_lift_base(v.truncate(N), N) for v in vals]
    n = len(values)
    # weight the value column so that only exact congruences can be short
    K = mod
    rows = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        rows.append(e + [K * lifts[i]])
    rows.append([0] * n + [K * mod])
    reduced, _ = lll_reduce(rows)
    for row in reduced:
        c = row[:n]
        if all(x == 0 for x in c):
            continue
        if max(abs(x) for x in c) > bound:
            continue
        if sum(ci * li for ci, li in zip(c, lifts)) % mod == 0:
            return c
    raise NotFound("no integer relation within the bound")
