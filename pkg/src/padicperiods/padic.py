"""Arbitrary-precision arithmetic in Q_p and the biquadratic tower Q_p(sqrt(u), sqrt(p)).

Elements are stored per tower coordinate as (valuation, unit, absolute precision)
with capped-absolute precision propagation:

* add/sub: the result is known modulo p^min(N_a, N_b);
* mul/div: relative precision r = N - v propagates as r_out = min(r_a, r_b).

The tower basis is {1, s, t, st} with s^2 = u (a fixed quadratic non-residue
lift) and t^2 = p, so valuations live in (1/2)Z and every square root of a
Q_p number exists at level "full".
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (
    ContextMismatch,
    DivisionByZeroClass,
    NoConvergence,
    NonUnitInput,
    NoRootInField,
    PrecisionExhausted,
    SingularJacobian,
    ValuationNotDivisible,
    ZeroClassInput,
)

HALF = Fraction(1, 2)

_LEVEL_COORDS = {
    "base": ("1",),
    "unram": ("1", "s"),
    "ram": ("1", "t"),
    "full": ("1", "s", "t", "st"),
}

# (s-bit, t-bit) of each basis label; the shift is the valuation of the basis
# element itself: v(t) = v(st) = 1/2.
_COORD_BITS = {"1": (0, 0), "s": (1, 0), "t": (0, 1), "st": (1, 1)}
_COORD_SHIFT = {"1": Fraction(0), "s": Fraction(0), "t": HALF, "st": HALF}


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _vp(n, p):
    """p-adic valuation of a nonzero integer."""
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class TowerContext:
    """Ambient field: Q_p, its quadratic extensions, or the full biquadratic tower."""

    __slots__ = ("p", "u", "level", "default_prec")

    def __init__(self, p, u=None, level="base", prec=32):
        if not _is_prime(p) or p == 2:
            raise ValueError("p must be an odd prime")
        if level not in _LEVEL_COORDS:
            raise ValueError("level must be one of %s" % (tuple(_LEVEL_COORDS),))
        if u is None:
            u = next(a for a in range(2, p) if pow(a, (p - 1) // 2, p) == p - 1)
        if pow(u % p, (p - 1) // 2, p) != p - 1:
            raise ValueError("u must be a quadratic non-residue modulo p")
        if prec < 1:
            raise ValueError("prec must be positive")
        self.p = p
        self.u = u
        self.level = level
        self.default_prec = prec

    # -- structure -----------------------------------------------------------

    @property
    def coords(self):
        return _LEVEL_COORDS[self.level]

    @property
    def residue_degree(self):
        return 2 if self.level in ("unram", "full") else 1

    @property
    def ram_index(self):
        return 2 if self.level in ("ram", "full") else 1

    def promote(self, level):
        if level == self.level:
            return self
        return TowerContext(self.p, self.u, level, self.default_prec)

    def compatible(self, other):
        return self.p == other.p and self.u == other.u

    def join(self, other):
        """Smallest common level of two compatible contexts."""
        if not self.compatible(other):
            raise ContextMismatch("contexts differ in p or u")
        have = set(self.coords) | set(other.coords)
        for level, coords in _LEVEL_COORDS.items():
            if have <= set(coords):
                prec = max(self.default_prec, other.default_prec)
                if level == self.level and prec == self.default_prec:
                    return self
                return TowerContext(self.p, self.u, level, prec)
        raise ContextMismatch("no common level")  # pragma: no cover

    def __eq__(self, other):
        return (
            isinstance(other, TowerContext)
            and (self.p, self.u, self.level, self.default_prec)
            == (other.p, other.u, other.level, other.default_prec)
        )

    def __hash__(self):
        return hash((self.p, self.u, self.level, self.default_prec))

    def __repr__(self):
        return "TowerContext(p=%d, u=%d, level=%r, prec=%d)" % (
            self.p, self.u, self.level, self.default_prec)

    def to_json(self):
        return {"p": self.p, "u": self.u, "level": self.level, "prec": self.default_prec}

    @classmethod
    def from_json(cls, data):
        return cls(data["p"], data.get("u"), data.get("level", "base"), data.get("prec", 32))

    # -- element constructors ------------------------------------------------

    def zero(self, prec=None):
        N = self.default_prec if prec is None else prec
        return PadicElement(self, {c: _czero(N) for c in self.coords})

    def one(self, prec=None):
        return self.from_int(1, prec)

    def from_int(self, n, prec=None):
        N = self.default_prec if prec is None else prec
        coords = {c: _czero(N) for c in self.coords}
        coords["1"] = _cfrom_int(n, self.p, N)
        return PadicElement(self, coords)

    def from_fraction(self, q, prec=None):
        q = Fraction(q)
        N = self.default_prec if prec is None else prec
        num, den = q.numerator, q.denominator
        if num == 0:
            return self.zero(N)
        v = _vp(num, self.p) - _vp(den, self.p)
        num //= self.p ** max(_vp(num, self.p), 0)
        den //= self.p ** max(_vp(den, self.p), 0)
        r = N - v
        unit = num * pow(den, -1, self.p ** max(r, 1)) % self.p ** max(r, 1)
        coords = {c: _czero(N) for c in self.coords}
        coords["1"] = (v, unit, N) if r > 0 else _czero(N)
        return PadicElement(self, coords)

    def from_unit_val(self, v, unit, prec):
        """Element p^v * unit known modulo p^prec (unit a p-adic unit integer)."""
        if unit % self.p == 0:
            raise ValueError("unit must be coprime to p")
        coords = {c: _czero(prec) for c in self.coords}
        coords["1"] = (v, unit % self.p ** (prec - v), prec) if prec > v else _czero(prec)
        return PadicElement(self, coords)

    def gen_s(self, prec=None):
        N = self.default_prec if prec is None else prec
        if "s" not in self.coords:
            raise ContextMismatch("level %r has no s coordinate" % self.level)
        coords = {c: _czero(N) for c in self.coords}
        coords["s"] = (0, 1, N)
        return PadicElement(self, coords)

    def gen_t(self, prec=None):
        N = self.default_prec if prec is None else prec
        if "t" not in self.coords:
            raise ContextMismatch("level %r has no t coordinate" % self.level)
        coords = {c: _czero(N) for c in self.coords}
        coords["t"] = (0, 1, N)
        return PadicElement(self, coords)


# -- coordinate (Q_p scalar) arithmetic ---------------------------------------
# A coordinate is a tuple (v, unit, prec); v is None for a zero class.

def _czero(N):
    return (None, 0, N)


def _cis_zero(c):
    return c[0] is None


def _cfrom_int(n, p, N):
    if n == 0:
        return _czero(N)
    n %= p ** max(N, 1)
    if n == 0:
        return _czero(N)
    v = _vp(n, p)
    if v >= N:
        return _czero(N)
    return (v, (n // p ** v) % p ** (N - v), N)


def _cnormalize(lift, shift, N, p):
    """Coordinate for p^shift * lift known modulo p^N (N absolute, lift integer)."""
    if N <= shift:
        return _czero(N)
    m = p ** (N - shift)
    lift %= m
    if lift == 0:
        return _czero(N)
    v = _vp(lift, p)
    return (v + shift, (lift // p ** v) % p ** (N - shift - v), N)


def _cadd(a, b, p, sign=1):
    Na, Nb = a[2], b[2]
    N = min(Na, Nb)
    if _cis_zero(a) and _cis_zero(b):
        return _czero(N)
    if _cis_zero(a):
        return _ctruncate(b if sign == 1 else _cneg(b), N, p)
    if _cis_zero(b):
        return _ctruncate(a, N, p)
    shift = min(a[0], b[0])
    la = a[1] * p ** (a[0] - shift)
    lb = b[1] * p ** (b[0] - shift)
    return _cnormalize(la + sign * lb, shift, N, p)


def _cneg(c):
    if _cis_zero(c):
        return c
    v, unit, N = c
    # the unit is stored modulo p^(N - v); _creduce renormalizes on construction
    return (v, -unit, N)


def _ctruncate(c, N, p):
    if _cis_zero(c):
        return _czero(min(c[2], N))
    v, unit, _ = c
    if v >= N:
        return _czero(N)
    return (v, unit % p ** (N - v), N)


def _cmul(a, b, p):
    # 0 mod p^Na times an element of valuation vb is 0 mod p^(Na + vb)
    if _cis_zero(a) and _cis_zero(b):
        return _czero(a[2] + b[2])
    if _cis_zero(a):
        return _czero(a[2] + b[0])
    if _cis_zero(b):
        return _czero(b[2] + a[0])
    ra, rb = a[2] - a[0], b[2] - b[0]
    r = min(ra, rb)
    v = a[0] + b[0]
    return (v, (a[1] * b[1]) % p ** r, v + r)


def _cdiv(a, b, p):
    if _cis_zero(b):
        raise DivisionByZeroClass("division by zero class")
    if _cis_zero(a):
        return _czero(a[2] - b[0])
    ra, rb = a[2] - a[0], b[2] - b[0]
    r = min(ra, rb)
    v = a[0] - b[0]
    return (v, (a[1] * pow(b[1] % p ** r, -1, p ** r)) % p ** r, v + r)


def _cscale_int(c, n, p):
    """Multiply a coordinate by an exact nonzero integer (or Fraction)."""
    if isinstance(n, Fraction):
        num, den = n.numerator, n.denominator
    else:
        num, den = n, 1
    if num == 0:
        return _czero(c[2])
    dv = _vp(num, p) - _vp(den, p)
    num //= p ** max(_vp(num, p), 0)
    den //= p ** max(_vp(den, p), 0)
    if _cis_zero(c):
        return _czero(c[2] + dv)
    v, unit, N = c
    r = N - v
    m = p ** r
    unit = unit * (num % m) % m
    if den != 1:
        unit = unit * pow(den % m, -1, m) % m
    if unit == 0:  # num could be divisible by p^r only if r tiny; guard
        return _czero(N + dv)
    vv = _vp(unit, p)
    if vv:
        unit //= p ** vv
        v += vv
        r -= vv
        unit %= p ** r
    return (v + dv, unit, v + dv + r)


def _cshift(c, k):
    """Multiply a coordinate by p^k exactly."""
    if _cis_zero(c):
        return _czero(c[2] + k)
    v, unit, N = c
    return (v + k, unit, N + k)


# fix up the _cneg helper now that p-free negation is clear
def _cneg(c):  # noqa: F811
    if _cis_zero(c):
        return c
    v, unit, N = c
    # unit is stored modulo p^(N - v); negation preserves that modulus
    return (v, -unit, N)


def _creduce(c, p):
    """Re-reduce the unit into canonical range [1, p^(N-v))."""
    if _cis_zero(c):
        return c
    v, unit, N = c
    m = p ** (N - v)
    unit %= m
    if unit == 0 or unit % p == 0:
        # can only happen after raw negation of a reduced unit => impossible,
        # but keep the normalization total
        return _cnormalize(unit, v, N, p)
    return (v, unit, N)


class PadicElement:
    """A number in the tower, stored per coordinate over {1, s, t, st}."""

    __slots__ = ("ctx", "coords")

    def __init__(self, ctx, coords):
        self.ctx = ctx
        self.coords = {c: _creduce(coords[c], ctx.p) for c in ctx.coords}

    # -- coercion ------------------------------------------------------------

    def _pair(self, other):
        if isinstance(other, int):
            other = self.ctx.from_int(other, self.abs_prec_int())
        elif isinstance(other, Fraction):
            other = self.ctx.from_fraction(other, self.abs_prec_int())
        if not isinstance(other, PadicElement):
            raise TypeError("cannot combine PadicElement with %r" % type(other))
        if self.ctx == other.ctx:
            return self, other
        ctx = self.ctx.join(other.ctx)
        return self.lift_to(ctx), other.lift_to(ctx)

    def lift_to(self, ctx):
        if ctx == self.ctx:
            return self
        if not self.ctx.compatible(ctx):
            raise ContextMismatch("contexts differ in p or u")
        if not set(self.ctx.coords) <= set(ctx.coords):
            # dropping coordinates is only allowed when they are zero classes
            for c in self.ctx.coords:
                if c not in ctx.coords and not _cis_zero(self.coords[c]):
                    raise ContextMismatch("cannot descend: %s coordinate nonzero" % c)
        N = min(c[2] for c in self.coords.values())
        coords = {}
        for c in ctx.coords:
            coords[c] = self.coords.get(c, _czero(N))
        return PadicElement(ctx, coords)

    # -- inspection ----------------------------------------------------------

    def is_zero(self):
        return all(_cis_zero(c) for c in self.coords.values())

    def valuation(self):
        """Valuation in (1/2)Z, or None for a zero class."""
        vals = [Fraction(c[0]) + _COORD_SHIFT[k]
                for k, c in self.coords.items() if not _cis_zero(c)]
        return min(vals) if vals else None

    def abs_prec(self):
        """Absolute precision in (1/2)Z (known modulo p^this)."""
        return min(Fraction(c[2]) + _COORD_SHIFT[k] for k, c in self.coords.items())

    def abs_prec_int(self):
        ap = self.abs_prec()
        return int(ap) if ap.denominator == 1 else int(ap - HALF)

    def rel_prec(self):
        v = self.valuation()
        if v is None:
            return Fraction(0)
        return self.abs_prec() - v

    def is_base(self):
        return all(_cis_zero(c) for k, c in self.coords.items() if k != "1")

    def coord(self, label):
        return self.coords.get(label, _czero(self.abs_prec_int()))

    def base_coord(self):
        """(v, unit, prec) of the '1' coordinate (element must be base)."""
        return self.coords["1"]

    def leading_digit(self):
        """First base-p digit of the lowest-index nonzero tower coordinate."""
        for k in ("1", "s", "t", "st"):
            c = self.coords.get(k)
            if c is not None and not _cis_zero(c):
                return c[1] % self.ctx.p
        return None

    def is_canonical_sign(self):
        d = self.leading_digit()
        if d is None:
            raise ZeroClassInput("sign of a zero class is undefined")
        return 1 <= d <= (self.ctx.p - 1) // 2

    def descend(self):
        """Move to the smallest tower layer containing this element."""
        nonzero = {k for k, c in self.coords.items() if not _cis_zero(c)}
        for level in ("base", "unram", "ram", "full"):
            if nonzero <= set(_LEVEL_COORDS[level]) and set(_LEVEL_COORDS[level]) <= set(self.ctx.coords):
                return self.lift_to(self.ctx.promote(level))
        return self

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        a, b = self._pair(other)
        p = a.ctx.p
        return PadicElement(a.ctx, {c: _cadd(a.coords[c], b.coords[c], p) for c in a.ctx.coords})

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._pair(other)
        p = a.ctx.p
        return PadicElement(a.ctx, {c: _cadd(a.coords[c], b.coords[c], p, sign=-1) for c in a.ctx.coords})

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return PadicElement(self.ctx, {c: _cneg(v) for c, v in self.coords.items()})

    def __mul__(self, other):
        if isinstance(other, int) or isinstance(other, Fraction):
            if other == 0:
                return self.ctx.zero(self.abs_prec_int())
            return PadicElement(self.ctx, {c: _cscale_int(v, other, self.ctx.p)
                                           for c, v in self.coords.items()})
        a, b = self._pair(other)
        p, u = a.ctx.p, a.ctx.u
        labels = a.ctx.coords
        acc = {c: [] for c in labels}
        for ka in labels:
            ca = a.coords[ka]
            for kb in labels:
                cb = b.coords[kb]
                sa, ta = _COORD_BITS[ka]
                sb, tb = _COORD_BITS[kb]
                target = next(k for k, bits in _COORD_BITS.items() if bits == (sa ^ sb, ta ^ tb))
                if target not in acc:
                    # product leaves the level: only possible if one factor coord is zero
                    if _cis_zero(ca) or _cis_zero(cb):
                        continue
                    raise ContextMismatch("product leaves level %r" % a.ctx.level)
                term = _cmul(ca, cb, p)
                factor = (u if (sa & sb) else 1) * (p if (ta & tb) else 1)
                if factor != 1:
                    term = _cscale_int(term, factor, p)
                acc[target].append(term)
        out = {}
        for c in labels:
            terms = acc[c]
            total = terms[0]
            for t in terms[1:]:
                total = _cadd(total, t, p)
            out[c] = total
        return PadicElement(a.ctx, out)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise DivisionByZeroClass("inverse of zero class")
        ctx = self.ctx
        p = ctx.p
        if ctx.level == "base":
            c = self.coords["1"]
            one = (0, 1, c[2] - c[0])  # exact 1 at the operand's relative precision
            return PadicElement(ctx, {"1": _cdiv(one, self.coords["1"], p)})
        # product of the nontrivial Galois conjugates over Q_p
        flips = []
        if "s" in ctx.coords:
            flips.append((True, False))
        if "t" in ctx.coords:
            flips.append((False, True))
        if len(flips) == 2:
            flips.append((True, True))
        conjs = [self._conjugate(fs, ft) for fs, ft in flips]
        num = conjs[0]
        for c in conjs[1:]:
            num = num * c
        norm = self * num
        # the norm lies in Q_p: all higher coordinates cancel exactly
        base = norm.coords["1"]
        if _cis_zero(base):
            raise DivisionByZeroClass("norm indistinguishable from zero")
        out = {}
        for c in num.ctx.coords:
            out[c] = _cdiv(num.coords[c], base, p)
        return PadicElement(num.ctx, out)

    def _conjugate(self, flip_s, flip_t):
        out = {}
        for k, c in self.coords.items():
            sb, tb = _COORD_BITS[k]
            sign = (-1) ** ((sb if flip_s else 0) + (tb if flip_t else 0))
            out[k] = c if sign == 1 else _cneg(c)
        return PadicElement(self.ctx, out)

    def __truediv__(self, other):
        if isinstance(other, int) or isinstance(other, Fraction):
            return self * (Fraction(1) / Fraction(other))
        a, b = self._pair(other)
        if b.ctx.level == "base" or b.is_base():
            # fast path: divide every coordinate by the base coordinate
            if _cis_zero(b.coords["1"]):
                raise DivisionByZeroClass("division by zero class")
            p = a.ctx.p
            return PadicElement(a.ctx, {c: _cdiv(a.coords[c], b.coords["1"], p) for c in a.ctx.coords})
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("exponent must be an integer")
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return self.ctx.one(self.abs_prec_int())
        base = self
        result = None
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def truncate(self, N):
        """Forget digits beyond absolute precision N (integer, base-p digits)."""
        p = self.ctx.p
        return PadicElement(self.ctx, {c: _ctruncate(v, N, p) for c, v in self.coords.items()})

    def equals(self, other, prec=None):
        d = self - other
        if prec is None:
            return d.is_zero()
        return d.truncate(prec).is_zero()

    def __repr__(self):
        parts = []
        p = self.ctx.p
        for k in self.ctx.coords:
            c = self.coords[k]
            if _cis_zero(c):
                continue
            lbl = "" if k == "1" else "*" + k
            parts.append("%d^%d*%d%s" % (p, c[0], c[1], lbl))
        body = " + ".join(parts) if parts else "0"
        return "(%s + O(%d^%s))" % (body, p, self.abs_prec())

    # -- serialization -------------------------------------------------------

    def to_json(self):
        out = []
        for k in self.ctx.coords:
            v, unit, N = self.coords[k]
            out.append({
                "v": "inf" if v is None else v,
                "unit": str(unit),
                "prec": N,
                "coord": k,
            })
        return out

    @classmethod
    def from_json(cls, ctx, data):
        coords = {c: _czero(ctx.default_prec) for c in ctx.coords}
        for entry in data:
            k = entry["coord"]
            if k not in coords:
                raise ContextMismatch("coordinate %r not in level %r" % (k, ctx.level))
            v = entry["v"]
            N = entry["prec"]
            if v == "inf":
                coords[k] = _czero(N)
            else:
                coords[k] = _cnormalize(int(entry["unit"]), int(v), N, ctx.p)
        return cls(ctx, coords)


class PadicPoly:
    """Polynomial with PadicElement coefficients (ascending order)."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx, coeffs):
        self.ctx = ctx
        cs = []
        for c in coeffs:
            if isinstance(c, int) or isinstance(c, Fraction):
                c = ctx.from_fraction(Fraction(c))
            cs.append(c.lift_to(ctx) if c.ctx != ctx else c)
        while len(cs) > 1 and cs[-1].is_zero():
            cs.pop()
        self.coeffs = cs
        if self.coeffs and self.coeffs[-1].is_zero() and len(self.coeffs) > 1:
            raise ZeroClassInput("leading coefficient is a zero class")

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def derivative(self):
        if self.degree == 0:
            return PadicPoly(self.ctx, [self.ctx.zero()])
        return PadicPoly(self.ctx, [c * i for i, c in enumerate(self.coeffs)][1:])


# -- Teichmueller and logarithm -----------------------------------------------

def teichmueller(a):
    """The root of unity congruent to the unit a modulo the maximal ideal."""
    v = a.valuation()
    if v is None:
        raise ZeroClassInput("Teichmueller lift of zero class")
    if v != 0:
        raise NonUnitInput("Teichmueller lift requires a unit")
    ctx = a.ctx
    p = ctx.p
    if a.is_base():
        c = a.coords["1"]
        N = c[2]
        m = p ** N
        x = c[1] % m
        for _ in range(N + 2):
            x = pow(x, p, m)
        return ctx.from_int(x, N)
    q = p ** ctx.residue_degree
    x = a
    budget = int(a.abs_prec() * 2) + 4
    prev = None
    for _ in range(budget):
        nxt = x ** q
        if prev is not None and nxt.equals(x):
            return nxt
        prev, x = x, nxt
    return x


def iwasawa_log(a):
    """The branch of log with log(p) = 0 (and hence log(t) = 0 in the tower)."""
    v = a.valuation()
    if v is None:
        raise ZeroClassInput("log of zero class")
    ctx = a.ctx
    p = ctx.p
    # strip the uniformizer part: a = t^(2v) * unit, and log(t) = 0
    twice = v * 2
    if twice.denominator != 1:
        raise ValueError("valuation not in (1/2)Z")  # pragma: no cover
    k = int(twice)
    unit = a
    if k % 2:
        unit = unit / ctx.promote("full").gen_t(a.abs_prec_int() + 4).lift_to(ctx) if "t" in ctx.coords else None
        if unit is None:
            raise ValueError("half-integral valuation outside ramified layer")  # pragma: no cover
        k -= 1
    if k:
        unit = PadicElement(unit.ctx, {c: _cshift(coord, -k // 2) for c, coord in unit.coords.items()})
    w = teichmueller(unit)
    z = unit / w - 1
    if z.is_zero():
        return z  # log of a Teichmueller representative is 0
    vz = z.valuation()
    target = z.abs_prec()
    acc = z.ctx.zero(int(target) + 2)
    zk = None
    kk = 1
    while Fraction(kk) * vz - _vp_int_bound(kk, p) < target + 2:
        zk = z if zk is None else zk * z
        m = _vp(kk, p) if kk % p == 0 else 0
        term = zk
        if m:
            term = PadicElement(term.ctx, {c: _cshift(coord, -m) for c, coord in term.coords.items()})
        kp = kk // p ** m
        if kp != 1:
            term = term * Fraction(1, kp)
        acc = acc + term if kk % 2 == 1 else acc - term
        kk += 1
    return acc


def _vp_int_bound(k, p):
    return _vp(k, p) if k % p == 0 else 0


# -- square roots and n-th roots ----------------------------------------------

def _residue_pair(a):
    """Residue of a unit in F_{p^2} as (c1 mod p, cs mod p) over {1, s}."""
    p = a.ctx.p
    out = []
    for k in ("1", "s"):
        c = a.coords.get(k)
        if c is None or _cis_zero(c) or c[0] > 0:
            out.append(0)
        elif c[0] == 0:
            out.append(c[1] % p)
        else:
            raise NonUnitInput("negative valuation coordinate in residue")
    return tuple(out)


def sqrt_in_tower(a):
    """Canonical square root in the smallest layer of the tower containing one."""
    if a.is_zero():
        raise ZeroClassInput("sqrt of zero class")
    ctx = a.ctx.promote("full")
    a = a.lift_to(ctx)
    p, u = ctx.p, ctx.u
    v = a.valuation()
    if (2 * v).denominator != 1 or v.denominator != 1:
        raise NoRootInField("valuation %s is not an integer" % v)
    k = int(v)
    unit = PadicElement(a.ctx, {c: _cshift(coord, -k) for c, coord in a.coords.items()})
    # find a residue square root in F_{p^2} by exhaustive search
    r1, rs = _residue_pair(unit)
    found = None
    for x in range(p):
        for y in range(p):
            if ((x * x + u * y * y) % p, (2 * x * y) % p) == (r1, rs):
                found = (x, y)
                break
        if found:
            break
    if found is None:
        raise NoRootInField("unit residue is not a square in F_{p^2}")
    x0 = ctx.from_int(found[0]) + ctx.gen_s() * found[1]
    root = _hensel_sqrt(unit, x0)
    # multiply back t^k = p^(k//2) * t^(k%2)
    if k % 2:
        root = root * ctx.gen_t(root.abs_prec_int() + 2)
        k -= 1
    if k:
        root = PadicElement(root.ctx, {c: _cshift(coord, k // 2) for c, coord in root.coords.items()})
    root = root.descend()
    if not root.is_canonical_sign():
        root = -root
    return root


def _hensel_sqrt(u_elem, x0):
    x = x0
    budget = int(u_elem.abs_prec()).bit_length() + 8
    half = Fraction(1, 2)
    for _ in range(budget):
        nxt = (x + u_elem / x) * half
        if nxt.equals(x):
            return nxt
        x = nxt
    return x


def nth_roots(a, n):
    """All n-th roots of a in the full tower (may be empty)."""
    if a.is_zero():
        raise ZeroClassInput("root of zero class")
    ctx = a.ctx.promote("full")
    a = a.lift_to(ctx)
    poly = PadicPoly(ctx, [-a] + [ctx.zero(a.abs_prec_int())] * (n - 1) + [ctx.one(a.abs_prec_int())])
    return [r for r, mult in poly_roots(poly) for _ in range(mult)]


def nth_root(a, n):
    """Canonical n-th root (sign rule as for sqrt_in_tower)."""
    if n == 2:
        return sqrt_in_tower(a)
    v = a.valuation()
    if v is None:
        raise ZeroClassInput("root of zero class")
    if (Fraction(2 * v, n)).denominator != 1:
        raise ValuationNotDivisible(
            "valuation %s not divisible by %d within the tower" % (v, n))
    roots = nth_roots(a, n)
    if not roots:
        raise NoRootInField("no %d-th root in the tower" % n)
    for r in roots:
        if r.is_canonical_sign():
            return r.descend()
    return roots[0].descend()


# -- polynomial roots ---------------------------------------------------------

def _residue_reps(ctx, prec):
    p = ctx.p
    if ctx.residue_degree == 1:
        return [ctx.from_int(i, prec) for i in range(p)]
    s = ctx.gen_s(prec)
    return [ctx.from_int(i, prec) + s * j for i in range(p) for j in range(p)]


def _uniformizer(ctx, prec):
    if ctx.ram_index == 2:
        return ctx.gen_t(prec)
    return ctx.from_unit_val(1, 1, prec + 1)


def _content_val(coeffs):
    vals = [c.valuation() for c in coeffs if not c.is_zero()]
    return min(vals) if vals else None


def _scale_by_pi_power(elem, twice_k):
    """Multiply by pi^twice_k where pi^2 = p in the ramified layers (twice_k in Z)."""
    ctx = elem.ctx
    e = elem
    if twice_k % 2:
        t = ctx.gen_t(e.abs_prec_int() + abs(twice_k) + 2)
        e = e * t if twice_k > 0 else e / t
        twice_k -= 1 if twice_k > 0 else -1
    k = twice_k // 2
    if k:
        e = PadicElement(e.ctx, {c: _cshift(coord, k) for c, coord in e.coords.items()})
    return e


def poly_roots(f):
    """All roots of f in the context field, as (root, multiplicity) pairs."""
    ctx = f.ctx
    coeffs = list(f.coeffs)
    if all(c.is_zero() for c in coeffs):
        raise ZeroClassInput("zero polynomial")
    # make all roots integral: x = p^-k y based on the Newton polygon
    slopes = []
    lead_v = coeffs[-1].valuation()
    for i, c in enumerate(coeffs[:-1]):
        v = c.valuation()
        if v is not None:
            slopes.append(Fraction(v - lead_v, len(coeffs) - 1 - i))
    k = 0
    if slopes:
        mn = min(slopes)
        if mn < 0:
            k = int(-mn) + (1 if (-mn).denominator != 1 else 0)
    if k:
        coeffs = [c * Fraction(1, ctx.p ** (k * i)) for i, c in enumerate(coeffs)]
    e = ctx.ram_index
    depth_cap = ctx.default_prec * e
    pairs = _roots_rec(ctx, coeffs, 0, depth_cap)
    if k:
        pairs = [(r * Fraction(1, ctx.p ** k), m) for r, m in pairs]
    return pairs


def _taylor_shift(coeffs, r):
    """Coefficients of f(r + X)."""
    out = [c for c in coeffs]
    n = len(out)
    # classic in-place Taylor shift (Horner scheme applied n times)
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            out[j] = out[j] + out[j + 1] * r
    return out


def _roots_rec(ctx, coeffs, depth, depth_cap):
    # normalize content so that min valuation is 0
    cv = _content_val(coeffs)
    if cv is None:
        raise ZeroClassInput("polynomial vanished at working precision")
    if cv != 0:
        coeffs = [_scale_by_pi_power(c, -int(2 * cv)) for c in coeffs]
    prec = min(int(c.abs_prec()) for c in coeffs)
    # index of the first unit coefficient = number of roots in the maximal ideal
    m0 = next((i for i, c in enumerate(coeffs) if c.valuation() == 0), None)
    if m0 is None:
        raise PrecisionExhausted("cannot separate roots at working precision")
    if depth >= depth_cap or prec <= 0:
        # a multiple-root cluster that cannot be refined further: report the
        # current center once, with its multiplicity, at the surviving precision
        if m0 == 0:
            return []
        return [(ctx.zero(max(prec, 1)), m0)]
    results = []
    reps = _residue_reps(ctx, max(prec, 2))
    pi = _uniformizer(ctx, max(prec, 2) + 2)
    for r in reps:
        shifted = _taylor_shift(coeffs, r)
        # multiplicity of the residue root = least index with unit coefficient
        mult = None
        for i, c in enumerate(shifted):
            v = c.valuation()
            if v is not None and v == 0:
                mult = i
                break
        if mult is None:
            raise PrecisionExhausted("cannot separate roots at working precision")
        if mult == 0:
            continue  # r is not a residue root
        if mult == 1:
            root = _hensel_root(ctx, coeffs, r)
            results.append((root, 1))
            continue
        # substitute x = r + pi x' and recurse on integral roots
        sub = [c * (pi ** i) for i, c in enumerate(shifted)]
        inner = _roots_rec(ctx, sub, depth + 1, depth_cap)
        for rho, m in inner:
            v = rho.valuation()
            if v is None or v >= 0:
                results.append((r + pi * rho, m))
    return results


def _hensel_root(ctx, coeffs, x0):
    f = PadicPoly(ctx, coeffs)
    df = f.derivative()
    x = x0
    budget = max(int(c.abs_prec()) for c in coeffs).bit_length() + 8
    for _ in range(budget):
        fx = f(x)
        if fx.is_zero():
            return x
        dfx = df(x)
        nxt = x - fx / dfx
        if nxt.equals(x):
            return nxt
        x = nxt
    return x


# -- multivariate Newton ------------------------------------------------------

def _mat_det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if n == 3:
        return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
    raise ValueError("determinant implemented for n <= 3")


def _solve_linear(J, F):
    """Solve J delta = F by Gaussian elimination with valuation pivoting."""
    n = len(F)
    A = [row[:] + [F[i]] for i, row in enumerate(J)]
    for col in range(n):
        piv, pv = None, None
        for row in range(col, n):
            v = A[row][col].valuation()
            if v is not None and (pv is None or v < pv):
                piv, pv = row, v
        if piv is None:
            raise SingularJacobian("Jacobian singular at working precision")
        A[col], A[piv] = A[piv], A[col]
        inv = A[col][col].inverse()
        A[col] = [x * inv for x in A[col]]
        for row in range(n):
            if row != col:
                factor = A[row][col]
                if not factor.is_zero():
                    A[row] = [x - factor * y for x, y in zip(A[row], A[col])]
    return [A[i][n] for i in range(n)]


def newton_solve(system, jacobian, x0, target_prec):
    """Multivariate Newton iteration with a Hensel-type entry criterion.

    ``system(x)`` returns the residual vector, ``jacobian(x)`` the exact
    Jacobian matrix, both as PadicElements.  Requires v(F_i(x0)) > 2 v(det J(x0))
    for every component before iterating.
    """
    F = system(x0)
    J = jacobian(x0)
    det = _mat_det(J)
    dv = det.valuation()
    if dv is None:
        raise SingularJacobian("det J vanishes at the starting point")
    for Fi in F:
        v = Fi.valuation()
        if v is not None and v <= 2 * dv:
            raise NoConvergence("starting point violates v(F) > 2 v(det J)")
    x = list(x0)
    budget = max(target_prec, 1).bit_length() + 8
    for _ in range(budget):
        F = system(x)
        if all(Fi.is_zero() or Fi.valuation() >= target_prec for Fi in F):
            return x
        J = jacobian(x)
        delta = _solve_linear(J, F)
        x = [xi - di for xi, di in zip(x, delta)]
    F = system(x)
    if all(Fi.is_zero() or Fi.valuation() >= target_prec for Fi in F):
        return x
    raise NoConvergence("iteration budget exceeded")
