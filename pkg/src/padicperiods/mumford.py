"""Genus-2 Mumford-curve periods via theta series.

Implements the nine two-variable theta series attached to the half-periods
p1, p2, p3, the squared-theta cross-ratio formulas for the normalized
Weierstrass x-coordinates, Weierstrass-point labeling/normalization for a
sextic with split reduction, the conversions between the period matrix
(A B; B D), the fundamental periods q_i, and the half-periods, and the
three-dimensional Newton scheme inverting the cross-ratio formulas.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (
    DegenerateTheta,
    InvariantViolation,
    NoConvergence,
    NonConvergent,
    NotMumfordReduction,
    PadicError,
    RamifiedResidue,
    RepeatedRoot,
    RootsNotInField,
    SeedNotFound,
    SingularJacobian,
    ZeroEntry,
)
from .padic import (
    HALF,
    PadicElement,
    PadicPoly,
    TowerContext,
    _cis_zero,
    _czero,
    newton_solve,
    poly_roots,
    sqrt_in_tower,
)

THETA_LABELS = (
    "1+1-", "2+2-", "3+3-",
    "1-2+", "1+2-",
    "2-3+", "2+3-",
    "3-1+", "3+1-",
)


# -- domain types --------------------------------------------------------------

class HalfPeriods:
    """The half-periods p1, p2, p3 in the full tower."""

    __slots__ = ("p1", "p2", "p3")

    def __init__(self, p1, p2, p3):
        full = p1.ctx.promote("full")
        self.p1 = p1.lift_to(full)
        self.p2 = p2.lift_to(full)
        self.p3 = p3.lift_to(full)
        _check_halfperiod_valuations((self.p1, self.p2, self.p3))

    def as_tuple(self):
        return (self.p1, self.p2, self.p3)

    def to_json(self):
        return {"p1": self.p1.to_json(), "p2": self.p2.to_json(), "p3": self.p3.to_json()}


def _check_halfperiod_valuations(ps):
    vals = [p.valuation() for p in ps]
    if any(v is None for v in vals):
        raise NonConvergent("half-period indistinguishable from zero")
    if any(v < 0 for v in vals):
        raise NonConvergent("half-period valuations must be non-negative")
    if sum(1 for v in vals if v == 0) > 1:
        raise NonConvergent(
            "at most one half-period may be a unit for the theta series to converge")


class FundamentalPeriods:
    """The multiplicative periods q1, q2, q3 (q_i = p_i^-2)."""

    __slots__ = ("q1", "q2", "q3")

    def __init__(self, q1, q2, q3):
        self.q1, self.q2, self.q3 = q1, q2, q3
        vals = [q.valuation() for q in (q1, q2, q3)]
        if any(v is None for v in vals):
            raise ZeroEntry("fundamental period indistinguishable from zero")
        if any(v > 0 for v in vals) or sum(1 for v in vals if v == 0) > 1:
            raise InvariantViolation(
                "fundamental periods must have negative valuation (at most one unit)")

    def as_tuple(self):
        return (self.q1, self.q2, self.q3)

    def to_json(self):
        return {"q1": self.q1.to_json(), "q2": self.q2.to_json(), "q3": self.q3.to_json()}


class PeriodMatrix:
    """Symmetric period matrix (A B; B D)."""

    __slots__ = ("A", "B", "D")

    def __init__(self, A, B, D):
        self.A, self.B, self.D = A, B, D

    def as_tuple(self):
        return (self.A, self.B, self.D)

    def to_json(self):
        return {"A": self.A.to_json(), "B": self.B.to_json(), "D": self.D.to_json()}


class NormalizedSextic:
    """Normalized Weierstrass data: P1+ = inf, P2+ = 0, P3+ = 1 and the x(Pi-)."""

    __slots__ = ("x1m", "x2m", "x3m", "pattern", "partition")

    def __init__(self, x1m, x2m, x3m, pattern, partition):
        self.x1m, self.x2m, self.x3m = x1m, x2m, x3m
        self.pattern = pattern          # "(2,2,2)" or "(2,2,1,1)"
        self.partition = partition      # list of residue descriptions per class

    def as_tuple(self):
        return (self.x1m, self.x2m, self.x3m)


# -- theta series --------------------------------------------------------------

def _theta_box(ps, target_prec):
    """Summation bound M such that all omitted terms are below p^target_prec."""
    vals = [p.valuation() for p in ps]
    v_min = min(vals)
    v_pos = min([v for v in vals if v > 0], default=None)
    if v_pos is None:
        raise NonConvergent("theta series diverges: no half-period of positive valuation")
    if v_min > 0:
        M = _ceil_sqrt(Fraction(2 * target_prec) / v_min) + 2
    else:
        # one unit half-period: terms at distance m from the origin still have
        # valuation at least v_pos * (ceil(m/2)^2 - ceil(m/2))
        M = 1
        while v_pos * (((M + 2) // 2) ** 2 - (M + 2) // 2) < target_prec:
            M += 1
        M += 2
    return M


def _ceil_sqrt(q):
    q = Fraction(q)
    n = (q.numerator + q.denominator - 1) // q.denominator
    r = 0
    while r * r < n:
        r += 1
    return r


class _PowCache:
    def __init__(self, base):
        self.base = base
        self.cache = {0: base.ctx.one(base.abs_prec_int() + 2)}

    def __getitem__(self, e):
        c = self.cache
        if e not in c:
            best = max(k for k in c if k <= e)
            val = c[best]
            # exponents are dense; walk up one multiplication at a time
            for k in range(best + 1, e + 1):
                val = val * self.base
                c[k] = val
        return c[e]


def _theta_core(p1, p2, p3, M, partials=False):
    """Nine theta sums over |i|,|j| <= M; optionally d/dp_k of each sum."""
    ctx = p1.ctx
    P1, P2, P3 = _PowCache(p1), _PowCache(p2), _PowCache(p3)
    prec = min(int(p.abs_prec()) for p in (p1, p2, p3))
    zero = ctx.zero(prec + 2)
    sums = {lbl: zero for lbl in THETA_LABELS}
    ders = {lbl: [zero, zero, zero] for lbl in THETA_LABELS} if partials else None

    # (label, family, sign function); families give the exponent triple
    # (a on p2, b on p1, c on p3) as functions of (i, j, k=i-j)
    def fam_a(i, j, k):
        return (i * i, j * j, k * k)

    def fam_b(i, j, k):
        return (i * i - i, j * j - j, k * k)

    def fam_c(i, j, k):
        return (i * i + i, j * j, k * k + k)

    def fam_d(i, j, k):
        return (i * i, j * j + j, k * k - k)

    plan = (
        ("1+1-", fam_a, lambda i, j: (-1) ** j),
        ("2+2-", fam_a, lambda i, j: (-1) ** i),
        ("3+3-", fam_a, lambda i, j: (-1) ** (i + j)),
        ("1-2+", fam_b, lambda i, j: (-1) ** (i + j)),
        ("1+2-", fam_b, lambda i, j: 1),
        ("2-3+", fam_c, lambda i, j: (-1) ** j),
        ("2+3-", fam_c, lambda i, j: 1),
        ("3-1+", fam_d, lambda i, j: (-1) ** i),
        ("3+1-", fam_d, lambda i, j: 1),
    )

    for i in range(-M, M + 1):
        for j in range(-M, M + 1):
            k = i - j
            fam_vals = {}
            for lbl, fam, sign in plan:
                key = fam.__name__
                if key not in fam_vals:
                    a, b, c = fam(i, j, k)
                    fam_vals[key] = (a, b, c, P2[a] * P1[b] * P3[c])
                a, b, c, term = fam_vals[key]
                s = sign(i, j)
                sums[lbl] = sums[lbl] + term if s == 1 else sums[lbl] - term
                if partials:
                    d = ders[lbl]
                    if b:  # d/dp1
                        t = P2[a] * P1[b - 1] * P3[c] * b
                        d[0] = d[0] + t if s == 1 else d[0] - t
                    if a:  # d/dp2
                        t = P2[a - 1] * P1[b] * P3[c] * a
                        d[1] = d[1] + t if s == 1 else d[1] - t
                    if c:  # d/dp3
                        t = P2[a] * P1[b] * P3[c - 1] * c
                        d[2] = d[2] + t if s == 1 else d[2] - t
    if partials:
        return sums, ders
    return sums


def theta_all(hp, target_prec=None):
    """The nine theta values as a dict keyed by THETA_LABELS."""
    ps = hp.as_tuple() if isinstance(hp, HalfPeriods) else tuple(hp)
    _check_halfperiod_valuations(ps)
    if target_prec is None:
        target_prec = min(int(p.abs_prec()) for p in ps)
    M = _theta_box(ps, target_prec)
    p1, p2, p3 = ps
    return _theta_core(p1, p2, p3, M)


# -- cross-ratio formulas ------------------------------------------------------

def _sq(x):
    return x * x


def xcoords_from_halfperiods(hp, target_prec=None, strict=True):
    """Normalized x-coordinates (x(P1-), x(P2-), x(P3-)) from half-periods.

    With ``strict`` the coordinates are required to descend to the unramified
    layer; otherwise genuinely ramified coordinates are returned as they are
    (symmetric functions of them may still descend).
    """
    th = theta_all(hp, target_prec)
    t11, t22, t33 = th["1+1-"], th["2+2-"], th["3+3-"]
    den1 = _sq(t11) * _sq(th["1+2-"])
    den2 = _sq(t22) * _sq(th["2+3-"])
    den3 = _sq(t33) * _sq(th["3+1-"])
    for d in (den1, den2, den3):
        if d.is_zero():
            raise DegenerateTheta("vanishing theta denominator")
    x3m = _sq(t22) * _sq(th["1-2+"]) / den1
    r2 = _sq(t33) * _sq(th["2-3+"]) / den2     # (x1m - 1)/x1m
    r3 = _sq(t11) * _sq(th["3-1+"]) / den3     # 1/(1 - x2m)
    one_minus_r2 = 1 - r2
    if one_minus_r2.is_zero() or r3.is_zero():
        raise DegenerateTheta("cross-ratio solve hit a zero class")
    x1m = one_minus_r2.inverse()
    x2m = 1 - r3.inverse()
    return tuple(_strip_ramified(x, strict=strict) for x in (x1m, x2m, x3m))


def _strip_ramified(x, tol=5, strict=True):
    """Zero out ramified coordinates that vanish within tolerance; descend.

    A ramified component that is significant at working precision raises
    RamifiedResidue in strict mode and leaves the element untouched otherwise.
    """
    if x.ctx.level in ("base", "unram"):
        return x
    N = x.abs_prec()
    coords = dict(x.coords)
    for k in ("t", "st"):
        if k not in coords:
            continue
        c = coords[k]
        if not _cis_zero(c) and Fraction(c[0]) + HALF < N - tol:
            if strict:
                raise RamifiedResidue(
                    "unexpected ramified component of valuation %s"
                    % (Fraction(c[0]) + HALF))
            return x
        coords[k] = _czero(c[2])
    return PadicElement(x.ctx, coords).descend()


# -- Newton inversion ----------------------------------------------------------

def _residuals_and_jacobian(ps, xs, M, want_jac):
    """Polynomial-form residuals of the cross-ratio system and their Jacobian."""
    p1, p2, p3 = ps
    x1, x2, x3 = xs
    if want_jac:
        th, dth = _theta_core(p1, p2, p3, M, partials=True)
    else:
        th = _theta_core(p1, p2, p3, M)
        dth = None
    t = {lbl: th[lbl] for lbl in THETA_LABELS}
    # F1 = T22^2 T1-2+^2 - x3 T11^2 T1+2-^2
    # F2 = x1 T33^2 T2-3+^2 - (x1 - 1) T22^2 T2+3-^2
    # F3 = (1 - x2) T11^2 T3-1+^2 - T33^2 T3+1-^2
    prods = {
        "a": ("2+2-", "1-2+"), "b": ("1+1-", "1+2-"),
        "c": ("3+3-", "2-3+"), "d": ("2+2-", "2+3-"),
        "e": ("1+1-", "3-1+"), "f": ("3+3-", "3+1-"),
    }
    P = {k: _sq(t[u]) * _sq(t[v]) for k, (u, v) in prods.items()}
    F = [
        P["a"] - x3 * P["b"],
        x1 * P["c"] - (x1 - 1) * P["d"],
        (1 - x2) * P["e"] - P["f"],
    ]
    if not want_jac:
        return F, None
    # d/dp_m of T_u^2 T_v^2 = 2 T_u T_v (T_u' T_v + T_u T_v')
    dP = {}
    for k, (u, v) in prods.items():
        dP[k] = [
            (t[u] * t[v] * (dth[u][m] * t[v] + t[u] * dth[v][m])) * 2
            for m in range(3)
        ]
    J = [
        [dP["a"][m] - x3 * dP["b"][m] for m in range(3)],
        [x1 * dP["c"][m] - (x1 - 1) * dP["d"][m] for m in range(3)],
        [(1 - x2) * dP["e"][m] - dP["f"][m] for m in range(3)],
    ]
    return F, J


def _analytic_seed(ctx, xs):
    """First-order seeds: p1 = 1/(4 x1), p2 = -x2/(4(1-x2)), p3 = (1-x3)/4."""
    x1, x2, x3 = xs
    quarter = Fraction(1, 4)
    try:
        p1 = x1.inverse() * quarter
        p2 = -(x2 / (1 - x2)) * quarter
        p3 = (1 - x3) * quarter
    except PadicError:
        return None
    return [p1.lift_to(ctx), p2.lift_to(ctx), p3.lift_to(ctx)]


def _seed_candidates(ctx, seed_depth):
    """Representatives of positive valuation modulo p^seed_depth (and t-shifts)."""
    p = ctx.p
    ints = []
    for a in range(1, p ** (seed_depth - 1)):
        ints.append(ctx.from_fraction(Fraction(a * p), seed_depth))
    halves = []
    t = ctx.gen_t(seed_depth)
    for a in range(1, p ** (seed_depth - 1)):
        if a % p:
            halves.append(t * a)
    return ints + halves


def halfperiods_from_xcoords(xs, seed_depth=3, target_prec=None):
    """Invert the cross-ratio formulas by a three-dimensional Newton scheme."""
    xs = tuple(xs)
    ctx = xs[0].ctx.promote("full")
    xs = tuple(x.lift_to(ctx) for x in xs)
    vals = set()
    for a in range(3):
        for b in range(a + 1, 3):
            if (xs[a] - xs[b]).is_zero():
                raise ValueError("x-coordinates must be pairwise distinct")
    for x in xs:
        if x.is_zero() or (x - 1).is_zero():
            raise ValueError("x-coordinates must avoid 0 and 1")
    del vals
    if target_prec is None:
        target_prec = min(int(x.abs_prec()) for x in xs)

    def try_seed(seed):
        return _newton_run(ctx, seed, xs, target_prec)

    seed = _analytic_seed(ctx, xs)
    if seed is not None:
        try:
            _check_halfperiod_valuations(seed)
            result = try_seed(seed)
            if result is not None:
                return HalfPeriods(*result)
        except PadicError:
            pass
    # exhaustive residue-level search
    cands = _seed_candidates(ctx, seed_depth)
    for s1 in cands:
        for s2 in cands:
            for s3 in cands:
                seed = [s1, s2, s3]
                try:
                    _check_halfperiod_valuations(seed)
                    result = _newton_run(ctx, seed, xs, target_prec)
                except PadicError:
                    continue
                if result is not None:
                    return HalfPeriods(*result)
    raise SeedNotFound("no admissible Newton seed at depth %d" % seed_depth)


def _newton_run(ctx, seed, xs, target_prec):
    """Damped pre-refinement followed by the certified Newton iteration."""
    M = _theta_box(seed, target_prec)

    def system(p):
        F, _ = _residuals_and_jacobian(p, xs, M, want_jac=False)
        return F

    def jacobian(p):
        _, J = _residuals_and_jacobian(p, xs, M, want_jac=True)
        return J

    from .padic import _mat_det, _solve_linear

    x = list(seed)
    # pre-refinement: plain Newton steps, demanding strict residual improvement,
    # until the Hensel-type criterion v(F) > 2 v(det J) is met
    for _ in range(24):
        F, J = _residuals_and_jacobian(x, xs, M, want_jac=True)
        det = _mat_det(J)
        dv = det.valuation()
        if dv is None:
            raise SingularJacobian("Jacobian determinant vanishes")
        fvals = [f.valuation() for f in F]
        if all(f.is_zero() for f in F):
            return x
        if all(f.is_zero() or f.valuation() > 2 * dv for f in F):
            return newton_solve(system, jacobian, x, target_prec)
        worst = min(v for v in fvals if v is not None)
        delta = _solve_linear(J, F)
        nxt = [xi - di for xi, di in zip(x, delta)]
        nF, _ = _residuals_and_jacobian(nxt, xs, M, want_jac=False)
        nworst = min((f.valuation() for f in nF if f.valuation() is not None),
                     default=None)
        if nworst is not None and nworst <= worst:
            return None  # not converging from this seed
        x = nxt
    return None


# -- labeling and normalization ------------------------------------------------

def _residue_key(x):
    """Hashable residue class of a root: 'inf' or the residue in F_{p^2}."""
    v = x.valuation()
    if v is not None and v < 0:
        return "inf"
    p = x.ctx.p
    r1 = rs = 0
    for k, c in x.coords.items():
        if _cis_zero(c):
            continue
        if k == "1" and c[0] == 0:
            r1 = c[1] % p
        elif k == "s" and c[0] == 0:
            rs = c[1] % p
    return (r1, rs)


def _digit_key(x):
    """Deterministic total order on p-adic numbers via their digit strings."""
    parts = []
    for k in ("1", "s", "t", "st"):
        c = x.coords.get(k)
        if c is None or _cis_zero(c):
            parts.append((1, 0, ()))
            continue
        v, unit, N = c
        digits = []
        u = unit
        p = x.ctx.p
        for _ in range(max(N - v, 0)):
            digits.append(u % p)
            u //= p
        parts.append((0, v, tuple(digits)))
    return tuple(parts)


def label_and_normalize(f):
    """Label the Weierstrass points of y^2 = f(x) and normalize to (inf, 0, 1)."""
    ctx = f.ctx.promote("full")
    if ctx != f.ctx:
        f = PadicPoly(ctx, [c.lift_to(ctx) for c in f.coeffs])
    pairs = poly_roots(f)
    if any(m > 1 for _, m in pairs):
        raise RepeatedRoot("sextic is not squarefree at working precision")
    roots = [r for r, _ in pairs]
    if len(roots) + (6 - f.degree) < 6:
        raise RootsNotInField("found only %d of %d finite roots" % (len(roots), f.degree))
    # a degree-5 model has a Weierstrass point at infinity; represent it by a
    # root of negative valuation only through explicit degree-6 input
    if f.degree != 6:
        raise RootsNotInField("expected a sextic model")
    classes = {}
    for r in roots:
        classes.setdefault(_residue_key(r), []).append(r)
    sizes = sorted((len(v) for v in classes.values()), reverse=True)
    if sizes == [2, 2, 2]:
        pattern = "(2,2,2)"
        pair_keys = sorted(classes, key=_class_sort_key)
        S = [classes[k] for k in pair_keys]
    elif sizes == [2, 2, 1, 1]:
        pattern = "(2,2,1,1)"
        doubles = sorted((k for k in classes if len(classes[k]) == 2),
                         key=_class_sort_key)
        singles = [classes[k][0] for k in sorted(
            (k for k in classes if len(classes[k]) == 1), key=_class_sort_key)]
        S = [classes[doubles[0]], classes[doubles[1]], singles]
    else:
        raise NotMumfordReduction("residue pattern %s is not split-degenerate" % (sizes,))
    # within-pair labels: P+ is the root with lexicographically smaller digits
    plus, minus = [], []
    for grp in S:
        a, b = sorted(grp, key=_digit_key)
        plus.append(a)
        minus.append(b)
    a1, a2, a3 = plus

    def moebius(x):
        num = (x - a2) * (a3 - a1)
        den = (x - a1) * (a3 - a2)
        if den.is_zero():
            raise ZeroEntry("normalization map degenerate")
        return num / den

    x1m, x2m, x3m = (moebius(m) for m in minus)
    imgs = [x1m, x2m, x3m]
    for i in range(3):
        for jj in range(i + 1, 3):
            if (imgs[i] - imgs[jj]).is_zero():
                raise NotMumfordReduction("normalized coordinates collide")
        if imgs[i].is_zero() or (imgs[i] - 1).is_zero():
            raise NotMumfordReduction("normalized coordinate hits a branch point")
    partition = [[_describe_residue(r) for r in grp] for grp in S]
    return NormalizedSextic(x1m, x2m, x3m, pattern, partition)


def _class_sort_key(key):
    if key == "inf":
        return (0, 0, 0)
    return (1, key[0], key[1])


def _describe_residue(r):
    key = _residue_key(r)
    return "inf" if key == "inf" else "%d+%d*s" % key


# -- period conversions --------------------------------------------------------

def periods_from_matrix(m):
    A, B, D = m.as_tuple()
    if B.is_zero():
        raise ZeroEntry("B entry of the period matrix is zero")
    return FundamentalPeriods(B * D, A * B, B.inverse())


def matrix_from_periods(q):
    q1, q2, q3 = q.as_tuple()
    for x in (q1, q2, q3):
        if x.is_zero():
            raise ZeroEntry("fundamental period is zero")
    B = q3.inverse()
    return PeriodMatrix(q2 * q3, B, q1 * q3)


def halfperiods_from_periods(q, signs=(0, 0, 0)):
    """p_i = square root of 1/q_i in the full tower, with chosen signs."""
    ps = []
    for qi, bit in zip(q.as_tuple(), signs):
        if qi.is_zero():
            raise ZeroEntry("fundamental period is zero")
        root = sqrt_in_tower(qi.inverse())
        ps.append(-root if bit else root)
    return HalfPeriods(*ps)


# -- full pipeline -------------------------------------------------------------

def sextic_from_model(emb, h_coeffs, g_coeffs):
    """Embedded y^2 = f(x) model with f = h^2 + 4g from y^2 + h(x) y = g(x)."""
    ctx = emb.ctx
    h = [emb(c) for c in h_coeffs]
    g = [emb(c) for c in g_coeffs]
    n = max(2 * (len(h) - 1), len(g) - 1) + 1
    f = [ctx.zero() for _ in range(n)]
    for i, a in enumerate(h):
        for j, b in enumerate(h):
            f[i + j] = f[i + j] + a * b
    for i, c in enumerate(g):
        f[i] = f[i] + c * 4
    return PadicPoly(ctx, f)


def curve_periods(f, seed_depth=3, target_prec=None):
    """Period matrix of y^2 = f(x): the full labeling/Newton/period pipeline."""
    stage = "label_and_normalize"
    try:
        ns = label_and_normalize(f)
        stage = "halfperiods_from_xcoords"
        hp = halfperiods_from_xcoords(ns.as_tuple(), seed_depth=seed_depth,
                                      target_prec=target_prec)
        stage = "periods"
        qs = FundamentalPeriods(*[(p * p).inverse() for p in hp.as_tuple()])
        stage = "matrix_from_periods"
        return matrix_from_periods(qs)
    except PadicError as exc:
        raise type(exc)("[stage: %s] %s" % (stage, exc)) from exc
