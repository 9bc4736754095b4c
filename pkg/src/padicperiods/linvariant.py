"""p-adic L-invariants from period lattices with a Hecke action.

The ord and log pairing matrices of a 2x2 period lattice W are related by

  M_log = (a I + b S) M_ord        (side "left"),   or
  M_log = M_ord (a I + b S)        (side "right"),

where S is the Hecke matrix T or its transpose.  ``l_invariant`` solves for
the unique pair (a, b) of p-adic numbers consistent across the lattice and
reports which of the four conventions produced it; the L-invariant power
series is a + b T up to the working precision.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import NoConsistentConvention, SingularOrd
from .padic import iwasawa_log


class HeckeAction:
    """An integral Hecke operator acting on a rank-2 lattice.

    The characteristic polynomial x^2 - tr x + det must be irreducible over Q
    (its discriminant is not a perfect square), so that the commutant of the
    action is the quadratic order Z[T].
    """

    __slots__ = ("matrix", "trace", "det")

    def __init__(self, matrix):
        self.matrix = [[int(matrix[i][j]) for j in range(2)] for i in range(2)]
        m = self.matrix
        self.trace = m[0][0] + m[1][1]
        self.det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
        disc = self.trace * self.trace - 4 * self.det
        if disc >= 0 and _isqrt_exact(disc) is not None:
            raise ValueError("characteristic polynomial is reducible over Q")

    def charpoly(self):
        return (1, -self.trace, self.det)  # x^2 - tr x + det, descending

    def transpose(self):
        m = self.matrix
        return [[m[0][0], m[1][0]], [m[0][1], m[1][1]]]


def _isqrt_exact(n):
    if n < 0:
        return None
    r = int(n ** 0.5)
    while r * r > n:
        r -= 1
    while (r + 1) * (r + 1) <= n:
        r += 1
    return r if r * r == n else None


def pairing_matrices(W):
    """(M_ord, M_log): entrywise valuations (exact rationals) and Iwasawa logs."""
    M_ord = W.ord_matrix()
    M_log = [[iwasawa_log(x) for x in row] for row in W.m]
    return M_ord, M_log


def _mat_mul_q(A, B):
    return [[sum(Fraction(A[i][k]) * Fraction(B[k][j]) for k in range(2))
             for j in range(2)] for i in range(2)]


def _solve_convention(ctx, M_log, coeffs):
    """Solve M_log_ij = a c1_ij + b c2_ij (c rational) exactly; None if inconsistent."""
    entries = [(i, j) for i in range(2) for j in range(2)]
    pivot = None
    for n1 in range(4):
        for n2 in range(n1 + 1, 4):
            (i1, j1), (i2, j2) = entries[n1], entries[n2]
            det = (coeffs[0][i1][j1] * coeffs[1][i2][j2]
                   - coeffs[0][i2][j2] * coeffs[1][i1][j1])
            if det != 0:
                pivot = (entries[n1], entries[n2], det)
                break
        if pivot:
            break
    if pivot is None:
        return None
    (i1, j1), (i2, j2), det = pivot
    y1, y2 = M_log[i1][j1], M_log[i2][j2]
    c11, c12 = coeffs[0][i1][j1], coeffs[1][i1][j1]
    c21, c22 = coeffs[0][i2][j2], coeffs[1][i2][j2]
    a = (y1 * ctx.from_fraction(c22 / det)) - (y2 * ctx.from_fraction(c12 / det))
    b = (y2 * ctx.from_fraction(c11 / det)) - (y1 * ctx.from_fraction(c21 / det))
    for i in range(2):
        for j in range(2):
            expect = (a * ctx.from_fraction(coeffs[0][i][j])
                      + b * ctx.from_fraction(coeffs[1][i][j]))
            if not (M_log[i][j] - expect).is_zero():
                return None
    return a, b


class LInvariant:
    __slots__ = ("a", "b", "conventions", "prec")

    def __init__(self, a, b, conventions, prec):
        self.a, self.b = a, b
        self.conventions = conventions
        self.prec = prec

    def to_json(self):
        return {"a": self.a.to_json(), "b": self.b.to_json(),
                "conventions": list(self.conventions), "prec": str(self.prec)}


def l_invariant(W, hecke):
    """The unique (a, b) with M_log = (aI + bS) M_ord (or the right-sided form).

    All four conventions (side in {left, right}, S in {T, T^t}) are solved;
    conventions giving identical pairs are merged.  Exactly one distinct
    consistent pair must survive, else NoConsistentConvention is raised.
    """
    if not isinstance(hecke, HeckeAction):
        hecke = HeckeAction(hecke)
    M_ord, M_log = pairing_matrices(W)
    if M_ord[0][0] * M_ord[1][1] - M_ord[0][1] * M_ord[1][0] == 0:
        raise SingularOrd("ord pairing matrix is singular")
    ctx = W.ctx
    results = []
    for sname, S in (("T", hecke.matrix), ("Tt", hecke.transpose())):
        SM = _mat_mul_q(S, M_ord)
        MS = _mat_mul_q(M_ord, S)
        for side, c2 in (("left", SM), ("right", MS)):
            sol = _solve_convention(ctx, M_log, (M_ord, c2))
            if sol is not None:
                results.append(("%s-%s" % (side, sname), sol))
    if not results:
        raise NoConsistentConvention("no convention fits the pairing matrices")
    distinct = []
    for tag, (a, b) in results:
        for group in distinct:
            ga, gb = group[0]
            if (a - ga).is_zero() and (b - gb).is_zero():
                group[1].append(tag)
                break
        else:
            distinct.append([(a, b), [tag]])
    if len(distinct) != 1:
        raise NoConsistentConvention(
            "conventions disagree: %d distinct (a, b) pairs fit" % len(distinct))
    (a, b), tags = distinct[0]
    prec = min(a.abs_prec(), b.abs_prec())
    return LInvariant(a, b, tuple(tags), prec)
