"""Brute-force model of the Bruhat-Tits tree of Q_p for rational ends.

A vertex is a closed disk c + p^n Z_p, stored as (n, c).  Lines are listed
vertex by vertex inside a window of levels, and intersections/distances are
found by direct comparison.  Nothing here uses cross ratios.
"""

from fractions import Fraction

INF_END = "inf"


def vq(x: Fraction, p: int) -> int:
    x = Fraction(x)
    if x == 0:
        return 10**9
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def same_vertex(a, b, p):
    (n1, c1), (n2, c2) = a, b
    return n1 == n2 and vq(c1 - c2, p) >= n1


def vertex_distance(a, b, p):
    (n1, c1), (n2, c2) = a, b
    m = min(n1, n2, vq(c1 - c2, p))
    return (n1 - m) + (n2 - m)


def line_vertices(x, y, p, lo, hi):
    """Vertices of the geodesic x--y with level in [lo, hi]."""
    if x == INF_END:
        x, y = y, x
    if y == INF_END:
        return [(n, Fraction(x)) for n in range(lo, hi + 1)]
    top = vq(Fraction(x) - Fraction(y), p)
    out = [(n, Fraction(x)) for n in range(max(top, lo), hi + 1)]
    out += [(n, Fraction(y)) for n in range(max(top + 1, lo), hi + 1)]
    return out


def window(points, p):
    vals = [0]
    finite = [Fraction(x) for x in points if x != INF_END]
    for i, a in enumerate(finite):
        vals.append(vq(a, p) if a else 0)
        for b in finite[i + 1:]:
            vals.append(vq(a - b, p))
    return min(vals) - 3, max(vals) + 3


def arrangement(l1, l2, p):
    """('cross', 0), ('disjoint', d) or ('overlap', length) from the vertex model."""
    lo, hi = window(list(l1) + list(l2), p)
    v1 = line_vertices(*l1, p, lo, hi)
    v2 = line_vertices(*l2, p, lo, hi)
    shared = [a for a in v1 if any(same_vertex(a, b, p) for b in v2)]
    if len(shared) == 1:
        return ("cross", 0)
    if shared:
        return ("overlap", len(shared) - 1)
    return ("disjoint", min(vertex_distance(a, b, p) for a in v1 for b in v2))
