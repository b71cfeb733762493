import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mumford.errors import CoincidentPoints, ExtensionRequired, FixesInfinity, InvalidInput
from mumford.moebius import (
    HYPERBOLIC,
    NON_HYPERBOLIC,
    MoebiusMap,
    ProjectivePoint,
    UltrametricDisk,
    apply_map,
    classify_map,
    disk_relation,
    disks_disjoint,
    fixed_points,
    isometric_circle,
    normalize_triple,
)
from mumford.padic import make_field, val


def pt(F, x):
    return ProjectivePoint.of(F, x)


def base(F, q, lam):
    z = F.zeta(q)
    lam = F.element(lam)
    s = MoebiusMap.diagonal(z)
    phi = MoebiusMap(lam, 1, 1, F.one())
    return z, lam, s, phi, phi @ s @ phi.exact_inverse()


def test_classify_examples():
    for p in (2, 3, 5):
        F = make_field(p, 1)
        assert classify_map(MoebiusMap.diagonal(F.element(p))) == HYPERBOLIC
        assert classify_map(MoebiusMap.identity(F)) == NON_HYPERBOLIC


def test_classify_q2_example():
    # gamma_11 for q = 2 is hyperbolic iff |lambda - 1| < |2 lambda + 2|
    F = make_field(2, 2)
    for lam in (3, 5, 9, 17, 33, 7, Fraction(1, 3)):
        z, lamel, s, phi, t = base(F, 2, lam)
        g = s @ t @ s.exact_inverse() ** 2
        expect = val(lamel - 1) > val(2 * lamel + 2)
        assert (classify_map(g) == HYPERBOLIC) == expect


def test_classify_scale_invariant():
    F = make_field(3, 3)
    g = MoebiusMap(F.element(28), 1, 1, F.one())
    for c in (1, 3, Fraction(1, 9), 7, F.zeta(3) - 1):
        h = g.scaled(F.element(c) if not hasattr(c, "field") else c)
        assert classify_map(h) == classify_map(g)
        assert isometric_circle(h) == isometric_circle(g)


def test_fixed_points_examples():
    F = make_field(3, 3)
    z, lam, s, phi, t = base(F, 3, 28)
    a, b = fixed_points(s)
    assert a == pt(F, 0) and b.is_infinity()
    a, b = fixed_points(t)
    assert {a.affine() == lam, b.affine() == lam} == {True, False}
    assert {a.affine() == F.one(), b.affine() == F.one()} == {True, False}
    a, b = fixed_points(MoebiusMap(1, 1, 0, F.one()))
    assert a.is_infinity() and b.is_infinity()
    with pytest.raises(InvalidInput):
        fixed_points(MoebiusMap.identity(F))


def test_fixed_points_need_square_root():
    F = make_field(5, 1)
    # z -> 2/z has fixed points +-sqrt(2), not in Q_5
    with pytest.raises(ExtensionRequired):
        fixed_points(MoebiusMap(0, 2, 1, F.zero()))


def test_isometric_circle_examples():
    F = make_field(3, 1)
    d = isometric_circle(MoebiusMap(0, -1, 1, F.zero()))
    assert d.center.is_zero() and d.radius_val == 0
    with pytest.raises(FixesInfinity):
        isometric_circle(MoebiusMap.diagonal(F.element(3)))
    # prime case: gamma_if circles from the closed form
    q, p = 3, 3
    G = make_field(p, q)
    for f in (1, 2):
        for i in (1, 2):
            z, lam, s, phi, t = base(G, q, 1 + 27)
            g = s**i @ t @ s.exact_inverse() ** (f + i)
            disk = isometric_circle(g)
            center = (z - lam) / (z - 1) * z ** (i + f)
            assert (disk.center - center).is_zero()
            assert disk.radius_val == val(lam - 1) - val(z - 1)
            dinv = isometric_circle(g.inverse())
            assert dinv.center == g(ProjectivePoint.infinity(G)).affine()
            assert dinv.radius_val == disk.radius_val


def test_disks_disjoint_examples():
    F = make_field(3, 1)
    D = lambda c, r: UltrametricDisk(F.element(c), Fraction(r))
    assert disks_disjoint(D(0, 0), D(1, 0))
    assert disks_disjoint(D(0, 1), D(3, 1))
    assert not disks_disjoint(D(0, 1), D(9, 1))
    assert disk_relation(D(0, 0), D(9, 2)) == "second_inside"


@settings(max_examples=80, deadline=None)
@given(
    st.integers(-30, 30), st.integers(0, 4), st.integers(-2, 3),
    st.integers(-30, 30), st.integers(0, 4), st.integers(-2, 3),
)
def test_ball_dichotomy(c1, k1, r1, c2, k2, r2):
    F = make_field(2, 1)
    d1 = UltrametricDisk(F.element(Fraction(c1, 2**k1) if c1 else 0), Fraction(r1))
    d2 = UltrametricDisk(F.element(Fraction(c2, 2**k2) if c2 else 0), Fraction(r2))
    rel = disk_relation(d1, d2)
    # check against membership of sample points
    if rel == "disjoint":
        assert not d2.contains(d1.center) and not d1.contains(d2.center)
    elif rel == "first_inside":
        assert d2.contains(d1.center)
    elif rel == "second_inside":
        assert d1.contains(d2.center)
    else:
        assert d1.contains(d2.center) and d2.contains(d1.center)


def test_apply_examples():
    F = make_field(3, 1)
    lam = F.element(28)
    phi = MoebiusMap(lam, 1, 1, F.one())
    assert apply_map(phi, pt(F, 0)) == pt(F, 1)
    assert apply_map(phi, pt(F, "inf")) == ProjectivePoint(lam, F.one())
    x = pt(F, Fraction(5, 9))
    assert apply_map(MoebiusMap.identity(F), x) == x


def _rand_map(rng, F):
    while True:
        a, b, c, d = (rng.randint(-20, 20) for _ in range(4))
        if a * d != b * c:
            return MoebiusMap(F.element(a), b, c, F.element(d))


def test_composition_law_and_fixed_points_random():
    rng = random.Random(7)
    F = make_field(5, 1)
    for _ in range(40):
        g, h = _rand_map(rng, F), _rand_map(rng, F)
        x = pt(F, Fraction(rng.randint(-99, 99), rng.randint(1, 30)))
        assert apply_map(g @ h, x) == apply_map(g, apply_map(h, x))
        try:
            fps = fixed_points(g)
        except ExtensionRequired:
            continue
        for fp in fps:
            assert apply_map(g, fp) == fp


def test_inverse_maps_circle_complement():
    # points outside I_g are sent inside I_{g^-1} and vice versa for a unit-determinant map
    F = make_field(3, 1)
    g = MoebiusMap(F.element(1), F.element(2), F.element(3), F.element(7))
    Ig, Iginv = isometric_circle(g), isometric_circle(g.inverse())
    rng = random.Random(3)
    for _ in range(30):
        x = F.element(Fraction(rng.randint(-200, 200), 3 ** rng.randint(0, 3)))
        if (x - Ig.center).is_zero():
            continue
        y = apply_map(g, ProjectivePoint(x, F.one()))
        if y.is_infinity():
            continue
        assert Ig.contains(x) != Iginv.contains(y.affine()) or not Ig.contains(x)


def test_normalize_triple():
    F = make_field(3, 1)
    lam = pt(F, 28)
    for trip in [(pt(F, 0), pt(F, "inf"), pt(F, 1)), (pt(F, 1), lam, pt(F, 0)), (pt(F, "inf"), pt(F, 0), pt(F, 1))]:
        g = normalize_triple(*trip)
        assert g(trip[0]) == pt(F, 0)
        assert g(trip[1]).is_infinity()
        assert g(trip[2]) == pt(F, 1)
    g = normalize_triple(pt(F, 0), pt(F, "inf"), pt(F, 1))
    assert g.projectively_equal(MoebiusMap.identity(F))
    g = normalize_triple(pt(F, "inf"), pt(F, 0), pt(F, 1))
    assert g.projectively_equal(MoebiusMap(0, 1, 1, F.zero()))
    with pytest.raises(CoincidentPoints):
        normalize_triple(pt(F, 1), pt(F, 1), pt(F, 0))


def test_matrix_json_roundtrip():
    F = make_field(2, 12)
    g = MoebiusMap(F.zeta(12), 3, F.zeta(4), F.element(Fraction(1, 2)))
    assert MoebiusMap.from_json(F, g.to_json()).projectively_equal(g)
    d = isometric_circle(g).to_json()
    assert set(d) == {"center", "radius_val"}
