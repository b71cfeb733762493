import random
from fractions import Fraction

import pytest

from mumford.classifier import (
    BOUND_VIOLATED,
    BOUNDARY_EQUALITY,
    NOT_HM_TYPE,
    PAIRS_NOT_SEPARATED,
    KummerEquation,
    alpha_bound,
    alpha_bound_text,
    classify,
    classify_four_point,
    hm_decompose,
    tate_j_check,
)
from mumford.errors import CoincidentPoints, InvalidInput, OddTermCount
from mumford.moebius import MoebiusMap
from mumford.padic import make_field


def legendre(p, lam, m=2, exps=None, field_m=None):
    F = make_field(p, field_m or 1)
    exps = exps or (1, m - 1, 1, m - 1)
    return KummerEquation.build(F, m, [(0, exps[0]), ("inf", exps[1]), (1, exps[2]), (lam, exps[3])])


def test_alpha_bound_examples():
    assert alpha_bound(2, 2, 2) == 2
    assert alpha_bound(3, 3, 3) == 1
    assert alpha_bound(5, 5, 5) == Fraction(1, 2)
    assert alpha_bound(5, 2, 3) == 0
    assert alpha_bound(3, 6, 4) == Fraction(1, 2)
    assert alpha_bound_text(2, 2, 2) == "|2|^2"
    assert alpha_bound_text(3, 3, 2) == "|1-zeta_3|"
    assert alpha_bound_text(7, 2, 3) == "1"
    with pytest.raises(InvalidInput):
        alpha_bound(4, 2, 2)


def test_alpha_bound_symmetric():
    for p in (2, 3, 5, 7):
        for m in range(1, 13):
            for n in range(1, 13):
                assert alpha_bound(p, m, n) == alpha_bound(p, n, m)
                assert 0 <= alpha_bound(p, m, n) <= Fraction(2, p - 1)


def test_hm_decompose_examples():
    eq = legendre(3, 4, m=2)
    assert len(hm_decompose(eq)) == 3
    F = make_field(3, 1)
    eq = KummerEquation.build(F, 3, [(0, 1), ("inf", 2), (1, 1), (4, 2)])
    decs = hm_decompose(eq)
    assert len(decs) == 2
    assert all(d.ram_indices == [3, 3] for d in decs)
    eq = KummerEquation.build(F, 3, [(0, 1), (1, 1), (4, 1)])
    with pytest.raises(OddTermCount):
        hm_decompose(eq)
    assert classify(eq).failure_reason == NOT_HM_TYPE
    eq = KummerEquation.build(F, 3, [(0, 1), (1, 2), (4, 2), ("inf", 1)])
    assert len(hm_decompose(eq)) == 2
    eq = KummerEquation.build(F, 4, [(0, 1), (1, 1), (4, 1), ("inf", 1)])
    assert hm_decompose(eq) == []
    assert classify(eq).failure_reason == NOT_HM_TYPE


def test_equation_validation():
    F = make_field(3, 1)
    with pytest.raises(InvalidInput):
        KummerEquation.build(F, 3, [(0, 1), (1, 1)])
    with pytest.raises(CoincidentPoints):
        KummerEquation.build(F, 2, [(0, 1), (0, 1)])
    with pytest.raises(InvalidInput):
        KummerEquation.build(F, 2, [(0, 2), (1, 0)])


def test_tate_grid():
    for k in range(1, 7):
        lam = 1 + 2**k
        v = classify_four_point(legendre(2, lam))
        assert v.is_mumford == (k >= 3)
        if k == 2:
            assert v.failure_reason == BOUNDARY_EQUALITY
        if k == 1:
            assert v.failure_reason == BOUND_VIOLATED
        check = tate_j_check(lam)
        assert check.consistent and check.lambda_close == (k >= 3)


def test_unit_difference_is_rejected():
    # |lambda - 1| = 1 never clears the threshold
    for p in (3, 5, 7):
        v = classify_four_point(legendre(p, 2, m=p, field_m=p))
        assert not v.is_mumford
    v = classify_four_point(legendre(5, 1 + 5, m=5, field_m=5))
    assert v.is_mumford and v.distances[0]["distance"] == "1"


def test_pairs_not_separated():
    v = classify_four_point(legendre(3, 2, m=3, field_m=3))
    assert not v.is_mumford and v.failure_reason == PAIRS_NOT_SEPARATED


def test_strict_inequality_boundary():
    for p, m in ((2, 2), (3, 3), (2, 4), (3, 6)):
        a = alpha_bound(p, m, m)
        if a.denominator != 1:
            continue
        eq = legendre(p, 1 + p ** int(a), m=m, field_m=m)
        v = classify_four_point(eq)
        assert not v.is_mumford and v.failure_reason == BOUNDARY_EQUALITY
        v = classify_four_point(legendre(p, 1 + p ** (int(a) + 1), m=m, field_m=m))
        assert v.is_mumford


def test_moebius_invariance():
    rng = random.Random(9)
    for p, lam in ((2, 9), (2, 5), (3, 28), (3, 4)):
        eq = legendre(p, lam)
        ref = classify_four_point(eq)
        F = eq.field
        for _ in range(15):
            a, b, c, d = (rng.randint(-40, 40) for _ in range(4))
            if a * d == b * c:
                continue
            g = MoebiusMap(F.element(a), b, c, F.element(d))
            moved = eq.transform(g)
            assert classify_four_point(moved).is_mumford == ref.is_mumford
            assert classify(moved).is_mumford == ref.is_mumford


def test_many_point_examples():
    F = make_field(2, 1)
    ok = KummerEquation.build(F, 2, [(0, 1), ("inf", 1), (1, 1), (9, 1), (Fraction(1, 8), 1), (Fraction(9, 64), 1)])
    v = classify(ok)
    assert v.is_mumford
    assert sorted(int(d["distance"]) for d in v.distances) == [3, 3, 9]
    bad = KummerEquation.build(F, 2, [(0, 1), ("inf", 1), (1, 1), (5, 1), (Fraction(1, 8), 1), (Fraction(9, 64), 1)])
    assert not classify(bad).is_mumford


def test_json_roundtrip():
    eq = legendre(3, 28, m=3, field_m=3)
    back = KummerEquation.from_json(eq.to_json())
    assert classify(back).to_json() == classify(eq).to_json()
    with pytest.raises(InvalidInput):
        KummerEquation.from_json({"p": 3, "degree": 2})
