"""Deciding whether a cyclic cover of the projective line is a Mumford cover."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CoincidentPoints, InvalidInput, OddTermCount, SharedEnd
from .moebius import MoebiusMap, ProjectivePoint, normalize_triple
from .padic import FieldDescriptor, PadicElement, certified_val, is_prime, make_field
from .tree import Disjoint, GeodesicLine, arrange, epsilon

NOT_HM_TYPE = "NotHMType"
PAIRS_NOT_SEPARATED = "PairsNotSeparated"
BOUND_VIOLATED = "BoundViolated"
BOUNDARY_EQUALITY = "BoundaryEquality"

# when no decomposition passes, report the failure closest to success
_SEVERITY = {BOUNDARY_EQUALITY: 0, BOUND_VIOLATED: 1, PAIRS_NOT_SEPARATED: 2, NOT_HM_TYPE: 3}


def _frac_text(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def alpha_bound(p: int, m: int, n: int) -> Fraction:
    """Valuation of the sharp bound: (eps_m + eps_n) * v(zeta_p - 1)."""
    if not is_prime(p):
        raise InvalidInput(f"{p} is not prime")
    if m < 1 or n < 1:
        raise InvalidInput("orders must be positive")
    return Fraction(epsilon(p, m) + epsilon(p, n), p - 1)


def alpha_bound_text(p: int, m: int, n: int) -> str:
    k = epsilon(p, m) + epsilon(p, n)
    if k == 0:
        return "1"
    base = "|2|" if p == 2 else f"|1-zeta_{p}|"
    return base if k == 1 else f"{base}^{k}"


@dataclass(eq=False)
class KummerEquation:
    """y^m = prod (x - point)^exponent, with a branched infinity listed as a term."""

    field: FieldDescriptor
    degree: int
    terms: list[tuple[ProjectivePoint, int]]

    def __post_init__(self):
        m = self.degree
        if m < 2:
            raise InvalidInput("degree must be at least 2")
        for pt, a in self.terms:
            if not 1 <= a < m:
                raise InvalidInput(f"exponent {a} outside 1..{m - 1}")
            if pt.field != self.field:
                raise InvalidInput("branch point from a different field")
        for i in range(len(self.terms)):
            for j in range(i + 1, len(self.terms)):
                if self.terms[i][0] == self.terms[j][0]:
                    raise CoincidentPoints(f"branch points {i} and {j} coincide")
        if sum(a for _, a in self.terms) % m:
            raise InvalidInput("exponent sum must vanish mod the degree (list infinity explicitly)")

    @classmethod
    def build(cls, F: FieldDescriptor, degree: int, terms) -> "KummerEquation":
        return cls(F, degree, [(ProjectivePoint.of(F, pt), int(a)) for pt, a in terms])

    def transform(self, g: MoebiusMap) -> "KummerEquation":
        return KummerEquation(self.field, self.degree, [(g(pt), a) for pt, a in self.terms])

    def to_json(self) -> dict:
        F = self.field
        return {
            "p": F.p,
            "field_m": F.m,
            "precision": F.precision,
            "degree": self.degree,
            "terms": [{"point": pt.to_text(), "exp": a} for pt, a in self.terms],
        }

    @classmethod
    def from_json(cls, data: dict, p: int | None = None, precision: int | None = None) -> "KummerEquation":
        try:
            p = int(data.get("p", p))
            precision = int(data.get("precision", precision or 64))
            F = make_field(p, int(data.get("field_m", 1)), precision)
            terms = [(ProjectivePoint.from_text(F, str(t["point"])), int(t["exp"])) for t in data["terms"]]
            degree = int(data["degree"])
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"malformed equation payload: {exc}") from exc
        return cls(F, degree, terms)


@dataclass
class HMDecomposition:
    """Pairing of the branch points into clusters with complementary exponents."""

    index_pairs: list[tuple[int, int]]
    pairs: list[tuple[tuple[ProjectivePoint, int], tuple[ProjectivePoint, int]]]
    ram_indices: list[int]

    def to_json(self) -> dict:
        return {
            "index_pairs": [list(x) for x in self.index_pairs],
            "pairs": [[[a.to_text(), ea], [b.to_text(), eb]] for (a, ea), (b, eb) in self.pairs],
            "ram_indices": list(self.ram_indices),
        }


def hm_decompose(eq: KummerEquation) -> list[HMDecomposition]:
    """Every perfect matching whose paired exponents sum to the degree."""
    terms = eq.terms
    m = eq.degree
    if len(terms) % 2:
        raise OddTermCount(f"{len(terms)} branch points cannot be paired")
    out = []

    def rec(free: list[int], acc: list[tuple[int, int]]):
        if not free:
            out.append(list(acc))
            return
        i, rest = free[0], free[1:]
        for k, j in enumerate(rest):
            if (terms[i][1] + terms[j][1]) % m == 0:
                acc.append((i, j))
                rec(rest[:k] + rest[k + 1 :], acc)
                acc.pop()

    rec(list(range(len(terms))), [])
    return [
        HMDecomposition(
            idx,
            [(terms[i], terms[j]) for i, j in idx],
            [m // math.gcd(m, terms[i][1]) for i, _ in idx],
        )
        for idx in out
    ]


@dataclass
class MumfordVerdict:
    is_mumford: bool
    witness: HMDecomposition | None = None
    distances: list[dict] = field(default_factory=list)
    thresholds: list[dict] = field(default_factory=list)
    failure_reason: str | None = None

    def to_json(self) -> dict:
        out = {
            "is_mumford": self.is_mumford,
            "failure_reason": self.failure_reason,
            "thresholds": self.thresholds,
        }
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
            out["distances"] = self.distances
        return out


def _pair_thresholds(p: int, dec: HMDecomposition) -> list[dict]:
    r = len(dec.ram_indices)
    return [
        {"i": i, "j": j, "threshold_val": _frac_text(alpha_bound(p, dec.ram_indices[i], dec.ram_indices[j]))}
        for i in range(r)
        for j in range(i + 1, r)
    ]


def _compare(dist: Fraction, threshold: Fraction) -> str | None:
    if dist > threshold:
        return None
    return BOUNDARY_EQUALITY if dist == threshold else BOUND_VIOLATED


def _decompositions(eq: KummerEquation) -> list[HMDecomposition]:
    # an odd number of branch points simply has no pairing, which is the NotHMType verdict
    try:
        return hm_decompose(eq)
    except OddTermCount:
        return []


def _summarise(p, decs, results) -> MumfordVerdict:
    if not decs:
        return MumfordVerdict(False, failure_reason=NOT_HM_TYPE)
    for dec, (reason, dists) in zip(decs, results):
        if reason is None:
            return MumfordVerdict(True, dec, dists, _pair_thresholds(p, dec))
    best = min(range(len(decs)), key=lambda k: _SEVERITY[results[k][0]])
    return MumfordVerdict(False, None, [], _pair_thresholds(p, decs[best]), results[best][0])


def classify_four_point(eq: KummerEquation) -> MumfordVerdict:
    """Normalise each pairing to {0, inf} and {1, lambda} and test |lambda - 1| < alpha."""
    if len(eq.terms) != 4:
        raise InvalidInput("classify_four_point needs exactly four branch points")
    p = eq.field.p
    decs = _decompositions(eq)
    results = []
    for dec in decs:
        (a, _), (b, _) = dec.pairs[0]
        (c, _), (d, _) = dec.pairs[1]
        g = normalize_triple(a, b, c)
        lam_pt = g(d)
        if lam_pt.is_infinity():
            results.append((PAIRS_NOT_SEPARATED, []))
            continue
        lam = lam_pt.affine()
        if lam.is_zero() or certified_val(lam) != 0:
            results.append((PAIRS_NOT_SEPARATED, []))
            continue
        v = certified_val(lam - 1)
        if v <= 0:
            results.append((PAIRS_NOT_SEPARATED, []))
            continue
        threshold = alpha_bound(p, *dec.ram_indices)
        dists = [{"i": 0, "j": 1, "distance": _frac_text(v), "threshold_val": _frac_text(threshold)}]
        results.append((_compare(v, threshold), dists))
    return _summarise(p, decs, results)


def classify(eq: KummerEquation) -> MumfordVerdict:
    """Many-point criterion: cluster geodesics pairwise disjoint, every gap above its threshold."""
    p = eq.field.p
    decs = _decompositions(eq)
    results = []
    for dec in decs:
        lines = [GeodesicLine(a, b) for (a, _), (b, _) in dec.pairs]
        reason = None
        dists = []
        for i in range(len(lines)):
            for j in range(i + 1, len(lines)):
                try:
                    arr = arrange(lines[i], lines[j])
                except SharedEnd:
                    arr = None
                if not isinstance(arr, Disjoint):
                    reason = PAIRS_NOT_SEPARATED
                    break
                threshold = alpha_bound(p, dec.ram_indices[i], dec.ram_indices[j])
                dists.append({"i": i, "j": j, "distance": _frac_text(arr.distance),
                              "threshold_val": _frac_text(threshold)})
                failed = _compare(arr.distance, threshold)
                if failed is not None and (reason is None or _SEVERITY[failed] > _SEVERITY[reason]):
                    reason = failed
            if reason == PAIRS_NOT_SEPARATED:
                break
        results.append((reason, dists))
    return _summarise(p, decs, results)


@dataclass
class TateCheck:
    j: PadicElement
    lambda_close: bool
    j_large: bool

    @property
    def consistent(self) -> bool:
        return self.lambda_close == self.j_large


def j_invariant(lam: PadicElement) -> PadicElement:
    num = lam * lam - lam + 1
    den = lam * (lam - 1)
    return 256 * num * num * num / (den * den)


def tate_j_check(lam) -> TateCheck:
    """Compare |lambda - 1| < |2|^2 with |j| > |2|^4 for the Legendre curve over Q_2-extensions."""
    if not isinstance(lam, PadicElement):
        lam = make_field(2, 1).element(lam)
    if lam.field.p != 2:
        raise InvalidInput("the Tate check is stated for p = 2")
    if certified_val(lam) != 0:
        raise InvalidInput("lambda must be a unit")
    diff = lam - 1
    if diff.is_zero():
        raise InvalidInput("lambda must differ from 1")
    j = j_invariant(lam)
    return TateCheck(j, certified_val(diff) > 2, certified_val(j) < 4)
