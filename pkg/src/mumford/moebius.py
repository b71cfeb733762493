"""Projective points, Moebius maps and ultrametric disks over K."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    CoincidentPoints,
    FieldMismatch,
    FixesInfinity,
    InsufficientPrecision,
    InvalidInput,
)
from .padic import INF, FieldDescriptor, PadicElement, certified_val, from_text, sqrt, to_text

HYPERBOLIC = "hyperbolic"
NON_HYPERBOLIC = "non_hyperbolic"


class ProjectivePoint:
    """A point (x0 : x1) of P^1(K); the affine value is x0 / x1."""

    __slots__ = ("x0", "x1")

    def __init__(self, x0: PadicElement, x1: PadicElement):
        if x0.field is not x1.field and x0.field != x1.field:
            raise FieldMismatch("coordinates from different fields")
        if x0.unit is None and x1.unit is None:
            raise InsufficientPrecision("both homogeneous coordinates are zero to precision")
        # scale so that the coordinate of smaller valuation becomes 1 (k is the valuation in pi-units)
        if x1.unit is None or (x0.unit is not None and x0.k < x1.k):
            self.x0, self.x1 = x0.field.one(), x1 / x0
        else:
            self.x0, self.x1 = x0 / x1, x1.field.one()

    @property
    def field(self) -> FieldDescriptor:
        return self.x0.field

    @classmethod
    def of(cls, F: FieldDescriptor, value) -> "ProjectivePoint":
        """Point from an affine value, ``"inf"``, or an existing point."""
        if isinstance(value, ProjectivePoint):
            return value
        if isinstance(value, str) and value.strip().lower() in ("inf", "infinity", "oo"):
            return cls(F.one(), F.zero())
        return cls(F.element(value), F.one())

    @classmethod
    def infinity(cls, F: FieldDescriptor) -> "ProjectivePoint":
        return cls(F.one(), F.zero())

    def is_infinity(self) -> bool:
        return self.x1.is_zero()

    def affine(self) -> PadicElement:
        if self.is_infinity():
            raise InvalidInput("the point at infinity has no affine coordinate")
        return self.x0 / self.x1

    def wedge(self, other: "ProjectivePoint") -> PadicElement:
        """x0*y1 - x1*y0; zero exactly when the points coincide."""
        return self.x0 * other.x1 - self.x1 * other.x0

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        return self.wedge(other).is_zero()

    __hash__ = None

    def to_text(self) -> str:
        return "inf" if self.is_infinity() else to_text(self.affine())

    @classmethod
    def from_text(cls, F: FieldDescriptor, s: str) -> "ProjectivePoint":
        if s.strip().lower() in ("inf", "infinity", "oo"):
            return cls.infinity(F)
        return cls(from_text(F, s), F.one())

    def __repr__(self):
        return f"ProjectivePoint({self.to_text()})"


class MoebiusMap:
    """z -> (a z + b) / (c z + d), up to scalars."""

    __slots__ = ("a", "b", "c", "d", "det")

    def __init__(self, a, b, c, d):
        F = next(x.field for x in (a, b, c, d) if isinstance(x, PadicElement))
        a, b, c, d = (F.element(x) for x in (a, b, c, d))
        self.a, self.b, self.c, self.d = a, b, c, d
        self.det = a * d - b * c
        if self.det.is_zero():
            raise InsufficientPrecision("determinant is zero to precision")

    @property
    def field(self) -> FieldDescriptor:
        return self.a.field

    @classmethod
    def identity(cls, F: FieldDescriptor) -> "MoebiusMap":
        return cls(F.one(), F.zero(), F.zero(), F.one())

    @classmethod
    def diagonal(cls, x: PadicElement, y=1) -> "MoebiusMap":
        F = x.field
        return cls(x, F.zero(), F.zero(), F.element(y))

    def entries(self) -> tuple[PadicElement, PadicElement, PadicElement, PadicElement]:
        return self.a, self.b, self.c, self.d

    def trace(self) -> PadicElement:
        return self.a + self.d

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        a, b, c, d = self.entries()
        e, f, g, h = other.entries()
        return MoebiusMap(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def scaled(self, x) -> "MoebiusMap":
        return MoebiusMap(self.a * x, self.b * x, self.c * x, self.d * x)

    def inverse(self) -> "MoebiusMap":
        """Adjugate matrix (the inverse up to the scalar det)."""
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def exact_inverse(self) -> "MoebiusMap":
        return self.inverse().scaled(self.det.inverse())

    def __pow__(self, n: int) -> "MoebiusMap":
        if n < 0:
            return self.exact_inverse() ** (-n)
        out = MoebiusMap.identity(self.field)
        base = self
        while n:
            if n & 1:
                out = out @ base
            base = base @ base
            n >>= 1
        return out

    def is_scalar(self) -> bool:
        return self.b.is_zero() and self.c.is_zero() and (self.a - self.d).is_zero()

    def projectively_equal(self, other: "MoebiusMap") -> bool:
        x, y = self.entries(), other.entries()
        return all((x[i] * y[j] - x[j] * y[i]).is_zero() for i in range(4) for j in range(i + 1, 4))

    def __eq__(self, other):
        if not isinstance(other, MoebiusMap):
            return NotImplemented
        return self.projectively_equal(other)

    __hash__ = None

    def __call__(self, x: ProjectivePoint) -> ProjectivePoint:
        return apply_map(self, x)

    def to_json(self) -> list[list[str]]:
        return [[to_text(self.a), to_text(self.b)], [to_text(self.c), to_text(self.d)]]

    @classmethod
    def from_json(cls, F: FieldDescriptor, rows) -> "MoebiusMap":
        (a, b), (c, d) = rows
        return cls(*(from_text(F, s) for s in (a, b, c, d)))

    def __repr__(self):
        return f"MoebiusMap({self.to_json()})"


@dataclass(frozen=True)
class UltrametricDisk:
    """Open disk {z : |z - center| < p^(-radius_val)}."""

    center: PadicElement
    radius_val: Fraction
    open: bool = True

    def contains(self, z: PadicElement) -> bool:
        diff = z - self.center
        if diff.is_zero():
            if diff.abs_precision > self.radius_val:
                return True
            raise InsufficientPrecision("membership undecidable at working precision")
        return diff.val() > self.radius_val

    def to_json(self) -> dict:
        r = self.radius_val
        return {"center": to_text(self.center), "radius_val": f"{r.numerator}/{r.denominator}"}


def classify_map(g: MoebiusMap) -> str:
    """Hyperbolic iff |tr|^2 / |det| > 1, i.e. 2 v(tr) < v(det)."""
    vdet = certified_val(g.det)
    tr = g.trace()
    if tr.is_zero():
        if 2 * tr.abs_precision >= vdet:
            return NON_HYPERBOLIC
        raise InsufficientPrecision("trace too small to classify at working precision")
    return HYPERBOLIC if 2 * tr.val() < vdet else NON_HYPERBOLIC


def apply_map(g: MoebiusMap, x: ProjectivePoint) -> ProjectivePoint:
    return ProjectivePoint(g.a * x.x0 + g.b * x.x1, g.c * x.x0 + g.d * x.x1)


def fixed_points(g: MoebiusMap) -> tuple[ProjectivePoint, ProjectivePoint]:
    """Both fixed points, ordered by decreasing valuation (infinity last).

    A parabolic map fixing infinity returns infinity twice.
    """
    F = g.field
    if g.is_scalar():
        raise InvalidInput("the identity fixes every point")
    a, b, c, d = g.entries()
    inf = ProjectivePoint.infinity(F)
    if c.is_zero():
        if (a - d).is_zero():
            return inf, inf
        return ProjectivePoint(b, d - a), inf
    disc = (a - d) * (a - d) + 4 * b * c
    if disc.is_zero():
        raise InsufficientPrecision("discriminant is zero to precision (double fixed point?)")
    root = sqrt(disc)
    pts = [ProjectivePoint(a - d + root, 2 * c), ProjectivePoint(a - d - root, 2 * c)]
    pts.sort(key=lambda pt: -_point_val(pt))
    return pts[0], pts[1]


def _point_val(pt: ProjectivePoint):
    if pt.is_infinity():
        return -INF
    return pt.affine().val()


def isometric_circle(g: MoebiusMap) -> UltrametricDisk:
    """Center -d/c and radius |det|^(1/2) / |c|; invariant under scaling."""
    if g.c.is_zero():
        raise FixesInfinity("map fixes infinity; no isometric circle")
    center = -g.d / g.c
    radius_val = certified_val(g.det) / 2 - certified_val(g.c)
    return UltrametricDisk(center, radius_val)


def disks_disjoint(d1: UltrametricDisk, d2: UltrametricDisk) -> bool:
    """Open disks are disjoint iff |c1 - c2| >= max(r1, r2)."""
    bound = min(d1.radius_val, d2.radius_val)
    diff = d1.center - d2.center
    if diff.is_zero():
        if diff.abs_precision > bound:
            return False
        raise InsufficientPrecision("center separation undecidable at working precision")
    return diff.val() <= bound


def disk_relation(d1: UltrametricDisk, d2: UltrametricDisk) -> str:
    """One of 'disjoint', 'equal', 'first_inside', 'second_inside'."""
    if disks_disjoint(d1, d2):
        return "disjoint"
    if d1.radius_val == d2.radius_val:
        return "equal"
    return "first_inside" if d1.radius_val > d2.radius_val else "second_inside"


def normalize_triple(p1: ProjectivePoint, p2: ProjectivePoint, p3: ProjectivePoint) -> MoebiusMap:
    """The map sending p1 -> 0, p2 -> inf, p3 -> 1."""
    for x, y in ((p1, p2), (p1, p3), (p2, p3)):
        w = x.wedge(y)
        if w.is_zero():
            raise CoincidentPoints("normalize_triple needs three distinct points")
    # z -> L_{p1}(z) L_{p2}(p3) : L_{p2}(z) L_{p1}(p3), with L_P(z) = P1 z0 - P0 z1
    k1 = p2.x1 * p3.x0 - p2.x0 * p3.x1
    k2 = p1.x1 * p3.x0 - p1.x0 * p3.x1
    return MoebiusMap(p1.x1 * k1, -p1.x0 * k1, p2.x1 * k2, -p2.x0 * k2)
