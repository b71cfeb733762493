"""Geometry of geodesics in the Bruhat-Tits tree, read off from cross ratios.

Distances are rational numbers in the normalisation v(p) = 1, so they do not
depend on which finite extension happens to be the working field.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BoundViolated, DegenerateTuple, InvalidInput, NotFiniteOrder, SharedEnd
from .moebius import HYPERBOLIC, MoebiusMap, ProjectivePoint, classify_map, fixed_points
from .padic import PadicElement, certified_val, is_prime


def _frac_text(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def cross_ratio(a: ProjectivePoint, b: ProjectivePoint, c: ProjectivePoint, d: ProjectivePoint) -> PadicElement:
    """R(a,b;c,d) = (a1c0-a0c1)(b1d0-b0d1) / ((a0b1-a1b0)(c0d1-c1d0))."""
    den1 = a.x0 * b.x1 - a.x1 * b.x0
    den2 = c.x0 * d.x1 - c.x1 * d.x0
    if den1.is_zero() or den2.is_zero():
        raise DegenerateTuple("cross ratio needs a != b and c != d")
    num = (a.x1 * c.x0 - a.x0 * c.x1) * (b.x1 * d.x0 - b.x0 * d.x1)
    return num / (den1 * den2)


@dataclass(frozen=True, eq=False)
class GeodesicLine:
    end_a: ProjectivePoint
    end_b: ProjectivePoint

    def __post_init__(self):
        if self.end_a == self.end_b:
            raise DegenerateTuple("a geodesic needs two distinct ends")

    def ends(self) -> tuple[ProjectivePoint, ProjectivePoint]:
        return self.end_a, self.end_b

    def image(self, g: MoebiusMap) -> "GeodesicLine":
        return GeodesicLine(g(self.end_a), g(self.end_b))

    def same_as(self, other: "GeodesicLine") -> bool:
        a, b = self.ends()
        c, d = other.ends()
        return (a == c and b == d) or (a == d and b == c)


@dataclass(frozen=True)
class CrossAtVertex:
    kind = "cross_at_vertex"

    def to_json(self) -> dict:
        return {"kind": self.kind}


@dataclass(frozen=True)
class Disjoint:
    distance: Fraction
    kind = "disjoint"

    def __post_init__(self):
        if self.distance <= 0:
            raise ValueError("disjoint lines have positive distance")

    def to_json(self) -> dict:
        return {"kind": self.kind, "distance": _frac_text(self.distance)}


@dataclass(frozen=True)
class OverlapSegment:
    length: Fraction
    kind = "overlap"

    def __post_init__(self):
        if self.length <= 0:
            raise ValueError("an overlap has positive length")

    def to_json(self) -> dict:
        return {"kind": self.kind, "length": _frac_text(self.length)}


LineArrangement = CrossAtVertex | Disjoint | OverlapSegment


def arrange(l1: GeodesicLine, l2: GeodesicLine) -> LineArrangement:
    """Relative position of two lines with four distinct ends.

    With R = R(a,b;c,d) and R' = R(b,a;c,d) one has R + R' = 1, so exactly
    one of the following holds: v(R) = v(R') = 0 (the lines meet in a single
    vertex), v(R) = v(R') < 0 (disjoint at distance -v(R)), or one valuation
    is 0 and the other positive (they share a segment of that length).
    """
    a, b = l1.ends()
    c, d = l2.ends()
    # v(R) and v(R') are sums of wedge valuations, so no division is needed
    ac, bd, ad, bc = a.wedge(c), b.wedge(d), a.wedge(d), b.wedge(c)
    if ac.is_zero() or bd.is_zero() or ad.is_zero() or bc.is_zero():
        raise SharedEnd("the two lines share an end")
    ab, cd = a.wedge(b), c.wedge(d)
    if ab.is_zero() or cd.is_zero():
        raise DegenerateTuple("a line has coincident ends")
    # valuations in pi-units, converted once at the end
    e = a.field.e_ram
    base = ab.k + cd.k
    v1 = Fraction(ac.k + bd.k - base, e)
    v2 = Fraction(bc.k + ad.k - base, e)
    if abs(v1) == abs(v2):
        if v1 == 0:
            return CrossAtVertex()
        return Disjoint(abs(v1))
    return OverlapSegment(max(abs(v1), abs(v2)))


def mirror(g: MoebiusMap, order: int | None = None, search_bound: int = 64) -> GeodesicLine:
    """Line joining the two fixed points of a finite-order map."""
    if g.is_scalar():
        raise InvalidInput("the identity has no mirror")
    if classify_map(g) == HYPERBOLIC:
        raise NotFiniteOrder("hyperbolic maps have infinite order")
    if order is not None:
        if order < 2 or not (g**order).is_scalar():
            raise NotFiniteOrder(f"map does not have order dividing {order}")
    else:
        power = g
        for _ in range(2, search_bound + 1):
            power = power @ g
            if power.is_scalar():
                break
        else:
            raise NotFiniteOrder(f"no power up to {search_bound} is the identity")
    x, y = fixed_points(g)
    return GeodesicLine(x, y)


def epsilon(p: int, k: int) -> int:
    return 1 if k % p == 0 else 0


def _p_part(p: int, k: int) -> int:
    out = 1
    while k % p == 0:
        k //= p
        out *= p
    return out


@dataclass(frozen=True)
class QuotientTreeDescriptor:
    """The segment [x, y] of the quotient tree of C_m * C_n.

    x and y are the images of the two mirrors; v and w are the points where
    the stabiliser drops to C_p (they coincide with x, resp. y, when p does
    not divide the corresponding order).
    """

    p: int
    m: int
    n: int
    dist_x_v: Fraction
    dist_v_w: Fraction
    dist_w_y: Fraction
    end_labels: dict = field(default_factory=dict)
    vertices: tuple = ()
    edges: tuple = ()

    @property
    def total(self) -> Fraction:
        return self.dist_x_v + self.dist_v_w + self.dist_w_y

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "m": self.m,
            "n": self.n,
            "dist_x_v": _frac_text(self.dist_x_v),
            "dist_v_w": _frac_text(self.dist_v_w),
            "dist_w_y": _frac_text(self.dist_w_y),
            "end_labels": self.end_labels,
            "vertices": [dict(v) for v in self.vertices],
            "edges": [dict(e) for e in self.edges],
        }

    def to_json_text(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def to_dot(self) -> str:
        lines = [f'graph quotient_tree_C{self.m}_C{self.n} {{']
        for v in self.vertices:
            lines.append(f'  {v["name"]} [label="{v["name"]}: {v["stabilizer"]}"];')
        for e in self.edges:
            label = f'{e["length"]} ({e["stabilizer"]})'
            style = ' style="dashed"' if e.get("subdivision") == "unresolved" else ""
            lines.append(f'  {e["from"]} -- {e["to"]} [label="{label}"{style}];')
        for name, ends in self.end_labels.items():
            for i, order in enumerate(ends):
                lines.append(f'  end_{name}{i} [shape=point label=""];')
                lines.append(f'  {name} -- end_{name}{i} [label="end, C_{order}" style="dotted"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def quotient_tree(p: int, m: int, n: int, lambda_val) -> QuotientTreeDescriptor:
    """Quotient of the *-tree of C_m * C_n when the branch data has v(lambda-1) = lambda_val."""
    if m < 2 or n < 2:
        raise InvalidInput("both cyclic factors need order at least 2")
    if not is_prime(p):
        raise InvalidInput("p must be prime")
    lambda_val = Fraction(lambda_val)
    xv = Fraction(epsilon(p, m), p - 1)
    wy = Fraction(epsilon(p, n), p - 1)
    if lambda_val <= xv + wy:
        raise BoundViolated(
            f"v(lambda-1) = {_frac_text(lambda_val)} does not exceed {_frac_text(xv + wy)}"
        )
    vw = lambda_val - xv - wy
    verts = [{"name": "x", "stabilizer": f"C_{m}"}]
    edges = []
    left = "x"
    if xv:
        verts.append({"name": "v", "stabilizer": f"C_{p}"})
        edges.append({"from": "x", "to": "v", "length": _frac_text(xv),
                      "stabilizer": f"C_{_p_part(p, m)}..C_{p}", "subdivision": "unresolved"})
        left = "v"
    right_verts = []
    right_edges = []
    right = "y"
    if wy:
        right_verts.append({"name": "w", "stabilizer": f"C_{p}"})
        right_edges.append({"from": "w", "to": "y", "length": _frac_text(wy),
                            "stabilizer": f"C_{p}..C_{_p_part(p, n)}", "subdivision": "unresolved"})
        right = "w"
    edges.append({"from": left, "to": right, "length": _frac_text(vw), "stabilizer": "1"})
    verts += right_verts + [{"name": "y", "stabilizer": f"C_{n}"}]
    edges += right_edges
    return QuotientTreeDescriptor(
        p, m, n, xv, vw, wy,
        end_labels={"x": [m, m], "y": [n, n]},
        vertices=tuple(verts),
        edges=tuple(edges),
    )
