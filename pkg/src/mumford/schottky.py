"""Explicit Schottky groups for cyclic covers branched at 0, inf, 1 and lambda.

The base representation sends s to diag(zeta_d, 1), a rotation about 0 and
infinity, and t to the conjugate of diag(zeta_e, 1) by phi = (lambda 1; 1 1),
a rotation about 1 and lambda.  Each case builds a free basis of the kernel
of a map C_d * C_e -> C_n as words, evaluates them as matrices, and records
the words so the group oracle can check them independently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import FixesInfinity, InsufficientPrecision, InvalidInput, InvalidRamification
from .groups import CyclicAssignment, FreeProductWord, generates_kernel, hom_image, word_to_matrix
from .moebius import HYPERBOLIC, MoebiusMap, classify_map, disks_disjoint, isometric_circle
from .padic import FieldDescriptor, PadicElement, certified_val, is_prime, make_field, prime_factors

NAMES = ("s", "t")


@dataclass(eq=False)
class CoverSpec:
    """Orders d (of s) and e (of t), the branch parameter and the twist exponents.

    ``f`` is used when d = e (t maps to f times the image of s), ``k`` and
    ``l`` otherwise (see the individual constructions).
    """

    p: int
    d: int
    e: int
    lam: PadicElement
    f: int = 1
    k: int = 1
    l: int = 1

    @classmethod
    def build(cls, p, d, e, lam, f=1, k=1, l=1, precision=64) -> "CoverSpec":
        if not is_prime(p):
            raise InvalidInput(f"{p} is not prime")
        if d < 2 or e < 2:
            raise InvalidInput("both orders must be at least 2")
        F = make_field(p, math.lcm(d, e), precision)
        lam = lam if isinstance(lam, PadicElement) else F.element(lam)
        if lam.field != F:
            raise InvalidInput("lambda must live in Q_p(zeta_lcm(d,e))")
        return cls(p, d, e, lam, f, k, l)

    @property
    def field(self) -> FieldDescriptor:
        return self.lam.field

    def validate(self):
        lam = self.lam
        if lam.is_zero() or certified_val(lam) != 0:
            raise InvalidInput("|lambda| must be 1")
        if (lam - 1).is_zero():
            raise InvalidInput("lambda must differ from 1")

    def case(self) -> str:
        d, e = self.d, self.e
        if d == e:
            return "prime" if is_prime(d) else "total_ram"
        if d % e == 0 or e % d == 0:
            return "divisor"
        if math.gcd(d, e) == 1:
            return "coprime"
        return "mixed"

    def to_json(self) -> dict:
        from .padic import to_text

        return {"p": self.p, "d": self.d, "e": self.e, "lambda": to_text(self.lam),
                "f": self.f, "k": self.k, "l": self.l, "precision": self.field.precision}

    @classmethod
    def from_json(cls, data: dict) -> "CoverSpec":
        from .padic import from_text

        p, d, e = int(data["p"]), int(data["d"]), int(data["e"])
        precision = int(data.get("precision", 64))
        F = make_field(p, math.lcm(d, e), precision)
        lam = from_text(F, str(data["lambda"]))
        return cls(p, d, e, lam, int(data.get("f", 1)), int(data.get("k", 1)), int(data.get("l", 1)))


@dataclass(eq=False)
class Generator:
    """``matrix`` has integral entries; the group element is matrix / (lambda-1)^scale."""

    label: str
    word: FreeProductWord
    matrix: MoebiusMap
    note: str = ""
    scale: int = 0


@dataclass(eq=False)
class SchottkyPresentation:
    generators: list[Generator]
    expected_rank: int
    case: str
    spec: CoverSpec
    assignment: CyclicAssignment
    ram_indices: tuple[int, ...] = ()

    def __post_init__(self):
        if len(self.generators) != self.expected_rank:
            raise AssertionError("generator count differs from the expected rank")

    @property
    def orders(self) -> tuple[int, int]:
        return (self.spec.d, self.spec.e)

    def matrices(self) -> list[MoebiusMap]:
        return [g.matrix for g in self.generators]

    def normalized(self, g: Generator) -> MoebiusMap:
        """The generator with the (lambda-1) factors divided back out."""
        if not g.scale:
            return g.matrix
        return g.matrix.scaled(((self.spec.lam - 1) ** g.scale).inverse())

    def words(self) -> list[FreeProductWord]:
        return [g.word for g in self.generators]

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "expected_rank": self.expected_rank,
            "spec": self.spec.to_json(),
            "assignment": {"n": self.assignment.n, "images": list(self.assignment.images)},
            "ram_indices": list(self.ram_indices),
            "generators": [
                {"label": g.label, "matrix": g.matrix.to_json(), "note": g.note, "scale": g.scale}
                for g in self.generators
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SchottkyPresentation":
        spec = CoverSpec.from_json(data["spec"])
        F = spec.field
        orders = (spec.d, spec.e)
        gens = [
            Generator(g["label"], FreeProductWord.parse(g["label"], orders, NAMES),
                      MoebiusMap.from_json(F, g["matrix"]), g.get("note", ""), int(g.get("scale", 0)))
            for g in data["generators"]
        ]
        a = data["assignment"]
        return cls(gens, int(data["expected_rank"]), data["case"], spec,
                   CyclicAssignment(int(a["n"]), tuple(a["images"])), tuple(data.get("ram_indices", ())))


# ---------------------------------------------------------------- matrices


def base_matrices(spec: CoverSpec) -> tuple[MoebiusMap, MoebiusMap]:
    F = spec.field
    lam = spec.lam
    s = MoebiusMap.diagonal(F.zeta(spec.d))
    phi = MoebiusMap(lam, F.one(), F.one(), F.one())
    t = phi @ MoebiusMap.diagonal(F.zeta(spec.e)) @ phi.exact_inverse()
    return s, t


class CyclicRep:
    """Powers of an order-n map, each computed directly rather than by repeated products."""

    def __init__(self, powers: list[MoebiusMap], scale_per_power: int):
        self.powers = powers
        self.order = len(powers)
        self.scale_per_power = scale_per_power

    def __pow__(self, e: int) -> MoebiusMap:
        return self.powers[e % self.order]


def base_reps(spec: CoverSpec) -> tuple[CyclicRep, CyclicRep]:
    """s^j = diag(zeta_d^j, 1) and (lambda-1) t^j = phi diag(zeta_e^j, 1) adj(phi).

    All entries are integral, so products lose no absolute precision.
    """
    F = spec.field
    lam = spec.lam
    zd, ze = F.zeta(spec.d), F.zeta(spec.e)
    phi = MoebiusMap(lam, F.one(), F.one(), F.one())
    adj = phi.inverse()
    s_pows = [MoebiusMap.diagonal(zd**j) for j in range(spec.d)]
    t_pows = [phi @ MoebiusMap.diagonal(ze**j) @ adj for j in range(spec.e)]
    t_pows[0] = MoebiusMap.identity(F)
    return CyclicRep(s_pows, 0), CyclicRep(t_pows, 1)


def evaluate_word(word: FreeProductWord, reps) -> tuple[MoebiusMap, int]:
    """Cleared matrix of a word and the number of (lambda-1) factors it carries."""
    F = reps[0].powers[0].field
    out = MoebiusMap.identity(F)
    scale = 0
    for i, e in word.syllables:
        out = out @ (reps[i] ** e)
        scale += reps[i].scale_per_power
    return out, scale


def exponents_to_f(a: int, q: int) -> int:
    """The f in [1, q-1] with a f = 1 mod q."""
    if not 1 <= a < q or math.gcd(a, q) != 1:
        raise InvalidInput(f"{a} is not invertible mod {q}")
    return pow(a, -1, q)


# ---------------------------------------------------------------- words


def _label(syllables) -> str:
    """Render raw syllables, merging neighbours but keeping exponents as written."""
    merged: list[list[int]] = []
    for i, e in syllables:
        if e == 0:
            continue
        if merged and merged[-1][0] == i:
            merged[-1][1] += e
            if merged[-1][1] == 0:
                merged.pop()
        else:
            merged.append([i, e])
    if not merged:
        return "1"
    return " ".join(NAMES[i] if e == 1 else f"{NAMES[i]}^{e}" for i, e in merged)


def _conj(c, body):
    return list(c) + list(body) + [(i, -e) for i, e in reversed(c)]


def _pow_syl(i, e):
    return [(i, e)]


def _words_prime_like(M: int, a: int, f: int):
    """Basis of ker(<S,T> -> C_M, S -> 1, T -> f) with S = s^a, T = t^a of order M."""
    return [
        ([(0, a * i), (1, a), (0, -a * (f + i))], f"{_label([(0, a * i), (1, a), (0, -a * (f + i))])}")
        for i in range(1, M)
    ]


def _words_total_ram(M: int, a: int, f: int, depth: int = 0):
    """Recursive basis for <s^a, t^a> = C_M * C_M -> C_M, smallest prime factor first.

    With q the smallest prime dividing M and M = q M', the kernel is generated
    by the prime-case basis of <s^(aM'), t^(aM')> together with the conjugates
    by s^(aM' i), i = 0..q-1, of the basis for the quotient of order M'.
    """
    if is_prime(M):
        return [(w, f"level {depth}: prime {M} basis") for w, _ in _words_prime_like(M, a, f)]
    q = min(prime_factors(M))
    Mp = M // q
    out = [(w, f"level {depth}: prime {q} basis on s^{a * Mp}, t^{a * Mp}")
           for w, _ in _words_prime_like(q, a * Mp, f)]
    inner = _words_total_ram(Mp, a, f, depth + 1)
    for i in range(q):
        c = [(0, a * Mp * i)] if i else []
        for w, note in inner:
            out.append((_conj(c, w), f"conjugate by s^{a * Mp * i} of [{note}]"))
    return out


# ---------------------------------------------------------------- cases


def _finish(spec: CoverSpec, raw, case: str, rank: int, assignment: CyclicAssignment) -> SchottkyPresentation:
    orders = (spec.d, spec.e)
    reps = base_reps(spec)
    gens = []
    for syl, note in raw:
        word = FreeProductWord.make(orders, syl)
        mat, scale = evaluate_word(word, reps)
        gens.append(Generator(_label(syl), word, mat, note, scale))
    return SchottkyPresentation(gens, rank, case, spec, assignment,
                                (spec.d, spec.d, spec.e, spec.e))


def _check_f(spec: CoverSpec, n: int):
    if math.gcd(spec.f, n) != 1:
        raise InvalidInput(f"f = {spec.f} must be invertible mod {n}")


def synth_prime(spec: CoverSpec) -> SchottkyPresentation:
    """gamma_i = s^i t s^(-f-i), i = 1..q-1."""
    q = spec.d
    if spec.e != q or not is_prime(q):
        raise InvalidInput("the prime case needs d = e = q prime")
    _check_f(spec, q)
    spec.validate()
    raw = [(w, f"gamma_{i + 1},{spec.f}") for i, (w, _) in enumerate(_words_prime_like(q, 1, spec.f))]
    return _finish(spec, raw, "prime", q - 1, CyclicAssignment(q, (1, spec.f % q)))


def synth_total_ram(spec: CoverSpec) -> SchottkyPresentation:
    m = spec.d
    if spec.e != m:
        raise InvalidInput("total ramification needs d = e")
    _check_f(spec, m)
    spec.validate()
    if is_prime(m):
        return synth_prime(spec)
    raw = _words_total_ram(m, 1, spec.f)
    return _finish(spec, raw, "total_ram", m - 1, CyclicAssignment(m, (1, spec.f % m)))


def synth_divisor(spec: CoverSpec) -> SchottkyPresentation:
    """e | d: conjugates s^i gamma_j s^-i (i = 0..d/e-1) of gamma_j = (s^(fk))^j t (s^(fk))^(-j-1).

    When instead d | e the roles of s and t are exchanged.
    """
    d, e, k = spec.d, spec.e, spec.k
    spec.validate()
    if d % e == 0 and d != e:
        big, small, x, y = d, e, 0, 1
    elif e % d == 0 and d != e:
        big, small, x, y = e, d, 1, 0
    else:
        raise InvalidInput("the divisor case needs one order to be a proper multiple of the other")
    if math.gcd(k, small) != 1:
        raise InvalidInput(f"k = {k} must be prime to {small}")
    fq = big // small
    step = fq * k
    raw = []
    for i in range(fq):
        for j in range(1, small):
            core = [(x, step * j), (y, 1), (x, -step * (j + 1))]
            c = [(x, i)] if i else []
            raw.append((_conj(c, core), f"gamma_{i},{j},{k}"))
    images = [0, 0]
    images[x], images[y] = 1, step % big
    return _finish(spec, raw, "divisor", fq * (small - 1), CyclicAssignment(big, tuple(images)))


def _commutators(x_pow: int, y_pow: int, a: int, b: int):
    """sigma^-i tau^-j sigma^i tau^j with sigma = s^x_pow (order a), tau = t^y_pow (order b)."""
    out = []
    for i in range(1, a):
        for j in range(1, b):
            out.append(([(0, -x_pow * i), (1, -y_pow * j), (0, x_pow * i), (1, y_pow * j)], f"gamma_{i},{j}"))
    return out


def synth_coprime(spec: CoverSpec) -> SchottkyPresentation:
    """Commutators of sigma = s^e and tau = t^d; every generator has determinant 1."""
    d, e = spec.d, spec.e
    if math.gcd(d, e) != 1:
        raise InvalidInput("the coprime case needs gcd(d, e) = 1")
    if math.gcd(spec.k, d) != 1 or math.gcd(spec.l, e) != 1:
        raise InvalidInput("k must be prime to d and l prime to e")
    spec.validate()
    raw = _commutators(e, d, d, e)
    n = d * e
    return _finish(spec, raw, "coprime", (d - 1) * (e - 1),
                   CyclicAssignment(n, ((e * spec.k) % n, (d * spec.l) % n)))


def synth_mixed(spec: CoverSpec) -> SchottkyPresentation:
    """General d, e with l = gcd(d, e), d = d'l, e = e'l, m = lcm(d, e) = d'e'l.

    Two families:
      * the commutators t^j s^i t^-j s^-i (0 < i < d', 0 < j < e'), which
        span the free part of the kernel of the map to C_d'e', conjugated by
        s^(d' h) for h = 0..l-1;
      * the kernel of the free product of the d'+e' order-l groups generated by
        t^j s^d' t^-j (j < e') and s^i t^e' s^-i (i < d'), in the form
        x0^j y x0^(-j-1) with x0 = s^d' and y normalised to the same image.
    """
    d, e = spec.d, spec.e
    ell = math.gcd(d, e)
    if ell == 1 or d % e == 0 or e % d == 0:
        raise InvalidInput("the mixed case needs gcd(d,e) > 1 with neither order dividing the other")
    if math.gcd(spec.k, d) != 1 or math.gcd(spec.l, e) != 1:
        raise InvalidInput("k must be prime to d and l prime to e")
    spec.validate()
    dp, ep = d // ell, e // ell
    m = dp * ep * ell
    raw = []
    for h in range(ell):
        c = [(0, dp * h)] if h else []
        for i in range(1, dp):
            for j in range(1, ep):
                w = [(1, j), (0, i), (1, -j), (0, -i)]
                raw.append((_conj(c, w), f"conjugate by s^{dp * h} of [t^{j}, s^{i}]"))
    # order-l factors, all mapped to the image of x0 = s^d'
    x0 = [(0, dp)]
    c_t = pow(spec.l, -1, ell) * spec.k % ell  # (t^e')^c_t has the same image as s^d'
    factors = [(f"t^{j} s^{dp} t^-{j}", [(1, j), (0, dp), (1, -j)]) for j in range(1, ep)]
    factors += [(f"s^{i} t^{ep * c_t} s^-{i}", [(0, i), (1, ep * c_t), (0, -i)]) for i in range(dp)]
    for name, y in factors:
        for j in range(1, ell):
            w = [(0, dp * j)] + y + [(0, -dp * (j + 1))]
            raw.append((w, f"x0^{j} [{name}] x0^-{j + 1}"))
    rank = (dp - 1) * (ep - 1) + (ell - 1) * dp * ep
    return _finish(spec, raw, "mixed", rank, CyclicAssignment(m, ((ep * spec.k) % m, (dp * spec.l) % m)))


def synth_reidemeister(copies_m: int, order_n: int) -> list[FreeProductWord]:
    """s0^j s_i s0^(-j-1), j = 1..n-1, i = 1..m, in the (m+1)-fold free product of C_n."""
    if copies_m < 1 or order_n < 2:
        raise InvalidInput("need m >= 1 and n >= 2")
    orders = (order_n,) * (copies_m + 1)
    return [
        FreeProductWord.make(orders, [(0, j), (i, 1), (0, -j - 1)])
        for i in range(1, copies_m + 1)
        for j in range(1, order_n)
    ]


def synthesize(spec: CoverSpec) -> SchottkyPresentation:
    return {
        "prime": synth_prime,
        "total_ram": synth_total_ram,
        "divisor": synth_divisor,
        "coprime": synth_coprime,
        "mixed": synth_mixed,
    }[spec.case()](spec)


def expected_genus(n: int, ram_indices) -> int:
    """Riemann-Hurwitz for a cyclic cover of P^1 of degree n."""
    total = -2 * n
    for e in ram_indices:
        if e < 2 or n % e:
            raise InvalidRamification(f"ramification index {e} is not a divisor >= 2 of {n}")
        total += (n // e) * (e - 1)
    if total % 2 or total < -2:
        raise InvalidRamification("Riemann-Hurwitz gives a non-integral or negative genus")
    return total // 2 + 1


# ---------------------------------------------------------------- verification


@dataclass
class VerificationReport:
    all_hyperbolic: bool
    circles_disjoint: bool
    genus: int
    first_non_hyperbolic: str | None = None
    first_intersecting_pair: tuple[str, str] | None = None
    refuted: bool = False
    min_separation: Fraction | None = None
    diagnostics: list[str] = field(default_factory=list)

    @property
    def is_schottky_certified(self) -> bool:
        return self.all_hyperbolic and self.circles_disjoint

    @property
    def status(self) -> str:
        if self.is_schottky_certified:
            return "certified"
        return "refuted" if self.refuted else "not_certified"

    def to_json(self) -> dict:
        ms = self.min_separation
        return {
            "status": self.status,
            "is_schottky_certified": self.is_schottky_certified,
            "all_hyperbolic": self.all_hyperbolic,
            "circles_disjoint": self.circles_disjoint,
            "genus": self.genus,
            "first_non_hyperbolic": self.first_non_hyperbolic,
            "first_intersecting_pair": list(self.first_intersecting_pair) if self.first_intersecting_pair else None,
            "min_separation": None if ms is None else (str(ms.numerator) if ms.denominator == 1 else f"{ms.numerator}/{ms.denominator}"),
            "diagnostics": self.diagnostics,
        }


def verify_schottky(pres: SchottkyPresentation) -> VerificationReport:
    """Hyperbolicity of every generator, then pairwise disjoint isometric circles.

    A certified non-hyperbolic generator refutes the Schottky property for
    this generating set; intersecting circles only withhold the certificate.
    """
    genus = pres.expected_rank
    for g in pres.generators:
        if classify_map(g.matrix) != HYPERBOLIC:
            return VerificationReport(False, False, genus, first_non_hyperbolic=g.label, refuted=True)
    disks = []
    for g in pres.generators:
        for tag, mat in ((g.label, g.matrix), (f"({g.label})^-1", g.matrix.inverse())):
            try:
                disks.append((tag, isometric_circle(mat)))
            except FixesInfinity:
                return VerificationReport(True, False, genus, diagnostics=[f"{tag} fixes infinity"])
    min_sep = None
    for i in range(len(disks)):
        for j in range(i + 1, len(disks)):
            (ta, da), (tb, db) = disks[i], disks[j]
            try:
                ok = disks_disjoint(da, db)
            except InsufficientPrecision as exc:
                raise InsufficientPrecision(f"circles of {ta} and {tb}: {exc}") from exc
            if not ok:
                return VerificationReport(True, False, genus, first_intersecting_pair=(ta, tb))
            sep = certified_val(da.center - db.center)
            min_sep = sep if min_sep is None else min(min_sep, sep)
    return VerificationReport(True, True, genus, min_separation=min_sep)


def homomorphism_check(pres: SchottkyPresentation) -> bool:
    """Each label evaluates to its matrix, and lies in the kernel."""
    reps = base_reps(pres.spec)
    for g in pres.generators:
        w = FreeProductWord.parse(g.label, pres.orders, NAMES)
        if hom_image(w, pres.assignment) != 0:
            return False
        if not word_to_matrix(w, reps).projectively_equal(g.matrix):
            return False
    return True


def oracle_generation_check(pres: SchottkyPresentation) -> bool:
    return generates_kernel(pres.words(), pres.orders, pres.assignment)
