"""Finite-precision arithmetic in the cyclotomic field K = Q_p(zeta_m).

K is built as a tower: the unramified extension W of degree f (residue field
F_{p^f}, Teichmuller roots of unity of order prime to p) with the totally
ramified extension generated by pi = zeta_{p^r} - 1 on top.  The ring of
integers is W[pi] / E(pi) with E the shifted cyclotomic polynomial
Phi_{p^r}(x + 1), which is Eisenstein.

A nonzero element is stored as ``p^q * pi^s * u`` where ``k = q*e + s`` is its
valuation in pi-units (0 <= s < e) and ``u`` is a unit known modulo pi^R
(R is the relative precision).  Valuations are reported as Fractions
normalised by v(p) = 1.  Elements that cancel below the known precision are
"zero to precision" and only carry the absolute bound they are known to.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import comb

from .errors import (
    DivisionByZeroToPrecision,
    FieldMismatch,
    InsufficientPrecision,
    InvalidInput,
)

DEFAULT_PRECISION = 64
INF = math.inf


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n in increasing order."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def vp(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0")
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def multiplicative_order(a: int, n: int) -> int:
    if n == 1:
        return 1
    if math.gcd(a, n) != 1:
        raise ValueError(f"{a} is not a unit mod {n}")
    k, x = 1, a % n
    while x != 1:
        x = x * a % n
        k += 1
    return k


def _eisenstein(p: int, r: int) -> list[int]:
    # coefficients E_0..E_e of Phi_{p^r}(x + 1); r = 0 gives x - p
    if r == 0:
        return [-p, 1]
    step = p ** (r - 1)
    coeffs = [0] * (step * (p - 1) + 1)
    for j in range(p):
        n = j * step
        for i in range(n + 1):
            coeffs[i] += comb(n, i)
    return coeffs


def _pmod(a: list[int], h: list[int], p: int) -> list[int]:
    """Remainder of a modulo monic h over F_p (coefficients low to high)."""
    rem = [c % p for c in a]
    dh = len(h) - 1
    for top in range(len(rem) - 1, dh - 1, -1):
        c = rem[top]
        if c:
            for i in range(dh + 1):
                rem[top - dh + i] = (rem[top - dh + i] - c * h[i]) % p
    rem = rem[:dh]
    while rem and rem[-1] == 0:
        rem.pop()
    return rem


def _pmulmod(a: list[int], b: list[int], h: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _pmod(out, h, p)


def _ppowmod(a: list[int], n: int, h: list[int], p: int) -> list[int]:
    out = [1]
    while n:
        if n & 1:
            out = _pmulmod(out, a, h, p)
        a = _pmulmod(a, a, h, p)
        n >>= 1
    return out


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    def strip(x):
        x = [c % p for c in x]
        while x and x[-1] == 0:
            x.pop()
        return x

    a, b = strip(a), strip(b)
    while b:
        inv = pow(b[-1], -1, p)
        monic = [c * inv % p for c in b]
        a, b = b, _pmod(a, monic, p)
    return a


def _is_irreducible(h: list[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p."""
    f = len(h) - 1
    x = [0, 1]

    def frob(k):  # x^(p^k) mod h
        out = x
        for _ in range(k):
            out = _ppowmod(out, p, h, p)
        return out

    full = frob(f)
    if _pmod([(a - b) for a, b in zip(full + [0] * 2, x + [0] * len(full))], h, p):
        return False
    for r in prime_factors(f):
        t = frob(f // r)
        diff = [(a - b) % p for a, b in zip(t + [0] * 2, x + [0] * len(t))]
        if len(_pgcd(h, diff, p)) > 1:
            return False
    return True


def _irreducible_poly(p: int, f: int) -> list[int]:
    """Lexicographically first monic irreducible polynomial of degree f over F_p."""
    if f == 1:
        return [0, 1]
    for idx in range(p**f):
        coeffs = []
        for _ in range(f):
            coeffs.append(idx % p)
            idx //= p
        if coeffs[0] == 0:
            continue
        cand = coeffs + [1]
        if _is_irreducible(cand, p):
            return cand
    raise AssertionError("no irreducible polynomial found")


@dataclass(frozen=True)
class FieldDescriptor:
    """The field Q_p(zeta_m) at a fixed relative precision (in pi-digits)."""

    p: int
    m: int
    precision: int = DEFAULT_PRECISION
    r: int = field(init=False)
    u: int = field(init=False)
    f: int = field(init=False)
    e_ram: int = field(init=False)

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise InvalidInput(f"p={self.p!r} is not prime")
        if not isinstance(self.m, int) or self.m < 1:
            raise InvalidInput(f"m={self.m!r} must be a positive integer")
        if self.precision < 1:
            raise InvalidInput("precision must be >= 1")
        r = vp(self.m, self.p)
        u = self.m // self.p**r
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "f", multiplicative_order(self.p, u) if u > 1 else 1)
        object.__setattr__(self, "e_ram", self.p ** (r - 1) * (self.p - 1) if r >= 1 else 1)

    def to_json(self) -> dict:
        return {"p": self.p, "m": self.m, "precision": self.precision}

    @classmethod
    def from_json(cls, data: dict) -> "FieldDescriptor":
        return make_field(data["p"], data["m"], data.get("precision", DEFAULT_PRECISION))

    # -- internal tables ------------------------------------------------------

    @cached_property
    def digits(self) -> int:
        # p-adic digits carried by representatives; leaves headroom for the
        # precision lost when dividing by p and pi during normalisation
        return -(-self.precision // self.e_ram) + self.e_ram + 3

    @cached_property
    def simple(self) -> bool:
        """True for Q_p itself, where elements take a scalar fast path."""
        return self.e_ram == 1 and self.f == 1

    @cached_property
    def ppow(self) -> list[int]:
        return [self.p**i for i in range(self.digits + 1)]

    @cached_property
    def modulus(self) -> int:
        return self.p**self.digits

    @cached_property
    def eisenstein(self) -> list[int]:
        return _eisenstein(self.p, self.r)

    @cached_property
    def pi_tab(self) -> dict[int, list[int]]:
        e, E = self.e_ram, self.eisenstein
        tab = {e: [-c for c in E[:e]]}
        for k in range(e + 1, 2 * e - 1):
            prev = tab[k - 1]
            nxt = [0] + prev[:-1]
            top = prev[-1]
            for i in range(e):
                nxt[i] += top * tab[e][i]
            tab[k] = nxt
        return tab

    @cached_property
    def pi_quotient(self) -> list[int]:
        # p = pi * Q(pi); used to divide by pi
        e, E = self.e_ram, self.eisenstein
        sgn = E[0] // self.p
        return [-sgn * E[i + 1] for i in range(e)]

    @cached_property
    def eta(self) -> list[int]:
        # unit pi^e / p
        e, f, E = self.e_ram, self.f, self.eisenstein
        sgn = E[0] // self.p
        vec = [0] * (e * f)
        vec[0] = -sgn
        for i in range(1, e):
            vec[i * f] = -(E[i] // self.p)
        return vec

    @cached_property
    def eta_inv(self) -> list[int]:
        return _iinv(self, self.eta)

    @cached_property
    def residue_poly(self) -> list[int]:
        return _irreducible_poly(self.p, self.f)

    @cached_property
    def y_tab(self) -> dict[int, list[int]]:
        f, h = self.f, self.residue_poly
        tab: dict[int, list[int]] = {}
        if f == 1:
            return tab
        tab[f] = [-c for c in h[:f]]
        for k in range(f + 1, 2 * f - 1):
            prev = tab[k - 1]
            nxt = [0] + prev[:-1]
            top = prev[-1]
            for i in range(f):
                nxt[i] += top * tab[f][i]
            tab[k] = nxt
        return tab

    @cached_property
    def pi_pows(self) -> list[list[int]]:
        e, f = self.e_ram, self.f
        out = []
        for s in range(e):
            vec = [0] * (e * f)
            vec[s * f] = 1
            out.append(vec)
        return out

    @cached_property
    def one_vec(self) -> list[int]:
        vec = [0] * (self.e_ram * self.f)
        vec[0] = 1
        return vec

    # -- convenience -------------------------------------------------------------

    def element(self, x) -> "PadicElement":
        """Coerce an int, Fraction, text form or element into this field."""
        if isinstance(x, PadicElement):
            if x.field is not self and x.field != self:
                raise FieldMismatch(f"element of {x.field} used in {self}")
            return x
        if isinstance(x, str):
            return from_text(self, x)
        if isinstance(x, int):
            return PadicElement.from_int(self, x)
        if isinstance(x, Fraction):
            return PadicElement.from_rational(self, x)
        raise TypeError(f"cannot coerce {type(x).__name__} into {self}")

    def zeta(self, k: int) -> "PadicElement":
        return root_of_unity(self, k)

    def one(self) -> "PadicElement":
        return PadicElement.from_rational(self, Fraction(1))

    def zero(self) -> "PadicElement":
        return PadicElement(self, None, self.precision, 0)


@lru_cache(maxsize=None)
def make_field(p: int, m: int, precision: int = DEFAULT_PRECISION) -> FieldDescriptor:
    return FieldDescriptor(p, m, precision)


# -- integral vectors ---------------------------------------------------------
#
# An integral element is a flat list of e*f integers mod p^digits: entry
# i*f + j is the coefficient of pi^i * y^j.


def _imul(F: FieldDescriptor, x: list[int], y: list[int]) -> list[int]:
    e, f, mod = F.e_ram, F.f, F.modulus
    if e == 1 and f == 1:
        return [x[0] * y[0] % mod]
    nf = 2 * f - 1
    acc = [[0] * nf for _ in range(2 * e - 1)]
    for i in range(e):
        xi = x[i * f:(i + 1) * f]
        if not any(xi):
            continue
        for j in range(e):
            yj = y[j * f:(j + 1) * f]
            if not any(yj):
                continue
            row = acc[i + j]
            for a, xa in enumerate(xi):
                if xa:
                    for b, yb in enumerate(yj):
                        if yb:
                            row[a + b] += xa * yb
    if f > 1:
        ytab = F.y_tab
        for row in acc:
            for k in range(f, nf):
                c = row[k]
                if c:
                    row[k] = 0
                    for t, hv in enumerate(ytab[k]):
                        row[t] += c * hv
    if e > 1:
        ptab = F.pi_tab
        for k in range(e, 2 * e - 1):
            row = acc[k]
            if not any(row):
                continue
            for i, tv in enumerate(ptab[k]):
                if tv:
                    tgt = acc[i]
                    for j in range(f):
                        tgt[j] += tv * row[j]
    return [acc[i][j] % mod for i in range(e) for j in range(f)]


def _wmul(F: FieldDescriptor, a: list[int], b: list[int], mod: int) -> list[int]:
    f = F.f
    acc = [0] * (2 * f - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                acc[i + j] += ai * bj
    for k in range(f, 2 * f - 1):
        c = acc[k]
        if c:
            for t, hv in enumerate(F.y_tab[k]):
                acc[t] += c * hv
    return [c % mod for c in acc[:f]]


def _wpow(F: FieldDescriptor, a: list[int], n: int, mod: int) -> list[int]:
    out = [1] + [0] * (F.f - 1)
    base = list(a)
    while n:
        if n & 1:
            out = _wmul(F, out, base, mod)
        base = _wmul(F, base, base, mod)
        n >>= 1
    return out


def _iinv(F: FieldDescriptor, u: list[int]) -> list[int]:
    """Inverse of an integral unit modulo p^digits (Newton iteration)."""
    f, p, mod = F.f, F.p, F.modulus
    q = p**f
    c0 = [c % p for c in u[:f]]
    if not any(c0):
        raise DivisionByZeroToPrecision("not a unit")
    z = [0] * len(u)
    z[:f] = _wpow(F, c0, q - 2, p)
    one = F.one_vec
    for _ in range(2 * F.digits.bit_length() + 8):
        t = _imul(F, u, z)
        if t == one:
            return z
        corr = [(-c) % mod for c in t]
        corr[0] = (corr[0] + 2) % mod
        z = _imul(F, z, corr)
    raise AssertionError("unit inversion did not converge")


def _truncate(F: FieldDescriptor, vec: list[int], A: int) -> list[int]:
    """Canonical representative of an integral vector modulo pi^A."""
    e, f, p = F.e_ram, F.f, F.p
    out = []
    for i in range(e):
        t = -(-(A - i) // e)
        if t <= 0:
            out.extend([0] * f)
        else:
            mod = p**t
            out.extend(c % mod for c in vec[i * f:(i + 1) * f])
    return out


def _ival(F: FieldDescriptor, vec: list[int]):
    """Valuation in pi-units of a canonical integral vector, or None if zero."""
    e, f, p = F.e_ram, F.f, F.p
    best = None
    for i in range(e):
        for c in vec[i * f:(i + 1) * f]:
            if c:
                w = vp(c, p) * e + i
                if best is None or w < best:
                    best = w
    return best


def _divide_out(F: FieldDescriptor, vec: list[int], w: int) -> list[int]:
    """Divide a canonical integral vector of valuation >= w by p^q pi^s, w = q*e + s."""
    e, f, p, mod = F.e_ram, F.f, F.p, F.modulus
    q, s = divmod(w, e)
    if q:
        pq = p**q
        vec = [c // pq for c in vec]
    Q = F.pi_quotient
    for _ in range(s):
        c0 = [c // p for c in vec[:f]]
        vec = vec[f:] + [0] * f
        for i, qv in enumerate(Q):
            if qv:
                for j in range(f):
                    vec[i * f + j] += c0[j] * qv
        vec = [c % mod for c in vec]
    return vec


def _normalise(F: FieldDescriptor, base_q: int, vec: list[int], A: int) -> "PadicElement":
    """Element p^base_q * vec with vec an integral vector known mod pi^A."""
    vec = _truncate(F, vec, A)
    w = _ival(F, vec)
    if w is None or w >= A:
        return PadicElement(F, None, base_q * F.e_ram + A, 0)
    unit = _divide_out(F, vec, w)
    return PadicElement._make(F, base_q * F.e_ram + w, unit, A - w)


# -- elements ---------------------------------------------------------------------


class PadicElement:
    """An element of K known to finite precision.

    ``k`` is the valuation in pi-units (or, for zero-to-precision elements,
    the absolute precision in pi-units); ``unit`` is the canonical unit
    part, ``rel`` its relative precision.
    """

    __slots__ = ("field", "k", "unit", "rel")

    def __init__(self, F: FieldDescriptor, unit, k: int, rel: int):
        self.field = F
        self.unit = unit
        self.k = k
        self.rel = rel

    @classmethod
    def _make(cls, F, k, unit, R):
        R = min(R, F.precision)
        if F.simple:
            return cls(F, (unit[0] % F.ppow[R],), k, R)
        return cls(F, tuple(_truncate(F, unit, R)), k, R)

    @classmethod
    def _simple_norm(cls, F, Q: int, x: int, A: int) -> "PadicElement":
        # p^Q * x with x an integer known mod p^A (Q_p fast path)
        if A <= 0:
            return cls(F, None, Q + A, 0)
        x %= F.ppow[A]
        if x == 0:
            return cls(F, None, Q + A, 0)
        p = F.p
        w = 0
        while x % p == 0:
            x //= p
            w += 1
        R = min(A - w, F.precision)
        return cls(F, (x % F.ppow[R],), Q + w, R)

    @classmethod
    def from_int(cls, F: FieldDescriptor, n: int) -> "PadicElement":
        if n == 0:
            return F.zero()
        p = F.p
        v = 0
        while n % p == 0:
            n //= p
            v += 1
        if F.simple:
            R = F.precision
            return cls(F, (n % F.ppow[R],), v, R)
        vec = [0] * (F.e_ram * F.f)
        vec[0] = n % F.modulus
        return cls._make(F, v * F.e_ram, vec, F.precision)

    @classmethod
    def from_rational(cls, F: FieldDescriptor, x: Fraction) -> "PadicElement":
        x = Fraction(x)
        if x == 0:
            return F.zero()
        p = F.p
        num, den = x.numerator, x.denominator
        v = vp(num, p) - vp(den, p)
        num //= p ** vp(num, p)
        den //= p ** vp(den, p)
        mod = F.modulus
        vec = [0] * (F.e_ram * F.f)
        vec[0] = num * pow(den, -1, mod) % mod
        return cls._make(F, v * F.e_ram, vec, F.precision)

    @classmethod
    def from_integral(cls, F: FieldDescriptor, vec: list[int]) -> "PadicElement":
        """Element from an exact integral coordinate vector (pi^i y^j basis)."""
        return _normalise(F, 0, [c % F.modulus for c in vec], F.precision + F.e_ram)

    # -- predicates and accessors --------------------------------------------

    def is_zero(self) -> bool:
        return self.unit is None

    def val(self):
        """Valuation with v(p) = 1, or INF when zero to precision."""
        if self.unit is None:
            return INF
        return Fraction(self.k, self.field.e_ram)

    @property
    def abs_precision(self) -> Fraction:
        """Absolute precision: the element is known modulo elements of this valuation."""
        if self.unit is None:
            return Fraction(self.k, self.field.e_ram)
        return Fraction(self.k + self.rel, self.field.e_ram)

    def is_unit(self) -> bool:
        return self.unit is not None and self.k == 0

    # -- arithmetic -----------------------------------------------------------------

    def _coerce(self, other) -> "PadicElement":
        if isinstance(other, PadicElement):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other
        if isinstance(other, int):
            return PadicElement.from_int(self.field, other)
        if isinstance(other, Fraction):
            return PadicElement.from_rational(self.field, other)
        return NotImplemented

    def _cap(self, A: int) -> "PadicElement":
        # restrict absolute precision to pi^A
        F = self.field
        if self.unit is None:
            return self if self.k <= A else PadicElement(F, None, A, 0)
        if A <= self.k:
            return PadicElement(F, None, A, 0)
        if A - self.k >= self.rel:
            return self
        return PadicElement._make(F, self.k, list(self.unit), A - self.k)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.field
        if self.unit is None:
            return other._cap(self.k)
        if other.unit is None:
            return self._cap(other.k)
        e, p, mod = F.e_ram, F.p, F.modulus
        q1, s1 = divmod(self.k, e)
        q2, s2 = divmod(other.k, e)
        Q = min(q1, q2)
        A = min(self.k + self.rel, other.k + other.rel) - Q * e
        if F.simple:
            pp = F.ppow
            d1, d2 = q1 - Q, q2 - Q  # one of them is 0; a shift >= A vanishes mod p^A
            x = (self.unit[0] * pp[d1] if d1 < A else 0) + (other.unit[0] * pp[d2] if d2 < A else 0)
            return PadicElement._simple_norm(F, Q, x, A)
        v1 = _imul(F, list(self.unit), F.pi_pows[s1]) if s1 else list(self.unit)
        v2 = _imul(F, list(other.unit), F.pi_pows[s2]) if s2 else list(other.unit)
        c1, c2 = pow(p, q1 - Q, mod), pow(p, q2 - Q, mod)
        return _normalise(F, Q, [(a * c1 + b * c2) % mod for a, b in zip(v1, v2)], A)

    __radd__ = __add__

    def __neg__(self):
        if self.unit is None:
            return self
        if self.field.simple:
            return PadicElement(self.field, ((-self.unit[0]) % self.field.ppow[self.rel],), self.k, self.rel)
        mod = self.field.modulus
        return PadicElement._make(self.field, self.k, [(-c) % mod for c in self.unit], self.rel)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.field
        if self.unit is None or other.unit is None:
            # absolute bound of the zero factor plus valuation (or bound) of the other
            return PadicElement(F, None, self.k + other.k, 0)
        if F.simple:
            R = min(self.rel, other.rel)
            return PadicElement(F, (self.unit[0] * other.unit[0] % F.ppow[R],), self.k + other.k, R)
        e = F.e_ram
        q1, s1 = divmod(self.k, e)
        q2, s2 = divmod(other.k, e)
        q, s = q1 + q2, s1 + s2
        unit = _imul(F, list(self.unit), list(other.unit))
        if s >= e:
            s -= e
            q += 1
            unit = _imul(F, unit, F.eta)
        return PadicElement._make(F, q * e + s, unit, min(self.rel, other.rel))

    __rmul__ = __mul__

    def inverse(self) -> "PadicElement":
        F = self.field
        if self.unit is None:
            raise DivisionByZeroToPrecision("inverse of an element that is zero to precision")
        if F.simple:
            return PadicElement(F, (pow(self.unit[0], -1, F.ppow[self.rel]),), -self.k, self.rel)
        e = F.e_ram
        q, s = divmod(self.k, e)
        unit = _iinv(F, list(self.unit))
        if s:
            # 1/(p^q pi^s u) = p^(-q-1) pi^(e-s) / (u eta)
            unit = _imul(F, unit, F.eta_inv)
            return PadicElement._make(F, (-q - 1) * e + (e - s), unit, self.rel)
        return PadicElement._make(F, -q * e, unit, self.rel)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.unit is None:
            raise DivisionByZeroToPrecision("division by an element that is zero to precision")
        if self.unit is None:
            return PadicElement(self.field, None, self.k - other.k, 0)
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        if self.unit is None:
            return self.field.one() if n == 0 else PadicElement(self.field, None, self.k * n, 0)
        out = self.field.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        return f"PadicElement({to_text(self)!r}, p={self.field.p}, m={self.field.m})"


# -- operations ---------------------------------------------------------------------


def val(x: PadicElement):
    return x.val()


def abs_cmp(x: PadicElement, y: PadicElement) -> int:
    """Compare |x| with |y|: -1 if smaller, 0 if equal, 1 if larger."""
    if x.field != y.field:
        raise FieldMismatch("abs_cmp across fields")
    vx, vy = x.val(), y.val()
    if vx == INF and vy == INF:
        raise InsufficientPrecision("both arguments are zero to precision")
    if vx == INF:
        if x.abs_precision > vy:
            return -1
        raise InsufficientPrecision("cannot certify |x| against |y|")
    if vy == INF:
        if y.abs_precision > vx:
            return 1
        raise InsufficientPrecision("cannot certify |x| against |y|")
    if vx == vy:
        return 0
    return -1 if vx > vy else 1


def certified_val(x: PadicElement) -> Fraction:
    """Valuation of x, raising if x is zero to precision."""
    v = x.val()
    if v == INF:
        raise InsufficientPrecision(f"element is zero to precision {x.abs_precision}")
    return v


@lru_cache(maxsize=None)
def _residue_root_of_unity(F: FieldDescriptor) -> list[int]:
    """An element of exact order u in the residue field F_(p^f)."""
    p, f, u = F.p, F.f, F.u
    q = p**f
    one = [1] + [0] * (f - 1)
    primes = prime_factors(u)
    for idx in range(1, q):
        g = []
        for _ in range(f):
            g.append(idx % p)
            idx //= p
        h = _wpow(F, g, (q - 1) // u, p)
        if all(_wpow(F, h, u // ell, p) != one for ell in primes):
            return h
    raise AssertionError("the residue field has no element of the required order")


@lru_cache(maxsize=None)
def _teichmuller_zeta_u(F: FieldDescriptor) -> PadicElement:
    # Newton iteration on X^u - 1 starting from a residue-field root
    u = F.u
    q = F.p**F.f
    g = _residue_root_of_unity(F)
    vec = [0] * (F.e_ram * F.f)
    vec[:F.f] = g
    z = PadicElement.from_integral(F, vec)
    for _ in range(4 * F.precision.bit_length() + 16):
        corr = (z**u - 1) / (u * z ** (u - 1))
        if corr.is_zero():
            break
        z = z - corr
    else:
        raise InsufficientPrecision("Hensel lifting of the root of unity did not converge")
    return z


def _zeta_p_power(F: FieldDescriptor) -> PadicElement:
    # zeta_{p^r} = 1 + pi
    if F.r == 0:
        return F.one()
    vec = list(F.one_vec)
    if F.e_ram > 1:
        vec[F.f] = 1
        return PadicElement.from_integral(F, vec)
    return F.one() + PadicElement.from_rational(F, Fraction(-F.eisenstein[0]))


@lru_cache(maxsize=None)
def _zeta_m(F: FieldDescriptor) -> PadicElement:
    z = _zeta_p_power(F)
    if F.u > 1:
        z = z * _teichmuller_zeta_u(F)
    return z


@lru_cache(maxsize=None)
def root_of_unity(F: FieldDescriptor, k: int) -> PadicElement:
    """The primitive k-th root of unity zeta_m^(m/k), for k | m.

    zeta_m is the Teichmuller root of order u times 1 + pi, so all roots
    handed out for one field are powers of a single generator.
    """
    if k < 1 or F.m % k:
        raise InvalidInput(f"k={k} does not divide m={F.m}")
    if k == 1:
        return F.one()
    z = _zeta_m(F) ** (F.m // k)
    if not (z**k - 1).is_zero():
        raise InsufficientPrecision(f"zeta_{k} not certified at precision {F.precision}")
    return z


def field_arith(x: PadicElement, y, op: str) -> PadicElement:
    """Dispatch helper mirroring the binary operators (``pow`` takes an int y)."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    if op == "neg":
        return -x
    if op == "pow":
        return x**y
    raise InvalidInput(f"unknown op {op!r}")


# -- text form --------------------------------------------------------------------------


def _frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def to_text(x: PadicElement) -> str:
    """``val:<v>;prec:<R>;digits:<c_0>,<c_1>,...`` (units as ``a|b`` when f > 1)."""
    F = x.field
    if x.unit is None:
        return f"val:inf;prec:{_frac_str(x.abs_precision)}"
    f = F.f
    coeffs = []
    for i in range(F.e_ram):
        chunk = x.unit[i * f:(i + 1) * f]
        coeffs.append("|".join(str(c) for c in chunk))
    return f"val:{_frac_str(x.val())};prec:{x.rel};digits:{','.join(coeffs)}"


def from_text(F: FieldDescriptor, s: str) -> PadicElement:
    s = s.strip()
    if not s.startswith("val:"):
        try:
            return PadicElement.from_rational(F, Fraction(s))
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInput(f"cannot parse element {s!r}") from exc
    parts = dict(item.split(":", 1) for item in s.split(";"))
    try:
        if parts["val"] == "inf":
            A = Fraction(parts["prec"]) * F.e_ram
            return PadicElement(F, None, int(A), 0)
        k = Fraction(parts["val"]) * F.e_ram
        R = int(parts["prec"])
        unit = [int(c) for chunk in parts["digits"].split(",") for c in chunk.split("|")]
    except (KeyError, ValueError) as exc:
        raise InvalidInput(f"malformed element text {s!r}") from exc
    if k.denominator != 1 or len(unit) != F.e_ram * F.f:
        raise InvalidInput(f"element text {s!r} does not fit {F}")
    out = PadicElement._make(F, int(k), unit, R)
    if R > 0 and _ival(F, list(out.unit)) != 0:
        raise InvalidInput(f"digits of {s!r} are not a unit")
    return out


def uniformizer(F: FieldDescriptor) -> PadicElement:
    if F.e_ram > 1:
        return PadicElement.from_integral(F, F.pi_pows[1])
    return PadicElement.from_rational(F, Fraction(F.p))


def _residue_elements(F: FieldDescriptor):
    p, f = F.p, F.f
    for idx in range(p**f):
        vec = [0] * (F.e_ram * f)
        for j in range(f):
            vec[j] = idx % p
            idx //= p
        yield vec


def sqrt(x: PadicElement) -> PadicElement:
    """A square root of x in K; raises ExtensionRequired if x is not a square.

    The unit part is lifted digit by digit (keeping every approximation
    consistent with a true root) until Newton's iteration is guaranteed to
    converge, then refined by Newton.
    """
    from .errors import ExtensionRequired

    F = x.field
    if x.is_zero():
        raise InsufficientPrecision("square root of an element that is zero to precision")
    if x.k % 2:
        raise ExtensionRequired("odd valuation: square root needs a ramified extension")
    pi = uniformizer(F)
    half = pi ** (x.k // 2)
    w = x / (half * half)
    newton_gate = 2 * F.e_ram * (1 if F.p == 2 else 0)
    digits = [PadicElement.from_integral(F, vec) for vec in _residue_elements(F)]
    cands = [F.zero()]
    j = 0
    start = None
    while start is None:
        if not cands or j > 2 * F.e_ram + 2:
            raise ExtensionRequired("not a square in the working field")
        step = pi**j
        nxt = []
        for z in cands:
            for d in digits:
                y = z + d * step
                diff = y * y - w
                if diff.is_zero() or diff.k >= j + 1:
                    if y.is_unit() and (diff.is_zero() or diff.k > newton_gate):
                        start = y
                        break
                    nxt.append(y)
            if start is not None:
                break
        cands = nxt
        j += 1
    z = start
    for _ in range(4 * F.precision.bit_length() + 16):
        diff = z * z - w
        if diff.is_zero():
            break
        z = z - diff / (2 * z)
    return z * half
