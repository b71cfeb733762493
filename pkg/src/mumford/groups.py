"""Words in free products of finite cyclic groups, and their cyclic quotients.

This module is the combinatorial check on every rank and kernel statement
made elsewhere in the package: coset tables, Schreier generators, a
membership/generation test through Stallings folding, and brute-force
torsion scans.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
import re
from dataclasses import dataclass
from functools import reduce

from .errors import InvalidInput, NonFreeKernel, NonGenerating


@dataclass(frozen=True)
class FreeProductWord:
    """Normal form: syllables (factor, exponent) with 0 < exponent < order,
    no two neighbours from the same factor."""

    orders: tuple[int, ...]
    syllables: tuple[tuple[int, int], ...] = ()

    @classmethod
    def make(cls, orders, syllables) -> "FreeProductWord":
        return word_reduce(cls(tuple(orders), tuple((int(i), int(e)) for i, e in syllables)))

    @classmethod
    def identity(cls, orders) -> "FreeProductWord":
        return cls(tuple(orders), ())

    @classmethod
    def generator(cls, orders, i: int, e: int = 1) -> "FreeProductWord":
        return cls.make(orders, [(i, e)])

    def __len__(self) -> int:
        return len(self.syllables)

    def is_identity(self) -> bool:
        return not self.syllables

    def __mul__(self, other: "FreeProductWord") -> "FreeProductWord":
        if self.orders != other.orders:
            raise InvalidInput("words from different free products")
        return _join(self.orders, list(self.syllables), other.syllables)

    def inverse(self) -> "FreeProductWord":
        return FreeProductWord(
            self.orders, tuple((i, self.orders[i] - e) for i, e in reversed(self.syllables))
        )

    def __pow__(self, k: int) -> "FreeProductWord":
        base = self if k >= 0 else self.inverse()
        out = FreeProductWord.identity(self.orders)
        for _ in range(abs(k)):
            out = out * base
        return out

    def format(self, names=None, balanced: bool = True) -> str:
        if not self.syllables:
            return "1"
        parts = []
        for i, e in self.syllables:
            n = self.orders[i]
            if balanced and e > n // 2:
                e -= n
            name = names[i] if names else f"s{i}"
            parts.append(name if e == 1 else f"{name}^{e}")
        return " ".join(parts)

    def __str__(self) -> str:
        return self.format()

    @classmethod
    def parse(cls, text: str, orders, names=None) -> "FreeProductWord":
        """Parse "s0^2 s1^-1" (or, with names=("s","t"), "s^2 t s^-3")."""
        orders = tuple(orders)
        text = text.strip()
        if text in ("", "1", "e"):
            return cls.identity(orders)
        lookup = {n: i for i, n in enumerate(names)} if names else None
        syl = []
        for tok in text.split():
            mt = re.fullmatch(r"([A-Za-z_]+\d*)(?:\^(-?\d+))?", tok)
            if not mt:
                raise InvalidInput(f"bad syllable {tok!r}")
            name, exp = mt.group(1), int(mt.group(2) or 1)
            if lookup is not None:
                if name not in lookup:
                    raise InvalidInput(f"unknown generator {name!r}")
                idx = lookup[name]
            else:
                mi = re.fullmatch(r"s(\d+)", name)
                if not mi:
                    raise InvalidInput(f"unknown generator {name!r}")
                idx = int(mi.group(1))
            if idx >= len(orders):
                raise InvalidInput(f"generator index {idx} out of range")
            syl.append((idx, exp))
        return cls.make(orders, syl)


def _join(orders, left: list, right) -> FreeProductWord:
    """Concatenate and reduce; only the seam can cancel since both are reduced."""
    out = left
    for i, e in right:
        e %= orders[i]
        if e == 0:
            continue
        if out and out[-1][0] == i:
            e = (out[-1][1] + e) % orders[i]
            out.pop()
            if e:
                out.append((i, e))
        else:
            out.append((i, e))
    return FreeProductWord(tuple(orders), tuple(out))


def word_reduce(w: FreeProductWord) -> FreeProductWord:
    return _join(w.orders, [], w.syllables)


@dataclass(frozen=True)
class CyclicAssignment:
    """Homomorphism from the free product to C_n: factor i -> images[i]."""

    n: int
    images: tuple[int, ...]

    def generates(self) -> bool:
        return reduce(math.gcd, self.images, self.n) == 1

    def image_order(self, i: int) -> int:
        return self.n // math.gcd(self.n, self.images[i])


def hom_image(w: FreeProductWord, a: CyclicAssignment) -> int:
    return sum(e * a.images[i] for i, e in w.syllables) % a.n


@dataclass
class CosetTable:
    """Action of each factor generator on the cosets of the kernel (= Z/n)."""

    n: int
    orders: tuple[int, ...]
    action: list[list[int]]
    transversal: list[FreeProductWord]
    tree_edges: set

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["coset", "transversal"] + [f"s{i}" for i in range(len(self.orders))])
        for c in range(self.n):
            wr.writerow([c, str(self.transversal[c])] + [self.action[c][i] for i in range(len(self.orders))])
        return buf.getvalue()


def coset_table(orders, a: CyclicAssignment) -> CosetTable:
    """Coset table with a breadth-first (shortest, then lowest generator) Schreier transversal."""
    orders = tuple(orders)
    if len(orders) != len(a.images):
        raise InvalidInput("one image per factor is required")
    if not a.generates():
        raise NonGenerating("the images do not generate the cyclic group")
    for i, n_i in enumerate(orders):
        if (n_i * a.images[i]) % a.n:
            raise InvalidInput(f"factor {i} of order {n_i} cannot map to {a.images[i]} mod {a.n}")
    n = a.n
    action = [[(c + a.images[i]) % n for i in range(len(orders))] for c in range(n)]
    transversal: list = [None] * n
    transversal[0] = FreeProductWord.identity(orders)
    tree = set()
    queue = [0]
    for c in queue:
        for i in range(len(orders)):
            d = action[c][i]
            if transversal[d] is None:
                transversal[d] = transversal[c] * FreeProductWord.generator(orders, i)
                tree.add((c, i))
                queue.append(d)
    return CosetTable(n, orders, action, transversal, tree)


@dataclass
class KernelBasis:
    """Free basis of the kernel, with the bookkeeping needed to rewrite into it."""

    table: CosetTable
    words: list[FreeProductWord]
    # Schreier generator (coset, factor) -> list of signed basis indices (1-based)
    expansion: dict

    @property
    def rank(self) -> int:
        return len(self.words)

    def rewrite(self, w: FreeProductWord) -> list[int]:
        """Express a kernel word in the free basis (signed 1-based letters)."""
        c = 0
        out: list[int] = []
        for i, e in w.syllables:
            for _ in range(e):
                out.extend(self.expansion[(c, i)])
                c = self.table.action[c][i]
        if c != 0:
            raise InvalidInput("word is not in the kernel")
        return free_reduce(out)


def _check_free(orders, a: CyclicAssignment):
    for i, n_i in enumerate(orders):
        if a.image_order(i) != n_i:
            raise NonFreeKernel(
                f"factor {i} maps to an element of order {a.image_order(i)} < {n_i}; the kernel has torsion"
            )


def kernel_basis(orders, a: CyclicAssignment) -> KernelBasis:
    """Reidemeister-Schreier with Tietze elimination of the cyclic relators."""
    orders = tuple(orders)
    table = coset_table(orders, a)
    _check_free(orders, a)
    n = table.n
    gens = {}
    for c in range(n):
        for i in range(len(orders)):
            if (c, i) in table.tree_edges:
                continue
            d = table.action[c][i]
            gens[(c, i)] = table.transversal[c] * FreeProductWord.generator(orders, i) * table.transversal[d].inverse()
    # each relator s_i^{n_i} conjugated by T_c gives a cycle of Schreier generators
    # whose product is trivial; remove the last non-tree generator of each cycle
    eliminated = {}
    for i, n_i in enumerate(orders):
        seen = set()
        for c0 in range(n):
            if c0 in seen:
                continue
            cycle = []
            c = c0
            for _ in range(n_i):
                seen.add(c)
                cycle.append((c, i))
                c = table.action[c][i]
            victim = max(k for k, edge in enumerate(cycle) if edge not in table.tree_edges)
            eliminated[cycle[victim]] = cycle[victim + 1:] + cycle[:victim]
    basis_keys = [k for k in sorted(gens) if k not in eliminated]
    index = {k: j + 1 for j, k in enumerate(basis_keys)}
    expansion = {}
    for c in range(n):
        for i in range(len(orders)):
            key = (c, i)
            if key in table.tree_edges:
                expansion[key] = []
            elif key in index:
                expansion[key] = [index[key]]
    for key, rest in eliminated.items():
        # key * (rest in order) = 1  =>  key = (rest)^-1
        letters = []
        for k in rest:
            letters.extend(expansion[k])
        expansion[key] = [-x for x in reversed(letters)]
    words = [word_reduce(gens[k]) for k in basis_keys]
    return KernelBasis(table, words, expansion)


def kernel_generators_rs(orders, a: CyclicAssignment) -> list[FreeProductWord]:
    return kernel_basis(orders, a).words


def rs_rank_formula(orders, n: int) -> int:
    """Euler-characteristic count 1 + n (k - 1 - sum 1/n_i) for a torsion-free kernel."""
    k = len(orders)
    return n * k - (n - 1) - sum(n // o for o in orders)


def free_reduce(letters) -> list[int]:
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return out


def stallings_is_whole_group(words: list[list[int]], rank: int) -> bool:
    """Do these words (signed 1-based letters) generate the free group of given rank?

    Builds the bouquet of loops, folds it, and checks that the result is the
    rose with one vertex and every letter.
    """
    if rank == 0:
        return True
    parent: dict[int, int] = {}

    def find(v):
        while parent.get(v, v) != v:
            parent[v] = parent.get(parent[v], parent[v])
            v = parent[v]
        return v

    out_edges: dict[int, dict[int, int]] = {0: {}}
    pending: list[tuple[int, int, int]] = []
    nxt = 1
    for w in words:
        w = free_reduce(w)
        if not w:
            continue
        v = 0
        for j, x in enumerate(w):
            if j == len(w) - 1:
                u = 0
            else:
                u = nxt
                nxt += 1
                out_edges[u] = {}
            pending.append((v, x, u))
            v = u

    def add(v, x, u):
        v, u = find(v), find(u)
        for a, lab, b in ((v, x, u), (u, -x, v)):
            tgt = out_edges[a].get(lab)
            if tgt is None:
                out_edges[a][lab] = b
            elif find(tgt) != find(b):
                stack.append((find(tgt), find(b)))

    stack: list[tuple[int, int]] = []
    for v, x, u in pending:
        add(v, x, u)
        while stack:
            a, b = stack.pop()
            a, b = find(a), find(b)
            if a == b:
                continue
            parent[b] = a
            moved = out_edges.pop(b)
            for lab, tgt in moved.items():
                t = out_edges[a].get(lab)
                if t is None:
                    out_edges[a][lab] = tgt
                elif find(t) != find(tgt):
                    stack.append((find(t), find(tgt)))
    root = find(0)
    live = {find(v) for v in out_edges}
    if live != {root}:
        return False
    labels = {lab for lab in out_edges[root]}
    return labels == {s * j for j in range(1, rank + 1) for s in (1, -1)}


def generates_kernel(words: list[FreeProductWord], orders, a: CyclicAssignment) -> bool:
    """True iff the given kernel words generate the whole kernel."""
    kb = kernel_basis(orders, a)
    for w in words:
        if hom_image(w, a):
            return False
    return stallings_is_whole_group([kb.rewrite(w) for w in words], kb.rank)


def enumerate_words(orders, max_len: int):
    """All reduced words with 1..max_len syllables, shortest first."""
    orders = tuple(orders)
    k = len(orders)
    for length in range(1, max_len + 1):
        for factors in _factor_sequences(k, length):
            for exps in itertools.product(*(range(1, orders[i]) for i in factors)):
                yield FreeProductWord(orders, tuple(zip(factors, exps)))


def _factor_sequences(k: int, length: int):
    if length == 0:
        yield ()
        return
    for head in _factor_sequences(k, length - 1):
        for i in range(k):
            if not head or head[-1] != i:
                yield head + (i,)


def enumerate_kernel_words(orders, a: CyclicAssignment, max_len: int):
    """Reduced words of the kernel with 1..max_len syllables."""
    orders = tuple(orders)
    for length in range(1, max_len + 1):
        for factors in _factor_sequences(len(orders), length):
            *head, last = factors
            ranges = [range(1, orders[i]) for i in head]
            for exps in itertools.product(*ranges):
                partial = sum(e * a.images[i] for i, e in zip(head, exps)) % a.n
                for e in range(1, orders[last]):
                    if (partial + e * a.images[last]) % a.n == 0:
                        yield FreeProductWord(orders, tuple(zip(factors, exps + (e,))))


def has_finite_order(w: FreeProductWord, bound: int) -> bool:
    """Brute force: does some power w^k, 1 <= k <= bound, reduce to the identity?"""
    if w.is_identity():
        return True
    power = w
    for _ in range(bound):
        if power.is_identity():
            return True
        power = power * w
    return False


def torsion_scan(orders, a: CyclicAssignment | None, max_len: int) -> bool:
    """True if no non-trivial element of length <= max_len has finite order.

    With ``a`` given the scan runs over the kernel of ``a``; with ``a=None``
    it runs over the whole free product.
    """
    orders = tuple(orders)
    if max_len < 1:
        raise InvalidInput("length bound must be at least 1")
    bound = math.lcm(*orders)
    words = enumerate_words(orders, max_len) if a is None else enumerate_kernel_words(orders, a, max_len)
    for w in words:
        if has_finite_order(w, bound):
            return False
    return True


def cyclic_reduction(w: FreeProductWord) -> tuple[FreeProductWord, FreeProductWord]:
    """Write w = u c u^-1 with c cyclically reduced; returns (u, c)."""
    syl = list(w.syllables)
    lo, hi = 0, len(syl) - 1
    while hi - lo >= 1 and syl[lo][0] == syl[hi][0]:
        i = syl[lo][0]
        total = (syl[lo][1] + syl[hi][1]) % w.orders[i]
        if hi - lo == 1:
            core = ((i, total),) if total else ()
            return FreeProductWord(w.orders, tuple(syl[:lo])), FreeProductWord(w.orders, core)
        if total == 0:
            lo += 1
            hi -= 1
        else:
            # absorb the tail into the head syllable; conjugate by the head
            u = FreeProductWord(w.orders, tuple(syl[: lo + 1]))
            rest = u.inverse() * w * u
            return u, rest
    return FreeProductWord(w.orders, tuple(syl[:lo])), FreeProductWord(w.orders, tuple(syl[lo : hi + 1]))


def conjugate_into_factor(w: FreeProductWord, max_conj_len: int = 6):
    """A conjugator u (length <= max_conj_len) with u^-1 w u in a single factor, else None."""
    u, c = cyclic_reduction(w)
    if len(c) <= 1 and len(u) <= max_conj_len:
        if (u.inverse() * w * u).syllables == c.syllables:
            return u
    return None


def conjugacy_spot_check(orders, max_len: int = 6, max_conj_len: int = 6) -> bool:
    """Every finite-order element up to max_len is conjugate into a factor."""
    bound = math.lcm(*orders)
    for w in enumerate_words(orders, max_len):
        if has_finite_order(w, bound) and conjugate_into_factor(w, max_conj_len) is None:
            return False
    return True


def word_to_matrix(w: FreeProductWord, rep):
    """Evaluate a word under one matrix per factor (anything with @ and **)."""
    if not rep:
        raise InvalidInput("representation must supply a matrix per factor")
    out = None
    for i, e in w.syllables:
        m = rep[i] ** e
        out = m if out is None else out @ m
    if out is None:
        return rep[0] ** 0
    return out
