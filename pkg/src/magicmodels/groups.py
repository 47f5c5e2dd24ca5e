"""Finite group machinery: permutation groups, abelian groups, characters,
automorphisms, quotients and semidirect products.

Permutations act on 1-based points and compose like functions,
(s * t)(i) = s(t(i)).  Group enumeration is breadth-first from the identity
with generators applied on the right in the order given, so element order is
deterministic and the identity always comes first.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .cyclotomic import Cyc, zeta
from .errors import (
    CapExceeded,
    DegreeMismatch,
    NotBijective,
    NotInGroup,
    NotNormal,
    NotSubgroup,
    NotWellDefined,
    OrderMismatch,
)

__all__ = [
    "DEFAULT_CAP",
    "Perm",
    "PermGroup",
    "FinAbelian",
    "CharacterOf",
    "AutoMap",
    "SemidirectGroup",
    "QuotientData",
    "TableGroup",
    "abelian_dual",
    "abelian_structure",
    "abelianization",
    "commutator_subgroup",
    "extend_automorphism",
    "extend_generator_map",
    "generate",
    "is_normal",
    "orbit_blocks",
    "quotient_data",
    "semidirect",
]

DEFAULT_CAP = 20160


class Perm:
    """A permutation of {1, ..., n} stored by its tuple of images."""

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(int(x) for x in images)
        n = len(images)
        if sorted(images) != list(range(1, n + 1)):
            raise ValueError(f"not a permutation of 1..{n}: {images}")
        object.__setattr__(self, "images", images)

    def __setattr__(self, name, value):
        raise AttributeError("Perm values are immutable")

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls(range(1, degree + 1))

    @classmethod
    def from_cycles(cls, degree: int, cycles) -> "Perm":
        images = list(range(1, degree + 1))
        for cycle in cycles:
            cycle = list(cycle)
            for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                images[a - 1] = b
        return cls(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point - 1]

    def __mul__(self, other: "Perm") -> "Perm":
        if self.degree != other.degree:
            raise DegreeMismatch(f"degrees {self.degree} and {other.degree}")
        return Perm(self.images[i - 1] for i in other.images)

    def inv(self) -> "Perm":
        images = [0] * self.degree
        for i, v in enumerate(self.images):
            images[v - 1] = i + 1
        return Perm(images)

    def order(self) -> int:
        k, p = 1, self
        e = Perm.identity(self.degree)
        while p != e:
            p = p * self
            k += 1
        return k

    def fixed_points(self) -> tuple[int, ...]:
        return tuple(i + 1 for i, v in enumerate(self.images) if v == i + 1)

    def is_identity(self) -> bool:
        return all(v == i + 1 for i, v in enumerate(self.images))

    def cycles(self) -> tuple[tuple[int, ...], ...]:
        seen, out = set(), []
        for start in range(1, self.degree + 1):
            if start in seen or self(start) == start:
                continue
            cycle, point = [], start
            while point not in seen:
                seen.add(point)
                cycle.append(point)
                point = self(point)
            out.append(tuple(cycle))
        return tuple(out)

    def __eq__(self, other):
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        cycles = self.cycles()
        if not cycles:
            return "e"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)


def generate(generators, degree: int | None = None, cap: int = DEFAULT_CAP):
    """Closure of the generators under composition, breadth-first from the
    identity.  Returns (elements, words) where words[i] is the sequence of
    generator indices whose right-to-left product is elements[i]."""
    generators = list(generators)
    if degree is None:
        if not generators:
            raise ValueError("need a degree when there are no generators")
        degree = generators[0].degree
    for g in generators:
        if g.degree != degree:
            raise DegreeMismatch("generators act on different point counts")
    e = Perm.identity(degree)
    elements, words = [e], [()]
    index = {e: 0}
    frontier = [0]
    while frontier:
        next_frontier = []
        for i in frontier:
            x = elements[i]
            for gi, g in enumerate(generators):
                y = x * g
                if y not in index:
                    if len(elements) >= cap:
                        raise CapExceeded(f"more than {cap} elements")
                    index[y] = len(elements)
                    elements.append(y)
                    words.append(words[i] + (gi,))
                    next_frontier.append(index[y])
        frontier = next_frontier
    return elements, words


class PermGroup:
    """A finite permutation group with a fixed, deterministic element order."""

    def __init__(self, degree: int, generators, elements, words):
        self.degree = degree
        self.generators = tuple(generators)
        self.elements = tuple(elements)
        self.words = tuple(words)
        self._index = {g: i for i, g in enumerate(self.elements)}

    @classmethod
    def from_generators(cls, generators, degree: int | None = None,
                        cap: int = DEFAULT_CAP) -> "PermGroup":
        generators = [g if isinstance(g, Perm) else Perm(g) for g in generators]
        if degree is None and not generators:
            raise ValueError("need a degree when there are no generators")
        deg = degree if degree is not None else generators[0].degree
        elements, words = generate(generators, deg, cap)
        return cls(deg, generators, elements, words)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Perm:
        return self.elements[0]

    def __contains__(self, g: Perm) -> bool:
        return g in self._index

    def __iter__(self):
        return iter(self.elements)

    def index(self, g: Perm) -> int:
        try:
            return self._index[g]
        except KeyError:
            raise NotInGroup(f"{g!r} is not in the group") from None

    def mul(self, a: Perm, b: Perm) -> Perm:
        return a * b

    def inv(self, a: Perm) -> Perm:
        return a.inv()

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(a * b == b * a for a in gens for b in gens)

    def subgroup(self, generators, cap: int = DEFAULT_CAP) -> "PermGroup":
        sub = PermGroup.from_generators(list(generators), self.degree, cap)
        for g in sub.elements:
            if g not in self:
                raise NotSubgroup(f"{g!r} is not in the ambient group")
        return sub

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, order={self.order})"


def is_normal(sub: PermGroup, ambient: PermGroup) -> bool:
    """Whether sub is a normal subgroup of ambient."""
    if sub.degree != ambient.degree:
        raise DegreeMismatch("degrees differ")
    for h in sub.elements:
        if h not in ambient:
            raise NotSubgroup(f"{h!r} is not in the ambient group")
    for g in ambient.generators:
        gi = g.inv()
        for h in sub.elements:
            if g * h * gi not in sub:
                return False
    return True


@dataclass(frozen=True)
class QuotientData:
    """Coset representatives and multiplication table for G / L."""

    representatives: tuple[Perm, ...]
    table: tuple[tuple[int, ...], ...]

    def as_table_group(self) -> "TableGroup":
        return TableGroup(self.table)


def quotient_data(ambient: PermGroup, sub: PermGroup) -> QuotientData:
    """Left coset representatives (first member of each coset in enumeration
    order, identity first) and the induced multiplication table."""
    if not is_normal(sub, ambient):
        raise NotNormal("subgroup is not normal, no quotient group")
    reps: list[Perm] = []
    coset_of: dict[Perm, int] = {}
    for g in ambient.elements:
        if g in coset_of:
            continue
        idx = len(reps)
        reps.append(g)
        for h in sub.elements:
            coset_of[g * h] = idx
    table = tuple(
        tuple(coset_of[a * b] for b in reps) for a in reps
    )
    return QuotientData(tuple(reps), table)


class TableGroup:
    """A finite group given by its multiplication table on 0..n-1 with 0 = e."""

    def __init__(self, table):
        self.table = tuple(tuple(row) for row in table)
        n = len(self.table)
        for row in self.table:
            if len(row) != n:
                raise ValueError("table is not square")
        if any(self.table[0][j] != j or self.table[j][0] != j for j in range(n)):
            raise ValueError("element 0 is not the identity")
        self.elements = tuple(range(n))
        inv = [None] * n
        for a in range(n):
            for b in range(n):
                if self.table[a][b] == 0:
                    inv[a] = b
        if any(v is None for v in inv):
            raise ValueError("table has no inverses")
        self._inv = tuple(inv)

    @classmethod
    def from_group(cls, group) -> tuple["TableGroup", list]:
        """Tabulate any group-like object; returns the table group and the
        element list aligning table indices with original elements."""
        elements = list(group.elements)
        index = {g: i for i, g in enumerate(elements)}
        table = [
            [index[group.mul(a, b)] for b in elements] for a in elements
        ]
        return cls(table), elements

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> int:
        return 0

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self._inv[a]

    def index(self, a: int) -> int:
        return a

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.table[x][a]
            k += 1
        return k

    def power(self, a: int, k: int) -> int:
        x = 0
        for _ in range(k):
            x = self.table[x][a]
        return x

    def subgroup_elements(self, gens) -> list[int]:
        seen = [0]
        known = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if y not in known:
                        known.add(y)
                        seen.append(y)
                        nxt.append(y)
            frontier = nxt
        return seen

    def quotient(self, subgroup: list[int]) -> tuple["TableGroup", list[int]]:
        """Quotient by a normal subgroup (normality is the caller's duty).
        Returns the quotient table group and the coset representatives."""
        sub = list(subgroup)
        reps: list[int] = []
        coset_of: dict[int, int] = {}
        for g in self.elements:
            if g in coset_of:
                continue
            idx = len(reps)
            reps.append(g)
            for h in sub:
                coset_of[self.table[g][h]] = idx
        table = [[coset_of[self.table[a][b]] for b in reps] for a in reps]
        return TableGroup(table), reps


class FinAbelian:
    """Direct sum of cyclic groups Z_d1 + ... + Z_dr; elements are exponent
    tuples, enumerated lexicographically."""

    def __init__(self, factors):
        self.factors = tuple(int(d) for d in factors)
        if any(d < 1 for d in self.factors):
            raise ValueError("factors must be positive")
        self.elements = tuple(itertools.product(*(range(d) for d in self.factors)))
        self._index = {g: i for i, g in enumerate(self.elements)}

    @property
    def order(self) -> int:
        n = 1
        for d in self.factors:
            n *= d
        return n

    @property
    def identity(self) -> tuple[int, ...]:
        return (0,) * len(self.factors)

    @property
    def exponent(self) -> int:
        return lcm(*self.factors) if self.factors else 1

    def mul(self, a, b):
        return tuple((x + y) % d for x, y, d in zip(a, b, self.factors))

    def inv(self, a):
        return tuple((-x) % d for x, d in zip(a, self.factors))

    def power(self, a, k: int):
        return tuple((x * k) % d for x, d in zip(a, self.factors))

    def index(self, a) -> int:
        try:
            return self._index[tuple(a)]
        except KeyError:
            raise NotInGroup(f"{a!r} is not an element") from None

    def __contains__(self, a) -> bool:
        return tuple(a) in self._index

    def __iter__(self):
        return iter(self.elements)

    def element_order(self, a) -> int:
        return lcm(*(d // gcd(x, d) for x, d in zip(a, self.factors))) if self.factors else 1

    def generator(self, i: int) -> tuple[int, ...]:
        """The i-th coordinate unit vector."""
        return tuple(1 if j == i else 0 for j in range(len(self.factors)))

    def __repr__(self):
        return f"FinAbelian{self.factors}"


@dataclass(frozen=True)
class CharacterOf:
    """A character of a FinAbelian group, given by exponents against the
    invariant factors: value(x) = zeta_n ^ (sum_i exponents[i] * x[i] * n/d_i)
    with n the group exponent."""

    group: FinAbelian
    exponents: tuple[int, ...]

    def __post_init__(self):
        if len(self.exponents) != len(self.group.factors):
            raise ValueError("exponent tuple has the wrong length")

    @property
    def modulus(self) -> int:
        return self.group.exponent

    def value(self, element) -> Cyc:
        n = self.modulus
        total = 0
        for a, x, d in zip(self.exponents, element, self.group.factors):
            total += a * x * (n // d)
        return zeta(n, total % n)

    def table(self) -> dict:
        return {g: self.value(g) for g in self.group.elements}

    def conj(self) -> "CharacterOf":
        return CharacterOf(self.group, self.group.inv(self.exponents))

    def __mul__(self, other: "CharacterOf") -> "CharacterOf":
        if other.group is not self.group and other.group.factors != self.group.factors:
            raise ValueError("characters of different groups")
        return CharacterOf(self.group, self.group.mul(self.exponents, other.exponents))

    def is_trivial(self) -> bool:
        return all(a == 0 for a in self.exponents)


def abelian_dual(group: FinAbelian) -> list[CharacterOf]:
    """All characters, in the same lexicographic order as the elements."""
    return [CharacterOf(group, exps) for exps in group.elements]


def extend_generator_map(group, generator_images, target_mul, target_identity):
    """Extend gen_i -> generator_images[i] to a map on all of group by
    breadth-first propagation along the stored generator words, then verify
    multiplicativity on the full multiplication table.

    The group must expose .elements, .words, .mul;  raises NotWellDefined if
    the assignment is inconsistent."""
    if len(generator_images) != len(group.generators):
        raise ValueError("need one image per generator")
    mapping = {}
    for element, word in zip(group.elements, group.words):
        value = target_identity
        for gi in word:
            value = target_mul(value, generator_images[gi])
        mapping[element] = value
    for a in group.elements:
        fa = mapping[a]
        for b in group.elements:
            if mapping[group.mul(a, b)] != target_mul(fa, mapping[b]):
                raise NotWellDefined("generator assignment is not multiplicative")
    return mapping


@dataclass(frozen=True)
class AutoMap:
    """An automorphism of a finite group, stored as a full element map."""

    group: object
    mapping: dict

    @classmethod
    def identity(cls, group) -> "AutoMap":
        return cls(group, {g: g for g in group.elements})

    @classmethod
    def from_function(cls, group, fn) -> "AutoMap":
        mapping = {g: fn(g) for g in group.elements}
        values = set(mapping.values())
        if len(values) != len(mapping):
            raise NotBijective("map is not injective")
        if values != set(group.elements):
            raise NotBijective("map is not onto the group")
        for a in group.elements:
            for b in group.elements:
                if mapping[group.mul(a, b)] != group.mul(mapping[a], mapping[b]):
                    raise NotWellDefined("map is not multiplicative")
        return cls(group, mapping)

    def __call__(self, element):
        return self.mapping[element]

    def compose(self, other: "AutoMap") -> "AutoMap":
        return AutoMap(self.group, {g: self.mapping[other.mapping[g]] for g in self.group.elements})

    def power(self, k: int) -> "AutoMap":
        result = AutoMap.identity(self.group)
        base = self
        if k < 0:
            base = self.inverse()
            k = -k
        while k:
            if k & 1:
                result = result.compose(base)
            base = base.compose(base)
            k >>= 1
        return result

    def inverse(self) -> "AutoMap":
        return AutoMap(self.group, {v: k for k, v in self.mapping.items()})

    def is_identity(self) -> bool:
        return all(v == k for k, v in self.mapping.items())

    def order(self) -> int:
        k, power = 1, self
        while not power.is_identity():
            power = power.compose(self)
            k += 1
            if k > len(self.mapping) ** 2:
                raise OrderMismatch("automorphism order diverges")
        return k


def extend_automorphism(group: PermGroup, generator_images) -> AutoMap:
    """Extend a generator assignment of a permutation group to an
    automorphism; raises NotWellDefined or NotBijective when impossible."""
    generator_images = list(generator_images)
    for img in generator_images:
        if img not in group:
            raise NotInGroup(f"{img!r} is not in the group")
    mapping = extend_generator_map(group, generator_images, lambda a, b: a * b,
                                   group.identity)
    if len(set(mapping.values())) != group.order:
        raise NotBijective("extension is not a bijection")
    return AutoMap(group, mapping)


class SemidirectGroup:
    """L x| Z_K for an automorphism action t . y = sigma^t(y).  Elements are
    pairs (x, t); (x, t)(y, s) = (x * sigma^t(y), t + s mod K)."""

    def __init__(self, base, auto: AutoMap, k: int):
        if k < 1:
            raise ValueError("K must be positive")
        if not auto.power(k).is_identity():
            raise OrderMismatch(f"automorphism order does not divide {k}")
        self.base = base
        self.auto = auto
        self.k = k
        self._powers = [auto.power(t) for t in range(k)]
        self.elements = tuple(
            (x, t) for x in base.elements for t in range(k)
        )
        self._index = {g: i for i, g in enumerate(self.elements)}

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self):
        return (self.base.identity, 0)

    def mul(self, a, b):
        (x, t), (y, s) = a, b
        return (self.base.mul(x, self._powers[t](y)), (t + s) % self.k)

    def inv(self, a):
        x, t = a
        mt = (-t) % self.k
        return (self._powers[mt](self.base.inv(x)), mt)

    def index(self, a) -> int:
        try:
            return self._index[a]
        except KeyError:
            raise NotInGroup(f"{a!r} is not an element") from None

    def __contains__(self, a) -> bool:
        return a in self._index

    def __iter__(self):
        return iter(self.elements)

    def element_order(self, a) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.mul(x, a)
            k += 1
        return k

    def is_abelian(self) -> bool:
        return all(
            self.mul(a, b) == self.mul(b, a)
            for a in self.elements for b in self.elements
        )

    def __repr__(self):
        return f"SemidirectGroup(|L|={len(self.base.elements)}, K={self.k})"


def semidirect(base, auto: AutoMap, k: int) -> SemidirectGroup:
    """The semidirect product of a finite group by Z_K acting through the
    given automorphism; raises OrderMismatch unless sigma^K = id."""
    return SemidirectGroup(base, auto, k)


def orbit_blocks(group: PermGroup) -> tuple[tuple[int, ...], ...]:
    """Orbits of the natural action on 1..degree, sorted by smallest point."""
    parent = list(range(group.degree + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in group.generators:
        for i in range(1, group.degree + 1):
            a, b = find(i), find(g(i))
            if a != b:
                parent[max(a, b)] = min(a, b)
    blocks: dict[int, list[int]] = {}
    for i in range(1, group.degree + 1):
        blocks.setdefault(find(i), []).append(i)
    return tuple(tuple(blocks[r]) for r in sorted(blocks))


# -- structure of finite abelian groups -------------------------------------


def _max_order_element(table: TableGroup) -> tuple[int, int]:
    best, best_order = 0, 1
    for a in table.elements:
        o = table.element_order(a)
        if o > best_order:
            best, best_order = a, o
    return best, best_order


def _abelian_basis(table: TableGroup) -> list[tuple[int, int]]:
    """Independent generators (element, order) of an abelian table group with
    orders forming a divisibility chain d1 >= d2 >= ..., each dividing the
    previous one."""
    if table.order == 1:
        return []
    a, d = _max_order_element(table)
    cyclic = [table.power(a, i) for i in range(d)]
    quotient, reps = table.quotient(cyclic)
    basis = [(a, d)]
    a_inv = table.inv(a)
    for qb, m in _abelian_basis(quotient):
        c = reps[qb]
        cm = table.power(c, m)
        # cm lies in <a>; find the discrete log and strip it off.
        t = cyclic.index(cm)
        if t % m:
            raise AssertionError("abelian basis lift failed")
        b = table.mul(c, table.power(a_inv, t // m))
        if table.element_order(b) != m:
            raise AssertionError("abelian basis lift has wrong order")
        basis.append((b, m))
    return basis


def abelian_structure(group):
    """Invariant-factor decomposition of a finite abelian group-like object.

    Returns (fin, to_tuple, from_tuple) with fin a FinAbelian whose factors
    form a divisibility chain d1 >= d2 >= ... and dicts translating between
    group elements and exponent tuples through an isomorphism."""
    table, elements = TableGroup.from_group(group)
    for a in table.elements:
        for b in table.elements:
            if table.mul(a, b) != table.mul(b, a):
                raise ValueError("group is not abelian")
    basis = _abelian_basis(table)
    factors = tuple(order for _, order in basis)
    fin = FinAbelian(factors)
    from_tuple = {}
    for exps in fin.elements:
        x = 0
        for (b, _), e in zip(basis, exps):
            x = table.mul(x, table.power(b, e))
        from_tuple[exps] = elements[x]
    if len(set(from_tuple.values())) != group_order(group):
        raise AssertionError("abelian decomposition is not bijective")
    to_tuple = {v: k for k, v in from_tuple.items()}
    return fin, to_tuple, from_tuple


def group_order(group) -> int:
    return len(group.elements)


def commutator_subgroup(group: PermGroup, cap: int = DEFAULT_CAP) -> PermGroup:
    """The commutator subgroup, computed as the normal closure of the
    generator commutators."""
    seeds = []
    seen = set()
    for a in group.generators:
        for b in group.generators:
            c = a * b * a.inv() * b.inv()
            if c not in seen:
                seen.add(c)
                seeds.append(c)
    while True:
        sub = PermGroup.from_generators([s for s in seeds if not s.is_identity()],
                                        group.degree, cap)
        new = []
        for g in group.generators:
            gi = g.inv()
            for h in sub.elements:
                c = g * h * gi
                if c not in sub and c not in seen:
                    seen.add(c)
                    new.append(c)
        if not new:
            return sub
        seeds.extend(new)


def abelianization(group: PermGroup):
    """The abelianization G / [G, G].

    Returns (fin, proj) with fin a FinAbelian and proj a dict sending each
    group element to its exponent tuple."""
    derived = commutator_subgroup(group)
    qd = quotient_data(group, derived)
    table = qd.as_table_group()
    fin, to_tuple, _ = abelian_structure(table)
    coset_of = {}
    for idx, rep in enumerate(qd.representatives):
        for h in derived.elements:
            coset_of[rep * h] = idx
    proj = {g: to_tuple[coset_of[g]] for g in group.elements}
    return fin, proj
