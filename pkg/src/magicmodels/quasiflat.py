"""Sparse-Latin-family search, the classical quasi-flat model construction,
uniform-generator certification, and trace-vector eigenvalue criteria.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    Inconsistent,
    InvalidFamily,
    NotBijective,
    NotFiniteOrder,
    NotInGroup,
    NotQuasiTransitive,
    NotUnitary,
    NotWellDefined,
    ShapeMismatch,
)
from .groups import Perm, PermGroup, abelianization, extend_automorphism, orbit_blocks
from .magic import (
    CheckReport,
    MagicModel,
    bichon_build,
    orbits_from_source,
    quasi_flat_check,
    stationarity_check,
    verify_magic,
)
from .matrices import CMatrix, scalars_equal, spectral_multiplicities

__all__ = [
    "LatinFamily",
    "NoFamily",
    "SparseLatinSquare",
    "TraceVector",
    "classical_model_from_family",
    "derangement_scan",
    "latin_family_search",
    "quasiflat_dual_check",
    "trace_vector_check",
    "uniform_check",
]


@dataclass(frozen=True)
class LatinFamily:
    """Members sigma_1, ..., sigma_K of G whose values at every point are
    pairwise distinct."""

    group: PermGroup
    size: int
    members: tuple

    def __post_init__(self):
        if len(self.members) != self.size:
            raise InvalidFamily("member count differs from the declared size")
        degree = self.group.degree
        for m in range(1, degree + 1):
            seen = set()
            for s in self.members:
                v = s(m)
                if v in seen:
                    raise InvalidFamily(f"members collide at point {m}")
                seen.add(v)


@dataclass(frozen=True)
class NoFamily:
    """Certificate that an exhaustive backtracking search found no family."""

    group_order: int
    size: int
    explored: int
    exhaustive: bool = True


class SparseLatinSquare:
    """N x N array with entry (i, j) = k when sigma_k(j) = i, else None."""

    def __init__(self, cells):
        self.cells = tuple(tuple(row) for row in cells)
        n = len(self.cells)
        if any(len(row) != n for row in self.cells):
            raise ShapeMismatch("cells must be square")

    @property
    def n(self) -> int:
        return len(self.cells)

    @classmethod
    def from_family(cls, fam: LatinFamily) -> "SparseLatinSquare":
        n = fam.group.degree
        cells = [[None] * n for _ in range(n)]
        for k, s in enumerate(fam.members, start=1):
            for j in range(1, n + 1):
                cells[s(j) - 1][j - 1] = k
        return cls(cells)

    def to_family(self, group: PermGroup, size: int) -> LatinFamily:
        n = self.n
        images = [[None] * n for _ in range(size)]
        for i in range(n):
            for j in range(n):
                k = self.cells[i][j]
                if k is not None:
                    images[k - 1][j] = i + 1
        members = []
        for k, imgs in enumerate(images, start=1):
            if any(v is None for v in imgs):
                raise InvalidFamily(f"symbol {k} misses a column")
            p = Perm(imgs)
            if p not in group:
                raise InvalidFamily(f"symbol {k} is not a group element")
            members.append(p)
        return LatinFamily(group, size, tuple(members))


def derangement_scan(group: PermGroup) -> tuple:
    """All elements without fixed points, in enumeration order."""
    return tuple(s for s in group.elements if not s.fixed_points())


def latin_family_search(group: PermGroup, size: int):
    """Lexicographically first family found by backtracking over the group's
    elements in enumeration order, normalized to sigma_1 = identity; or an
    exhaustive NoFamily certificate.  The explored count is the number of
    candidate placements tested."""
    blocks = orbit_blocks(group)
    sizes = {len(b) for b in blocks}
    if sizes != {size}:
        raise NotQuasiTransitive(
            f"orbit sizes {sorted(sizes)} do not all equal {size}")
    elements = list(group.elements)
    degree = group.degree
    explored = 0
    chosen = [0]

    def conflicts(candidate) -> bool:
        for m in range(1, degree + 1):
            v = candidate(m)
            for idx in chosen:
                if elements[idx](m) == v:
                    return True
        return False

    def extend(start: int):
        nonlocal explored
        if len(chosen) == size:
            return True
        for c in range(start, len(elements)):
            explored += 1
            if conflicts(elements[c]):
                continue
            chosen.append(c)
            if extend(c + 1):
                return True
            chosen.pop()
        return False

    found = extend(1)
    if found:
        fam = LatinFamily(group, size,
                          tuple(elements[c] for c in chosen))
    else:
        fam = NoFamily(group.order, size, explored)
    if size == 2:
        has_derangement = bool(derangement_scan(group))
        if has_derangement != isinstance(fam, LatinFamily):
            raise Inconsistent(
                "size-2 family existence disagrees with the derangement scan")
    return fam


def classical_model_from_family(group: PermGroup, fam: LatinFamily) -> MagicModel:
    """Model over X = G with uniform weights: the (i, j) fiber at x is the
    diagonal unit E_kk for the unique k with sigma_k(x(j)) = i.  The result
    must certify as magic, quasi-flat, and stationary at word length 2."""
    for s in fam.members:
        if s not in group:
            raise InvalidFamily("family member outside the group")
    k_size = fam.size
    n = group.degree
    points = list(group.elements)
    units = [CMatrix.exact([[1 if (a == b == k) else 0 for b in range(k_size)]
                            for a in range(k_size)]) for k in range(k_size)]
    zero = CMatrix.zeros(k_size, k_size)
    entries = []
    for i in range(n):
        row = []
        for j in range(n):
            fibers = []
            for x in points:
                hit = zero
                target = x(j + 1)
                for k, s in enumerate(fam.members):
                    if s(target) == i + 1:
                        hit = units[k]
                        break
                fibers.append(hit)
            row.append(tuple(fibers))
        entries.append(row)
    model = MagicModel(n, k_size, [str(x) for x in points],
                       [Fraction(1, len(points))] * len(points), entries)
    if not verify_magic(model).passed:
        raise Inconsistent("family model failed the magic conditions")
    if not quasi_flat_check(model, orbits_from_source(group)).passed:
        raise Inconsistent("family model failed the rank-one conditions")
    if not stationarity_check(group, model, word_len=2).passed:
        raise Inconsistent("family model failed stationarity at length 2")
    return model


@dataclass(frozen=True)
class UniformCertificate:
    uniform: bool
    order: int | None
    count: int
    conditions: dict = field(default_factory=dict)
    first_failing: int | None = None
    abelian_factors: tuple = ()
    witnesses: tuple = ()


def uniform_check(group: PermGroup, generators) -> UniformCertificate:
    """Certify the four uniform-generator conditions: (1) the listed elements
    generate the group; (2) they share a common order K; (3) sending the i-th
    coordinate generator of Z_K^M to the class of g_i defines a surjection
    onto the abelianization; (4) every transposition of two generators
    extends to an automorphism."""
    gens = list(generators)
    m_count = len(gens)
    witnesses = []
    conditions = {}
    for g in gens:
        if g not in group:
            raise InvalidFamily("generator outside the group")
    sub = group.subgroup(gens)
    conditions[1] = sub.order == group.order
    if not conditions[1]:
        witnesses.append({"condition": 1, "generated_order": sub.order,
                          "group_order": group.order})
    orders = [g.order() for g in gens]
    common = orders[0] if orders else 1
    conditions[2] = all(o == common for o in orders)
    if not conditions[2]:
        witnesses.append({"condition": 2, "orders": orders})
    ab, proj = abelianization(group)
    images = [proj[g] for g in gens]
    well_defined = all(common % ab.element_order(img) == 0 for img in images)
    span = {ab.identity}
    frontier = [ab.identity]
    while frontier:
        cur = frontier.pop()
        for img in images:
            nxt = ab.mul(cur, img)
            if nxt not in span:
                span.add(nxt)
                frontier.append(nxt)
    surjective = len(span) == ab.order
    conditions[3] = well_defined and surjective
    if not conditions[3]:
        witnesses.append({"condition": 3, "well_defined": well_defined,
                          "image_subgroup_order": len(span),
                          "abelianization_order": ab.order})
    swap_ok = True
    swap_witness = None
    for a in range(m_count):
        for b in range(a + 1, m_count):
            swapped = list(gens)
            swapped[a], swapped[b] = swapped[b], swapped[a]
            try:
                extend_automorphism(group, swapped)
            except (NotBijective, NotInGroup, NotWellDefined):
                swap_ok = False
                swap_witness = (a + 1, b + 1)
                break
        if not swap_ok:
            break
    conditions[4] = swap_ok
    if not swap_ok:
        witnesses.append({"condition": 4, "pair": swap_witness})
    failing = [c for c in (1, 2, 3, 4) if not conditions[c]]
    return UniformCertificate(
        uniform=not failing,
        order=common if conditions[2] else None,
        count=m_count,
        conditions=conditions,
        first_failing=failing[0] if failing else None,
        abelian_factors=ab.factors,
        witnesses=tuple(witnesses),
    )


@dataclass(frozen=True)
class TraceVector:
    """The K power traces (Tr(U^a)) for a = 0, ..., K-1."""

    values: tuple

    @property
    def dimension(self):
        return self.values[0]


@dataclass(frozen=True)
class TraceReport:
    passed: bool
    trace: TraceVector
    multiplicities: tuple


def trace_vector_check(u: CMatrix, k: int, tol=None) -> TraceReport:
    """True iff the power-trace vector is (K, 0, ..., 0); cross-validated
    against all spectral multiplicities being 1."""
    if u.rows != k:
        raise ShapeMismatch(f"need a {k} x {k} matrix for order {k}")
    if not u.is_unitary(tol):
        raise NotUnitary("matrix is not unitary")
    if not u.power(k).is_identity(tol):
        raise NotFiniteOrder(f"matrix does not satisfy U^{k} = 1")
    traces = []
    p = CMatrix.identity(k, u.mode)
    for _ in range(k):
        traces.append(p.trace())
        p = p * u
    flat = scalars_equal(traces[0], k, tol) and all(
        scalars_equal(t, 0, tol) for t in traces[1:])
    mults = spectral_multiplicities(u, k, tol)
    mult_flat = all(m == 1 for m in mults)
    if flat != mult_flat:
        raise Inconsistent(
            "trace vector and spectral multiplicities disagree")
    return TraceReport(flat, TraceVector(tuple(traces)), mults)


def quasiflat_dual_check(generator_fibers, k: int, labels=None,
                         tol=None) -> CheckReport:
    """Each generator is a list of unitary fibers of order dividing K and
    dimension K.  Passes iff every fiber of every generator has flat trace
    vector; cross-validated against rank-one-ness of the per-fiber
    block-diagonal model."""
    gens = [list(fibers) for fibers in generator_fibers]
    if not gens:
        raise ShapeMismatch("need at least one generator")
    n_points = len(gens[0])
    if any(len(f) != n_points for f in gens):
        raise ShapeMismatch("generators disagree on the fiber set")
    if labels is None:
        labels = [str(x) for x in range(n_points)]
    witnesses = []
    checked = 0
    for x in range(n_points):
        fiber_flat = True
        for i, fibers in enumerate(gens):
            checked += 1
            report = trace_vector_check(fibers[x], k, tol)
            if not report.passed:
                fiber_flat = False
                witnesses.append({"generator": i + 1, "point": labels[x],
                                  "trace": [str(t) for t in report.trace.values]})
        model = bichon_build([k] * len(gens), [f[x] for f in gens], tol)
        flat = quasi_flat_check(model, orbits_from_source([k] * len(gens)), tol)
        if flat.passed != fiber_flat:
            raise Inconsistent(
                "trace vectors and model flatness disagree on a fiber")
    return CheckReport("quasiflat_dual", not witnesses, checked, tuple(witnesses))
