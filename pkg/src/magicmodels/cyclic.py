"""Cyclic matrix models: cycle-fill entries over a finite group with an
order-K automorphism, half-liberation relation checks, the semidirect-product
stationarity certificate, and the K-symmetry conjugation invariant.
"""
from __future__ import annotations

from fractions import Fraction

from .cyclotomic import Cyc, zeta
from .errors import (
    Inconsistent,
    InvalidAutomorphism,
    ModeMismatch,
    NotRepresentation,
    NotUnitary,
    ShapeMismatch,
)
from .groups import AutoMap, semidirect
from .magic import CheckReport, FiberModel
from .matrices import CMatrix, scalars_equal

__all__ = [
    "CyclicModel",
    "CyclicModelData",
    "abelian_rep",
    "build_cyclic_model",
    "cycle_fill",
    "semidirect_stationarity",
    "verify_half_liberation",
    "verify_k_symmetry",
]


def cycle_fill(xs):
    """Fill the standard K-cycle with x_1, ..., x_K: row r carries x_r in
    column r-1 (mod K), so row 1 carries x_1 in the last column.  Accepts
    scalars or same-shaped CMatrix blocks."""
    xs = list(xs)
    k = len(xs)
    if k < 1:
        raise ValueError("need at least one element")
    if isinstance(xs[0], CMatrix):
        d, mode = xs[0].rows, xs[0].mode
        for x in xs:
            if not isinstance(x, CMatrix) or x.rows != d or x.cols != d:
                raise ShapeMismatch("blocks must be square of equal size")
            if x.mode != mode:
                raise ModeMismatch("blocks must share a mode")
        zero = CMatrix.zeros(d, d, mode)
        grid = [[xs[r] if c == (r - 1) % k else zero for c in range(k)]
                for r in range(k)]
        return CMatrix.from_blocks(grid)
    rows = [[xs[r] if c == (r - 1) % k else 0 for c in range(k)]
            for r in range(k)]
    if any(isinstance(x, (float, complex)) for x in xs):
        return CMatrix.floating([[complex(v) for v in row] for row in rows])
    return CMatrix.exact(rows)


class CyclicModelData:
    """A finite group L, a unitary representation v given on every element,
    and an automorphism of order dividing K."""

    def __init__(self, group, rep: dict, auto: AutoMap, k: int):
        if k < 1:
            raise ValueError("K must be positive")
        if not auto.power(k).is_identity():
            raise InvalidAutomorphism(f"automorphism order does not divide {k}")
        self.group = group
        self.auto = auto
        self.k = k
        self.rep = dict(rep)
        elements = list(group.elements)
        missing = [g for g in elements if g not in self.rep]
        if missing:
            raise NotRepresentation(f"no matrix assigned to {missing[0]!r}")
        first = self.rep[elements[0]]
        self.dim = first.rows
        self.mode = first.mode
        for g in elements:
            m = self.rep[g]
            if m.rows != self.dim or m.cols != self.dim:
                raise ShapeMismatch("representation matrices differ in size")
            if m.mode != self.mode:
                raise ModeMismatch("representation matrices differ in mode")
            if not m.is_unitary():
                raise NotUnitary(f"matrix at {g!r} is not unitary")
        for a in elements:
            for b in elements:
                if self.rep[group.mul(a, b)] != self.rep[a] * self.rep[b]:
                    raise NotRepresentation(
                        f"v({a!r})v({b!r}) differs from v of the product")


def abelian_rep(group, generator_images) -> dict:
    """Representation of a FinAbelian group from one unitary per factor:
    exponent tuple (a_1, ..., a_r) maps to the product of U_i^a_i."""
    images = list(generator_images)
    if len(images) != len(group.factors):
        raise ShapeMismatch("need one image per cyclic factor")
    rep = {}
    for g in group.elements:
        m = CMatrix.identity(images[0].rows, images[0].mode)
        for a, u in zip(g, images):
            m = m * u.power(a)
        rep[g] = m
    return rep


class CyclicModel(FiberModel):
    """Fibers are K x K cycle-fill matrices; row r of the (i, j) entry at
    point g carries the (i, j) coordinate of v(sigma^r(g))."""


def build_cyclic_model(data: CyclicModelData) -> CyclicModel:
    elements = list(data.group.elements)
    n, k = data.dim, data.k
    weights = [Fraction(1, len(elements))] * len(elements)
    powers = [data.auto.power(t + 1) for t in range(k)]
    entries = []
    for i in range(n):
        row = []
        for j in range(n):
            fibers = []
            for g in elements:
                vals = [data.rep[powers[r](g)].entry(i, j) for r in range(k)]
                fibers.append(cycle_fill(vals) if data.mode == "exact"
                              else cycle_fill(vals).to_float())
            row.append(tuple(fibers))
        entries.append(row)
    model = CyclicModel(n, k, [str(g) for g in elements], weights, entries)
    model.k = k
    for x in range(model.n_points):
        big = model.assembled(x)
        if not big.is_unitary():
            raise Inconsistent("assembled fiber is not unitary")
        conj = CMatrix.from_blocks([
            [model.entries[i][j][x].adjoint() for j in range(n)]
            for i in range(n)
        ])
        if not conj.is_unitary():
            raise Inconsistent("entrywise adjoint fiber is not unitary")
    return model


def verify_half_liberation(model: FiberModel, tol=None) -> CheckReport:
    """Per fiber: U and its entrywise adjoint are unitary; every product
    a b* and a* b of entries is diagonal; those products all commute; and
    when every entry of the fiber is self-adjoint, abc = cba on all entry
    triples."""
    n = model.n
    witnesses = []
    checked = 0
    for x in range(model.n_points):
        big = model.assembled(x)
        checked += 1
        if not big.is_unitary(tol):
            witnesses.append({"kind": "not_unitary", "point": model.labels[x]})
        conj = CMatrix.from_blocks([
            [model.entries[i][j][x].adjoint() for j in range(n)]
            for i in range(n)
        ])
        checked += 1
        if not conj.is_unitary(tol):
            witnesses.append({"kind": "conjugate_not_unitary",
                              "point": model.labels[x]})
        flat = [(i, j, model.entries[i][j][x])
                for i in range(n) for j in range(n)]
        prods = []
        for (i1, j1, a) in flat:
            for (i2, j2, b) in flat:
                for tag, m in (("ab*", a * b.adjoint()), ("a*b", a.adjoint() * b)):
                    checked += 1
                    if not m.is_diagonal(tol):
                        witnesses.append({
                            "kind": "not_diagonal", "form": tag,
                            "left": (i1 + 1, j1 + 1), "right": (i2 + 1, j2 + 1),
                            "point": model.labels[x],
                        })
                    prods.append(m)
        for a in range(len(prods)):
            for b in range(a + 1, len(prods)):
                checked += 1
                if not (prods[a] * prods[b]).close_to(prods[b] * prods[a], tol):
                    witnesses.append({"kind": "products_do_not_commute",
                                      "pair": (a, b), "point": model.labels[x]})
        if all(m.is_self_adjoint(tol) for _, _, m in flat):
            for (i1, j1, a) in flat:
                for (i2, j2, b) in flat:
                    for (i3, j3, c) in flat:
                        checked += 1
                        if not (a * b * c).close_to(c * b * a, tol):
                            witnesses.append({
                                "kind": "abc_cba",
                                "triple": ((i1 + 1, j1 + 1), (i2 + 1, j2 + 1),
                                           (i3 + 1, j3 + 1)),
                                "point": model.labels[x],
                            })
    return CheckReport("half_liberation", not witnesses, checked, tuple(witnesses))


def _rho_fiber(data: CyclicModelData, g, i: int, h) -> CMatrix:
    """Fiber at h of the image of the basis element delta_g tau^i: row r
    carries [h = sigma^(-r)(g)] on the cyclic diagonal c = r - i."""
    k = data.k
    rows = [[0] * k for _ in range(k)]
    for r in range(1, k + 1):
        val = 1 if data.auto.power(-r)(g) == h else 0
        if val:
            c = (r - 1 - i) % k
            rows[r - 1][c] = 1
    return CMatrix.exact(rows)


def semidirect_stationarity(data: CyclicModelData) -> CheckReport:
    """The basis delta_g tau^i of functions on L x| Z_K, multiplied with the
    crossed-product structure constants, maps to cyclic-diagonal matrix
    functions on L.  Certifies that the map is a *-homomorphism and that the
    normalized trace-average of each image equals the group integral."""
    group = data.group
    k = data.k
    sd = semidirect(group, data.auto, k)
    elements = list(group.elements)
    basis = [(g, i) for g in elements for i in range(k)]
    fibers = {b: {h: _rho_fiber(data, b[0], b[1], h) for h in elements}
              for b in basis}
    witnesses = []
    checked = 0

    def mul_basis(b1, b2):
        (g, i), (h, j) = b1, b2
        if h != data.auto.power(-i)(g):
            return None
        return (g, (i + j) % k)

    def star_basis(b):
        g, i = b
        return (data.auto.power(-i)(g), (-i) % k)

    for b1 in basis:
        for b2 in basis:
            checked += 1
            prod = mul_basis(b1, b2)
            for h in elements:
                lhs = fibers[b1][h] * fibers[b2][h]
                rhs = (CMatrix.zeros(k, k) if prod is None else fibers[prod][h])
                if lhs != rhs:
                    witnesses.append({"kind": "not_multiplicative",
                                      "left": str(b1), "right": str(b2),
                                      "point": str(h)})
                    break
    for b in basis:
        checked += 1
        bs = star_basis(b)
        for h in elements:
            if fibers[b][h].adjoint() != fibers[bs][h]:
                witnesses.append({"kind": "star_mismatch", "element": str(b),
                                  "point": str(h)})
                break
    for b in basis:
        checked += 1
        g, i = b
        total = None
        for h in elements:
            t = fibers[b][h].ntrace()
            total = t if total is None else total + t
        model_side = total * Fraction(1, len(elements))
        haar = None
        for (x, t) in sd.elements:
            val = zeta(k, (t * i) % k) if x == g else 0
            haar = val if haar is None else haar + val
        haar_side = haar * Fraction(1, sd.order)
        if not scalars_equal(model_side, haar_side):
            witnesses.append({"kind": "not_stationary", "element": str(b),
                              "model": str(model_side), "haar": str(haar_side)})
    return CheckReport("semidirect_stationarity", not witnesses, checked,
                       tuple(witnesses))


def verify_k_symmetry(model: FiberModel, k: int | None = None,
                      tol=None) -> CheckReport:
    """Conjugation by diag(1, zeta_K, ..., zeta_K^(K-1)) must multiply every
    fiber of every entry by zeta_K."""
    if k is None:
        k = model.dim
    if k != model.dim:
        raise ShapeMismatch("fiber dimension does not match K")
    if model.mode == "exact":
        d_entries = [zeta(k, r) for r in range(k)]
        factor = zeta(k, 1)
    else:
        d_entries = [complex(zeta(k, r).to_complex()) for r in range(k)]
        factor = complex(zeta(k, 1).to_complex())
    dmat = CMatrix(model.mode,
                   [[d_entries[r] if r == c else 0 for c in range(k)]
                    for r in range(k)])
    dinv = dmat.adjoint()
    witnesses = []
    checked = 0
    for i in range(model.n):
        for j in range(model.n):
            for x in range(model.n_points):
                checked += 1
                f = model.entries[i][j][x]
                if not (dmat * f * dinv).close_to(f.scale(factor), tol):
                    witnesses.append({"row": i + 1, "col": j + 1,
                                      "point": model.labels[x]})
    return CheckReport("k_symmetry", not witnesses, checked, tuple(witnesses))
