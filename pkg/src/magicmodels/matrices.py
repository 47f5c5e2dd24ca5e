"""Matrices over exact cyclotomic scalars, with a float fallback mode.

Exact matrices hold int, Fraction or Cyc entries and every comparison is
literal equality in the field.  Float matrices hold complex entries and every
comparison is entrywise within a tolerance (default EPS).  The two modes never
mix silently; converting is explicit via to_float().
"""
from __future__ import annotations

from fractions import Fraction
from math import sqrt

from .cyclotomic import Cyc, zeta
from .errors import (
    DivisionByZero,
    Inconsistent,
    ModeMismatch,
    NotFiniteOrder,
    NotUnitary,
    ShapeMismatch,
)

__all__ = [
    "EPS",
    "CMatrix",
    "FnMatrix",
    "scalar_conj",
    "scalar_is_zero",
    "scalar_to_complex",
    "scalars_equal",
    "spectral_multiplicities",
    "spectral_projection",
]

EPS = 1e-9

_EXACT_TYPES = (int, Fraction, Cyc)


def scalar_conj(x):
    if isinstance(x, Cyc):
        return x.conj()
    if isinstance(x, complex):
        return x.conjugate()
    return x


def scalar_is_zero(x, tol=None):
    if isinstance(x, complex):
        return abs(x) <= (EPS if tol is None else tol)
    if isinstance(x, Cyc):
        return x.is_zero()
    return x == 0


def scalars_equal(a, b, tol=None):
    if isinstance(a, complex) or isinstance(b, complex):
        return abs(complex(a) - complex(b)) <= (EPS if tol is None else tol)
    if isinstance(a, Cyc) or isinstance(b, Cyc):
        return a == b
    return a == b


def scalar_to_complex(x) -> complex:
    if isinstance(x, Cyc):
        return x.to_complex()
    return complex(x)


def _scalar_div(a, b):
    if isinstance(a, complex) or isinstance(b, complex):
        return complex(a) / complex(b)
    if isinstance(a, Cyc) or isinstance(b, Cyc):
        a = a if isinstance(a, Cyc) else Cyc.from_rational(a)
        return a / b if isinstance(b, Cyc) else a * (Fraction(1) / Fraction(b))
    if b == 0:
        raise DivisionByZero("cannot divide by zero")
    return Fraction(a) / Fraction(b)


class CMatrix:
    """A rectangular matrix in one arithmetic mode ("exact" or "float")."""

    __slots__ = ("rows", "cols", "mode", "data")

    def __init__(self, mode: str, data):
        if mode not in ("exact", "float"):
            raise ValueError(f"unknown mode {mode!r}")
        rows = tuple(tuple(r) for r in data)
        if not rows or not rows[0]:
            raise ShapeMismatch("matrices must have at least one row and column")
        width = len(rows[0])
        for r in rows:
            if len(r) != width:
                raise ShapeMismatch("ragged rows")
        if mode == "exact":
            for r in rows:
                for x in r:
                    if not isinstance(x, _EXACT_TYPES):
                        raise ModeMismatch(f"exact matrix entry of type {type(x).__name__}")
        else:
            rows = tuple(tuple(complex(x) for x in r) for r in rows)
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", width)
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "data", rows)

    def __setattr__(self, name, value):
        raise AttributeError("CMatrix values are immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def exact(cls, data) -> "CMatrix":
        return cls("exact", data)

    @classmethod
    def floating(cls, data) -> "CMatrix":
        return cls("float", data)

    @classmethod
    def zeros(cls, rows: int, cols: int, mode: str = "exact") -> "CMatrix":
        zero = 0 if mode == "exact" else 0j
        return cls(mode, [[zero] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n: int, mode: str = "exact") -> "CMatrix":
        if mode == "exact":
            return cls(mode, [[1 if i == j else 0 for j in range(n)] for i in range(n)])
        return cls(mode, [[1.0 + 0j if i == j else 0j for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, entries, mode: str = "exact") -> "CMatrix":
        entries = list(entries)
        n = len(entries)
        zero = 0 if mode == "exact" else 0j
        return cls(mode, [[entries[i] if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def from_blocks(cls, grid) -> "CMatrix":
        """Assemble a block matrix from a grid of equal-mode CMatrix blocks."""
        out_rows = []
        mode = grid[0][0].mode
        for block_row in grid:
            height = block_row[0].rows
            for b in block_row:
                if b.mode != mode:
                    raise ModeMismatch("mixed modes in block grid")
                if b.rows != height:
                    raise ShapeMismatch("inconsistent block heights")
            for r in range(height):
                row = []
                for b in block_row:
                    row.extend(b.data[r])
                out_rows.append(row)
        width = len(out_rows[0])
        for row in out_rows:
            if len(row) != width:
                raise ShapeMismatch("inconsistent block widths")
        return cls(mode, out_rows)

    # -- basic operations ---------------------------------------------------

    def entry(self, i: int, j: int):
        return self.data[i][j]

    def _check_mode(self, other: "CMatrix"):
        if self.mode != other.mode:
            raise ModeMismatch("cannot mix exact and float matrices")

    def __add__(self, other: "CMatrix") -> "CMatrix":
        self._check_mode(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeMismatch("addition needs equal shapes")
        return CMatrix(self.mode, [
            [a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.data, other.data)
        ])

    def __sub__(self, other: "CMatrix") -> "CMatrix":
        self._check_mode(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeMismatch("subtraction needs equal shapes")
        return CMatrix(self.mode, [
            [a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.data, other.data)
        ])

    def __neg__(self) -> "CMatrix":
        return CMatrix(self.mode, [[-a for a in row] for row in self.data])

    def scale(self, s) -> "CMatrix":
        if self.mode == "float":
            s = complex(s) if not isinstance(s, Cyc) else s.to_complex()
        return CMatrix(self.mode, [[s * a for a in row] for row in self.data])

    def __mul__(self, other: "CMatrix") -> "CMatrix":
        if not isinstance(other, CMatrix):
            return NotImplemented
        self._check_mode(other)
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        zero = 0 if self.mode == "exact" else 0j
        bt = list(zip(*other.data))
        out = []
        for row in self.data:
            out_row = []
            for col in bt:
                acc = zero
                for a, b in zip(row, col):
                    if not scalar_is_zero(a) and not scalar_is_zero(b):
                        acc = acc + a * b
                out_row.append(acc)
            out.append(out_row)
        return CMatrix(self.mode, out)

    def power(self, k: int) -> "CMatrix":
        if self.rows != self.cols:
            raise ShapeMismatch("powers need a square matrix")
        if k < 0:
            raise ValueError("negative powers are not supported")
        result = CMatrix.identity(self.rows, self.mode)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def adjoint(self) -> "CMatrix":
        return CMatrix(self.mode, [
            [scalar_conj(self.data[i][j]) for i in range(self.rows)]
            for j in range(self.cols)
        ])

    def transpose(self) -> "CMatrix":
        return CMatrix(self.mode, list(zip(*self.data)))

    def kron(self, other: "CMatrix") -> "CMatrix":
        self._check_mode(other)
        out = []
        for ra in self.data:
            for rb in other.data:
                out.append([a * b for a in ra for b in rb])
        return CMatrix(self.mode, out)

    def trace(self):
        if self.rows != self.cols:
            raise ShapeMismatch("trace needs a square matrix")
        total = self.data[0][0]
        for i in range(1, self.rows):
            total = total + self.data[i][i]
        return total

    def ntrace(self):
        """Trace divided by the dimension."""
        t = self.trace()
        if self.mode == "float":
            return t / self.rows
        if isinstance(t, Cyc):
            return t * Fraction(1, self.rows)
        return Fraction(t, 1) / self.rows

    def to_float(self) -> "CMatrix":
        if self.mode == "float":
            return self
        return CMatrix("float", [
            [scalar_to_complex(x) for x in row] for row in self.data
        ])

    # -- predicates ---------------------------------------------------------

    def close_to(self, other: "CMatrix", tol=None) -> bool:
        self._check_mode(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            return False
        for ra, rb in zip(self.data, other.data):
            for a, b in zip(ra, rb):
                if not scalars_equal(a, b, tol):
                    return False
        return True

    def __eq__(self, other):
        if not isinstance(other, CMatrix):
            return NotImplemented
        return self.close_to(other)

    __hash__ = None

    def is_zero(self, tol=None) -> bool:
        return all(scalar_is_zero(x, tol) for row in self.data for x in row)

    def is_identity(self, tol=None) -> bool:
        if self.rows != self.cols:
            return False
        return self.close_to(CMatrix.identity(self.rows, self.mode), tol)

    def is_diagonal(self, tol=None) -> bool:
        return all(
            scalar_is_zero(x, tol)
            for i, row in enumerate(self.data)
            for j, x in enumerate(row)
            if i != j
        )

    def is_self_adjoint(self, tol=None) -> bool:
        return self.close_to(self.adjoint(), tol)

    def is_projection(self, tol=None) -> bool:
        """Self-adjoint idempotent test."""
        if self.rows != self.cols:
            return False
        return self.is_self_adjoint(tol) and (self * self).close_to(self, tol)

    def is_unitary(self, tol=None) -> bool:
        if self.rows != self.cols:
            return False
        return (self * self.adjoint()).is_identity(tol) and (self.adjoint() * self).is_identity(tol)

    def max_abs(self) -> float:
        return max(abs(scalar_to_complex(x)) for row in self.data for x in row)

    def rank(self, tol=None) -> int:
        """Rank by Gaussian elimination; float mode zeroes entries below
        tol * rows * max|entry|."""
        work = [list(row) for row in self.data]
        if self.mode == "float":
            threshold = (EPS if tol is None else tol) * self.rows * max(self.max_abs(), 1.0)
        else:
            threshold = None
        rank = 0
        row = 0
        for col in range(self.cols):
            pivot = None
            if self.mode == "float":
                best, best_abs = None, threshold
                for r in range(row, self.rows):
                    a = abs(work[r][col])
                    if a > best_abs:
                        best, best_abs = r, a
                pivot = best
            else:
                for r in range(row, self.rows):
                    if not scalar_is_zero(work[r][col]):
                        pivot = r
                        break
            if pivot is None:
                continue
            work[row], work[pivot] = work[pivot], work[row]
            inv_head = work[row][col]
            for r in range(row + 1, self.rows):
                if self.mode == "float":
                    if abs(work[r][col]) <= threshold:
                        continue
                elif scalar_is_zero(work[r][col]):
                    continue
                factor = _scalar_div(work[r][col], inv_head)
                for c in range(col, self.cols):
                    work[r][c] = work[r][c] - factor * work[row][c]
            rank += 1
            row += 1
            if row == self.rows:
                break
        return rank

    def __repr__(self):
        body = "; ".join(
            ", ".join(repr(x) for x in row) for row in self.data
        )
        return f"CMatrix[{self.mode} {self.rows}x{self.cols}: {body}]"


def _check_spectral_pre(u: CMatrix, k: int, tol=None):
    if u.rows != u.cols:
        raise ShapeMismatch("need a square matrix")
    if k < 1:
        raise ValueError("order must be positive")
    if not u.is_unitary(tol):
        raise NotUnitary("matrix is not unitary")
    if not u.power(k).is_identity(tol):
        raise NotFiniteOrder(f"matrix does not satisfy U^{k} = 1")


def spectral_projection(u: CMatrix, k: int, a: int, tol=None) -> CMatrix:
    """Projection onto the eigenspace of zeta_k^a for a unitary with U^k = 1."""
    _check_spectral_pre(u, k, tol)
    n = u.rows
    acc = CMatrix.zeros(n, n, u.mode)
    power = CMatrix.identity(n, u.mode)
    for b in range(k):
        w = zeta(k, (-a * b) % k)
        if u.mode == "float":
            w = w.to_complex()
        acc = acc + power.scale(w)
        power = power * u
    return acc.scale(Fraction(1, k) if u.mode == "exact" else 1.0 / k)


def spectral_multiplicities(u: CMatrix, k: int, tol=None) -> tuple[int, ...]:
    """Eigenvalue multiplicities (m_0, ..., m_{k-1}) of a unitary with U^k = 1,
    where m_a counts the eigenvalue zeta_k^a."""
    _check_spectral_pre(u, k, tol)
    n = u.rows
    traces = []
    power = CMatrix.identity(n, u.mode)
    for _ in range(k):
        traces.append(power.trace())
        power = power * u
    mults = []
    for a in range(k):
        if u.mode == "exact":
            total = Cyc.from_rational(0)
            for b, t in enumerate(traces):
                total = total + zeta(k, (-a * b) % k) * t
            total = total * Fraction(1, k)
            m = total.as_int() if isinstance(total, Cyc) else None
            if m is None:
                raise Inconsistent("spectral multiplicity is not an integer")
        else:
            total = 0j
            for b, t in enumerate(traces):
                total += zeta(k, (-a * b) % k).to_complex() * t
            total /= k
            m = round(total.real)
            lim = (EPS if tol is None else tol) * n * k
            if abs(total - m) > max(lim, 1e-7):
                raise Inconsistent("spectral multiplicity is not close to an integer")
        if m < 0:
            raise Inconsistent("negative spectral multiplicity")
        mults.append(int(m))
    if sum(mults) != n:
        raise Inconsistent("spectral multiplicities do not sum to the dimension")
    return tuple(mults)


class FnMatrix:
    """A matrix-valued function on a finite weighted point set."""

    __slots__ = ("labels", "weights", "fibers")

    def __init__(self, labels, weights, fibers):
        labels = tuple(str(x) for x in labels)
        weights = tuple(Fraction(w) for w in weights)
        fibers = tuple(fibers)
        if not (len(labels) == len(weights) == len(fibers)):
            raise ShapeMismatch("labels, weights and fibers must have equal length")
        if not fibers:
            raise ShapeMismatch("need at least one point")
        shape = (fibers[0].rows, fibers[0].cols, fibers[0].mode)
        for f in fibers:
            if (f.rows, f.cols, f.mode) != shape:
                raise ShapeMismatch("fibers must share shape and mode")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "fibers", fibers)

    def __setattr__(self, name, value):
        raise AttributeError("FnMatrix values are immutable")

    @property
    def n_points(self) -> int:
        return len(self.fibers)

    @property
    def mode(self) -> str:
        return self.fibers[0].mode

    def fiber(self, x: int) -> CMatrix:
        return self.fibers[x]

    def _check_points(self, other: "FnMatrix"):
        if self.labels != other.labels or self.weights != other.weights:
            raise ShapeMismatch("point sets differ")

    def mul(self, other: "FnMatrix") -> "FnMatrix":
        self._check_points(other)
        return FnMatrix(self.labels, self.weights,
                        [a * b for a, b in zip(self.fibers, other.fibers)])

    def add(self, other: "FnMatrix") -> "FnMatrix":
        self._check_points(other)
        return FnMatrix(self.labels, self.weights,
                        [a + b for a, b in zip(self.fibers, other.fibers)])

    def adjoint(self) -> "FnMatrix":
        return FnMatrix(self.labels, self.weights, [f.adjoint() for f in self.fibers])

    def scale(self, s) -> "FnMatrix":
        return FnMatrix(self.labels, self.weights, [f.scale(s) for f in self.fibers])

    def integrate(self) -> CMatrix:
        """Weighted sum of the fibers."""
        total = self.fibers[0].scale(self.weights[0])
        for w, f in zip(self.weights[1:], self.fibers[1:]):
            total = total + f.scale(w)
        return total

    def integrate_ntrace(self):
        """Weighted average of normalized fiber traces."""
        total = None
        for w, f in zip(self.weights, self.fibers):
            term = f.ntrace() * w if f.mode == "exact" else f.ntrace() * complex(w)
            total = term if total is None else total + term
        return total

    def to_float(self) -> "FnMatrix":
        return FnMatrix(self.labels, self.weights, [f.to_float() for f in self.fibers])

    def close_to(self, other: "FnMatrix", tol=None) -> bool:
        self._check_points(other)
        return all(a.close_to(b, tol) for a, b in zip(self.fibers, other.fibers))

    def __repr__(self):
        return f"FnMatrix[{self.n_points} points, {self.fibers[0].rows}x{self.fibers[0].cols} {self.mode}]"
