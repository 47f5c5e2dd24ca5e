import random
from fractions import Fraction

import pytest

from magicmodels.cyclotomic import zeta
from magicmodels.errors import (
    ModeMismatch, NotFiniteOrder, NotUnitary, ShapeMismatch,
)
from magicmodels.matrices import (
    CMatrix, FnMatrix, scalars_equal, spectral_multiplicities,
    spectral_projection,
)


def shift(n):
    rows = [[0] * n for _ in range(n)]
    for j in range(n):
        rows[(j + 1) % n][j] = 1
    return CMatrix.exact(rows)


def test_construction_and_entry():
    m = CMatrix.exact([[1, Fraction(1, 2)], [0, zeta(3)]])
    assert m.rows == 2 and m.cols == 2 and m.mode == "exact"
    assert m.entry(0, 1) == Fraction(1, 2)
    assert CMatrix.identity(3).is_identity()
    assert CMatrix.zeros(2, 3).is_zero()


def test_mode_mixing_rejected():
    a = CMatrix.exact([[1]])
    b = CMatrix.floating([[1.0]])
    with pytest.raises(ModeMismatch):
        a * b
    with pytest.raises(ModeMismatch):
        a + b


def test_shape_checks():
    a = CMatrix.exact([[1, 0]])
    with pytest.raises(ShapeMismatch):
        a + CMatrix.exact([[1], [0]])
    with pytest.raises(ShapeMismatch):
        a * a


def test_arithmetic_and_adjoint():
    s = shift(3)
    assert s.power(3).is_identity()
    assert (s * s.adjoint()).is_identity()
    z = CMatrix.exact([[zeta(8)]])
    assert z.adjoint().entry(0, 0) == zeta(8, 7)
    a = CMatrix.exact([[1, 2], [3, 4]])
    b = CMatrix.exact([[0, 1], [1, 0]])
    assert (a * b).entry(0, 0) == 2
    assert (a - a).is_zero()
    assert (-a + a).is_zero()
    assert a.scale(Fraction(1, 2)).entry(1, 1) == 2


def test_kron_and_blocks():
    a = CMatrix.exact([[1, 0], [0, -1]])
    b = CMatrix.exact([[0, 1], [1, 0]])
    k = a.kron(b)
    assert k.rows == 4
    assert k.entry(0, 1) == 1 and k.entry(2, 3) == -1
    blk = CMatrix.from_blocks([[a, CMatrix.zeros(2, 2)],
                               [CMatrix.zeros(2, 2), b]])
    assert blk.rows == 4 and blk.entry(2, 3) == 1


def test_trace_and_ntrace():
    s = shift(4)
    assert s.trace() == 0
    assert CMatrix.identity(4).ntrace() == 1
    assert CMatrix.diagonal([1, 2, 3]).trace() == 6


def test_projection_rank_equals_trace():
    # exact projections: rank must equal trace
    rng = random.Random(11)
    for n in (2, 3, 4):
        for _ in range(20):
            cut = rng.randint(0, n)
            diag = [1] * cut + [0] * (n - cut)
            rng.shuffle(diag)
            p = CMatrix.diagonal(diag)
            u = shift(n)
            q = u * p * u.adjoint()
            assert q.is_projection()
            assert q.rank() == q.trace()


def test_rank_exact_and_float():
    m = CMatrix.exact([[1, 1], [1, 1]])
    assert m.rank() == 1
    f = CMatrix.floating([[1.0, 1.0], [1.0, 1.0 + 1e-13]])
    assert f.rank(1e-9) == 1
    assert f.rank(1e-16) == 2


def test_unitary_and_self_adjoint_predicates():
    f = CMatrix.exact([[Fraction(1, 2), Fraction(1, 2)],
                       [Fraction(1, 2), Fraction(1, 2)]])
    assert f.is_projection() and f.is_self_adjoint() and not f.is_unitary()
    assert shift(5).is_unitary()
    d = CMatrix.diagonal([zeta(3), zeta(3, 2)])
    assert d.is_unitary() and d.is_diagonal()


def test_spectral_projection_partition():
    # spectral idempotents: orthogonal projections summing to identity
    for k in (2, 3, 4, 6, 12):
        u = shift(k)
        projs = [spectral_projection(u, k, a) for a in range(k)]
        total = projs[0]
        for p in projs[1:]:
            total = total + p
        assert total.is_identity()
        for a in range(k):
            assert projs[a].is_projection()
            for b in range(a + 1, k):
                assert (projs[a] * projs[b]).is_zero()


def test_spectral_multiplicities_values():
    assert spectral_multiplicities(shift(4), 4) == (1, 1, 1, 1)
    assert spectral_multiplicities(CMatrix.identity(3), 3) == (3, 0, 0)
    d = CMatrix.diagonal([1, -1, -1])
    assert spectral_multiplicities(d, 2) == (1, 2)


def test_spectral_preconditions():
    with pytest.raises(NotUnitary):
        spectral_multiplicities(CMatrix.exact([[2]]), 2)
    with pytest.raises(NotFiniteOrder):
        spectral_multiplicities(CMatrix.exact([[zeta(3)]]), 2)


def test_scalars_equal_mixed():
    assert scalars_equal(Fraction(1, 2), Fraction(1, 2))
    assert scalars_equal(zeta(4) * zeta(4), Fraction(-1))
    assert scalars_equal(0.5, Fraction(1, 2), 1e-12)
    assert not scalars_equal(Fraction(1, 2), Fraction(1, 3))


def test_to_float_agreement():
    m = CMatrix.exact([[zeta(3), Fraction(1, 7)], [0, 1]])
    f = m.to_float()
    assert f.mode == "float"
    assert f.close_to(m.to_float(), 0)
    assert abs(f.entry(0, 1) - 1 / 7) < 1e-15


def test_fn_matrix_integration():
    half = Fraction(1, 2)
    fm = FnMatrix(("a", "b"), (half, half),
                  (CMatrix.exact([[1]]), CMatrix.exact([[3]])))
    assert fm.integrate().entry(0, 0) == 2
    assert fm.integrate_ntrace() == 2
    prod = fm.mul(fm)
    assert prod.integrate().entry(0, 0) == 5
    assert fm.adjoint().fiber(1).entry(0, 0) == 3


def test_fn_matrix_point_mismatch():
    half = Fraction(1, 2)
    a = FnMatrix(("a",), (Fraction(1),), (CMatrix.exact([[1]]),))
    b = FnMatrix(("a", "b"), (half, half),
                 (CMatrix.exact([[1]]), CMatrix.exact([[1]])))
    with pytest.raises(ShapeMismatch):
        a.mul(b)
