"""Magic-unitary models: construction, verification, states, and flatness."""
from fractions import Fraction

import pytest

from conftest import pg
from magicmodels.errors import NotQuasiTransitive, ShapeMismatch
from magicmodels.groups import FinAbelian, Perm, PermGroup
from magicmodels.magic import (
    DualWordReference,
    MagicModel,
    StateOnWords,
    bichon_build,
    block_projection,
    convolution_idempotency,
    dual_group_stationarity,
    fixed_point_matrix,
    haar_word_classical,
    orbits_from_source,
    quasi_flat_check,
    regular_rep,
    single_fiber,
    stationarity_check,
    verify_magic,
)
from magicmodels.matrices import CMatrix, scalars_equal

F = Fraction


def flat_fiber(group, family, x):
    """Permutation-matrix fiber grid of the translation model at point x."""
    n = group.degree
    ids = [[None] * n for _ in range(n)]
    for j in range(1, n + 1):
        for k, s in enumerate(family):
            i = s(x(j))
            ids[i - 1][j - 1] = k
    zero = CMatrix.zeros(n, n)
    grid = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            k = ids[i][j]
            if k is None:
                grid[i][j] = zero
            else:
                rows = [[1 if (a == b == k) else 0 for b in range(n)]
                        for a in range(n)]
                grid[i][j] = CMatrix.exact(rows)
    return grid


def translation_model(group, family):
    grids = [flat_fiber(group, family, x) for x in group.elements]
    n = group.degree
    npts = len(grids)
    return MagicModel(
        n, n, [str(x) for x in group.elements],
        [F(1, npts)] * npts,
        [[tuple(g[i][j] for g in grids) for j in range(n)] for i in range(n)],
    )


@pytest.fixture(scope="module")
def m2():
    return bichon_build([2], [CMatrix.exact([[0, 1], [1, 0]])])


def test_order_two_block_entries_exact(m2):
    p = CMatrix.exact([[F(1, 2), F(1, 2)], [F(1, 2), F(1, 2)]])
    q = CMatrix.exact([[F(1, 2), F(-1, 2)], [F(-1, 2), F(1, 2)]])
    assert m2.entry(0, 0)[0] == p
    assert m2.entry(0, 1)[0] == q
    assert m2.entry(1, 0)[0] == q
    assert m2.entry(1, 1)[0] == p
    assert verify_magic(m2).passed


def test_magic_rows_sum_to_identity_with_unit_traces(m2):
    for model in (m2, bichon_build([3], [CMatrix.exact(
            [[0, 0, 1], [1, 0, 0], [0, 1, 0]])])):
        n, dim = model.n, model.dim
        for a in range(model.n_points):
            for i in range(n):
                row = model.entries[i][0][a]
                for j in range(1, n):
                    row = row + model.entries[i][j][a]
                assert row == CMatrix.identity(dim)
            total = sum(model.entries[i][j][a].ntrace() for i in range(n)
                        for j in range(n))
            assert total == n


def test_verify_magic_flags_non_projection_entry(m2):
    half_i = CMatrix.exact([[F(1, 2), 0], [0, F(1, 2)]])
    broken = MagicModel(2, 2, ("pt",), (F(1),), [
        [(half_i,), (m2.entry(0, 1)[0],)],
        [(m2.entry(1, 0)[0],), (m2.entry(1, 1)[0],)],
    ])
    rep = verify_magic(broken)
    assert not rep.passed
    assert any(w["kind"] == "not_projection" and w["row"] == 1 and w["col"] == 1
               for w in rep.witnesses)


def test_quasi_flat_for_dual_block_sizes(m2):
    orb = orbits_from_source([2])
    assert orb.blocks == ((1, 2),)
    assert quasi_flat_check(m2, orb).passed


def test_cyclic_shift_block_is_circulant_rank_one():
    u3 = CMatrix.exact([[0, 0, 1], [1, 0, 0], [0, 1, 0]])
    m3 = bichon_build([3], [u3])
    assert verify_magic(m3).passed
    for i in range(3):
        for j in range(3):
            assert m3.entry(i, j)[0].rank() == 1
            assert m3.entry(i, j)[0] == m3.entry(0, (j - i) % 3)[0]


def test_two_block_model_orbits_and_dual_stationarity():
    klein = FinAbelian([2, 2])
    reg = regular_rep(klein)
    m22 = bichon_build([2, 2], [reg[(1, 0)], reg[(0, 1)]])
    assert verify_magic(m22).passed
    orb = orbits_from_source(m22)
    assert orb.blocks == ((1, 2), (3, 4))
    assert orb.lower_bound
    assert orbits_from_source([2, 2]).blocks == ((1, 2), (3, 4))
    assert dual_group_stationarity(klein, reg).passed


def test_dual_reference_stationarity_order_two(m2):
    ref = DualWordReference.from_block_generators(FinAbelian([2]), [((1,), 2)])
    st = stationarity_check(ref, m2, word_len=3)
    assert st.passed, st.witnesses[:2]


@pytest.fixture(scope="module")
def m4():
    r4 = CMatrix.exact([[0, 0, 0, 1], [1, 0, 0, 0],
                        [0, 1, 0, 0], [0, 0, 1, 0]])
    return bichon_build([4], [r4])


def test_dual_reference_state_matches_model_state(m4):
    ref = DualWordReference.from_block_generators(FinAbelian([4]), [((1,), 4)])
    s_model = StateOnWords.from_model(m4, 2)
    s_dual = StateOnWords.from_dual(ref, 2)
    for w in s_model.words_by_length():
        assert scalars_equal(s_model.table[w], s_dual.table[w]), w


def test_classical_cyclic_reference_accepts_rotation_model(m4):
    c4 = pg(4, [(1, 2, 3, 4)])
    st = stationarity_check(c4, m4, word_len=2)
    assert st.passed
    assert st.details.get("single_point_flatness") is True


def test_haar_word_values_on_symmetric_group(s3):
    assert haar_word_classical(s3, [(1, 1)]) == F(1, 3)
    assert haar_word_classical(s3, [(1, 1), (2, 2)]) == F(1, 6)
    assert haar_word_classical(s3, [(1, 1), (2, 1)]) == 0


def test_fixed_point_matrix_transitive_groups(d4):
    c4 = pg(4, [(1, 2, 3, 4)])
    s4 = pg(4, [(1, 2)], [(1, 2, 3, 4)])
    j4 = CMatrix.exact([[F(1, 4)] * 4 for _ in range(4)])
    for g in (c4, d4, s4):
        q, rep = fixed_point_matrix(g)
        assert rep.passed
        assert q == j4


def test_fixed_point_matrix_orbit_blocks(klein6):
    q, rep = fixed_point_matrix(klein6)
    assert rep.passed
    assert q == block_projection(orbits_from_source(klein6), 6)


def test_fixed_point_matrix_from_model(m2):
    q, rep = fixed_point_matrix(m2)
    assert rep.passed
    assert q == CMatrix.exact([[F(1, 2)] * 2] * 2)


def test_translation_model_certifies(klein4):
    fam = list(klein4.elements)
    assert len(fam) == 4
    model = translation_model(klein4, fam)
    assert verify_magic(model).passed
    assert quasi_flat_check(model, orbits_from_source(klein4)).passed
    st = stationarity_check(klein4, model, word_len=2)
    assert st.passed, st.witnesses[:3]
    assert convolution_idempotency(StateOnWords.from_model(model, 2)).passed


@pytest.fixture(scope="module")
def rotation_model():
    d4 = pg(4, [(1, 2, 3, 4)], [(1, 3)])
    rot = [d4.identity]
    r = Perm.from_cycles(4, [(1, 2, 3, 4)])
    for _ in range(3):
        rot.append(rot[-1] * r)
    return d4, rot, translation_model(d4, rot)


def test_averaged_rotation_model_is_stationary(rotation_model):
    d4, _, model = rotation_model
    assert verify_magic(model).passed
    st = stationarity_check(d4, model, word_len=2)
    assert st.passed, st.witnesses[:3]


def test_identity_fiber_not_stationary_but_idempotent(rotation_model):
    d4, _, model = rotation_model
    idx = list(d4.elements).index(d4.identity)
    fib = single_fiber(model, idx)
    st = stationarity_check(d4, fib, word_len=2)
    assert not st.passed
    w = st.witnesses[0]
    assert w["word"] == "u[1,1] u[2,2]"
    assert w["model"] == "1/4" and w["reference"] == "1/8"
    assert convolution_idempotency(StateOnWords.from_model(fib, 2)).passed


def test_reflection_fiber_fails_idempotency(rotation_model):
    d4, rot, model = rotation_model
    idx = next(i for i, x in enumerate(d4.elements) if x not in rot)
    fib = single_fiber(model, idx)
    assert not stationarity_check(d4, fib, word_len=2).passed
    conv = convolution_idempotency(StateOnWords.from_model(fib, 2))
    assert not conv.passed
    w = conv.witnesses[0]
    assert w["word"] == "u[1,1] u[2,2]" and w["convolution"] == "1/4"


def test_group_state_is_idempotent(s3):
    assert convolution_idempotency(StateOnWords.from_group(s3, 3, 2)).passed


def test_stationary_state_is_idempotent(m2, m4):
    for model in (m2, m4):
        assert convolution_idempotency(
            StateOnWords.from_model(model, 2)).passed


def test_quasi_flat_rejects_full_rank_entry():
    i2 = CMatrix.identity(2)
    z = CMatrix.zeros(2, 2)
    idmodel = MagicModel(2, 2, ("pt",), (F(1),),
                         [[(i2,), (z,)], [(z,), (i2,)]])
    qf = quasi_flat_check(idmodel, orbits_from_source([2]))
    assert not qf.passed
    assert qf.witnesses[0]["rank"] == 2


def test_orbit_source_rejects_non_group_input():
    with pytest.raises((TypeError, NotQuasiTransitive, ShapeMismatch,
                        ValueError)):
        orbits_from_source("nonsense")
