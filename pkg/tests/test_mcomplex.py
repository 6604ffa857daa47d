import pytest
from hypothesis import given, strategies as st

from cruxkh.exactalg import Matrix, ZZ, QQ, HomologyGroup
from cruxkh import mcomplex as mc


def scalar(v):
    return Matrix.from_dense([[v]])


def test_sign_rho_examples():
    assert mc.sign_rho((1, 0), 0) == 1
    assert mc.sign_rho((0, 1), 0) == -1
    assert mc.sign_lambda((1, 0), 1) == -1


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=5), st.data())
def test_sign_rho_squares_to_one(alpha, data):
    a = data.draw(st.integers(0, len(alpha) - 1))
    assert mc.sign_rho(alpha, a) ** 2 == 1


def square(p, q, r, s):
    """(0,0) -p-> (1,0) -r-> (1,1) and (0,0) -q-> (0,1) -s-> (1,1)."""
    objects = {(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1}
    diffs = {((0, 0), 0): scalar(p), ((1, 0), 1): scalar(r),
             ((0, 0), 1): scalar(q), ((0, 1), 0): scalar(s)}
    return mc.MultiComplex(("a", "b"), objects, diffs)


def test_identity_square_total():
    t = mc.tot(square(1, 1, 1, 1))
    c = t.complex
    assert c.dims == {0: 1, 1: 2, 2: 1}
    assert (c.diff(1) @ c.diff(0)).is_zero()
    d0 = c.diff(0).to_dense()
    d1 = c.diff(1).to_dense()
    # column order follows the block layout
    order = [al for al, _, _ in t.blocks[1]]
    assert sorted(order) == [(0, 1), (1, 0)]
    signs0 = {al: d0[off][0] for al, off, _ in t.blocks[1]}
    signs1 = {al: d1[0][off] for al, off, _ in t.blocks[1]}
    assert signs0 == {(1, 0): 1, (0, 1): 1}
    assert signs1 == {(1, 0): 1, (0, 1): -1}
    assert not c.homology(ZZ)


def test_noncommuting_square_rejected():
    with pytest.raises(mc.CommutationFailure):
        square(1, 1, 1, 2).check()


def test_empty_directions():
    m = mc.MultiComplex((), {(): 3}, {})
    c = mc.tot(m).complex
    assert c.dims == {0: 3}


def test_one_fold_roundtrip():
    c = mc.ChainComplex({0: 1, 1: 1}, {0: scalar(2)})
    back = mc.tot(mc.one_fold(c)).complex
    assert back.dims == c.dims and back.diff(0) == c.diff(0)


def test_shift_involution():
    m = square(2, 3, 3, 2)
    back = m.shift(0, 1).shift(0, -1)
    assert back.objects == m.objects
    assert all(back.diff(al, a) == m.diff(al, a) for (al, a) in m.diffs)


def test_truncations_give_column():
    m = square(1, 1, 1, 1)
    col = m.truncate_ge(0, 1).truncate_le(0, 1)
    assert set(col.objects) == {(1, 0), (1, 1)}


def test_shift_total_sign():
    m = square(2, 3, 3, 2)
    a = mc.tot(m).complex
    b = mc.tot(m.shift(1, 1)).complex
    assert b.dims == {i + 1: n for i, n in a.dims.items()}
    assert a.homology(ZZ) == {i - 1: h for i, h in b.homology(ZZ).items()}


def test_cone_of_identity_acyclic():
    c = mc.ChainComplex({0: 1})
    assert not mc.cone(mc.identity_map(c)).homology(ZZ)
    assert mc.homology_iso(mc.identity_map(c), QQ)


def test_cone_of_zero():
    x = mc.ChainComplex({0: 1})
    y = mc.ChainComplex({0: 2})
    f = mc.ChainMap(x, y, {0: Matrix.zero(2, 1)})
    h = mc.cone(f).homology(ZZ)
    assert h == {0: HomologyGroup(2), -1: HomologyGroup(1)}


def test_cone_of_two():
    x = mc.ChainComplex({0: 1})
    f = mc.ChainMap(x, x, {0: scalar(2)})
    h = mc.cone(f).homology(ZZ)
    assert h == {0: HomologyGroup(0, (2,))}
    assert not mc.cone(f).homology(QQ)


def test_chain_map_check():
    x = mc.ChainComplex({0: 1, 1: 1}, {0: scalar(1)})
    bad = mc.ChainMap(x, x, {0: scalar(1), 1: scalar(2)})
    with pytest.raises(mc.NotAChainMap):
        bad.check()


def test_not_a_complex():
    c = mc.ChainComplex({0: 1, 1: 1, 2: 1}, {0: scalar(1), 1: scalar(1)})
    with pytest.raises(mc.NotAComplex):
        c.check()
    with pytest.raises(mc.NotAComplex):
        mc.ChainComplex({0: 1, 1: 2}, {0: scalar(1)})


def test_cone_decomposition_one_direction():
    c = mc.ChainComplex({0: 1, 1: 1}, {0: scalar(3)})
    dec = mc.cone_decomposition(mc.one_fold(c), 0, 1)
    assert dec.phi_hat.comp(1) == scalar(3)


@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4))
def test_total_of_commuting_square(u, v, w1, w2):
    m = square(u * v, u * w1, w1 * w2, v * w2)
    m.check()
    t = mc.tot(m)
    c = t.complex
    assert (c.diff(1) @ c.diff(0)).is_zero()
    for a0 in (0, 1):
        for r in (0, 1):
            dec = mc.cone_decomposition(m, a0, r)
            assert dec.cone.homology(ZZ) == c.homology(ZZ)


def test_graded_labels_and_pieces():
    c = mc.ChainComplex({0: 2, 1: 1}, {0: Matrix.from_dense([[1, 0]])}, {0: [1, 3], 1: [1]})
    c.check()
    assert c.qdegrees() == [1, 3]
    assert c.bigraded_homology(ZZ) == {(0, 3): HomologyGroup(1)}
    with pytest.raises(mc.NotAComplex):
        mc.ChainComplex({0: 2, 1: 1}, {0: Matrix.from_dense([[0, 1]])}, {0: [1, 3], 1: [1]}).check()
