import pytest
from hypothesis import given, strategies as st

from cruxkh import diagram as dg
from cruxkh import smoothing as sm
from cruxkh.diagram import TWIST_DOUBLE


def test_local_pictures():
    assert [sm.local_picture("dbl", a) for a in (-2, -1, 0, 1)] == ["W", "V", "V", "W"]
    assert [sm.local_picture("neg", a) for a in (-1, 0)] == ["W", "V"]
    assert [sm.local_picture("pos", a) for a in (0, 1)] == ["V", "W"]
    with pytest.raises(sm.OutOfRange):
        sm.local_picture("pos", -1)
    with pytest.raises(sm.OutOfRange):
        sm.local_picture("dbl", 2)


def test_in_range():
    g = dg.twist_family(0)
    assert sm.in_range(g, {0: -1, 1: 0, 2: -2})
    assert not sm.in_range(g, {0: 1, 1: 0, 2: 0})
    assert not sm.in_range(g, {0: 0, 1: 0, 2: -3})


def test_resolution_count():
    g = dg.twist_family(2)
    assert len(list(sm.resolutions(g))) == 2 ** 4 * 4


def test_unknot_one_circle():
    assert sm.smooth(dg.unknot(), {}).count == 1


def test_trefoil_circle_counts():
    t = dg.trefoil("left")
    assert sm.smooth(t, {i: 0 for i in t.ids}).count == 2
    assert sm.smooth(t, {i: -1 for i in t.ids}).count == 3


def test_twist_zero_v_smoothing():
    g = dg.twist_family(0)
    s = sm.smooth(g, {0: 0, 1: 0, TWIST_DOUBLE: 0})
    assert s.count == 2
    assert not sm.is_crux(g, {0: 0, 1: 0})[0]


def test_every_edge_on_one_circle():
    d = dg.twist_family(3)
    for alpha in sm.resolutions(d):
        s = sm.smooth(d, alpha)
        seen = [e for c in s.circles for e in c]
        assert sorted(seen) == d.edges()


def test_kink_saddle_is_merge():
    sd = sm.saddle(dg.kink("pos"), {0: 0}, 0)
    assert sd.kind == "merge" and sd.src_count == 2 and sd.tgt_count == 1


def test_hopf_saddle_is_merge():
    h = dg.hopf("pos")
    assert sm.saddle(h, {i: 0 for i in h.ids}, h.ids[0]).kind == "merge"


def test_double_point_phi_step_is_not_a_saddle():
    g = dg.twist_family(0)
    with pytest.raises(sm.OutOfRange):
        sm.saddle(g, {0: 0, 1: 0, TWIST_DOUBLE: -1}, TWIST_DOUBLE)


@pytest.mark.parametrize("d", [dg.trefoil("right"), dg.twist_family(1), dg.twist_knot(3)])
def test_saddles_change_circle_count_by_one(d):
    for alpha in sm.resolutions(d):
        s0 = sm.smooth(d, alpha)
        for v in d.vertices:
            nxt = dict(alpha)
            nxt[v.id] += 1
            if not sm.in_range(d, nxt):
                continue
            if v.kind == "dbl" and alpha[v.id] == -1:
                continue
            s1 = sm.smooth(d, nxt)
            assert abs(s0.count - s1.count) == 1
            sd = sm.saddle(d, alpha, v.id)
            assert sd.kind == ("merge" if s1.count < s0.count else "split")


def test_link_gradings():
    t = dg.trefoil("right")
    g = sm.gradings(t, {i: 1 for i in t.ids})
    assert (g.i, g.q_alpha, g.w_tilde) == (3, 3, 3)


def test_double_point_quantum_shift():
    g = dg.twist_family(0)
    gr = sm.gradings(g, {0: 0, 1: 0, TWIST_DOUBLE: -1})
    assert gr.i == -1 and gr.q_alpha == -2
    assert sm.gradings(g, {0: 0, 1: 0, TWIST_DOUBLE: -2}).q_alpha == -3


def test_kink_gradings():
    g = sm.gradings(dg.kink("pos"), {0: 1})
    assert (g.w_tilde, g.i, g.q_alpha) == (1, 1, 1)


def test_gradings_out_of_range():
    with pytest.raises(sm.OutOfRange):
        sm.gradings(dg.kink("pos"), {0: -1})


@pytest.mark.parametrize("r", range(6))
def test_twist_crux_set_has_three(r):
    maps = sm.crux_maps(dg.twist_family(r))
    assert len(maps) == 3
    for a in maps:
        assert all(a[k] == -1 for k in a if k > TWIST_DOUBLE)


def test_twist_crux_set_even_pattern():
    maps = sm.crux_maps(dg.twist_family(0))
    assert sorted((a[0], a[1]) for a in maps) == [(-1, -1), (-1, 0), (0, -1)]


def test_reducible_has_no_crux():
    d, c0 = dg.connected_sum_crossing(dg.trefoil("left"), dg.trefoil("right"), "neg")
    assert sm.crux_maps(dg.make_double(d, c0)) == []


def test_not_singular():
    with pytest.raises(sm.NotSingular):
        sm.crux_maps(dg.trefoil())
    two = dg.make_double(dg.make_double(dg.trefoil(), 0), 1)
    with pytest.raises(sm.NotSingular):
        sm.crux_maps(two)


def test_crux_arcs_partition_circle():
    g = dg.twist_family(2)
    for a in sm.crux_maps(g):
        info = sm.crux_info(g, a)
        circle = info.smoothing.circles[info.circle]
        assert info.top | info.bottom == circle
        assert not info.top & info.bottom
        v = g.vertex(TWIST_DOUBLE)
        assert v.out_left in info.top and v.in_right in info.bottom


@given(st.permutations(range(4)))
def test_crux_relabel_equivariant(perm):
    g = dg.twist_family(1)
    vm = dict(zip(g.ids, [10 + p for p in perm]))
    h = dg.relabel(g, vm)
    mapped = sorted(tuple(sorted((vm[k], v) for k, v in a.items())) for a in sm.crux_maps(g))
    got = sorted(tuple(sorted(a.items())) for a in sm.crux_maps(h))
    assert mapped == got
