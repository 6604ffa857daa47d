import json

import pytest
from hypothesis import given, strategies as st

from cruxkh import diagram as dg
from cruxkh.jones import kauffman_jones


def test_free_loop_unknot():
    d = dg.parse('{"vertices": [], "free_loops": 1}')
    assert d.vertices == () and d.free_loops == 1
    assert d.components() == 1


def test_single_kink_parses():
    d = dg.parse('{"vertices": [{"id": 0, "kind": "pos", "ports": [0, 1, 1, 0]}], "free_loops": 0}')
    s = d.stats()
    assert (s.n_plus, s.n_minus, s.n_double) == (1, 0, 0)
    assert s.w_tilde == 1


def test_duplicate_out_port():
    text = json.dumps({"vertices": [{"id": 0, "kind": "pos", "ports": [0, 1, 2, 2]}], "free_loops": 0})
    with pytest.raises(dg.OrientationInconsistent):
        dg.parse(text)


def test_duplicate_in_port():
    text = json.dumps({"vertices": [{"id": 0, "kind": "neg", "ports": [3, 3, 0, 1]}], "free_loops": 0})
    with pytest.raises(dg.OrientationInconsistent):
        dg.parse(text)


def test_dangling_edge():
    text = json.dumps({"vertices": [{"id": 0, "kind": "pos", "ports": [0, 1, 1, 2]}], "free_loops": 0})
    with pytest.raises(dg.DanglingEdge):
        dg.parse(text)


@pytest.mark.parametrize("text", [
    "not json",
    "[]",
    '{"free_loops": 0}',
    '{"vertices": [{"id": 0, "kind": "cross", "ports": [0, 1, 1, 0]}]}',
    '{"vertices": [{"id": 0, "kind": "pos", "ports": [0, 1, 1]}]}',
    '{"vertices": [{"id": 0, "kind": "pos", "ports": [0, -1, -1, 0]}]}',
    '{"vertices": [], "free_loops": -1}',
    '{"vertices": [{"kind": "pos", "ports": [0, 1, 1, 0]}]}',
])
def test_malformed(text):
    with pytest.raises(dg.MalformedInput):
        dg.parse(text)


def test_error_hierarchy():
    assert issubclass(dg.OrientationInconsistent, dg.MalformedInput)
    assert issubclass(dg.DanglingEdge, dg.MalformedInput)


GENERATED = [dg.unknot(2), dg.kink("pos"), dg.kink("neg", "left"), dg.hopf("pos"), dg.trefoil("left"),
             dg.twist_family(2), dg.twist_knot(3), dg.braid_closure([1, 2, 1, -2], 3, doubles=(3,))]


@pytest.mark.parametrize("d", GENERATED)
def test_serialize_roundtrip(d):
    text = dg.serialize(d)
    back = dg.parse(text)
    assert dg.serialize(back) == text
    assert dg.canonical(back) == dg.canonical(d)


@pytest.mark.parametrize("d", GENERATED)
def test_generated_diagrams_are_planar(d):
    assert dg.is_planar(d)


def test_load(tmp_path):
    p = tmp_path / "t.json"
    p.write_text(dg.serialize(dg.trefoil()), encoding="utf-8")
    assert dg.load(p) == dg.parse(dg.serialize(dg.trefoil()))


@pytest.mark.parametrize("r", range(7))
def test_twist_family_stats(r):
    s = dg.twist_family(r).stats()
    assert s.n_double == 1
    assert s.crossings == r + 2
    assert s.w_tilde == s.n_double + s.n_plus - s.n_minus


def test_twist_family_zero():
    s = dg.twist_family(0).stats()
    assert (s.n_plus, s.n_minus, s.n_double) == (0, 2, 1)
    d1 = dg.twist_family(0, "negative")
    assert len(d1.crossings) == 3 and not d1.doubles


def test_twist_family_one_counts():
    # with the clasp sign chosen so that the negative resolution is the
    # figure-eight, G(1) has one negative and two positive crossings
    s = dg.twist_family(1).stats()
    assert (s.n_plus, s.n_minus, s.n_double) == (2, 1, 1)


def test_twist_knots_identified_by_jones():
    assert kauffman_jones(dg.twist_knot(0)) == kauffman_jones(dg.unknot())
    assert kauffman_jones(dg.twist_knot(1)) == kauffman_jones(dg.trefoil("left"))
    fig8 = kauffman_jones(dg.twist_knot(2))
    assert fig8 == kauffman_jones(dg.mirror(dg.twist_knot(2)))


@pytest.mark.parametrize("r", range(6))
def test_twist_knots_are_knots(r):
    assert dg.twist_knot(r).components() == 1
    assert dg.twist_family(r).components() == 1


def test_resolve_double_gives_D1():
    g = dg.twist_family(0)
    assert dg.resolve_double(g, dg.TWIST_DOUBLE, "negative") == dg.twist_family(0, "negative")
    assert dg.twist_family(0, "negative") == dg.twist_knot(1)


def test_make_double_roundtrip():
    g = dg.twist_family(3)
    v = dg.TWIST_DOUBLE
    assert dg.make_double(dg.resolve_double(g, v, "positive"), v) == g
    assert dg.make_double(dg.resolve_double(g, v, "negative"), v) == g


def test_wrong_vertex_kind():
    d = dg.kink("pos")
    with pytest.raises(dg.WrongVertexKind):
        dg.resolve_double(d, 0, "negative")
    with pytest.raises(dg.WrongVertexKind):
        dg.make_double(dg.make_double(d, 0), 0)


def test_mirror_involution():
    d = dg.twist_family(2)
    assert dg.mirror(dg.mirror(d)) == d
    m = dg.mirror(dg.trefoil("left")).stats()
    assert (m.n_plus, m.n_minus) == (3, 0)


def test_components():
    assert dg.hopf().components() == 2
    assert dg.unknot(3).components() == 3
    assert dg.trefoil().components() == 1


def test_disjoint_union_and_sum():
    u = dg.disjoint_union(dg.trefoil("left"), dg.hopf("pos"))
    assert u.components() == 3 and len(u.vertices) == 5
    d, c0 = dg.connected_sum_crossing(dg.trefoil("left"), dg.trefoil("right"), "neg")
    assert d.vertex(c0).kind == "neg"
    assert d.components() == 1 and len(d.vertices) == 7


def test_reidemeister_variants_unknot():
    vs = dg.reidemeister_variants(dg.unknot())
    kinds = {v.vertices[0].kind for v in vs if len(v.vertices) == 1}
    assert kinds == {"pos", "neg"}


def test_reidemeister_variants_trefoil():
    t = dg.trefoil("left")
    vs = dg.reidemeister_variants(t)
    assert any(len(v.vertices) == 4 for v in vs)
    assert any(len(v.vertices) == 5 for v in vs)
    target = kauffman_jones(t)
    for v in vs:
        dg.validate(v)
        assert dg.is_planar(v)
        assert kauffman_jones(v) == target


def test_r3_on_braid():
    d = dg.braid_closure([1, 2, 1, 2], 3)
    faces = dg.r3_candidates(d)
    moved = [m for m in (dg.r3_move(d, f) for f in faces) if m is not None]
    assert moved
    for m in moved:
        assert len(m.vertices) == len(d.vertices)
        assert kauffman_jones(m) == kauffman_jones(d)


@given(st.lists(st.sampled_from([1, -1, 2, -2]), min_size=1, max_size=6))
def test_braid_closures_validate(word):
    d = dg.braid_closure(word, 3)
    assert dg.is_planar(d)
    assert dg.parse(dg.serialize(d)) == dg.parse(dg.serialize(d))
    assert len(d.vertices) == len(word)


@given(st.integers(0, 5), st.sampled_from(["keep", "positive", "negative"]))
def test_twist_family_valid(r, res):
    d = dg.twist_family(r, res)
    assert dg.is_planar(d)
    assert len(d.vertices) == r + 3
