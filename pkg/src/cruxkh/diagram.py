"""Oriented singular link diagrams.

A vertex stores its four edge ids in the normal form
``(in_left, in_right, out_left, out_right)`` with both strands pointing
up.  Read counter-clockwise the ports are in_right, out_right, out_left,
in_left.  At a positive crossing the strand in_left -> out_right is over,
at a negative one the strand in_right -> out_left is over.

Besides parsing and validation this module holds the generator families
(torus links T(2,n), twist knots, connected sums) and Reidemeister moves,
which work on a planar rotation-system view of the diagram.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

KINDS = ("pos", "neg", "dbl")

# counter-clockwise slot order as indices into the ports tuple
CCW = (1, 3, 2, 0)
# inverse: port index -> ccw slot
SLOT_OF_PORT = {p: s for s, p in enumerate(CCW)}


class MalformedInput(ValueError):
    pass


class OrientationInconsistent(MalformedInput):
    pass


class DanglingEdge(MalformedInput):
    pass


class WrongVertexKind(ValueError):
    pass


class NotPlanar(MalformedInput):
    pass


@dataclass(frozen=True)
class Vertex:
    id: int
    kind: str
    ports: Tuple[int, int, int, int]

    @property
    def in_left(self):
        return self.ports[0]

    @property
    def in_right(self):
        return self.ports[1]

    @property
    def out_left(self):
        return self.ports[2]

    @property
    def out_right(self):
        return self.ports[3]


@dataclass(frozen=True)
class DiagramStats:
    n_plus: int
    n_minus: int
    n_double: int

    @property
    def w_tilde(self) -> int:
        return self.n_double + self.n_plus - self.n_minus

    @property
    def crossings(self) -> int:
        return self.n_plus + self.n_minus


@dataclass(frozen=True)
class Diagram:
    vertices: Tuple[Vertex, ...] = ()
    free_loops: int = 0

    def __post_init__(self):
        validate(self)

    @property
    def ids(self) -> List[int]:
        return sorted(v.id for v in self.vertices)

    def vertex(self, vid: int) -> Vertex:
        for v in self.vertices:
            if v.id == vid:
                return v
        raise KeyError(vid)

    def stats(self) -> DiagramStats:
        kinds = [v.kind for v in self.vertices]
        return DiagramStats(kinds.count("pos"), kinds.count("neg"), kinds.count("dbl"))

    @property
    def doubles(self) -> List[int]:
        return sorted(v.id for v in self.vertices if v.kind == "dbl")

    @property
    def crossings(self) -> List[int]:
        return sorted(v.id for v in self.vertices if v.kind != "dbl")

    def edges(self) -> List[int]:
        return sorted({e for v in self.vertices for e in v.ports})

    def components(self) -> int:
        """Number of link components (free loops included)."""
        nxt = {}
        for v in self.vertices:
            il, ir, ol, orr = v.ports
            nxt[il] = orr
            nxt[ir] = ol
        seen = set()
        count = 0
        for e in nxt:
            if e in seen:
                continue
            count += 1
            while e not in seen:
                seen.add(e)
                e = nxt[e]
        return count + self.free_loops

    def with_kind(self, vid: int, kind: str) -> "Diagram":
        verts = tuple(replace(v, kind=kind) if v.id == vid else v for v in self.vertices)
        return Diagram(verts, self.free_loops)


def validate(d: Diagram) -> None:
    if not isinstance(d.free_loops, int) or d.free_loops < 0:
        raise MalformedInput("free_loops must be a non-negative integer")
    ids = set()
    ins: Dict[int, int] = {}
    outs: Dict[int, int] = {}
    for v in d.vertices:
        if v.kind not in KINDS:
            raise MalformedInput(f"vertex {v.id}: unknown kind {v.kind!r}")
        if v.id in ids:
            raise MalformedInput(f"duplicate vertex id {v.id}")
        ids.add(v.id)
        if len(v.ports) != 4:
            raise MalformedInput(f"vertex {v.id}: need 4 ports")
        for k, e in enumerate(v.ports):
            if not isinstance(e, int) or isinstance(e, bool) or e < 0:
                raise MalformedInput(f"vertex {v.id}: bad edge id {e!r}")
            table = ins if k < 2 else outs
            if e in table:
                which = "in" if k < 2 else "out"
                raise OrientationInconsistent(f"edge {e} used twice as an {which}-port")
            table[e] = v.id
    if set(ins) != set(outs):
        missing = sorted(set(ins) ^ set(outs))
        raise DanglingEdge(f"edges without both ends: {missing}")


# ---------------------------------------------------------------------------
# JSON

def parse(text: str) -> Diagram:
    try:
        obj = json.loads(text)
    except (json.JSONDecodeError, TypeError) as exc:
        raise MalformedInput(f"invalid JSON: {exc}") from exc
    return from_obj(obj)


def from_obj(obj) -> Diagram:
    if not isinstance(obj, dict) or "vertices" not in obj:
        raise MalformedInput("expected an object with a 'vertices' array")
    verts = []
    for raw in obj["vertices"]:
        try:
            vid = raw["id"]
            kind = raw["kind"]
            ports = tuple(raw["ports"])
        except (KeyError, TypeError) as exc:
            raise MalformedInput(f"bad vertex record {raw!r}") from exc
        if not isinstance(vid, int) or isinstance(vid, bool):
            raise MalformedInput(f"bad vertex id {vid!r}")
        verts.append(Vertex(vid, kind, ports))
    return Diagram(tuple(verts), obj.get("free_loops", 0))


def to_obj(d: Diagram) -> dict:
    return {
        "vertices": [{"id": v.id, "kind": v.kind, "ports": list(v.ports)}
                     for v in sorted(d.vertices, key=lambda v: v.id)],
        "free_loops": d.free_loops,
    }


def serialize(d: Diagram) -> str:
    return json.dumps(to_obj(d), sort_keys=True)


def load(path) -> Diagram:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


# ---------------------------------------------------------------------------
# double points

def resolve_double(d: Diagram, vid: int, sign: str) -> Diagram:
    if d.vertex(vid).kind != "dbl":
        raise WrongVertexKind(f"vertex {vid} is not a double point")
    if sign not in ("pos", "neg", "positive", "negative"):
        raise ValueError(f"bad sign {sign!r}")
    return d.with_kind(vid, "pos" if sign.startswith("pos") else "neg")


def make_double(d: Diagram, vid: int) -> Diagram:
    if d.vertex(vid).kind == "dbl":
        raise WrongVertexKind(f"vertex {vid} is already a double point")
    return d.with_kind(vid, "dbl")


def mirror(d: Diagram) -> Diagram:
    flip = {"pos": "neg", "neg": "pos", "dbl": "dbl"}
    return Diagram(tuple(replace(v, kind=flip[v.kind]) for v in d.vertices), d.free_loops)


def relabel(d: Diagram, vertex_map: Optional[Dict[int, int]] = None,
            edge_map: Optional[Dict[int, int]] = None) -> Diagram:
    vm = vertex_map or {}
    em = edge_map or {}
    verts = tuple(Vertex(vm.get(v.id, v.id), v.kind, tuple(em.get(e, e) for e in v.ports))
                  for v in d.vertices)
    return Diagram(verts, d.free_loops)


def canonical(d: Diagram) -> Diagram:
    """Renumber vertices 0.. and edges 0.. in order of first appearance."""
    verts = sorted(d.vertices, key=lambda v: v.id)
    vm = {v.id: i for i, v in enumerate(verts)}
    em: Dict[int, int] = {}
    for v in verts:
        for e in v.ports:
            em.setdefault(e, len(em))
    return relabel(d, vm, em)


# ---------------------------------------------------------------------------
# planar view

@dataclass
class Planar:
    """Rotation-system view: per vertex a ccw list of edge ids.

    ``tail``/``head`` map an edge to the (vertex, slot) it leaves/enters.
    ``over`` holds the over-strand slot pair for crossings; ``None`` marks a
    double point.
    """

    slots: Dict[int, List[int]] = field(default_factory=dict)
    tail: Dict[int, Tuple[int, int]] = field(default_factory=dict)
    head: Dict[int, Tuple[int, int]] = field(default_factory=dict)
    over: Dict[int, Optional[frozenset]] = field(default_factory=dict)
    free_loops: int = 0

    def other_end(self, v: int, s: int) -> Tuple[int, int]:
        e = self.slots[v][s]
        if self.tail[e] == (v, s):
            return self.head[e]
        return self.tail[e]

    def faces(self) -> List[List[Tuple[int, int]]]:
        """Faces as cycles of darts; each dart means 'walk along its edge'."""
        seen = set()
        out = []
        for v in sorted(self.slots):
            for s in range(4):
                if (v, s) in seen:
                    continue
                cyc = []
                d = (v, s)
                while d not in seen:
                    seen.add(d)
                    cyc.append(d)
                    w, q = self.other_end(*d)
                    d = (w, (q - 1) % 4)
                out.append(cyc)
        return out

    def graph_components(self) -> int:
        parent = {v: v for v in self.slots}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.tail:
            a, b = find(self.tail[e][0]), find(self.head[e][0])
            parent[a] = b
        return len({find(v) for v in self.slots})

    def is_planar(self) -> bool:
        if not self.slots:
            return True
        nv = len(self.slots)
        ne = len(self.tail)
        return nv - ne + len(self.faces()) == 2 * self.graph_components()

    def new_vertex_id(self) -> int:
        return max(self.slots, default=-1) + 1

    def new_edge_id(self) -> int:
        return max(self.tail, default=-1) + 1


def to_planar(d: Diagram) -> Planar:
    p = Planar(free_loops=d.free_loops)
    for v in d.vertices:
        p.slots[v.id] = [v.ports[k] for k in CCW]
        for k, e in enumerate(v.ports):
            end = (v.id, SLOT_OF_PORT[k])
            if k < 2:
                p.head[e] = end
            else:
                p.tail[e] = end
        if v.kind == "pos":
            p.over[v.id] = frozenset((SLOT_OF_PORT[0], SLOT_OF_PORT[3]))
        elif v.kind == "neg":
            p.over[v.id] = frozenset((SLOT_OF_PORT[1], SLOT_OF_PORT[2]))
        else:
            p.over[v.id] = None
    return p


def from_planar(p: Planar) -> Diagram:
    verts = []
    for v in sorted(p.slots):
        heads = [p.head[e] == (v, s) for s, e in enumerate(p.slots[v])]
        # a loop edge may have both ends here; recompute per slot
        heads = [p.head.get(e) == (v, s) for s, e in enumerate(p.slots[v])]
        start = None
        for s in range(4):
            if heads[s] and heads[(s + 1) % 4]:
                start = s
                break
        if start is None or heads[(start + 2) % 4] or heads[(start + 3) % 4]:
            raise OrientationInconsistent(f"vertex {v}: strands do not pass straight through")
        sl = p.slots[v]
        il, ir = sl[start], sl[(start + 1) % 4]
        orr, ol = sl[(start + 2) % 4], sl[(start + 3) % 4]
        ov = p.over[v]
        if ov is None:
            kind = "dbl"
        elif start in ov:
            kind = "pos"
        else:
            kind = "neg"
        verts.append(Vertex(v, kind, (il, ir, ol, orr)))
    return Diagram(tuple(verts), p.free_loops)


def is_planar(d: Diagram) -> bool:
    return to_planar(d).is_planar()


def _orient(slots: Dict[int, List[int]], ends: Dict[int, List[Tuple[int, int]]],
            seeds: Iterable[Tuple[int, int]]) -> Tuple[Dict, Dict]:
    """Orient undirected edges by walking strands from seed heads."""
    head: Dict[int, Tuple[int, int]] = {}
    tail: Dict[int, Tuple[int, int]] = {}
    for v, s in seeds:
        cur = (v, s)
        while True:
            e = slots[cur[0]][cur[1]]
            if e in head:
                if head[e] != cur:
                    raise OrientationInconsistent(f"edge {e} oriented both ways")
                break
            head[e] = cur
            a, b = ends[e]
            tail[e] = b if a == cur else a
            # continue through the vertex the edge came from, backwards
            w, q = tail[e]
            cur = (w, (q + 2) % 4)
    if len(head) != len(ends):
        raise OrientationInconsistent("seeds do not reach every edge")
    return tail, head


# ---------------------------------------------------------------------------
# generators

def unknot(n: int = 1) -> Diagram:
    return Diagram((), n)


def kink(sign: str = "pos", side: str = "right") -> Diagram:
    """One-crossing unknot; ``side`` picks which pair of ports carries the loop."""
    kind = "pos" if sign.startswith("pos") else "neg"
    if side == "right":
        return Diagram((Vertex(0, kind, (1, 0, 1, 0)),))
    return Diagram((Vertex(0, kind, (0, 1, 0, 1)),))


def torus2(n: int, sign: str = "pos") -> Diagram:
    """Closure of the two-strand braid sigma_1^n (unknot, Hopf link, trefoil, ...)."""
    if n < 1:
        raise ValueError("need n >= 1")
    kind = "pos" if sign.startswith("pos") else "neg"
    verts = []
    for k in range(n):
        nxt = (k + 1) % n
        # edge 2k: out_left of k -> in_left of k+1 ; 2k+1: out_right -> in_right
        verts.append(Vertex(k, kind, (2 * ((k - 1) % n), 2 * ((k - 1) % n) + 1, 2 * k, 2 * k + 1)))
    return Diagram(tuple(verts))


def braid_closure(word: Sequence[int], strands: int, doubles: Sequence[int] = ()) -> Diagram:
    """Closure of a braid word; letter +k / -k is a positive / negative
    crossing of strands k and k+1 (1-based).  Letters whose positions are
    listed in ``doubles`` become double points."""
    cur = list(range(strands))
    nxt = strands
    verts = []
    for idx, letter in enumerate(word):
        k = abs(letter) - 1
        if not 0 <= k < strands - 1 or letter == 0:
            raise ValueError(f"bad braid letter {letter}")
        kind = "dbl" if idx in doubles else ("pos" if letter > 0 else "neg")
        ol, orr = nxt, nxt + 1
        nxt += 2
        verts.append(Vertex(idx, kind, (cur[k], cur[k + 1], ol, orr)))
        cur[k], cur[k + 1] = ol, orr
    rename = {}
    loops = 0
    for pos in range(strands):
        if cur[pos] == pos:
            loops += 1
        else:
            rename[cur[pos]] = pos
    verts = [Vertex(v.id, v.kind, tuple(rename.get(e, e) for e in v.ports)) for v in verts]
    return Diagram(tuple(verts), loops)


def trefoil(handed: str = "left") -> Diagram:
    return torus2(3, "neg" if handed == "left" else "pos")


def hopf(sign: str = "pos") -> Diagram:
    return torus2(2, sign)


def _twist_planar(r: int) -> Tuple[Dict[int, List[int]], Dict[int, List[Tuple[int, int]]], Dict[str, int]]:
    # vertex ids: a=0, b=1, v=2, c_k = 2+k
    A, B, V = 0, 1, 2
    C = [None] + [2 + k for k in range(1, r + 1)]
    ang = {A: [30, 150, 210, 330], B: [30, 150, 210, 330], V: [60, 120, 240, 300]}
    for k in range(1, r + 1):
        ang[C[k]] = [60, 120, 240, 300]

    def dart(vid, a):
        return (vid, ang[vid].index(a))

    pairs = [
        (dart(A, 150), dart(V, 240)),
        (dart(A, 210), dart(B, 150)),
        (dart(A, 330), dart(B, 30)),
        (dart(B, 210), dart(V, 120)),
    ]
    if r == 0:
        pairs += [(dart(A, 30), dart(V, 300)), (dart(B, 330), dart(V, 60))]
    else:
        pairs += [(dart(A, 30), dart(C[r], 300)), (dart(B, 330), dart(C[r], 60)),
                  (dart(V, 60), dart(C[1], 120)), (dart(V, 300), dart(C[1], 240))]
        for k in range(1, r):
            pairs += [(dart(C[k], 60), dart(C[k + 1], 120)),
                      (dart(C[k], 300), dart(C[k + 1], 240))]
    slots = {vid: [None] * 4 for vid in ang}
    ends = {}
    for e, (x, y) in enumerate(pairs):
        slots[x[0]][x[1]] = e
        slots[y[0]][y[1]] = e
        ends[e] = [x, y]
    names = {"a": A, "b": B, "v": V}
    for k in range(1, r + 1):
        names[f"c{k}"] = C[k]
    return slots, ends, names


def twist_family(r: int, double_resolution: str = "keep") -> Diagram:
    """The twist diagram G(r) with double point v, or a resolution of v.

    G(r) has clasp crossings a, b, a twist region c_1..c_r of negative
    crossings and the double point v.  The clasp is negative for even r and
    positive for odd r, which makes the negative resolution the twist knot
    with r+1 half twists (trefoil for r = 0, figure-eight for r = 1).
    Vertex ids: a = 0, b = 1, v = 2, c_k = 2 + k.
    """
    if r < 0:
        raise ValueError("r must be non-negative")
    slots, ends, names = _twist_planar(r)
    V = names["v"]
    # v: ccw slots (60,120,240,300) = (in_left, in_right, out_right, out_left)
    tail, head = _orient(slots, ends, [(V, 0)])
    p = Planar(slots=slots, tail=tail, head=head)
    clasp = "neg" if r % 2 == 0 else "pos"
    kinds = {names["a"]: clasp, names["b"]: clasp, V: "dbl"}
    for k in range(1, r + 1):
        kinds[names[f"c{k}"]] = "neg"
    for vid, kind in kinds.items():
        p.over[vid] = _over_for(p, vid, kind)
    d = from_planar(p)
    for v in d.vertices:
        if v.kind != kinds[v.id]:
            raise AssertionError("sign bookkeeping failed")
    if double_resolution == "keep":
        return d
    return resolve_double(d, V, double_resolution)


TWIST_DOUBLE = 2


def twist_knot(r: int) -> Diagram:
    """D(r): twist knot with r half twists.  D(0) is a two-crossing unknot."""
    if r == 0:
        return twist_family(0, "positive")
    return twist_family(r - 1, "negative")


def _over_for(p: Planar, vid: int, kind: str):
    if kind == "dbl":
        return None
    heads = [p.head.get(e) == (vid, s) for s, e in enumerate(p.slots[vid])]
    start = next(s for s in range(4) if heads[s] and heads[(s + 1) % 4])
    if kind == "pos":
        return frozenset((start, (start + 2) % 4))
    return frozenset(((start + 1) % 4, (start + 3) % 4))


def disjoint_union(d1: Diagram, d2: Diagram) -> Diagram:
    voff = max(d1.ids, default=-1) + 1
    eoff = max(d1.edges(), default=-1) + 1
    d2s = relabel(d2, {v: v + voff for v in d2.ids}, {e: e + eoff for e in d2.edges()})
    return Diagram(d1.vertices + d2s.vertices, d1.free_loops + d2.free_loops)


def connected_sum_crossing(d1: Diagram, d2: Diagram, kind: str = "neg",
                           e1: Optional[int] = None, e2: Optional[int] = None) -> Tuple[Diagram, int]:
    """Join two diagrams through a new nugatory vertex c0.

    Edge ``e1`` of d1 and ``e2`` of d2 are cut; c0 receives d1's strand on
    the left ports and d2's strand on the right ports, so the V smoothing
    at c0 keeps the two pieces apart.  Returns the diagram and c0's id.
    """
    if not d1.vertices or not d2.vertices:
        raise ValueError("both summands need at least one vertex")
    u = disjoint_union(d1, d2)
    voff = max(d1.ids) + 1
    eoff = max(d1.edges()) + 1
    e1 = d1.edges()[0] if e1 is None else e1
    e2 = (d2.edges()[0] if e2 is None else e2) + eoff
    c0 = max(u.ids) + 1
    n1 = max(u.edges()) + 1
    n2 = n1 + 1
    verts = []
    for v in u.vertices:
        ports = list(v.ports)
        # the head end of the cut edges moves to the new edges
        if ports[0] == e1:
            ports[0] = n1
        if ports[1] == e1:
            ports[1] = n1
        if ports[0] == e2:
            ports[0] = n2
        if ports[1] == e2:
            ports[1] = n2
        verts.append(Vertex(v.id, v.kind, tuple(ports)))
    verts.append(Vertex(c0, kind, (e1, e2, n1, n2)))
    return Diagram(tuple(verts), u.free_loops), c0


# ---------------------------------------------------------------------------
# Reidemeister moves

def r1_moves(d: Diagram, edge: Optional[int] = None) -> List[Diagram]:
    """Insert a kink of each sign on each side of one edge (or free loop)."""
    out = []
    if not d.vertices:
        if d.free_loops == 0:
            return []
        rest = Diagram((), d.free_loops - 1)
        for sign in ("pos", "neg"):
            for side in ("right", "left"):
                out.append(disjoint_union(kink(sign, side), rest))
        return out
    e = d.edges()[0] if edge is None else edge
    vid = max(d.ids) + 1
    n_out = max(d.edges()) + 1
    loop = n_out + 1
    for sign in ("pos", "neg"):
        for side in ("right", "left"):
            verts = []
            for v in d.vertices:
                ports = list(v.ports)
                for k in (0, 1):
                    if ports[k] == e:
                        ports[k] = n_out
                verts.append(Vertex(v.id, v.kind, tuple(ports)))
            if side == "right":
                ports = (e, loop, n_out, loop)
            else:
                ports = (loop, e, loop, n_out)
            verts.append(Vertex(vid, sign, ports))
            out.append(Diagram(tuple(verts), d.free_loops))
    return out


def r2_move(d: Diagram, dart_e: Tuple[int, int], dart_f: Tuple[int, int], e_over: bool = True) -> Diagram:
    """Push the edge of ``dart_e`` across the edge of ``dart_f``.

    Both darts must lie on the same face (see :meth:`Planar.faces`) and
    belong to different edges.  Two new crossings appear.
    """
    p = to_planar(d)
    A, pa = dart_e
    B, qb = p.other_end(A, pa)
    Cv, pc = dart_f
    Dv, qd = p.other_end(Cv, pc)
    e = p.slots[A][pa]
    f = p.slots[Cv][pc]
    if e == f:
        raise ValueError("R2 needs two different edges")
    x1 = p.new_vertex_id()
    x2 = x1 + 1
    ne = p.new_edge_id()
    e1, e2, e3, f1, f2, f3 = range(ne, ne + 6)
    e_fwd = p.tail[e] == (A, pa)
    f_fwd = p.tail[f] == (Cv, pc)
    del p.tail[e], p.head[e], p.tail[f], p.head[f]
    p.slots[A][pa] = e1
    p.slots[B][qb] = e3
    p.slots[Cv][pc] = f3
    p.slots[Dv][qd] = f1
    p.slots[x1] = [f2, e2, f1, e1]
    p.slots[x2] = [f3, e2, f2, e3]

    def link(edge, a, b, fwd):
        if fwd:
            p.tail[edge], p.head[edge] = a, b
        else:
            p.tail[edge], p.head[edge] = b, a

    link(e1, (A, pa), (x1, 3), e_fwd)
    link(e2, (x1, 1), (x2, 1), e_fwd)
    link(e3, (x2, 3), (B, qb), e_fwd)
    link(f3, (Cv, pc), (x2, 0), f_fwd)
    link(f2, (x2, 2), (x1, 0), f_fwd)
    link(f1, (x1, 2), (Dv, qd), f_fwd)
    pair = frozenset((1, 3)) if e_over else frozenset((0, 2))
    p.over[x1] = pair
    p.over[x2] = pair
    out = from_planar(p)
    if not to_planar(out).is_planar():
        raise NotPlanar("R2 produced a non-planar diagram")
    return out


def r2_candidates(d: Diagram) -> List[Tuple[Tuple[int, int], Tuple[int, int]]]:
    out = []
    p = to_planar(d)
    for face in p.faces():
        for i, de in enumerate(face):
            for df in face[i + 1:]:
                if p.slots[de[0]][de[1]] != p.slots[df[0]][df[1]]:
                    out.append((de, df))
    return out


def r3_move(d: Diagram, face: Sequence[Tuple[int, int]]) -> Optional[Diagram]:
    """Slide one strand across a triangular face of crossings.

    Returns ``None`` unless the face is a triangle of three distinct
    crossings in which some strand lies over (or under) both others.
    """
    p = to_planar(d)
    if len(face) != 3:
        return None
    corners = []
    for k, (v, s) in enumerate(face):
        w, q = p.other_end(*face[k - 1])
        if w != v:
            return None
        corners.append((v, q, s))  # arrival slot, departure slot
    verts = [c[0] for c in corners]
    if len(set(verts)) != 3 or any(p.over[v] is None for v in verts):
        return None
    for k in range(3):
        v0, _, s0 = corners[k]
        v1, q1, _ = corners[(k + 1) % 3]
        if (s0 in p.over[v0]) == (q1 in p.over[v1]):
            rot = [corners[(k + i) % 3] for i in range(3)]
            return _r3_rebuild(p, rot)
    return None


# Local model of an R3 triangle: corners X, Y, Z ccw, strand XY moved past Z.
# Labels: "XY_x" is the outer end of strand XY beyond X, "XYin" the inner
# side between the two crossings of strand XY.
_R3_OLD = {
    "X": [(-1.0, 0.0, "XY_x"), (1.0, 0.0, "XYin"), (0.5, 0.8, "ZXin"), (-0.5, -0.8, "ZX_x")],
    "Y": [(-1.0, 0.0, "XYin"), (1.0, 0.0, "XY_y"), (0.5, -0.8, "YZ_y"), (-0.5, 0.8, "YZin")],
    "Z": [(0.5, -0.8, "YZin"), (-0.5, 0.8, "YZ_z"), (0.5, 0.8, "ZX_z"), (-0.5, -0.8, "ZXin")],
}
_R3_NEW = {
    # X' = XY meets ZX, now beyond Z
    "X": [(-1.0, 0.0, "XYin"), (1.0, 0.0, "XY_y"), (0.5, 0.8, "ZX_z"), (-0.5, -0.8, "ZXin")],
    # Y' = XY meets YZ
    "Y": [(-1.0, 0.0, "XY_x"), (1.0, 0.0, "XYin"), (0.5, -0.8, "YZin"), (-0.5, 0.8, "YZ_z")],
    "Z": [(0.5, -0.8, "YZ_y"), (-0.5, 0.8, "YZin"), (0.5, 0.8, "ZXin"), (-0.5, -0.8, "ZX_x")],
}


def _ccw_labels(items):
    import math
    return [lab for _, lab in sorted((math.atan2(y, x), lab) for x, y, lab in items)]


def _r3_rebuild(p: Planar, corners) -> Optional[Diagram]:
    (X, qx, sx), (Y, qy, sy), (Z, qz, sz) = corners
    name = {"X": X, "Y": Y, "Z": Z}
    label = {
        (X, sx): "XYin", (X, qx): "ZXin", (X, (sx + 2) % 4): "XY_x", (X, (qx + 2) % 4): "ZX_x",
        (Y, qy): "XYin", (Y, sy): "YZin", (Y, (qy + 2) % 4): "XY_y", (Y, (sy + 2) % 4): "YZ_y",
        (Z, qz): "YZin", (Z, sz): "ZXin", (Z, (qz + 2) % 4): "YZ_z", (Z, (sz + 2) % 4): "ZX_z",
    }
    # the model must reproduce the actual rotation at each corner
    for key, v in name.items():
        seq = [label[(v, s)] for s in range(4)]
        model = _ccw_labels(_R3_OLD[key])
        i = model.index(seq[0])
        if [model[(i + j) % 4] for j in range(4)] != seq:
            return None
    outer = {lab: (v, s) for (v, s), lab in label.items() if not lab.endswith("in")}
    inner = {"XY": p.slots[X][sx], "YZ": p.slots[Y][sy], "ZX": p.slots[Z][sz]}
    over_pair = {  # which strand is over at the crossing of each strand pair
        "X": "XY" if sx in p.over[X] else "ZX",
        "Y": "XY" if qy in p.over[Y] else "YZ",
        "Z": "YZ" if qz in p.over[Z] else "ZX",
    }
    q = Planar(slots={k: list(v) for k, v in p.slots.items()}, tail=dict(p.tail),
               head=dict(p.head), over=dict(p.over), free_loops=p.free_loops)
    for e in inner.values():
        del q.tail[e], q.head[e]
    inner_ends: Dict[int, List[Tuple[int, int]]] = {}
    for key, v in name.items():
        order = _ccw_labels(_R3_NEW[key])
        q.slots[v] = [None] * 4
        for s, lab in enumerate(order):
            if lab.endswith("in"):
                e = inner[lab[:2]]
                q.slots[v][s] = e
                inner_ends.setdefault(e, []).append((v, s))
            else:
                ov, os_ = outer[lab]
                e = p.slots[ov][os_]
                q.slots[v][s] = e
                if p.tail[e] == (ov, os_):
                    q.tail[e] = (v, s)
                else:
                    q.head[e] = (v, s)
        q.over[v] = frozenset(s for s, lab in enumerate(order) if lab[:2] == over_pair[key])
    for e, ends in inner_ends.items():
        a, b = ends
        v, s = a
        opp = q.slots[v][(s + 2) % 4]
        if q.head.get(opp) == (v, (s + 2) % 4):
            q.tail[e], q.head[e] = a, b
        else:
            q.tail[e], q.head[e] = b, a
    try:
        out = from_planar(q)
    except MalformedInput:
        return None
    if not to_planar(out).is_planar():
        return None
    return out


def r3_candidates(d: Diagram) -> List[List[Tuple[int, int]]]:
    p = to_planar(d)
    return [f for f in p.faces() if len(f) == 3]


def reidemeister_variants(d: Diagram, limit_r2: int = 4) -> List[Diagram]:
    """R1 kinks of both signs, a few R2 finger moves, and R3 where possible."""
    out = list(r1_moves(d))
    if d.vertices:
        cands = r2_candidates(d)
        step = max(1, len(cands) // max(1, limit_r2))
        for de, df in cands[::step][:limit_r2]:
            out.append(r2_move(d, de, df, e_over=True))
        for face in r3_candidates(d):
            moved = r3_move(d, face)
            if moved is not None:
                out.append(moved)
    for x in out:
        validate(x)
    return out
