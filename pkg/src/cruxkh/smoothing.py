"""Resolutions of singular diagrams and the circles they produce.

A resolution assigns an integer to each vertex.  Values outside the
effective range stand for the zero object.  Inside it, each vertex is
replaced either by the oriented "V" pair (in_left-out_left,
in_right-out_right) or by the "wide" pair (in_left-in_right,
out_left-out_right).
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Dict, FrozenSet, Iterator, List, Mapping, Optional, Tuple

from .diagram import Diagram

RANGES = {"dbl": (-2, 1), "neg": (-1, 0), "pos": (0, 1)}

# port pairings of the two local pictures
V_PAIRS = ((0, 2), (1, 3))
WIDE_PAIRS = ((0, 1), (2, 3))


class OutOfRange(ValueError):
    pass


class NotSingular(ValueError):
    pass


class CruxGeometryError(RuntimeError):
    pass


def local_picture(kind: str, value: int) -> str:
    lo, hi = RANGES[kind]
    if not lo <= value <= hi:
        raise OutOfRange(f"{kind} vertex at {value}")
    if kind == "dbl":
        return "W" if value in (-2, 1) else "V"
    if kind == "neg":
        return "W" if value == -1 else "V"
    return "V" if value == 0 else "W"


def in_range(d: Diagram, alpha: Mapping[int, int]) -> bool:
    for v in d.vertices:
        lo, hi = RANGES[v.kind]
        if not lo <= alpha.get(v.id, 0) <= hi:
            return False
    return True


def resolutions(d: Diagram, ids: Optional[List[int]] = None) -> Iterator[Dict[int, int]]:
    """All in-range resolutions over the given vertices (default: all)."""
    ids = d.ids if ids is None else ids
    kinds = {v.id: v.kind for v in d.vertices}
    ranges = [range(RANGES[kinds[i]][0], RANGES[kinds[i]][1] + 1) for i in ids]
    for vals in product(*ranges):
        yield dict(zip(ids, vals))


@dataclass(frozen=True)
class Smoothing:
    """Circles of a resolution.

    ``circles`` lists edge sets ordered by smallest edge id; free loops come
    last as empty sets.  ``pairs`` records the port pairing used at each
    vertex.
    """

    circles: Tuple[FrozenSet[int], ...]
    circle_of_edge: Mapping[int, int]
    pictures: Mapping[int, str]

    @property
    def count(self) -> int:
        return len(self.circles)


def _pictures(d: Diagram, alpha: Mapping[int, int]) -> Dict[int, str]:
    return {v.id: local_picture(v.kind, alpha.get(v.id, 0)) for v in d.vertices}


def smooth(d: Diagram, alpha: Mapping[int, int]) -> Smoothing:
    pics = _pictures(d, alpha)
    parent: Dict[int, int] = {e: e for e in d.edges()}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for v in d.vertices:
        for a, b in (V_PAIRS if pics[v.id] == "V" else WIDE_PAIRS):
            ra, rb = find(v.ports[a]), find(v.ports[b])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: Dict[int, set] = {}
    for e in parent:
        groups.setdefault(find(e), set()).add(e)
    circles = sorted((frozenset(g) for g in groups.values()), key=min)
    circles += [frozenset()] * d.free_loops
    coe = {e: i for i, c in enumerate(circles) for e in c}
    return Smoothing(tuple(circles), coe, pics)


@dataclass(frozen=True)
class SaddleDescriptor:
    """Merge (two source circles -> one) or split (one -> two).

    For a merge ``src`` holds two circle indices and ``tgt`` one; for a
    split the other way round.  ``carry`` maps every untouched source
    circle to its target index.  The pair in a merge source or split target
    is ordered (piece of in_left, piece of the other arc).
    """

    kind: str
    src: Tuple[int, ...]
    tgt: Tuple[int, ...]
    carry: Tuple[Tuple[int, int], ...]
    src_count: int
    tgt_count: int


def _arcs(picture: str) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    return V_PAIRS if picture == "V" else WIDE_PAIRS


def saddle_between(d: Diagram, s0: Smoothing, s1: Smoothing, vid: int) -> SaddleDescriptor:
    v = d.vertex(vid)
    a0 = [s0.circle_of_edge[v.ports[p]] for p, _ in _arcs(s0.pictures[vid])]
    a1 = [s1.circle_of_edge[v.ports[p]] for p, _ in _arcs(s1.pictures[vid])]
    touched0, touched1 = set(a0), set(a1)
    carry = []
    for i, c in enumerate(s0.circles):
        if i in touched0:
            continue
        if c:
            j = s1.circle_of_edge[min(c)]
        else:
            j = s1.count - (s0.count - i)  # free loops keep their order at the end
        carry.append((i, j))
    if len(touched0) == 2 and len(touched1) == 1:
        return SaddleDescriptor("merge", tuple(a0), (a1[0],), tuple(carry), s0.count, s1.count)
    if len(touched0) == 1 and len(touched1) == 2:
        return SaddleDescriptor("split", (a0[0],), tuple(a1), tuple(carry), s0.count, s1.count)
    raise CruxGeometryError(f"vertex {vid}: neither merge nor split")


def saddle(d: Diagram, alpha: Mapping[int, int], vid: int) -> SaddleDescriptor:
    """Classify the elementary cobordism from alpha to alpha + vid."""
    v = d.vertex(vid)
    beta = dict(alpha)
    beta[vid] = alpha.get(vid, 0) + 1
    s0, s1 = smooth(d, alpha), smooth(d, beta)
    if v.kind == "dbl" and s0.pictures[vid] == s1.pictures[vid]:
        raise OutOfRange("the V -> V step at a double point is not a saddle")
    return saddle_between(d, s0, s1, vid)


@dataclass(frozen=True)
class Grading:
    i: int
    q_alpha: int
    w_tilde: int


def gradings(d: Diagram, alpha: Mapping[int, int]) -> Grading:
    if not in_range(d, alpha):
        raise OutOfRange("resolution outside the effective range")
    i = 0
    q = 0
    for v in d.vertices:
        a = alpha.get(v.id, 0)
        i += a
        q += a - 1 if (v.kind == "dbl" and a < 0) else a
    return Grading(i, q, d.stats().w_tilde)


# ---------------------------------------------------------------------------
# crux maps

@dataclass(frozen=True)
class CruxInfo:
    """Geometry of a crux resolution.

    The circle through both strands at the double point reads: strand
    in_left -> out_left, the top arc from out_left round to out_right,
    strand out_right -> in_right, the bottom arc from in_right round to
    in_left.  ``top`` and ``bottom`` are the edge sets of those arcs; the
    top arc is the twisted arc.
    """

    circle: int
    top: FrozenSet[int]
    bottom: FrozenSet[int]
    smoothing: Smoothing


def single_double(d: Diagram) -> int:
    dbl = d.doubles
    if len(dbl) != 1:
        raise NotSingular(f"expected one double point, found {len(dbl)}")
    return dbl[0]


def _walk(d: Diagram, pics: Mapping[int, str], start_vertex: int, start_port: int):
    """Follow a circle leaving ``start_vertex`` through ``start_port``.

    Yields (edge, arrival vertex, arrival port) until the walk returns to
    the start vertex.
    """
    tail_of: Dict[int, Tuple[int, int]] = {}
    head_of: Dict[int, Tuple[int, int]] = {}
    verts = {v.id: v for v in d.vertices}
    for v in d.vertices:
        for k, e in enumerate(v.ports):
            (head_of if k < 2 else tail_of)[e] = (v.id, k)
    partner = {}
    for vid, pic in pics.items():
        for a, b in _arcs(pic):
            partner[(vid, a)] = b
            partner[(vid, b)] = a
    vid, port = start_vertex, start_port
    for _ in range(4 * len(d.vertices) + 4):
        e = verts[vid].ports[port]
        end = head_of[e] if port >= 2 else tail_of[e]
        yield e, end[0], end[1]
        if end[0] == start_vertex:
            return
        vid, port = end[0], partner[end]
    raise CruxGeometryError("circle walk did not close")


def crux_info(d: Diagram, alpha: Mapping[int, int]) -> Optional[CruxInfo]:
    """Crux geometry for a resolution of the crossings, or None.

    ``alpha`` need not mention the double point; it is resolved as V.
    """
    b0 = single_double(d)
    full = dict(alpha)
    full[b0] = 0
    if not in_range(d, full):
        return None
    s = smooth(d, full)
    v = d.vertex(b0)
    c = s.circle_of_edge[v.in_left]
    if s.circle_of_edge[v.in_right] != c:
        return None
    top = []
    arrival = None
    for e, w, port in _walk(d, s.pictures, b0, 2):
        top.append(e)
        if w == b0:
            arrival = port
            break
    if arrival != 3:
        raise CruxGeometryError(f"top arc returns at port {arrival}, expected out_right")
    bottom = []
    for e, w, port in _walk(d, s.pictures, b0, 1):
        bottom.append(e)
        if w == b0:
            arrival = port
            break
    if arrival != 0:
        raise CruxGeometryError(f"bottom arc returns at port {arrival}, expected in_left")
    return CruxInfo(c, frozenset(top), frozenset(bottom), s)


def is_crux(d: Diagram, alpha: Mapping[int, int]) -> Tuple[bool, Optional[FrozenSet[int]]]:
    info = crux_info(d, alpha)
    if info is None:
        return False, None
    return True, info.top


def crux_maps(d: Diagram) -> List[Dict[int, int]]:
    return [a for a in resolutions(d, d.crossings) if crux_info(d, a) is not None]
