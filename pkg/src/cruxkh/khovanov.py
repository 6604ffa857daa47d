"""The cube of smoothings and the universal Khovanov complex.

Rows of the cube, per vertex kind:

* negative crossing: -1 (wide) -> 0 (V) by the saddle;
* positive crossing: 0 (V) -> 1 (wide) by minus the saddle;
* double point: -2 (wide) -> -1 (V) by minus the saddle, -1 -> 0 by the
  genus-one map Phi, 0 -> 1 (wide) by minus the saddle.

A saddle is multiplication when two circles merge and comultiplication
when one splits.  Phi multiplies by x_R - x_L, where L and R are the
circles through the strands in_left -> out_left and in_right -> out_right.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple

from .diagram import Diagram, make_double
from .exactalg import Matrix, Ring, ZZ
from .frobenius import (FrobeniusParams, apply_local, basis_degrees, delta_matrix, mu_matrix,
                        phi_local)
from .mcomplex import (ChainComplex, ChainMap, ConeDecomposition, MultiComplex, TotalComplex,
                       cone_decomposition, tot)
from .smoothing import (Smoothing, gradings, resolutions, saddle_between, smooth)


@dataclass
class Cube:
    diagram: Diagram
    params: FrobeniusParams
    multi: MultiComplex
    smoothings: Dict[Tuple[int, ...], Smoothing]

    @property
    def order(self) -> List[int]:
        return list(self.multi.directions)


def saddle_matrix(d: Diagram, s0: Smoothing, s1: Smoothing, vid: int, params: FrobeniusParams) -> Matrix:
    sd = saddle_between(d, s0, s1, vid)
    if sd.kind == "merge":
        return apply_local(mu_matrix(params), sd.src_count, sd.src, sd.tgt_count, sd.tgt, sd.carry)
    return apply_local(delta_matrix(params), sd.src_count, sd.src, sd.tgt_count, sd.tgt, sd.carry)


def phi_matrix(d: Diagram, s: Smoothing, vid: int, params: FrobeniusParams, sign: int = 1) -> Matrix:
    """Phi on the V smoothing at a double point: multiplication by x_R - x_L."""
    v = d.vertex(vid)
    cl = s.circle_of_edge[v.in_left]
    cr = s.circle_of_edge[v.in_right]
    n = s.count
    if cl == cr:
        return Matrix.zero(1 << n, 1 << n)
    carry = [(i, i) for i in range(n) if i not in (cl, cr)]
    m = apply_local(phi_local(params), n, [cl, cr], n, [cl, cr], carry)
    return m if sign == 1 else -m


def state_labels(d: Diagram, alpha: Mapping[int, int], n: int) -> List[int]:
    g = gradings(d, alpha)
    shift = g.q_alpha + g.w_tilde
    return [q + shift for q in basis_degrees(n)]


def build_cube(d: Diagram, params: FrobeniusParams, phi_sign: int = 1, check: bool = True) -> Cube:
    order = d.ids
    kinds = {v.id: v.kind for v in d.vertices}
    objects: Dict[Tuple[int, ...], int] = {}
    smoothings: Dict[Tuple[int, ...], Smoothing] = {}
    labels: Optional[Dict[Tuple[int, ...], List[int]]] = {} if params.graded else None
    for alpha in resolutions(d, order):
        key = tuple(alpha[i] for i in order)
        s = smooth(d, alpha)
        smoothings[key] = s
        objects[key] = 1 << s.count
        if labels is not None:
            labels[key] = state_labels(d, alpha, s.count)
    diffs = {}
    for key, s0 in smoothings.items():
        for a, vid in enumerate(order):
            tkey = key[:a] + (key[a] + 1,) + key[a + 1:]
            s1 = smoothings.get(tkey)
            if s1 is None:
                continue
            kind = kinds[vid]
            val = key[a]
            if kind == "neg":
                m = saddle_matrix(d, s0, s1, vid, params)
            elif kind == "pos":
                m = -saddle_matrix(d, s0, s1, vid, params)
            elif val == -1:
                m = phi_matrix(d, s0, vid, params, phi_sign)
            else:
                m = -saddle_matrix(d, s0, s1, vid, params)
            diffs[(key, a)] = m
    multi = MultiComplex(tuple(order), objects, diffs, labels)
    if check:
        multi.check(params.ring)
    return Cube(d, params, multi, smoothings)


def kh_total(d: Diagram, params: FrobeniusParams, phi_sign: int = 1, check: bool = True) -> TotalComplex:
    cube = build_cube(d, params, phi_sign, check)
    return tot(cube.multi, check=False)


def kh_complex(d: Diagram, params: FrobeniusParams = FrobeniusParams(), phi_sign: int = 1,
               check: bool = True) -> ChainComplex:
    """Universal Khovanov complex; quantum labels are attached when h = t = 0."""
    return kh_total(d, params, phi_sign, check).complex


def kh_homology(d: Diagram, params: FrobeniusParams = FrobeniusParams(), graded: Optional[bool] = None):
    """Homology by degree, or by (i, j) when graded."""
    c = kh_complex(d, params)
    if graded is None:
        graded = params.graded
    if graded:
        return c.bigraded_homology(params.ring)
    return c.homology(params.ring)


def skein_cone(d: Diagram, vid: int, params: FrobeniusParams, check: bool = True) -> ConeDecomposition:
    """Cone decomposition of the cube of ``d`` along vertex ``vid``.

    For a double point the cut sits between columns -1 and 0, so the map
    is the genus-one map; for a crossing it sits at the saddle.
    """
    cube = build_cube(d, params, check=check)
    a0 = cube.order.index(vid)
    kind = d.vertex(vid).kind
    r = {"dbl": 0, "neg": 0, "pos": 1}[kind]
    return cone_decomposition(cube.multi, a0, r, check=check)


def phi_hat(d_minus: Diagram, vid: int, params: FrobeniusParams = FrobeniusParams(),
            check: bool = True) -> ChainMap:
    """The crossing-change map [[D-]] -> [[D+]] at a negative crossing."""
    v = d_minus.vertex(vid)
    if v.kind != "neg":
        from .diagram import WrongVertexKind
        raise WrongVertexKind(f"vertex {vid} is not a negative crossing")
    dec = skein_cone(make_double(d_minus, vid), vid, params, check=check)
    phi = dec.phi_hat
    if check:
        lo = kh_complex(d_minus, params, check=False)
        hi = kh_complex(make_double(d_minus, vid).with_kind(vid, "pos"), params, check=False)
        if lo.dims != phi.source.dims or hi.dims != phi.target.dims:
            raise AssertionError("phi_hat endpoints differ from the resolved complexes")
        for i in lo.degrees:
            if lo.diff(i) != phi.source.diff(i) or hi.diff(i) != phi.target.diff(i):
                raise AssertionError("phi_hat endpoints differ from the resolved complexes")
    return phi


def euler_state_sum(d: Diagram) -> int:
    """Alternating count of basis vectors over the cube, by homological degree."""
    total = 0
    for alpha in resolutions(d):
        s = smooth(d, alpha)
        total += (-1) ** (sum(alpha.values()) % 2) * (1 << s.count)
    return total
