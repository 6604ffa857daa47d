"""Multi-fold complexes, total complexes, shifts, truncations and cones.

Shift convention: ``X[k]^n = X^(n-k)`` with the differential multiplied by
(-1)^k.  The mapping cone of f: X -> Y is ``Y^n (+) X^(n+1)`` with
differential ``[[d_Y, f], [0, -d_X]]``.

The sign modules attached to a resolution are trivialised through a fixed
order on the directions: the direction-a block of the total differential
leaving alpha carries (-1)^(sum of alpha(a') over a' > a).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .exactalg import (HomologyGroup, Matrix, Ring, ZZ, block_matrix, homology_at,
                       homology_from_factors, invariant_factors, rank)

Alpha = Tuple[int, ...]


class CommutationFailure(ValueError):
    pass


class NotAChainMap(ValueError):
    pass


class NotAComplex(ValueError):
    pass


def sign_rho(alpha: Sequence[int], a: int) -> int:
    """(-1)^(sum_{a' > a} alpha(a')), directions given by position."""
    return -1 if sum(alpha[a + 1:]) % 2 else 1


def sign_lambda(alpha: Sequence[int], a: int) -> int:
    """(-1)^(sum_{a' < a} alpha(a'))."""
    return -1 if sum(alpha[:a]) % 2 else 1


# ---------------------------------------------------------------------------
# chain complexes

@dataclass
class ChainComplex:
    """Bounded cochain complex of free modules.

    ``dims[i]`` is the rank in degree i, ``d[i]`` the matrix C^i -> C^(i+1)
    (missing means zero) and ``labels[i]`` optional quantum degrees of the
    basis vectors.
    """

    dims: Dict[int, int]
    d: Dict[int, Matrix] = field(default_factory=dict)
    labels: Optional[Dict[int, List[int]]] = None

    def __post_init__(self):
        self.dims = {i: n for i, n in self.dims.items() if n}
        for i, m in list(self.d.items()):
            if m.shape != (self.dim(i + 1), self.dim(i)):
                raise NotAComplex(f"d^{i} has shape {m.shape}, expected {(self.dim(i + 1), self.dim(i))}")
            if not m.nnz:
                del self.d[i]
        if self.labels is not None:
            self.labels = {i: list(l) for i, l in self.labels.items() if self.dim(i)}
            for i, n in self.dims.items():
                if len(self.labels.get(i, ())) != n:
                    raise NotAComplex(f"labels in degree {i} do not match the rank")

    def dim(self, i: int) -> int:
        return self.dims.get(i, 0)

    def diff(self, i: int) -> Matrix:
        m = self.d.get(i)
        if m is None:
            return Matrix.zero(self.dim(i + 1), self.dim(i))
        return m

    @property
    def degrees(self) -> List[int]:
        return sorted(self.dims)

    @property
    def graded(self) -> bool:
        return self.labels is not None

    @property
    def total_rank(self) -> int:
        return sum(self.dims.values())

    def check(self, ring: Ring = ZZ) -> None:
        for i in self.degrees:
            if not (self.diff(i + 1) @ self.diff(i)).reduce(ring).is_zero():
                raise NotAComplex(f"d^{i + 1} d^{i} != 0")
        if self.labels is not None:
            for i, m in self.d.items():
                src, tgt = self.labels[i], self.labels[i + 1]
                for r, c, _ in m.entries():
                    if src[c] != tgt[r]:
                        raise NotAComplex(f"d^{i} does not preserve quantum degree")

    def qdegrees(self) -> List[int]:
        if self.labels is None:
            return []
        return sorted({j for l in self.labels.values() for j in l})

    def piece(self, j: int) -> "ChainComplex":
        """Sub-complex spanned by basis vectors of quantum degree j."""
        if self.labels is None:
            raise ValueError("complex is not graded")
        idx = {i: [k for k, q in enumerate(self.labels[i]) if q == j] for i in self.dims}
        dims = {i: len(v) for i, v in idx.items()}
        d = {}
        for i, m in self.d.items():
            if idx.get(i) and idx.get(i + 1):
                d[i] = m.submatrix(idx[i + 1], idx[i])
        return ChainComplex(dims, d, {i: [j] * n for i, n in dims.items()})

    def homology(self, ring: Ring = ZZ) -> Dict[int, HomologyGroup]:
        """Nonzero homology groups by degree."""
        out = {}
        factors = {}
        ranks = {}
        for i in self.degrees:
            m = self.diff(i)
            if ring.kind == "integers":
                factors[i] = invariant_factors(m, ring) if m.nnz else []
                ranks[i] = len(factors[i])
            else:
                ranks[i] = rank(m, ring) if m.nnz else 0
                factors[i] = [1] * ranks[i]
        for i in self.degrees:
            into = factors.get(i - 1, [])
            g = homology_from_factors(self.dim(i), into, ranks.get(i, 0))
            if not g.is_zero:
                out[i] = g
        return out

    def bigraded_homology(self, ring: Ring = ZZ) -> Dict[Tuple[int, int], HomologyGroup]:
        out = {}
        for j in self.qdegrees():
            for i, g in self.piece(j).homology(ring).items():
                out[(i, j)] = g
        return out

    def shift(self, k: int) -> "ChainComplex":
        """X[k]^n = X^(n-k); differentials pick up (-1)^k."""
        s = -1 if k % 2 else 1
        dims = {i + k: n for i, n in self.dims.items()}
        d = {i + k: (m if s == 1 else -m) for i, m in self.d.items()}
        labels = None if self.labels is None else {i + k: l for i, l in self.labels.items()}
        return ChainComplex(dims, d, labels)

    def regrade(self, dj: int) -> "ChainComplex":
        """Add ``dj`` to every quantum label."""
        if self.labels is None:
            return self
        return ChainComplex(dict(self.dims), dict(self.d),
                            {i: [q + dj for q in l] for i, l in self.labels.items()})

    def direct_sum(self, other: "ChainComplex") -> "ChainComplex":
        degs = sorted(set(self.dims) | set(other.dims))
        dims = {i: self.dim(i) + other.dim(i) for i in degs}
        d = {}
        for i in degs:
            d[i] = block_matrix([self.dim(i + 1), other.dim(i + 1)], [self.dim(i), other.dim(i)],
                                {(0, 0): self.diff(i), (1, 1): other.diff(i)})
        labels = None
        if self.labels is not None and other.labels is not None:
            labels = {i: self.labels.get(i, []) + other.labels.get(i, []) for i in degs}
        return ChainComplex(dims, d, labels)


def zero_complex() -> ChainComplex:
    return ChainComplex({})


@dataclass
class ChainMap:
    """Degree-preserving map; ``comps[i]`` is target^i x source^i."""

    source: ChainComplex
    target: ChainComplex
    comps: Dict[int, Matrix] = field(default_factory=dict)

    def comp(self, i: int) -> Matrix:
        m = self.comps.get(i)
        if m is None:
            return Matrix.zero(self.target.dim(i), self.source.dim(i))
        return m

    def check(self, ring: Ring = ZZ) -> None:
        degs = set(self.source.dims) | set(self.target.dims)
        for i in sorted(degs):
            lhs = self.target.diff(i) @ self.comp(i)
            rhs = self.comp(i + 1) @ self.source.diff(i)
            if not (lhs - rhs).reduce(ring).is_zero():
                raise NotAChainMap(f"d f != f d in degree {i}")

    def compose(self, other: "ChainMap") -> "ChainMap":
        """self . other"""
        degs = set(other.source.dims)
        return ChainMap(other.source, self.target,
                        {i: self.comp(i) @ other.comp(i) for i in degs})

    def preserves_labels(self) -> bool:
        if self.source.labels is None or self.target.labels is None:
            return True
        for i, m in self.comps.items():
            for r, c, _ in m.entries():
                if self.source.labels[i][c] != self.target.labels[i][r]:
                    return False
        return True


def identity_map(c: ChainComplex) -> ChainMap:
    return ChainMap(c, c, {i: Matrix.identity(n) for i, n in c.dims.items()})


def cone(f: ChainMap, check: bool = True) -> ChainComplex:
    """Cone(f)^n = Y^n (+) X^(n+1), d = [[d_Y, f], [0, -d_X]]."""
    if check:
        f.check()
    X, Y = f.source, f.target
    degs = sorted(set(Y.dims) | {i - 1 for i in X.dims})
    dims = {n: Y.dim(n) + X.dim(n + 1) for n in degs}
    d = {}
    for n in degs:
        d[n] = block_matrix([Y.dim(n + 1), X.dim(n + 2)], [Y.dim(n), X.dim(n + 1)],
                            {(0, 0): Y.diff(n), (0, 1): f.comp(n + 1), (1, 1): -X.diff(n + 1)})
    labels = None
    if X.labels is not None and Y.labels is not None:
        labels = {n: Y.labels.get(n, []) + X.labels.get(n + 1, []) for n in degs}
    out = ChainComplex(dims, d, labels)
    return out


# ---------------------------------------------------------------------------
# multi-fold complexes

@dataclass
class MultiComplex:
    """Objects indexed by integer vectors alpha (one entry per direction).

    ``objects[alpha]`` is a rank, ``labels[alpha]`` optional quantum degrees,
    ``diffs[(alpha, a)]`` the matrix X^alpha -> X^(alpha + e_a).
    """

    directions: Tuple[object, ...]
    objects: Dict[Alpha, int]
    diffs: Dict[Tuple[Alpha, int], Matrix] = field(default_factory=dict)
    labels: Optional[Dict[Alpha, List[int]]] = None

    def __post_init__(self):
        self.objects = {a: n for a, n in self.objects.items() if n}
        self.diffs = {k: m for k, m in self.diffs.items()
                      if k[0] in self.objects and _step(k[0], k[1]) in self.objects and m.nnz}

    @property
    def size(self) -> int:
        return len(self.directions)

    def dim(self, alpha: Alpha) -> int:
        return self.objects.get(alpha, 0)

    def diff(self, alpha: Alpha, a: int) -> Matrix:
        m = self.diffs.get((alpha, a))
        if m is None:
            return Matrix.zero(self.dim(_step(alpha, a)), self.dim(alpha))
        return m

    def check(self, ring: Ring = ZZ) -> None:
        for alpha in self.objects:
            for a in range(self.size):
                b1 = _step(alpha, a)
                if not (self.diff(b1, a) @ self.diff(alpha, a)).reduce(ring).is_zero():
                    raise CommutationFailure(f"d_{a} d_{a} != 0 at {alpha}")
                for b in range(a + 1, self.size):
                    b2 = _step(alpha, b)
                    lhs = self.diff(b1, b) @ self.diff(alpha, a)
                    rhs = self.diff(b2, a) @ self.diff(alpha, b)
                    if not (lhs - rhs).reduce(ring).is_zero():
                        raise CommutationFailure(f"square ({a},{b}) at {alpha} does not commute")

    def shift(self, a0: int, k: int = 1) -> "MultiComplex":
        """X[k e_a0]^alpha = X^(alpha - k e_a0); d_a0 picks up (-1)^k."""
        def mv(alpha):
            return tuple(x + (k if i == a0 else 0) for i, x in enumerate(alpha))
        s = -1 if k % 2 else 1
        objects = {mv(al): n for al, n in self.objects.items()}
        diffs = {(mv(al), a): (-m if (a == a0 and s == -1) else m) for (al, a), m in self.diffs.items()}
        labels = None if self.labels is None else {mv(al): l for al, l in self.labels.items()}
        return MultiComplex(self.directions, objects, diffs, labels)

    def truncate(self, keep: Callable[[Alpha], bool]) -> "MultiComplex":
        objects = {al: n for al, n in self.objects.items() if keep(al)}
        diffs = {k: m for k, m in self.diffs.items() if k[0] in objects and _step(k[0], k[1]) in objects}
        labels = None if self.labels is None else {al: self.labels[al] for al in objects}
        return MultiComplex(self.directions, objects, diffs, labels)

    def truncate_ge(self, a0: int, r: int) -> "MultiComplex":
        return self.truncate(lambda al: al[a0] >= r)

    def truncate_le(self, a0: int, r: int) -> "MultiComplex":
        return self.truncate(lambda al: al[a0] <= r)


def _step(alpha: Alpha, a: int, k: int = 1) -> Alpha:
    return tuple(x + (k if i == a else 0) for i, x in enumerate(alpha))


@dataclass
class TotalComplex:
    """Total complex plus the block layout needed to address its pieces."""

    complex: ChainComplex
    blocks: Dict[int, List[Tuple[Alpha, int, int]]]  # degree -> (alpha, offset, rank)

    def offset(self, alpha: Alpha) -> Tuple[int, int]:
        i = sum(alpha)
        for al, off, n in self.blocks.get(i, []):
            if al == alpha:
                return off, n
        raise KeyError(alpha)


def tot(m: MultiComplex, check: bool = True) -> TotalComplex:
    """Total complex; the (alpha -> alpha + e_a) block is sign_rho(alpha, a) d_a."""
    if check:
        m.check()
    blocks: Dict[int, List[Tuple[Alpha, int, int]]] = {}
    for alpha in sorted(m.objects):
        blocks.setdefault(sum(alpha), []).append(alpha)
    layout: Dict[int, List[Tuple[Alpha, int, int]]] = {}
    where: Dict[Alpha, int] = {}
    for i, alphas in blocks.items():
        off = 0
        rows = []
        for al in alphas:
            rows.append((al, off, m.objects[al]))
            where[al] = off
            off += m.objects[al]
        layout[i] = rows
    dims = {i: sum(n for _, _, n in rows) for i, rows in layout.items()}
    entries: Dict[int, list] = {}
    for (alpha, a), mat in m.diffs.items():
        i = sum(alpha)
        s = sign_rho(alpha, a)
        r0 = where[_step(alpha, a)]
        c0 = where[alpha]
        bucket = entries.setdefault(i, [])
        for r, c, v in mat.entries():
            bucket.append((r0 + r, c0 + c, s * v))
    d = {i: Matrix.from_entries(dims.get(i + 1, 0), dims[i], ent) for i, ent in entries.items()}
    labels = None
    if m.labels is not None:
        labels = {i: [q for al, _, _ in rows for q in m.labels[al]] for i, rows in layout.items()}
    c = ChainComplex(dims, d, labels)
    if check:
        c.check()
    return TotalComplex(c, layout)


def block_sign_matrix(tc: TotalComplex, i: int, sign: Callable[[Alpha], int]) -> Matrix:
    """Diagonal +-1 matrix on degree i of a total complex, one sign per block."""
    ent = []
    for al, off, n in tc.blocks.get(i, []):
        s = sign(al)
        for k in range(n):
            ent.append((off + k, off + k, s))
    n = tc.complex.dim(i)
    return Matrix.from_entries(n, n, ent)


@dataclass
class ConeDecomposition:
    phi_hat: ChainMap
    low: TotalComplex   # Tot of the shifted lower truncation
    high: TotalComplex  # Tot of the upper truncation
    cone: ChainComplex
    witness: Dict[int, Matrix]  # Cone^n -> Tot^n, invertible


def cone_decomposition(m: MultiComplex, a0: int, r: int, check: bool = True) -> ConeDecomposition:
    """Tot(m) = Cone(phi_hat) with phi_hat: Tot(sigma_{<=r-1} m [e_a0]) -> Tot(sigma_{>=r} m).

    phi_hat is d_a0 blockwise; the witness is the identity on the upper part
    and (-1)^(sum_{a > a0} alpha(a)) on each lower block.
    """
    full = tot(m, check=check)
    high = tot(m.truncate_ge(a0, r), check=False)
    low_multi = m.truncate_le(a0, r - 1).shift(a0, 1)
    low = tot(low_multi, check=False)
    comps: Dict[int, Matrix] = {}
    for (alpha, a), mat in m.diffs.items():
        if a != a0 or alpha[a0] != r - 1:
            continue
        beta = _step(alpha, a0)  # position of alpha inside the shifted complex
        i = sum(beta)
        ro, _ = high.offset(beta)
        co, _ = low.offset(beta)
        key = i
        cur = comps.setdefault(key, [])
        for rr, cc, v in mat.entries():
            cur.append((ro + rr, co + cc, v))
    comps_m = {i: Matrix.from_entries(high.complex.dim(i), low.complex.dim(i), ent) for i, ent in comps.items()}
    phi = ChainMap(low.complex, high.complex, comps_m)
    if check:
        phi.check()
    cn = cone(phi, check=False)
    witness: Dict[int, Matrix] = {}
    for n in sorted(set(cn.dims) | set(full.complex.dims)):
        # Cone^n = high^n (+) low^(n+1); low^(n+1) holds the lower blocks of Tot^n
        rows = []
        for al, off, k in full.blocks.get(n, []):
            rows.append((al, off, k))
        ent = []
        hdim = high.complex.dim(n)
        for al, off, k in rows:
            if al[a0] >= r:
                src, _ = high.offset(al)
                s = 1
            else:
                src0, _ = low.offset(_step(al, a0))
                src = hdim + src0
                s = sign_rho(al, a0)
            for t in range(k):
                ent.append((off + t, src + t, s))
        witness[n] = Matrix.from_entries(full.complex.dim(n), cn.dim(n), ent)
    if check:
        for n in witness:
            lhs = full.complex.diff(n) @ witness[n]
            rhs = witness.get(n + 1, Matrix.zero(full.complex.dim(n + 1), cn.dim(n + 1))) @ cn.diff(n)
            if lhs != rhs:
                raise CommutationFailure(f"cone witness fails in degree {n}")
    return ConeDecomposition(phi, low, high, cn, witness)


def one_fold(c: ChainComplex) -> MultiComplex:
    """View a chain complex as a multi-fold complex in one direction."""
    objects = {(i,): n for i, n in c.dims.items()}
    diffs = {((i,), 0): m for i, m in c.d.items()}
    labels = None if c.labels is None else {(i,): l for i, l in c.labels.items()}
    return MultiComplex(("x",), objects, diffs, labels)


def homology_iso(f: ChainMap, ring: Ring) -> bool:
    """Whether f induces an isomorphism on homology (its cone is acyclic)."""
    return not cone(f).homology(ring)
