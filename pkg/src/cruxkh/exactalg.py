"""Exact coefficient rings, sparse matrices and Smith normal form.

Matrices hold plain Python integers (or ``Fraction`` when a rational
parameter is in play) and are only reduced to a particular ring when a
rank, an invariant factor list or a homology group is requested.  This
keeps one matrix usable over Z, Q and every F_p at once.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

DENSE_LIMIT = 64


class CompositionNonzero(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class Ring:
    """One of Z, Q or F_p."""

    kind: str
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("integers", "rationals", "prime-field"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == "prime-field" and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @classmethod
    def integers(cls) -> "Ring":
        return cls("integers")

    @classmethod
    def rationals(cls) -> "Ring":
        return cls("rationals")

    @classmethod
    def prime_field(cls, p: int) -> "Ring":
        return cls("prime-field", p)

    @classmethod
    def parse(cls, text: str) -> "Ring":
        s = text.strip().lower()
        if s in ("z", "zz", "integers"):
            return cls.integers()
        if s in ("q", "qq", "rationals"):
            return cls.rationals()
        if s.startswith("fp:") or s.startswith("f"):
            digits = s[3:] if s.startswith("fp:") else s[1:]
            try:
                return cls.prime_field(int(digits))
            except ValueError as exc:
                raise ValueError(f"bad ring spec {text!r}") from exc
        raise ValueError(f"bad ring spec {text!r}")

    @property
    def is_field(self) -> bool:
        return self.kind != "integers"

    def reduce(self, x):
        """Normalise an exact number into this ring."""
        if self.kind == "prime-field":
            if isinstance(x, Fraction):
                if x.denominator % self.p == 0:
                    raise ZeroDivisionError(f"{x} is not defined in F_{self.p}")
                return x.numerator * pow(x.denominator, -1, self.p) % self.p
            return int(x) % self.p
        if self.kind == "integers":
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"{x} is not an integer")
                return x.numerator
            return int(x)
        if isinstance(x, Fraction) and x.denominator == 1:
            return x.numerator
        return x

    def __str__(self):
        if self.kind == "integers":
            return "Z"
        if self.kind == "rationals":
            return "Q"
        return f"F{self.p}"


ZZ = Ring.integers()
QQ = Ring.rationals()


class Matrix:
    """Sparse matrix stored as ``{row: {col: value}}`` with no zero entries."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, data: Optional[Dict[int, Dict[int, object]]] = None):
        self.rows = rows
        self.cols = cols
        self._data: Dict[int, Dict[int, object]] = {}
        if data:
            for r, row in data.items():
                if not 0 <= r < rows:
                    raise IndexError(f"row {r} out of range")
                clean = {}
                for c, v in row.items():
                    if not 0 <= c < cols:
                        raise IndexError(f"col {c} out of range")
                    if v:
                        clean[c] = v
                if clean:
                    self._data[r] = clean

    # construction -------------------------------------------------------
    @classmethod
    def zero(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int, scale=1) -> "Matrix":
        m = cls(n, n)
        if scale:
            m._data = {i: {i: scale} for i in range(n)}
        return m

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence], ncols: Optional[int] = None) -> "Matrix":
        nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if nrows else 0
        data = {}
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise DimensionMismatch("ragged dense matrix")
            d = {j: v for j, v in enumerate(row) if v}
            if d:
                data[i] = d
        m = cls(nrows, ncols)
        m._data = data
        return m

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Iterable[Tuple[int, int, object]]) -> "Matrix":
        """Build from (row, col, value) triples; repeated positions are summed."""
        data: Dict[int, Dict[int, object]] = {}
        for r, c, v in entries:
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r},{c}) outside {rows}x{cols}")
            if not v:
                continue
            row = data.setdefault(r, {})
            nv = row.get(c, 0) + v
            if nv:
                row[c] = nv
            else:
                del row[c]
                if not row:
                    del data[r]
        m = cls(rows, cols)
        m._data = data
        return m

    # access --------------------------------------------------------------
    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, key):
        r, c = key
        return self._data.get(r, {}).get(c, 0)

    def row(self, r: int) -> Dict[int, object]:
        return self._data.get(r, {})

    def entries(self) -> Iterator[Tuple[int, int, object]]:
        for r in sorted(self._data):
            row = self._data[r]
            for c in sorted(row):
                yield r, c, row[c]

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self._data.values())

    def to_dense(self) -> List[List]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for r, row in self._data.items():
            for c, v in row.items():
                out[r][c] = v
        return out

    def column(self, c: int) -> Dict[int, object]:
        return {r: row[c] for r, row in self._data.items() if c in row}

    # arithmetic ----------------------------------------------------------
    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot compose {self.shape} with {other.shape}")
        data: Dict[int, Dict[int, object]] = {}
        odata = other._data
        for r, row in self._data.items():
            acc: Dict[int, object] = {}
            for k, v in row.items():
                orow = odata.get(k)
                if not orow:
                    continue
                for c, w in orow.items():
                    acc[c] = acc.get(c, 0) + v * w
            acc = {c: v for c, v in acc.items() if v}
            if acc:
                data[r] = acc
        m = Matrix(self.rows, other.cols)
        m._data = data
        return m

    def _combine(self, other: "Matrix", sign: int) -> "Matrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"shape {self.shape} vs {other.shape}")
        data = {r: dict(row) for r, row in self._data.items()}
        for r, row in other._data.items():
            target = data.setdefault(r, {})
            for c, v in row.items():
                nv = target.get(c, 0) + sign * v
                if nv:
                    target[c] = nv
                else:
                    target.pop(c, None)
            if not target:
                del data[r]
        m = Matrix(self.rows, self.cols)
        m._data = data
        return m

    def __add__(self, other: "Matrix") -> "Matrix":
        return self._combine(other, 1)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self._combine(other, -1)

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def scale(self, k) -> "Matrix":
        m = Matrix(self.rows, self.cols)
        if k:
            m._data = {r: {c: k * v for c, v in row.items()} for r, row in self._data.items()}
        return m

    @property
    def T(self) -> "Matrix":
        data: Dict[int, Dict[int, object]] = {}
        for r, row in self._data.items():
            for c, v in row.items():
                data.setdefault(c, {})[r] = v
        m = Matrix(self.cols, self.rows)
        m._data = data
        return m

    def reduce(self, ring: Ring) -> "Matrix":
        data = {}
        for r, row in self._data.items():
            d = {}
            for c, v in row.items():
                w = ring.reduce(v)
                if w:
                    d[c] = w
            if d:
                data[r] = d
        m = Matrix(self.rows, self.cols)
        m._data = data
        return m

    def is_zero(self, ring: Optional[Ring] = None) -> bool:
        if ring is None or ring.kind != "prime-field":
            return not self._data
        return not self.reduce(ring)._data

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        cidx = {c: j for j, c in enumerate(cols)}
        data = {}
        for i, r in enumerate(rows):
            row = self._data.get(r)
            if not row:
                continue
            d = {cidx[c]: v for c, v in row.items() if c in cidx}
            if d:
                data[i] = d
        m = Matrix(len(rows), len(cols))
        m._data = data
        return m

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise DimensionMismatch("hstack needs equal row counts")
        data = {r: dict(row) for r, row in self._data.items()}
        for r, row in other._data.items():
            target = data.setdefault(r, {})
            for c, v in row.items():
                target[c + self.cols] = v
        m = Matrix(self.rows, self.cols + other.cols)
        m._data = data
        return m

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(self.entries())))

    def __repr__(self):
        if self.rows * self.cols <= 36:
            return f"Matrix({self.to_dense()})"
        return f"Matrix<{self.rows}x{self.cols}, nnz={self.nnz}>"


def block_matrix(row_sizes: Sequence[int], col_sizes: Sequence[int],
                 blocks: Dict[Tuple[int, int], Matrix]) -> Matrix:
    """Assemble a matrix from blocks keyed by (block row, block col)."""
    roff = [0]
    for s in row_sizes:
        roff.append(roff[-1] + s)
    coff = [0]
    for s in col_sizes:
        coff.append(coff[-1] + s)
    data: Dict[int, Dict[int, object]] = {}
    for (bi, bj), blk in blocks.items():
        if blk.shape != (row_sizes[bi], col_sizes[bj]):
            raise DimensionMismatch(f"block {(bi, bj)} has shape {blk.shape}")
        for r, row in blk._data.items():
            target = data.setdefault(roff[bi] + r, {})
            for c, v in row.items():
                cc = coff[bj] + c
                nv = target.get(cc, 0) + v
                if nv:
                    target[cc] = nv
                else:
                    target.pop(cc, None)
    data = {r: row for r, row in data.items() if row}
    m = Matrix(roff[-1], coff[-1])
    m._data = data
    return m


# ---------------------------------------------------------------------------
# Smith normal form

def _normalise_divisibility(diag: List[int]) -> List[int]:
    """Turn a list of nonzero diagonal entries into invariant factors."""
    d = sorted(abs(x) for x in diag if x)
    n = len(d)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = d[i], d[j]
            g = gcd(a, b)
            if g != a:
                d[i], d[j] = g, a // g * b
    return sorted(d)


def _dense_snf_diagonal(a: List[List[int]]) -> List[int]:
    """Diagonal of an integer matrix reduced by unimodular row/col moves."""
    a = [list(r) for r in a]
    m = len(a)
    n = len(a[0]) if m else 0
    diag = []
    t = 0
    while t < m and t < n:
        # smallest nonzero entry in the trailing block
        best = None
        for i in range(t, m):
            ri = a[i]
            for j in range(t, n):
                v = ri[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            done = True
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // p
                    if q:
                        ri, rt = a[i], a[t]
                        for k in range(t, n):
                            ri[k] -= q * rt[k]
                    if a[i][t]:
                        done = False
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // p
                    if q:
                        for row in a[t:]:
                            row[j] -= q * row[t]
                    if a[t][j]:
                        done = False
            if done:
                break
            # move the smallest remaining entry of row/col t to the pivot
            cand = [(abs(a[i][t]), i, t) for i in range(t, m) if a[i][t]]
            cand += [(abs(a[t][j]), t, j) for j in range(t, n) if a[t][j]]
            _, i, j = min(cand)
            a[t], a[i] = a[i], a[t]
            for row in a:
                row[t], row[j] = row[j], row[t]
        diag.append(a[t][t])
        t += 1
    return diag


def _integer_rows(m: Matrix) -> Dict[int, Dict[int, int]]:
    data = {}
    for r, row in m._data.items():
        if any(isinstance(v, Fraction) and v.denominator != 1 for v in row.values()):
            raise ValueError("matrix has non-integral entries")
        data[r] = {c: int(v) for c, v in row.items()}
    return data


def _sparse_eliminate(data: Dict[int, Dict[int, int]], modulus: int = 0) -> Tuple[int, Dict[int, Dict[int, int]]]:
    """Pivot on unit entries as long as possible.

    Returns the number of unit pivots and the remaining (Schur complement)
    rows.  With ``modulus`` set every nonzero entry is a unit, so the
    remainder is empty and the count is the rank over F_p.
    """
    rows = {r: dict(row) for r, row in data.items() if row}
    cols: Dict[int, set] = {}
    for r, row in rows.items():
        for c in row:
            cols.setdefault(c, set()).add(r)
    npiv = 0
    while True:
        progress = False
        for r in sorted(rows, key=lambda k: (len(rows[k]), k)):
            row = rows.get(r)
            if row is None:
                continue
            if modulus:
                cand = list(row)
            else:
                cand = [c for c, v in row.items() if v == 1 or v == -1]
            if not cand:
                continue
            c = min(cand, key=lambda k: (len(cols[k]), k))
            v = row[c]
            inv = pow(v, -1, modulus) if modulus else v
            for r2 in list(cols[c]):
                if r2 == r:
                    continue
                row2 = rows[r2]
                f = row2[c] * inv
                if modulus:
                    f %= modulus
                for c2, w in row.items():
                    nv = row2.get(c2, 0) - f * w
                    if modulus:
                        nv %= modulus
                    if nv:
                        if c2 not in row2:
                            cols[c2].add(r2)
                        row2[c2] = nv
                    elif c2 in row2:
                        del row2[c2]
                        cols[c2].discard(r2)
                if not row2:
                    del rows[r2]
            for c2 in row:
                cols[c2].discard(r)
            del cols[c]
            del rows[r]
            npiv += 1
            progress = True
        if not progress:
            break
    return npiv, rows


def smith_normal_form(m: Matrix) -> List[int]:
    """Nonzero invariant factors d_1 | d_2 | ... of an integer matrix."""
    data = _integer_rows(m)
    if m.rows * m.cols <= DENSE_LIMIT * DENSE_LIMIT:
        dense = [[data.get(r, {}).get(c, 0) for c in range(m.cols)] for r in range(m.rows)]
        return _normalise_divisibility(_dense_snf_diagonal(dense))
    npiv, rest = _sparse_eliminate(data)
    factors = [1] * npiv
    if rest:
        rlist = sorted(rest)
        clist = sorted({c for row in rest.values() for c in row})
        cidx = {c: j for j, c in enumerate(clist)}
        dense = [[0] * len(clist) for _ in rlist]
        for i, r in enumerate(rlist):
            for c, v in rest[r].items():
                dense[i][cidx[c]] = v
        factors += _dense_snf_diagonal(dense)
    return _normalise_divisibility(factors)


def invariant_factors(m: Matrix, ring: Ring) -> List[int]:
    """Invariant factors over ``ring``; over a field these are all 1."""
    if ring.kind == "integers":
        return smith_normal_form(m)
    return [1] * rank(m, ring)


def rank(m: Matrix, ring: Ring) -> int:
    if not m._data:
        return 0
    if ring.kind == "prime-field":
        data = {}
        for r, row in m._data.items():
            d = {c: ring.reduce(v) for c, v in row.items()}
            d = {c: v for c, v in d.items() if v}
            if d:
                data[r] = d
        npiv, rest = _sparse_eliminate(data, ring.p)
        assert not rest
        return npiv
    # rank over Q equals rank over Z; clear denominators row by row
    data = {}
    for r, row in m._data.items():
        den = 1
        for v in row.values():
            if isinstance(v, Fraction):
                den = den * v.denominator // gcd(den, v.denominator)
        data[r] = {c: int(v * den) for c, v in row.items()}
    npiv, rest = _sparse_eliminate(data)
    if not rest:
        return npiv
    return npiv + _rational_rank(rest)


def _rational_rank(rows: Dict[int, Dict[int, int]]) -> int:
    work = {r: {c: Fraction(v) for c, v in row.items()} for r, row in rows.items()}
    rk = 0
    while work:
        r = min(work, key=lambda k: len(work[k]))
        row = work.pop(r)
        if not row:
            continue
        c = min(row)
        p = row[c]
        rk += 1
        for r2, row2 in list(work.items()):
            if c in row2:
                f = row2[c] / p
                for c2, v in row.items():
                    nv = row2.get(c2, 0) - f * v
                    if nv:
                        row2[c2] = nv
                    else:
                        row2.pop(c2, None)
                if not row2:
                    del work[r2]
    return rk


@dataclass(frozen=True)
class HomologyGroup:
    free_rank: int
    torsion: Tuple[int, ...] = field(default_factory=tuple)

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append("R" if self.free_rank == 1 else f"R^{self.free_rank}")
        parts += [f"R/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def homology_from_factors(dim: int, into: Sequence[int], out_rank: int) -> HomologyGroup:
    """H at a module of rank ``dim`` given the invariant factors of the
    incoming map and the rank of the outgoing map."""
    free = dim - len(into) - out_rank
    if free < 0:
        raise DimensionMismatch("ranks exceed the module rank")
    return HomologyGroup(free, tuple(d for d in into if d != 1))


def homology_at(d_in: Matrix, d_out: Matrix, ring: Ring) -> HomologyGroup:
    """ker(d_out) / im(d_in) for C^{i-1} --d_in--> C^i --d_out--> C^{i+1}."""
    if d_out.cols != d_in.rows:
        raise DimensionMismatch(
            f"d_in lands in rank {d_in.rows} but d_out starts at rank {d_out.cols}")
    if not (d_out @ d_in).is_zero(ring):
        raise CompositionNonzero("d_out . d_in is not zero")
    into = invariant_factors(d_in, ring)
    return homology_from_factors(d_in.rows, into, rank(d_out, ring))


# ---------------------------------------------------------------------------
# linear algebra over fields, used for induced maps on homology

def _field_inv(x, ring: Ring):
    if ring.kind == "prime-field":
        return pow(x, -1, ring.p)
    return 1 / Fraction(x)


def _field_norm(x, ring: Ring):
    if ring.kind == "prime-field":
        return ring.reduce(x)
    return Fraction(x)


def kernel_basis(m: Matrix, ring: Ring) -> List[Dict[int, object]]:
    """Basis of the kernel of ``m`` over a field, as sparse column vectors."""
    if not ring.is_field:
        raise ValueError("kernel_basis needs a field")
    # row reduce to RREF
    rows = []
    for r in range(m.rows):
        d = {c: _field_norm(v, ring) for c, v in m.row(r).items()}
        d = {c: v for c, v in d.items() if v}
        if d:
            rows.append(d)
    pivots: Dict[int, Dict[int, object]] = {}
    for row in rows:
        row = dict(row)
        for pc, prow in pivots.items():
            if pc in row:
                f = row[pc]
                for c, v in prow.items():
                    nv = row.get(c, 0) - f * v
                    if ring.kind == "prime-field":
                        nv %= ring.p
                    if nv:
                        row[c] = nv
                    else:
                        row.pop(c, None)
        if not row:
            continue
        pc = min(row)
        inv = _field_inv(row[pc], ring)
        row = {c: (v * inv) % ring.p if ring.kind == "prime-field" else v * inv for c, v in row.items()}
        for qc, qrow in pivots.items():
            if pc in qrow:
                f = qrow[pc]
                for c, v in row.items():
                    nv = qrow.get(c, 0) - f * v
                    if ring.kind == "prime-field":
                        nv %= ring.p
                    if nv:
                        qrow[c] = nv
                    else:
                        qrow.pop(c, None)
        pivots[pc] = row
    free = [c for c in range(m.cols) if c not in pivots]
    basis = []
    neg = (lambda v: (-v) % ring.p) if ring.kind == "prime-field" else (lambda v: -v)
    for fc in free:
        vec = {fc: 1}
        for pc, prow in pivots.items():
            if fc in prow:
                vec[pc] = neg(prow[fc])
        basis.append(vec)
    return basis


def columns_matrix(nrows: int, vectors: Sequence[Dict[int, object]]) -> Matrix:
    return Matrix.from_entries(nrows, len(vectors),
                               ((r, j, v) for j, vec in enumerate(vectors) for r, v in vec.items()))


def induced_rank(f: Matrix, d_src_out: Matrix, d_tgt_in: Matrix, ring: Ring) -> int:
    """Rank over a field of the map induced on homology by a chain map
    component ``f``: H(src) -> H(tgt) at one degree.

    ``d_src_out`` leaves the source degree, ``d_tgt_in`` enters the target
    degree.
    """
    cycles = kernel_basis(d_src_out, ring)
    if not cycles:
        return 0
    z = columns_matrix(f.cols, cycles)
    img = f @ z
    return rank(d_tgt_in.hstack(img), ring) - rank(d_tgt_in, ring)
