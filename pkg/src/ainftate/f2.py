"""Sparse linear algebra over GF(2) and homology of finite chain complexes.

Matrices are stored column-major; each column is a Python ``int`` used as a
bitset over row indices.  Reduction follows the usual pivot-on-top-bit
scheme, which keeps columns sparse for the triangular-ish boundary matrices
produced by bar and cobar constructions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple


class BoundaryError(ValueError):
    """Raised when a boundary squares to a nonzero map."""

    def __init__(self, degrees: Sequence[int]):
        self.degrees = list(degrees)
        super().__init__(f"boundary does not square to zero at degrees {self.degrees}")


class DegreeError(ValueError):
    pass


def _bits(x: int) -> Iterable[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


class SparseF2Matrix:
    """A rows x cols matrix over GF(2) with bitset columns."""

    __slots__ = ("rows", "cols", "columns", "_reduced")

    def __init__(self, rows: int, cols: int, columns: Optional[Sequence[int]] = None):
        self.rows = rows
        self.cols = cols
        if columns is None:
            columns = [0] * cols
        if len(columns) != cols:
            raise ValueError("column count mismatch")
        limit = 1 << rows
        for c in columns:
            if c < 0 or c >= limit:
                raise ValueError("entry outside matrix bounds")
        self.columns: Tuple[int, ...] = tuple(columns)
        self._reduced = None

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Iterable[Tuple[int, int]]) -> "SparseF2Matrix":
        """Build from (row, col) positions; repeated positions are rejected."""
        columns = [0] * cols
        seen = set()
        for r, c in entries:
            if (r, c) in seen:
                raise ValueError(f"duplicate entry {(r, c)}")
            if not (0 <= r < rows and 0 <= c < cols):
                raise ValueError(f"entry {(r, c)} outside {rows}x{cols}")
            seen.add((r, c))
            columns[c] |= 1 << r
        return cls(rows, cols, columns)

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[int]]) -> "SparseF2Matrix":
        rows = len(dense)
        cols = len(dense[0]) if rows else 0
        return cls.from_entries(rows, cols, ((r, c) for r in range(rows) for c in range(cols) if dense[r][c] % 2))

    @classmethod
    def identity(cls, n: int) -> "SparseF2Matrix":
        return cls(n, n, [1 << i for i in range(n)])

    @classmethod
    def zero(cls, rows: int, cols: int) -> "SparseF2Matrix":
        return cls(rows, cols)

    def entries(self) -> List[Tuple[int, int]]:
        return sorted((r, c) for c, col in enumerate(self.columns) for r in _bits(col))

    def to_dense(self) -> List[List[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for r, c in self.entries():
            out[r][c] = 1
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseF2Matrix):
            return NotImplemented
        return (self.rows, self.cols, self.columns) == (other.rows, other.cols, other.columns)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.columns))

    def __repr__(self) -> str:
        return f"SparseF2Matrix({self.rows}x{self.cols}, nnz={self.nnz})"

    @property
    def nnz(self) -> int:
        return sum(bin(c).count("1") for c in self.columns)

    def is_zero(self) -> bool:
        return not any(self.columns)

    def get(self, r: int, c: int) -> int:
        return (self.columns[c] >> r) & 1

    def flip(self, r: int, c: int) -> "SparseF2Matrix":
        cols = list(self.columns)
        cols[c] ^= 1 << r
        return SparseF2Matrix(self.rows, self.cols, cols)

    def apply(self, vec: int) -> int:
        """Multiply by a column vector given as a bitset over columns."""
        out = 0
        for c in _bits(vec):
            out ^= self.columns[c]
        return out

    def __matmul__(self, other: "SparseF2Matrix") -> "SparseF2Matrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        return SparseF2Matrix(self.rows, other.cols, [self.apply(c) for c in other.columns])

    def __add__(self, other: "SparseF2Matrix") -> "SparseF2Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return SparseF2Matrix(self.rows, self.cols, [a ^ b for a, b in zip(self.columns, other.columns)])

    def transpose(self) -> "SparseF2Matrix":
        out = [0] * self.rows
        for c, col in enumerate(self.columns):
            for r in _bits(col):
                out[r] |= 1 << c
        return SparseF2Matrix(self.cols, self.rows, out)

    def hstack(self, other: "SparseF2Matrix") -> "SparseF2Matrix":
        if self.rows != other.rows:
            raise ValueError("row mismatch")
        return SparseF2Matrix(self.rows, self.cols + other.cols, list(self.columns) + list(other.columns))

    def _reduce(self):
        # pivots: top set bit -> (reduced column, combination of original columns)
        if self._reduced is None:
            pivots: Dict[int, Tuple[int, int]] = {}
            kernel: List[int] = []
            for j, col in enumerate(self.columns):
                combo = 1 << j
                while col:
                    top = col.bit_length() - 1
                    hit = pivots.get(top)
                    if hit is None:
                        break
                    col ^= hit[0]
                    combo ^= hit[1]
                if col:
                    pivots[col.bit_length() - 1] = (col, combo)
                else:
                    kernel.append(combo)
            self._reduced = (pivots, kernel)
        return self._reduced

    def rank(self) -> int:
        return len(self._reduce()[0])

    def kernel_basis(self) -> List[int]:
        """Kernel vectors as bitsets over columns."""
        return list(self._reduce()[1])

    def image_basis(self) -> List[int]:
        """A basis of the column space, as bitsets over rows."""
        return [v[0] for _, v in sorted(self._reduce()[0].items())]


def rank(m: SparseF2Matrix) -> int:
    return m.rank()


def rank_of_vectors(vectors: Iterable[int]) -> int:
    pivots: Dict[int, int] = {}
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            if top not in pivots:
                pivots[top] = v
                break
            v ^= pivots[top]
    return len(pivots)


def dense_rank(dense: Sequence[Sequence[int]]) -> int:
    """Plain row reduction on a list-of-lists matrix; kept independent of the bitset path."""
    work = [list(r) for r in dense]
    if not work:
        return 0
    n_rows, n_cols = len(work), len(work[0])
    rk = 0
    for col in range(n_cols):
        pivot = next((r for r in range(rk, n_rows) if work[r][col] % 2), None)
        if pivot is None:
            continue
        work[rk], work[pivot] = work[pivot], work[rk]
        for r in range(n_rows):
            if r != rk and work[r][col] % 2:
                work[r] = [(x + y) % 2 for x, y in zip(work[r], work[rk])]
        rk += 1
    return rk


# -- trusted ranges -----------------------------------------------------------

Bound = Optional[int]


@dataclass(frozen=True)
class TrustedRange:
    """Closed degree interval; ``None`` means unbounded on that side."""

    lo: Bound = None
    hi: Bound = None

    def __contains__(self, d: int) -> bool:
        return (self.lo is None or d >= self.lo) and (self.hi is None or d <= self.hi)

    def intersect(self, other: "TrustedRange") -> "TrustedRange":
        lo = self.lo if other.lo is None else other.lo if self.lo is None else max(self.lo, other.lo)
        hi = self.hi if other.hi is None else other.hi if self.hi is None else min(self.hi, other.hi)
        return TrustedRange(lo, hi)

    def shift(self, s: int) -> "TrustedRange":
        return TrustedRange(None if self.lo is None else self.lo + s, None if self.hi is None else self.hi + s)

    def is_empty(self) -> bool:
        return self.lo is not None and self.hi is not None and self.lo > self.hi

    def clip(self, lo: int, hi: int) -> List[int]:
        return [d for d in range(lo, hi + 1) if d in self]

    def as_tuple(self) -> Tuple[Bound, Bound]:
        return (self.lo, self.hi)

    def __str__(self) -> str:
        lo = "-inf" if self.lo is None else str(self.lo)
        hi = "+inf" if self.hi is None else str(self.hi)
        return f"[{lo}, {hi}]"


EMPTY = TrustedRange(1, 0)
EVERYTHING = TrustedRange()


@dataclass
class ChainComplex:
    """Finite chain complex over GF(2) with homological (degree-lowering) boundaries.

    ``bases[d]`` lists the labels spanning degree ``d``; ``boundaries[d]`` is the
    matrix from degree ``d`` to ``d - 1``.  Missing degrees are zero.
    """

    bases: Dict[int, List[Hashable]]
    boundaries: Dict[int, SparseF2Matrix]
    trusted: TrustedRange = EVERYTHING
    name: str = ""
    notes: Dict[str, object] = field(default_factory=dict, compare=False)
    _index: Dict[int, Dict[Hashable, int]] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.bases = {d: list(b) for d, b in self.bases.items() if b}
        for d, m in self.boundaries.items():
            if (m.rows, m.cols) != (self.dim(d - 1), self.dim(d)):
                raise ValueError(
                    f"boundary at degree {d} has shape {m.rows}x{m.cols}, "
                    f"expected {self.dim(d - 1)}x{self.dim(d)}"
                )

    def dim(self, d: int) -> int:
        return len(self.bases.get(d, ()))

    def degrees(self) -> List[int]:
        return sorted(self.bases)

    def span(self) -> Tuple[int, int]:
        ds = self.degrees()
        return (ds[0], ds[-1]) if ds else (0, -1)

    def total_dim(self) -> int:
        return sum(len(b) for b in self.bases.values())

    def boundary(self, d: int) -> SparseF2Matrix:
        m = self.boundaries.get(d)
        if m is None:
            m = SparseF2Matrix.zero(self.dim(d - 1), self.dim(d))
            self.boundaries[d] = m
        return m

    def index(self, d: int) -> Dict[Hashable, int]:
        if d not in self._index:
            self._index[d] = {w: i for i, w in enumerate(self.bases.get(d, ()))}
        return self._index[d]

    def d2_failures(self, degrees: Optional[Iterable[int]] = None) -> List[int]:
        """Degrees ``d`` where boundary(d-1) @ boundary(d) is nonzero."""
        if degrees is None:
            degrees = self.degrees()
        return [d for d in degrees if self.dim(d) and not (self.boundary(d - 1) @ self.boundary(d)).is_zero()]

    def cycles(self, d: int) -> List[int]:
        return self.boundary(d).kernel_basis()

    def boundary_vectors(self, d: int) -> List[int]:
        """Basis of the image of boundary(d + 1), as bitsets in degree ``d``."""
        return self.boundary(d + 1).image_basis()

    def betti(self, d: int) -> int:
        return self.dim(d) - self.boundary(d).rank() - self.boundary(d + 1).rank()

    def trusted_degrees(self) -> List[int]:
        lo, hi = self.span()
        return self.trusted.clip(lo, hi)


def homology_dims(c: ChainComplex, degrees: Optional[Iterable[int]] = None, check_d2: bool = True) -> Dict[int, int]:
    """Betti numbers in the trusted degrees of ``c`` (or a requested subset of them).

    Raises :class:`BoundaryError` if the boundary fails to square to zero where
    homology is being reported, and :class:`DegreeError` for requested degrees
    outside the trusted range.
    """
    if degrees is None:
        degrees = c.trusted_degrees()
    else:
        degrees = list(degrees)
        bad = [d for d in degrees if d not in c.trusted]
        if bad:
            raise DegreeError(f"degrees {bad} outside trusted range {c.trusted}")
    if check_d2:
        bad = c.d2_failures(sorted({e for d in degrees for e in (d, d + 1)}))
        if bad:
            raise BoundaryError(bad)
    return {d: c.betti(d) for d in degrees}


@dataclass
class ChainMap:
    """Degree-``shift`` map: ``components[d]`` goes from source degree d to target degree d + shift."""

    source: ChainComplex
    target: ChainComplex
    components: Dict[int, SparseF2Matrix]
    shift: int = 0
    name: str = ""

    def __post_init__(self):
        for d, m in self.components.items():
            if (m.rows, m.cols) != (self.target.dim(d + self.shift), self.source.dim(d)):
                raise ValueError(f"chain map component at degree {d} has wrong shape")

    def component(self, d: int) -> SparseF2Matrix:
        m = self.components.get(d)
        if m is None:
            m = SparseF2Matrix.zero(self.target.dim(d + self.shift), self.source.dim(d))
            self.components[d] = m
        return m

    def trusted(self) -> TrustedRange:
        return self.source.trusted.intersect(self.target.trusted.shift(-self.shift))

    def commutation_failures(self, degrees: Optional[Iterable[int]] = None) -> List[int]:
        """Degrees where boundary∘f differs from f∘boundary."""
        if degrees is None:
            degrees = self.source.degrees()
        bad = []
        for d in degrees:
            if not self.source.dim(d):
                continue
            lhs = self.target.boundary(d + self.shift) @ self.component(d)
            rhs = self.component(d - 1) @ self.source.boundary(d)
            if lhs != rhs:
                bad.append(d)
        return bad

    def with_flipped_entry(self, d: int, r: int, c: int) -> "ChainMap":
        comps = dict(self.components)
        comps[d] = self.component(d).flip(r, c)
        return ChainMap(self.source, self.target, comps, self.shift, self.name + "*")


def cone(f: ChainMap) -> ChainComplex:
    """Mapping cone: degree d is source_{d-1} ⊕ target_d, with (x, y) ↦ (∂x, f(x) + ∂y)."""
    if f.shift != 0:
        raise DegreeError("cone requires a degree-0 chain map")
    src, tgt = f.source, f.target
    bad = f.commutation_failures()
    if bad:
        raise ValueError(f"map does not commute with boundaries at degrees {bad}")
    degs = set(tgt.degrees()) | {d + 1 for d in src.degrees()}
    bases: Dict[int, List[Hashable]] = {}
    for d in sorted(degs):
        bases[d] = [("src", w) for w in src.bases.get(d - 1, ())] + [("tgt", w) for w in tgt.bases.get(d, ())]
    boundaries: Dict[int, SparseF2Matrix] = {}
    for d in sorted(degs):
        ns, nt = src.dim(d - 1), tgt.dim(d)
        ms_lo = src.dim(d - 2)
        ds = src.boundary(d - 1)
        fx = f.component(d - 1)
        dt = tgt.boundary(d)
        cols = []
        for j in range(ns):
            cols.append(ds.columns[j] | (fx.columns[j] << ms_lo))
        for j in range(nt):
            cols.append(dt.columns[j] << ms_lo)
        boundaries[d] = SparseF2Matrix(ms_lo + tgt.dim(d - 1), ns + nt, cols)
    # (d, d-1) must both be certified in each input: the five-lemma needs H_d and H_{d-1} of both.
    both = src.trusted.intersect(tgt.trusted)
    trusted = both.intersect(both.shift(1))
    return ChainComplex(bases, boundaries, trusted, name=f"Cone({f.name})")


def cone_sequence(f: ChainMap) -> Tuple[ChainComplex, List[ChainMap]]:
    """The cone together with the three maps of its long exact sequence.

    Returns ``(C, [f, incl, proj])`` where ``incl: target -> C`` and
    ``proj: C -> source`` lowers degree by one.
    """
    c = cone(f)
    src, tgt = f.source, f.target
    incl: Dict[int, SparseF2Matrix] = {}
    proj: Dict[int, SparseF2Matrix] = {}
    for d in c.degrees():
        ns = src.dim(d - 1)
        incl[d] = SparseF2Matrix(c.dim(d), tgt.dim(d), [1 << (ns + j) for j in range(tgt.dim(d))])
        proj[d] = SparseF2Matrix(ns, c.dim(d), [1 << j for j in range(ns)] + [0] * tgt.dim(d))
    return c, [
        f,
        ChainMap(tgt, c, incl, 0, "incl"),
        ChainMap(c, src, proj, -1, "proj"),
    ]


def induced_rank(f: ChainMap, d: int) -> int:
    """Rank of the map induced on homology from source degree d."""
    tgt = f.target
    e = d + f.shift
    bnd = tgt.boundary_vectors(e)
    imgs = [f.component(d).apply(z) for z in f.source.cycles(d)]
    return rank_of_vectors(list(bnd) + imgs) - len(bnd)


@dataclass
class NodeResult:
    complex_index: int
    degree: int
    status: str  # "pass", "fail", "skipped"
    detail: str = ""


def exactness_check(maps: Sequence[ChainMap], degrees: Iterable[int]) -> List[NodeResult]:
    """Check exactness of the long sequence induced by a cyclic chain of maps.

    ``maps[i]`` goes from complex i to complex i+1 (cyclically).  A node is
    (complex i, degree d): the incoming map lands in degree d and the outgoing
    map starts there.  Nodes touching an untrusted degree are skipped.
    """
    n = len(maps)
    for i in range(n):
        if maps[i].target is not maps[(i + 1) % n].source:
            raise ValueError("maps are not composable in a cycle")
    not_chain = [bool(m.commutation_failures()) for m in maps]
    results = []
    for d in degrees:
        for i in range(n):
            inc, out = maps[i - 1], maps[i]
            cx = out.source
            d_in = d - inc.shift
            d_out = d + out.shift
            need = [(inc.source, d_in), (cx, d), (out.target, d_out)]
            if any(e not in c.trusted for c, e in need):
                results.append(NodeResult(i, d, "skipped", "outside trusted range"))
                continue
            if not_chain[i - 1] or not_chain[i]:
                results.append(NodeResult(i, d, "fail", "a map does not commute with boundaries"))
                continue
            comp = out.component(d) @ inc.component(d_in)
            bnd = out.target.boundary_vectors(d_out)
            zero_comp = all(
                rank_of_vectors(list(bnd) + [comp.apply(z)]) == len(bnd) for z in inc.source.cycles(d_in)
            )
            r_in = induced_rank(inc, d_in)
            r_out = induced_rank(out, d)
            h = cx.betti(d)
            ok = zero_comp and r_in == h - r_out
            detail = f"dim H={h}, rank in={r_in}, rank out={r_out}"
            results.append(NodeResult(i, d, "pass" if ok else "fail", detail))
    return results
