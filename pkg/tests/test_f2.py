import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ainftate.f2 import (
    EMPTY,
    EVERYTHING,
    BoundaryError,
    ChainComplex,
    ChainMap,
    DegreeError,
    SparseF2Matrix,
    TrustedRange,
    cone,
    cone_sequence,
    exactness_check,
    homology_dims,
    induced_rank,
    rank_of_vectors,
)

from oracles import betti_from_dense, gf2_rank, matmul

dense_matrices = st.integers(1, 20).flatmap(
    lambda r: st.integers(1, 20).flatmap(
        lambda c: st.lists(st.lists(st.integers(0, 1), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


def test_rank_examples():
    assert SparseF2Matrix.identity(7).rank() == 7
    assert SparseF2Matrix.zero(3, 5).rank() == 0
    assert SparseF2Matrix.from_dense([[1, 1], [1, 1]]).rank() == 1
    assert SparseF2Matrix.from_dense([[1, 1, 0], [0, 1, 1], [1, 0, 1]]).rank() == 2


def test_from_entries_validates():
    with pytest.raises(ValueError):
        SparseF2Matrix.from_entries(2, 2, [(0, 0), (0, 0)])
    with pytest.raises(ValueError):
        SparseF2Matrix.from_entries(2, 2, [(2, 0)])
    m = SparseF2Matrix.from_entries(3, 2, [(2, 1), (0, 0)])
    assert m.entries() == [(0, 0), (2, 1)]
    assert m.to_dense() == [[1, 0], [0, 0], [0, 1]]


@settings(max_examples=150, deadline=None)
@given(dense_matrices)
def test_rank_matches_dense_oracle(dense):
    m = SparseF2Matrix.from_dense(dense)
    assert m.rank() == gf2_rank(dense)
    assert m.transpose().rank() == m.rank()


@settings(max_examples=150, deadline=None)
@given(dense_matrices)
def test_rank_nullity_and_kernel(dense):
    m = SparseF2Matrix.from_dense(dense)
    kernel = m.kernel_basis()
    assert len(kernel) + m.rank() == m.cols
    assert all(m.apply(v) == 0 for v in kernel)
    assert rank_of_vectors(kernel) == len(kernel)
    image = m.image_basis()
    assert len(image) == m.rank() == rank_of_vectors(image)


@settings(max_examples=80, deadline=None)
@given(dense_matrices, st.randoms(use_true_random=False))
def test_product_matches_dense(dense, rnd):
    other = [[rnd.randint(0, 1) for _ in range(rnd.randint(1, 8))] for _ in range(len(dense[0]))]
    width = len(other[0])
    other = [row[:width] + [0] * (width - len(row)) for row in other]
    got = (SparseF2Matrix.from_dense(dense) @ SparseF2Matrix.from_dense(other)).to_dense()
    assert got == matmul(dense, other)


def test_trusted_range_algebra():
    r = TrustedRange(-2, 3)
    assert -2 in r and 3 in r and 4 not in r
    assert r.intersect(TrustedRange(0, None)) == TrustedRange(0, 3)
    assert r.shift(1) == TrustedRange(-1, 4)
    assert EMPTY.is_empty() and not r.is_empty()
    assert 10**9 in EVERYTHING
    assert TrustedRange(None, 1).clip(-3, 5) == [-3, -2, -1, 0, 1]
    assert str(TrustedRange(None, 2)) == "[-inf, 2]"


# -- random complexes with known homology ----------------------------------------------


def _transvections(n, rnd, count):
    return [(i, j) for i, j in ((rnd.randrange(n), rnd.randrange(n)) for _ in range(count)) if i != j]


def _apply_rows(mat, ops):
    # left-multiply by the product of transvections I + e_{ij}, applied in order
    mat = [list(r) for r in mat]
    for i, j in ops:
        mat[i] = [(a + b) % 2 for a, b in zip(mat[i], mat[j])]
    return mat


def _apply_cols(mat, ops):
    mat = [list(r) for r in mat]
    for i, j in ops:
        for row in mat:
            row[j] = (row[j] + row[i]) % 2
    return mat


def random_complex(seed, lo=0, hi=4):
    """Direct sum of points and contractible pairs, disguised by random changes of basis.

    Returns (complex, dense dims, dense boundaries, expected betti).
    """
    rnd = random.Random(seed)
    slots = {d: [] for d in range(lo, hi + 1)}
    expected = {d: 0 for d in slots}
    pairs = []
    for _ in range(rnd.randint(1, 10)):
        d = rnd.randint(lo, hi)
        if d > lo and rnd.random() < 0.6:
            pairs.append((d, len(slots[d]), len(slots[d - 1])))
            slots[d].append("top")
            slots[d - 1].append("bottom")
        else:
            slots[d].append("point")
            expected[d] += 1
    dims = {d: len(v) for d, v in slots.items()}
    dense = {d: [[0] * dims[d] for _ in range(dims[d - 1])] for d in range(lo + 1, hi + 1)}
    for d, i, j in pairs:
        dense[d][j][i] = 1
    # conjugate: boundary_d -> P_{d-1} boundary_d P_d^{-1}
    change = {d: _transvections(dims[d], rnd, 3 * dims[d]) if dims[d] > 1 else [] for d in dims}
    for d in list(dense):
        m = _apply_rows(dense[d], change[d - 1])
        m = _apply_cols(m, change[d])
        dense[d] = m
    bases = {d: [("w", d, i) for i in range(n)] for d, n in dims.items()}
    boundaries = {d: SparseF2Matrix.from_dense(m) if m else SparseF2Matrix.zero(0, dims[d]) for d, m in dense.items()}
    for d in dense:
        if dims[d - 1] == 0:
            boundaries[d] = SparseF2Matrix.zero(0, dims[d])
    return ChainComplex(bases, boundaries, EVERYTHING, name=f"R{seed}"), dims, dense, expected


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10**6))
def test_homology_against_oracles(seed):
    c, dims, dense, expected = random_complex(seed)
    assert c.d2_failures() == []
    got = homology_dims(c, range(0, 5))
    assert got == expected
    oracle = betti_from_dense(dims, {d: m for d, m in dense.items() if m and m[0]})
    assert got == oracle


def test_boundary_error_and_degree_error():
    bad = ChainComplex(
        {0: ["a"], 1: ["b"], 2: ["c"]},
        {1: SparseF2Matrix.from_dense([[1]]), 2: SparseF2Matrix.from_dense([[1]])},
        TrustedRange(0, 1),
    )
    with pytest.raises(BoundaryError):
        homology_dims(bad)
    assert bad.d2_failures() == [2]
    with pytest.raises(DegreeError):
        homology_dims(bad, [2])


def test_cone_examples():
    c, *_ = random_complex(7)
    ident = ChainMap(c, c, {d: SparseF2Matrix.identity(c.dim(d)) for d in c.degrees()}, name="id")
    assert set(homology_dims(cone(ident), range(0, 6)).values()) == {0}
    zero = ChainMap(c, c, {}, name="0")
    h = homology_dims(c, range(-1, 6))
    hc = homology_dims(cone(zero), range(0, 6))
    assert all(hc[d] == h[d - 1] + h[d] for d in range(0, 6))


def test_cone_rejects_non_chain_maps():
    src = ChainComplex({0: ["a"], 1: ["b"]}, {1: SparseF2Matrix.from_dense([[1]])}, EVERYTHING)
    f = ChainMap(src, src, {1: SparseF2Matrix.identity(1), 0: SparseF2Matrix.zero(1, 1)})
    assert f.commutation_failures() == [1]
    with pytest.raises(ValueError):
        cone(f)


def test_cone_trusted_needs_both_adjacent_degrees():
    src = ChainComplex({0: ["a"]}, {}, TrustedRange(None, 3))
    tgt = ChainComplex({0: ["b"]}, {}, TrustedRange(-2, None))
    c = cone(ChainMap(src, tgt, {0: SparseF2Matrix.identity(1)}))
    assert c.trusted == TrustedRange(-1, 3)


def _homotopic_map(c, seed, plus_identity):
    """f = (id) + dh + hd for a random degree +1 map h; always a chain map."""
    rnd = random.Random(seed)
    comps = {}
    hs = {}
    for d in c.degrees():
        rows, cols = c.dim(d + 1), c.dim(d)
        hs[d] = SparseF2Matrix.from_dense([[rnd.randint(0, 1) for _ in range(cols)] for _ in range(rows)]) if rows and cols else SparseF2Matrix.zero(rows, cols)
    for d in c.degrees():
        n = c.dim(d)
        f = SparseF2Matrix.identity(n) if plus_identity else SparseF2Matrix.zero(n, n)
        f = f + c.boundary(d + 1) @ hs[d]
        if c.dim(d - 1):
            f = f + hs[d - 1] @ c.boundary(d)
        comps[d] = f
    return ChainMap(c, c, comps, name="f")


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.booleans())
def test_cone_long_exact_sequence(seed, plus_identity):
    c, *_ = random_complex(seed)
    f = _homotopic_map(c, seed + 1, plus_identity)
    assert f.commutation_failures() == []
    cn, maps = cone_sequence(f)
    nodes = exactness_check(maps, range(-1, 7))
    assert all(n.status == "pass" for n in nodes)
    # a map homotopic to the identity has acyclic cone; one homotopic to zero does not kill anything
    total = sum(homology_dims(cn, range(0, 6)).values())
    if plus_identity:
        assert total == 0
        assert all(induced_rank(f, d) == c.betti(d) for d in range(0, 5))
    else:
        assert total == 2 * sum(homology_dims(c, range(0, 5)).values())


def test_perturbed_map_breaks_exactness():
    c, *_ = random_complex(11)
    d = next(d for d in c.degrees() if c.dim(d) and c.boundary(d).rank())
    f = ChainMap(c, c, {e: SparseF2Matrix.identity(c.dim(e)) for e in c.degrees()})
    _, maps = cone_sequence(f)
    broken = f.with_flipped_entry(d, 0, 0)
    assert broken.commutation_failures()
    nodes = exactness_check([broken] + maps[1:], range(-1, 7))
    assert any(n.status == "fail" for n in nodes)
