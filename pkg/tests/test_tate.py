import pytest

from ainftate.ainf import AInfAlgebra, Basis, cyclic_group, exterior_algebra_rank1, trivial_module
from ainftate.bar import TruncationPolicy, coborel
from ainftate.f2 import EMPTY, cone_sequence, exactness_check, homology_dims, induced_rank
from ainftate.tate import (
    NormError,
    certify_columns,
    dualizing_bimodule,
    norm_image,
    norm_map,
    tate_complex,
    twisted_borel,
    twisted_differential,
    twisted_setup,
    verify_norm,
)

from oracles import cyclic_tate

Z2, Z3, TRIVIAL, EXT = cyclic_group(2), cyclic_group(3), cyclic_group(1), exterior_algebra_rank1(1)


def test_chi_examples():
    d = dualizing_bimodule(Z2)
    e, g = 0, 1
    # one coalgebra letter, no bar letters: sum over b of b* (x) b g
    assert {p for p in d.chi(g, ()) if len(p[0]) == 1} == {((e,), g), ((g,), e)}
    # no coalgebra letters, one bar letter: the product
    assert {p for p in d.chi(g, (g,)) if len(p[0]) == 0} == {((), e)}
    x = dualizing_bimodule(EXT)
    assert {p for p in x.chi(1, ()) if len(p[0]) == 1} == {((0,), 1)}


def test_twisted_hand_example():
    s = twisted_setup(Z2, trivial_module(Z2))
    e, g = 0, 1
    # front augmentation letter gives e* and g* prefixes; chi gives e*(x)e and g*(x)g; e*(x)e cancels
    assert twisted_differential(s, ((), e, (), 0)) == {((g,), e, (), 0), ((g,), g, (), 0)}


@pytest.mark.parametrize("a,k,l", [(Z2, 5, 5), (Z3, 3, 3), (EXT, 4, 4), (TRIVIAL, 3, 3)])
def test_twisted_d2(a, k, l):
    c = twisted_borel(a, trivial_module(a), TruncationPolicy(k, l))
    assert c.d2_failures() == []


def test_twisted_trivial_group_is_homology_of_module():
    c = twisted_borel(TRIVIAL, trivial_module(TRIVIAL), TruncationPolicy(3, 6))
    h = homology_dims(c)
    assert h and all(v == (1 if d == 0 else 0) for d, v in h.items())


def test_twisted_z2_negative_degrees_vanish():
    c = twisted_borel(Z2, trivial_module(Z2), TruncationPolicy(4, 8))
    assert c.trusted.as_tuple() == (-2, 3)
    assert homology_dims(c) == {-2: 0, -1: 0, 0: 1, 1: 1, 2: 1, 3: 1}


def test_twisted_homology_stable_under_larger_box():
    small = twisted_borel(Z2, trivial_module(Z2), TruncationPolicy(4, 6))
    big = twisted_borel(Z2, trivial_module(Z2), TruncationPolicy(5, 7))
    common = [d for d in small.trusted_degrees() if d in big.trusted]
    assert common
    assert homology_dims(small, common) == homology_dims(big, common)


def _square_zero():
    """k{1, x, y} with x, y multiplying to zero: not self-injective, so its columns are not acyclic."""
    return AInfAlgebra.from_terms(
        Basis(("1", "x", "y")),
        [((0, 0), 0), ((0, 1), 1), ((1, 0), 1), ((0, 2), 2), ((2, 0), 2)],
        augmentation=[0],
        name="sq0",
    )


def test_column_certificate():
    assert certify_columns(Z2, 4).ok
    assert certify_columns(Z3, 4).ok
    assert certify_columns(EXT, 4).ok
    cert = certify_columns(_square_zero(), 4)
    assert not cert.ok and cert.betti_by_length[1] > 0
    higher = AInfAlgebra.from_terms(Z2.basis, [((0, 0, 0), 0)], augmentation=[0, 1])
    assert not certify_columns(higher, 3).ok


def test_uncertified_twisted_range_is_empty():
    a = _square_zero()
    c = twisted_borel(a, trivial_module(a), TruncationPolicy(2, 4))
    assert c.trusted == EMPTY
    assert not c.notes["certificate"].ok
    assert homology_dims(c) == {}


def test_twisted_exterior_is_shifted_by_the_socle():
    # A* is A shifted by deg x = 1, so twisted Borel homology is Tor shifted up by one
    c = twisted_borel(EXT, trivial_module(EXT), TruncationPolicy(2, 8))
    assert c.trusted.as_tuple() == (-1, 1)
    assert homology_dims(c) == {-1: 0, 0: 0, 1: 1}
    assert twisted_borel(EXT, trivial_module(EXT), TruncationPolicy(3, 3)).trusted.is_empty()


@pytest.mark.parametrize("a", [Z2, Z3, TRIVIAL])
def test_verify_norm_passes(a):
    rep = verify_norm(a, trivial_module(a), TruncationPolicy(4, 4))
    assert rep.ok and rep.chain_map_ok and rep.equivariance_ok
    assert rep.words_checked > 0


def test_norm_on_strict_modules_keeps_only_the_slot():
    s = twisted_setup(Z2, trivial_module(Z2))
    e, g = 0, 1
    assert norm_image(s, ((g,), e, (), 0), 4) == {(0, (g,), 0)}
    assert norm_image(s, ((), g, (), 0), 4) == {(0, (), 0)}
    assert norm_image(s, ((), g, (e,), 0), 4) == set()


def test_perturbed_norm_fails_with_witness():
    a, m, t = Z2, trivial_module(Z2), TruncationPolicy(3, 3)
    s = twisted_setup(a, m)

    def broken(w):
        out = norm_image(s, w, t.l_max)
        if w == ((), 1, (), 0):
            out = set()
        return out

    rep = verify_norm(a, m, t, norm=broken)
    assert not rep.ok
    assert "((), 1, (), 0)" in rep.failure


def test_norm_is_a_chain_map():
    n = norm_map(Z2, trivial_module(Z2), TruncationPolicy(3, 5))
    assert n.commutation_failures() == []


@pytest.mark.parametrize("order,k,l", [(2, 4, 8), (3, 2, 6), (1, 3, 6)])
def test_tate(order, k, l):
    a = cyclic_group(order)
    res = tate_complex(a, trivial_module(a), TruncationPolicy(k, l))
    h = res.betti()
    assert h, "empty trusted range"
    assert h == cyclic_tate(order, sorted(h))
    assert res.les_ok
    assert any(n.status == "pass" for n in res.les)


def test_tate_z2_spans_positive_and_negative_degrees():
    res = tate_complex(Z2, trivial_module(Z2), TruncationPolicy(4, 8))
    assert res.cone.trusted.as_tuple() == (-1, 3)
    assert res.betti() == {-1: 1, 0: 1, 1: 1, 2: 1, 3: 1}


def test_norm_iso_on_homology_for_trivial_group():
    res = tate_complex(TRIVIAL, trivial_module(TRIVIAL), TruncationPolicy(3, 6))
    assert induced_rank(res.norm, 0) == 1


def test_perturbed_norm_breaks_the_long_exact_sequence():
    a, m, t = Z2, trivial_module(Z2), TruncationPolicy(3, 5)
    n = norm_map(a, m, t)
    _, maps = cone_sequence(n)
    d = 0
    broken = n.with_flipped_entry(d, 0, 0)
    nodes = exactness_check([broken] + maps[1:], range(-2, 4))
    assert any(r.status == "fail" for r in nodes)


def test_norm_failure_blocks_tate(monkeypatch):
    import ainftate.tate as tate

    def fake(a, m, t, norm=None):
        return tate.NormReport(False, False, True, 1, "forced")

    monkeypatch.setattr(tate, "verify_norm", fake)
    with pytest.raises(NormError):
        tate.tate_complex(Z2, trivial_module(Z2), TruncationPolicy(2, 2))


def test_coborel_and_twisted_share_conventions():
    t = TruncationPolicy(3, 4)
    src = twisted_borel(Z2, trivial_module(Z2), t)
    tgt = coborel(Z2, trivial_module(Z2), t)
    n = norm_map(Z2, trivial_module(Z2), t, source=src, target=tgt)
    assert n.source is src and n.target is tgt
