"""Dualizing bimodule, twisted Borel complex, norm map and the Tate complex.

A twisted word is ``(prefix, slot, letters, module)``: coalgebra letters,
one algebra element in the dualizing slot, bar letters, and a module label.
Its differential has four parts:

1. augmentation coaction at the front of the prefix, plus delta_C on prefix letters;
2. the dualizing coaction, eating the slot and a leading run of bar letters and
   appending coalgebra letters right after the prefix;
3. mu_A on a run of bar letters;
4. the module action, eating a trailing run of bar letters and the module slot.

Bar letters are cut as a subcomplex (at most ``k_max``), prefix letters as a
quotient (at most ``l_max``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from .ainf import (
    LEFT,
    AInfAlgebra,
    AInfBimodule,
    AInfCoalgebra,
    AInfModule,
    PresentationError,
    algebra_as_bimodule,
    bimodule_as_coalgebra_bimodule,
    dualize_algebra,
    module_to_comodule,
    regular_module,
    reversed_dual,
    toggle,
    verify_bimodule_relations,
)
from .bar import (
    InhomogeneousError,
    TruncationPolicy,
    _assemble,
    _check_inputs,
    coborel,
    coborel_data,
    cobar_differential,
)
from .f2 import (
    EMPTY,
    ChainComplex,
    ChainMap,
    NodeResult,
    SparseF2Matrix,
    TrustedRange,
    cone_sequence,
    exactness_check,
    homology_dims,
)

TwistedWord = Tuple[Tuple[int, ...], int, Tuple[int, ...], int]


class NormError(RuntimeError):
    """The norm map failed its chain-map or equivariance check."""

    def __init__(self, report: "NormReport"):
        super().__init__(f"norm map check failed: {report.failure}")
        self.report = report


@dataclass(frozen=True)
class DualizingBimodule:
    """A seen as an (A*, A)-bimodule."""

    algebra: AInfAlgebra
    coalgebra: AInfCoalgebra
    bimodule: AInfBimodule

    def chi(self, slot: int, letters: Tuple[int, ...]):
        """Pairs (coalgebra letters, new slot) of chi(slot; letters), summed over all prefix lengths."""
        return self.bimodule.get((slot, letters))


def dualizing_bimodule(a: AInfAlgebra) -> DualizingBimodule:
    if not len(a.basis):
        raise PresentationError("dualizing bimodule needs a nonzero finite-dimensional algebra")
    b = bimodule_as_coalgebra_bimodule(algebra_as_bimodule(a))
    return DualizingBimodule(a, dualize_algebra(a), AInfBimodule("CA", b.basis, b.ops, name=f"D({a.name})"))


def verify_dualizing_bimodule(d: DualizingBimodule, k_check: int = 5):
    return verify_bimodule_relations(d.bimodule, d.coalgebra, d.algebra, k_check)


# -- twisted Borel ---------------------------------------------------------------


@dataclass
class TwistedSetup:
    """Everything needed to evaluate twisted-Borel and norm terms for (A, M)."""

    algebra: AInfAlgebra
    module: AInfModule
    dualizing: DualizingBimodule
    front: Tuple[Tuple[Tuple[int, ...], int], ...]
    norm_index: Dict[Tuple[int, Tuple[int, ...], int], frozenset] = field(repr=False)

    @property
    def coalgebra(self) -> AInfCoalgebra:
        return self.dualizing.coalgebra


def twisted_setup(a: AInfAlgebra, m: AInfModule) -> TwistedSetup:
    if a.augmentation is None:
        raise PresentationError("twisted Borel complex needs an augmented algebra")
    if m.side != LEFT:
        raise PresentationError("twisted Borel complex takes a left module")
    d = dualizing_bimodule(a)
    cb = coborel_data(a, m)
    front = tuple(sorted(cb.left.delta(0)))
    # norm: mu_M(b_1..b_j, slot, a_1..a_k, m) read with the b's dualized
    index: Dict[Tuple[int, Tuple[int, ...], int], set] = {}
    for inputs, x, out in m.terms():
        for p in range(len(inputs)):
            key = (inputs[p], inputs[p + 1:], x)
            toggle(index.setdefault(key, set()), (reversed_dual(inputs[:p]), out))
    norm_index = {k: frozenset(v) for k, v in index.items() if v}
    return TwistedSetup(a, m, d, front, norm_index)


def twisted_words(s: TwistedSetup, t: TruncationPolicy) -> List[TwistedWord]:
    na, nm = len(s.algebra.basis), len(s.module.basis)
    out = []
    for l in range(t.l_max + 1):
        for k in range(t.k_max + 1):
            for prefix in itertools.product(range(na), repeat=l):
                for letters in itertools.product(range(na), repeat=k):
                    for slot in range(na):
                        for x in range(nm):
                            out.append((prefix, slot, letters, x))
    return out


def twisted_degree(s: TwistedSetup) -> Callable[[TwistedWord], int]:
    ad = s.algebra.basis.degrees
    cd = s.coalgebra.basis.degrees
    md = s.module.basis.degrees

    def degree(w: TwistedWord) -> int:
        prefix, slot, letters, x = w
        return sum(cd[c] - 1 for c in prefix) + ad[slot] + sum(ad[c] + 1 for c in letters) + md[x]

    return degree


def twisted_terms(s: TwistedSetup, w: TwistedWord, parts: str = "1234") -> Iterable[TwistedWord]:
    prefix, slot, letters, x = w
    k = len(letters)
    if "1" in parts:
        for l1, _ in s.front:
            yield (l1 + prefix, slot, letters, x)
        c = s.coalgebra
        for i, ch in enumerate(prefix):
            for u in c.delta(ch):
                yield (prefix[:i] + u + prefix[i + 1:], slot, letters, x)
    if "2" in parts:
        for j in range(k + 1):
            for l1, slot1 in s.dualizing.chi(slot, letters[:j]):
                yield (prefix + l1, slot1, letters[j:], x)
    if "3" in parts:
        a = s.algebra
        for k2 in range(1, k + 1):
            for i in range(k - k2 + 1):
                for o in a.mu(letters[i:i + k2]):
                    yield (prefix, slot, letters[:i] + (o,) + letters[i + k2:], x)
    if "4" in parts:
        m = s.module
        for i in range(k + 1):
            for x1 in m.act(letters[i:], x):
                yield (prefix, slot, letters[:i], x1)


def twisted_differential(s: TwistedSetup, w: TwistedWord, parts: str = "1234") -> set:
    acc: set = set()
    for term in twisted_terms(s, w, parts):
        toggle(acc, term)
    return acc


@dataclass
class ColumnCertificate:
    ok: bool
    reason: str
    betti_by_length: Dict[int, int] = field(default_factory=dict)


def certify_columns(a: AInfAlgebra, l_max: int) -> ColumnCertificate:
    """Check that Omega(k, A*, A) has no cohomology strictly between 0 and ``l_max`` letters.

    This is the vertical complex of every bar column of the twisted Borel
    complex; when it is concentrated at zero letters, truncating the prefix
    only creates spurious classes in the top row, which the trusted range
    then avoids.  Only algebras with purely binary operations are bigraded by
    letter count, so anything else is refused.
    """
    if any(len(k) != 2 for k in a.ops):
        return ColumnCertificate(False, "algebra has non-binary operations; column filtration not certified")
    cb = coborel_data(a, regular_module(a, LEFT))
    left, c = cb.left, cb.coalgebra
    right = module_to_comodule(a, regular_module(a, LEFT))
    words = [
        (0, letters, y)
        for l in range(l_max + 1)
        for letters in itertools.product(range(len(a.basis)), repeat=l)
        for y in range(len(a.basis))
    ]
    cx = _assemble(
        words,
        lambda w: -len(w[1]),
        lambda w: cobar_differential(left, c, right, w),
        lambda w: len(w[1]) <= l_max,
        TrustedRange(),
        "column",
    )
    betti = {l: cx.betti(-l) for l in range(0, l_max)}
    stray = [l for l in range(1, l_max) if betti[l]]
    if stray:
        return ColumnCertificate(False, f"column cohomology at letter counts {stray}", betti)
    return ColumnCertificate(True, "column cohomology concentrated at zero letters", betti)


def twisted_trusted(s: TwistedSetup, t: TruncationPolicy) -> Tuple[TrustedRange, ColumnCertificate]:
    cert = certify_columns(s.algebra, t.l_max)
    if not cert.ok:
        return EMPTY, cert
    ad = s.algebra.basis.degrees
    bar_w = [d + 1 for d in ad]
    cob_w = [d - 1 for d in s.coalgebra.basis.degrees]
    md = s.module.basis.degrees
    if min(bar_w) <= 0 or max(cob_w) >= 0:
        return EMPTY, ColumnCertificate(False, "letter weights do not separate the truncation frontiers")
    # bar frontier: shortest-degree word with k_max + 1 letters and empty prefix
    hi = min(ad) + min(md) + (t.k_max + 1) * min(bar_w) - 2
    # prefix frontier: spurious classes live on words with exactly l_max prefix letters
    top_row = t.l_max * max(cob_w) + max(ad) + t.k_max * max(bar_w) + max(md)
    return TrustedRange(top_row + 2, hi), cert


def twisted_borel(a: AInfAlgebra, m: AInfModule, t: TruncationPolicy, verify: bool = True, parts: str = "1234") -> ChainComplex:
    if verify:
        _check_inputs(a, m)
    s = twisted_setup(a, m)
    trusted, cert = twisted_trusted(s, t)
    l_max = t.l_max
    cx = _assemble(
        twisted_words(s, t),
        twisted_degree(s),
        lambda w: twisted_differential(s, w, parts),
        lambda w: len(w[0]) <= l_max,
        trusted,
        f"C~+({m.name})",
    )
    cx.notes["certificate"] = cert
    return cx


# -- norm map ----------------------------------------------------------------------


def norm_terms(s: TwistedSetup, w: TwistedWord) -> Iterable[Tuple[int, Tuple[int, ...], int]]:
    """Norm of a twisted word, as co-Borel words (trivial generator, letters, module)."""
    prefix, slot, letters, x = w
    for l1, x1 in s.norm_index.get((slot, letters, x), ()):
        yield (0, prefix + l1, x1)


def norm_image(s: TwistedSetup, w: TwistedWord, l_max: int) -> set:
    acc: set = set()
    for term in norm_terms(s, w):
        if len(term[1]) <= l_max:
            toggle(acc, term)
    return acc


def norm_map(a: AInfAlgebra, m: AInfModule, t: TruncationPolicy, verify: bool = True,
             source: Optional[ChainComplex] = None, target: Optional[ChainComplex] = None) -> ChainMap:
    """Chain map from the twisted Borel complex to the co-Borel complex."""
    s = twisted_setup(a, m)
    src = source if source is not None else twisted_borel(a, m, t, verify)
    tgt = target if target is not None else coborel(a, m, t, verify)
    comps: Dict[int, SparseF2Matrix] = {}
    for d in src.degrees():
        tindex = tgt.index(d)
        cols = []
        for w in src.bases[d]:
            col = 0
            for out in norm_image(s, w, t.l_max):
                j = tindex.get(out)
                if j is None:
                    raise InhomogeneousError(f"norm of {w} has a term {out} outside degree {d}")
                col ^= 1 << j
            cols.append(col)
        comps[d] = SparseF2Matrix(tgt.dim(d), src.dim(d), cols)
    return ChainMap(src, tgt, comps, 0, "N")


@dataclass
class NormReport:
    ok: bool
    chain_map_ok: bool
    equivariance_ok: bool
    words_checked: int
    failure: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "chain_map": self.chain_map_ok,
            "equivariance": self.equivariance_ok,
            "words_checked": self.words_checked,
            "failure": self.failure,
        }


def verify_norm(a: AInfAlgebra, m: AInfModule, t: TruncationPolicy,
                norm: Optional[Callable[[TwistedWord], set]] = None) -> NormReport:
    """Word-by-word check that the norm commutes with the differentials and with prefix concatenation.

    ``norm`` overrides the norm on single words (used to test that a broken
    norm is caught).  Every word of the truncated twisted complex is checked:
    both truncations are compatible with all maps involved, so the identities
    hold exactly there, not only in the trusted range.
    """
    _check_inputs(a, m)
    s = twisted_setup(a, m)
    cb = coborel_data(a, m)
    l_max = t.l_max
    if norm is None:
        def norm(w):
            return norm_image(s, w, l_max)

    def d_minus(v: Iterable) -> set:
        acc: set = set()
        for u in v:
            for term in cobar_differential(cb.left, cb.coalgebra, cb.right, u):
                if len(term[1]) <= l_max:
                    toggle(acc, term)
        return acc

    def norm_sum(v: Iterable) -> set:
        acc: set = set()
        for u in v:
            if len(u[0]) <= l_max:
                for term in norm(u):
                    toggle(acc, term)
        return acc

    words = twisted_words(s, t)
    chain_ok = equiv_ok = True
    failure = None
    letters = range(len(a.basis))
    for w in words:
        lhs = d_minus(norm(w))
        rhs = norm_sum(twisted_differential(s, w))
        if lhs != rhs:
            chain_ok = False
            failure = failure or f"chain-map identity fails on {w}: difference {sorted(lhs ^ rhs)[:4]}"
        if len(w[0]) < l_max:
            nw = norm(w)
            for x in letters:
                acted = {(0, (x,) + u[1], u[2]) for u in nw if len(u[1]) < l_max}
                direct = {u for u in norm((((x,) + w[0]), w[1], w[2], w[3])) if len(u[1]) <= l_max}
                if acted != direct:
                    equiv_ok = False
                    failure = failure or f"equivariance fails for letter {x} on {w}"
        if not (chain_ok and equiv_ok):
            break
    return NormReport(chain_ok and equiv_ok, chain_ok, equiv_ok, len(words), failure)


# -- Tate complex ----------------------------------------------------------------------


@dataclass
class TateResult:
    twisted: ChainComplex
    coborel: ChainComplex
    norm: ChainMap
    cone: ChainComplex
    maps: List[ChainMap]
    norm_report: NormReport
    les: List[NodeResult]

    @property
    def les_ok(self) -> bool:
        return all(r.status != "fail" for r in self.les)

    def betti(self) -> Dict[int, int]:
        return homology_dims(self.cone)


def tate_complex(a: AInfAlgebra, m: AInfModule, t: TruncationPolicy, check_norm: bool = True,
                 les_degrees: Optional[Iterable[int]] = None) -> TateResult:
    """Cone of the norm map, with its long exact sequence checked on trusted nodes."""
    rep = verify_norm(a, m, t) if check_norm else NormReport(True, True, True, 0, "not checked")
    if not rep.ok:
        raise NormError(rep)
    src = twisted_borel(a, m, t, verify=False)
    tgt = coborel(a, m, t, verify=False)
    n = norm_map(a, m, t, verify=False, source=src, target=tgt)
    c, maps = cone_sequence(n)
    c.name = f"C_inf({m.name})"
    if les_degrees is None:
        lo, hi = c.span()
        les_degrees = range(lo, hi + 1)
    les = exactness_check(maps, les_degrees)
    return TateResult(src, tgt, n, c, maps, rep, les)
