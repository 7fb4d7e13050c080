"""Unreduced bar and cobar complexes, and the Borel / co-Borel complexes built from them.

Words are plain tuples ``(left, letters, right)`` of basis indices.  The bar
complex is truncated to at most ``k_max`` letters, which is a subcomplex since
no term of the bar differential adds letters.  The cobar complex is truncated
to at most ``l_max`` letters as a quotient: terms that would exceed the bound
are dropped, which is legitimate because the cobar differential never removes
letters.  Each construction stamps the range of degrees whose homology is
unaffected by the cut.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from .ainf import (
    LEFT,
    RIGHT,
    AInfAlgebra,
    AInfCoalgebra,
    AInfComodule,
    AInfModule,
    PresentationError,
    dualize_algebra,
    module_to_comodule,
    toggle,
    trivial_module,
    verify_algebra_relations,
    verify_comodule_relations,
    verify_coalgebra_relations,
    verify_module_relations,
)
from .f2 import EMPTY, ChainComplex, SparseF2Matrix, TrustedRange

Word = Tuple[int, Tuple[int, ...], int]


class InhomogeneousError(ValueError):
    """A differential term does not lower degree by exactly one."""


@dataclass(frozen=True)
class TruncationPolicy:
    k_max: int = 4
    l_max: int = 4

    def __post_init__(self):
        if self.k_max < 1 or self.l_max < 1:
            raise ValueError("k_max and l_max must be >= 1")


def _assemble(
    words: Sequence[Hashable],
    degree: Callable[[Hashable], int],
    differential: Callable[[Hashable], Iterable[Hashable]],
    keep: Callable[[Hashable], bool],
    trusted: TrustedRange,
    name: str,
) -> ChainComplex:
    """Turn a word basis and a term-level differential into a ChainComplex.

    ``words`` must already be in the desired basis order.  Output terms failing
    ``keep`` are dropped (quotient truncation); any other term must be a basis
    word one degree lower.
    """
    bases: Dict[int, List[Hashable]] = {}
    for w in words:
        bases.setdefault(degree(w), []).append(w)
    index = {d: {w: i for i, w in enumerate(ws)} for d, ws in bases.items()}
    boundaries: Dict[int, SparseF2Matrix] = {}
    for d, ws in bases.items():
        target = index.get(d - 1, {})
        cols = []
        for w in ws:
            col = 0
            for out in differential(w):
                if not keep(out):
                    continue
                j = target.get(out)
                if j is None:
                    if degree(out) != d - 1:
                        raise InhomogeneousError(
                            f"{name}: term {out} of d{w} has degree {degree(out)}, expected {d - 1}; "
                            "assign internal degrees so every operation is homogeneous"
                        )
                    raise AssertionError(f"{name}: term {out} escaped the truncation")
                col ^= 1 << j
            cols.append(col)
        boundaries[d] = SparseF2Matrix(len(target), len(ws), cols)
    return ChainComplex(bases, boundaries, trusted, name)


def _sum(terms: Iterable[Hashable]) -> set:
    acc: set = set()
    for t in terms:
        toggle(acc, t)
    return acc


# -- bar side -------------------------------------------------------------------------


def bar_words(m: AInfModule, a: AInfAlgebra, n: AInfModule, k_max: int) -> List[Word]:
    """Basis of the truncated bar complex, ordered by (letter count, letters, end labels)."""
    out = []
    for k in range(k_max + 1):
        for letters in itertools.product(range(len(a.basis)), repeat=k):
            for x in range(len(m.basis)):
                for y in range(len(n.basis)):
                    out.append((x, letters, y))
    return out


def bar_degree(m: AInfModule, a: AInfAlgebra, n: AInfModule) -> Callable[[Word], int]:
    ad, md, nd = a.basis.degrees, m.basis.degrees, n.basis.degrees

    def degree(w: Word) -> int:
        x, letters, y = w
        return md[x] + sum(ad[c] + 1 for c in letters) + nd[y]

    return degree


def bar_terms(m: AInfModule, a: AInfAlgebra, n: AInfModule, w: Word) -> Iterable[Word]:
    """All terms of the bar differential of ``w`` (with multiplicity)."""
    x, letters, y = w
    k = len(letters)
    for j in range(k + 1):
        for x1 in m.act(letters[:j], x):
            yield (x1, letters[j:], y)
    for k2 in range(1, k + 1):
        for i in range(k - k2 + 1):
            for o in a.mu(letters[i:i + k2]):
                yield (x, letters[:i] + (o,) + letters[i + k2:], y)
    for i in range(k + 1):
        for y1 in n.act(letters[i:], y):
            yield (x, letters[:i], y1)


def bar_differential(m: AInfModule, a: AInfAlgebra, n: AInfModule, w: Word) -> set:
    return _sum(bar_terms(m, a, n, w))


def bar_trusted(m: AInfModule, a: AInfAlgebra, n: AInfModule, k_max: int) -> TrustedRange:
    """Degrees whose homology no excluded (longer) word can reach.

    A degree d is certified when every word of degree d and d + 1 has at most
    ``k_max`` letters.  Needs every letter to have positive weight.
    """
    weights = [d + 1 for d in a.basis.degrees]
    if not weights or min(weights) <= 0:
        return EMPTY
    floor = min(m.basis.degrees) + min(n.basis.degrees) + (k_max + 1) * min(weights)
    return TrustedRange(None, floor - 2)


def _check_inputs(a: AInfAlgebra, *mods: AInfModule, k_check: Optional[int] = None) -> None:
    k = k_check or max(3, a.n_max + 1)
    rep = verify_algebra_relations(a, k)
    if not rep.ok:
        raise PresentationError(f"algebra fails A-infinity relations at {rep.witness}", rep.witness)
    for mod in mods:
        rep = verify_module_relations(a, mod, k)
        if not rep.ok:
            raise PresentationError(f"module {mod.name!r} fails relations at {rep.witness}", rep.witness)


def bar_complex(m: AInfModule, a: AInfAlgebra, n: AInfModule, t: TruncationPolicy, verify: bool = True) -> ChainComplex:
    """B(M, A, N) on words with at most ``t.k_max`` letters."""
    if m.side != RIGHT or n.side != LEFT:
        raise PresentationError("bar complex needs a right module on the left and a left module on the right")
    if verify:
        _check_inputs(a, m, n)
    words = bar_words(m, a, n, t.k_max)
    return _assemble(
        words,
        bar_degree(m, a, n),
        lambda w: bar_differential(m, a, n, w),
        lambda w: True,
        bar_trusted(m, a, n, t.k_max),
        f"B({m.name},{a.name},{n.name})",
    )


def borel(a: AInfAlgebra, m: AInfModule, t: TruncationPolicy, verify: bool = True) -> ChainComplex:
    """B(k, A, M) with k the augmentation module."""
    if a.augmentation is None:
        raise PresentationError("the Borel complex needs an augmented algebra")
    c = bar_complex(trivial_module(a, RIGHT), a, m, t, verify)
    c.name = f"C+({m.name})"
    return c


def bar_coproduct(w: Word) -> List[Tuple[Word, Word]]:
    """All splittings (m, a_1..a_i, 1) ⊗ (1, a_{i+1}..a_k, n); the trivial module's generator is index 0."""
    x, letters, y = w
    return [((x, letters[:i], 0), (0, letters[i:], y)) for i in range(len(letters) + 1)]


# -- cobar side -------------------------------------------------------------------------


def cobar_words(m: AInfComodule, c: AInfCoalgebra, n: AInfComodule, l_max: int) -> List[Word]:
    return bar_words(m, c, n, l_max)  # same enumeration; only sizes of bases are used


def cobar_degree(m: AInfComodule, c: AInfCoalgebra, n: AInfComodule) -> Callable[[Word], int]:
    cd, md, nd = c.basis.degrees, m.basis.degrees, n.basis.degrees

    def degree(w: Word) -> int:
        x, letters, y = w
        return md[x] + sum(cd[ch] - 1 for ch in letters) + nd[y]

    return degree


def cobar_terms(m: AInfComodule, c: AInfCoalgebra, n: AInfComodule, w: Word, parts: str = "123") -> Iterable[Word]:
    """Cobar differential terms: part 1 is the left-end coaction, 2 the letters, 3 the right-end coaction."""
    x, letters, y = w
    if "1" in parts:
        for l1, x1 in m.delta(x):
            yield (x1, l1 + letters, y)
    if "2" in parts:
        for i, ch in enumerate(letters):
            for u in c.delta(ch):
                yield (x, letters[:i] + u + letters[i + 1:], y)
    if "3" in parts:
        for l1, y1 in n.delta(y):
            yield (x, letters + l1, y1)


def cobar_differential(m, c, n, w: Word, parts: str = "123") -> set:
    return _sum(cobar_terms(m, c, n, w, parts))


def cobar_trusted(m: AInfComodule, c: AInfCoalgebra, n: AInfComodule, l_max: int) -> TrustedRange:
    """Degrees d for which degrees d and d - 1 contain no word longer than ``l_max``."""
    weights = [d - 1 for d in c.basis.degrees]
    if not weights or max(weights) >= 0:
        return EMPTY
    ceiling = max(m.basis.degrees) + max(n.basis.degrees) + (l_max + 1) * max(weights)
    return TrustedRange(ceiling + 2, None)


def cobar_complex(
    m: AInfComodule, c: AInfCoalgebra, n: AInfComodule, t: TruncationPolicy, verify: bool = True, parts: str = "123"
) -> ChainComplex:
    """Omega(M, C, N) on words with at most ``t.l_max`` letters, as a quotient complex."""
    if m.side != RIGHT or n.side != LEFT:
        raise PresentationError("cobar complex needs a right comodule on the left and a left comodule on the right")
    if verify:
        k = 4
        for rep in (
            verify_coalgebra_relations(c, k),
            verify_comodule_relations(c, m, k),
            verify_comodule_relations(c, n, k),
        ):
            if not rep.ok:
                raise PresentationError(f"{rep.structure} fails relations at {rep.witness}", rep.witness)
    l_max = t.l_max
    return _assemble(
        cobar_words(m, c, n, l_max),
        cobar_degree(m, c, n),
        lambda w: cobar_differential(m, c, n, w, parts),
        lambda w: len(w[1]) <= l_max,
        cobar_trusted(m, c, n, l_max),
        f"Omega({m.name},{c.name},{n.name})",
    )


@dataclass(frozen=True)
class CoBorelData:
    """The three ingredients of the co-Borel complex Omega(k, A*, M)."""

    coalgebra: AInfCoalgebra
    left: AInfComodule
    right: AInfComodule


def coborel_data(a: AInfAlgebra, m: AInfModule) -> CoBorelData:
    if a.augmentation is None:
        raise PresentationError("the co-Borel complex needs an augmented algebra")
    if m.side != LEFT:
        raise PresentationError("co-Borel complex takes a left module")
    return CoBorelData(
        dualize_algebra(a),
        module_to_comodule(a, trivial_module(a, RIGHT)),
        module_to_comodule(a, m),
    )


def coborel(a: AInfAlgebra, m: AInfModule, t: TruncationPolicy, verify: bool = True, parts: str = "123") -> ChainComplex:
    """Omega(k, A*, M).

    ``parts`` selects differential contributions: "12" is the part acting on
    letters (including the left-end augmentation coaction) and "3" the part
    appending letters through the coaction on M.
    """
    if verify:
        _check_inputs(a, m)
    d = coborel_data(a, m)
    c = cobar_complex(d.left, d.coalgebra, d.right, t, verify=False, parts=parts)
    c.name = f"C-({m.name})"
    return c


def coborel_parts(a: AInfAlgebra, m: AInfModule, t: TruncationPolicy) -> Tuple[ChainComplex, ChainComplex]:
    """Matrices of the two contributions to the co-Borel differential, on a common basis."""
    return coborel(a, m, t, verify=False, parts="12"), coborel(a, m, t, verify=False, parts="3")


# -- Omega C action ----------------------------------------------------------------------


def omega_action(x: Sequence[int], w):
    """Prepend the letters of ``x`` to the cobar prefix of ``w``.

    Works for co-Borel words ``(left, letters, right)`` and twisted words
    ``(prefix, slot, letters, module)``.
    """
    x = tuple(x)
    if len(w) == 3:
        left, letters, right = w
        return (left, x + letters, right)
    prefix, slot, letters, mod = w
    return (x + prefix, slot, letters, mod)


def omega_differential(c: AInfCoalgebra, unit: Iterable[int], x: Sequence[int]) -> set:
    """Differential of Omega(k, C, k) on a letter word: augmentation letter at both ends plus delta_C."""
    x = tuple(x)
    acc: set = set()
    for e in unit:
        toggle(acc, (e,) + x)
        toggle(acc, x + (e,))
    for i, ch in enumerate(x):
        for u in c.delta(ch):
            toggle(acc, x[:i] + u + x[i + 1:])
    return acc
