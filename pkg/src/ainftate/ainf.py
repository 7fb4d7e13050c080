"""Finite presentations of A-infinity algebras, modules, coalgebras, comodules and bimodules over F2.

Every structure map is stored as a dict from an input key to the frozenset of
basis outputs it hits (an F2 linear combination).  Basis elements are referred
to by their integer index; names only matter for printing and file I/O.

Duals follow one ordering rule throughout: a tuple of algebra inputs
``(x_1, ..., x_k)`` becomes the reversed tuple of dual letters
``(x_k*, ..., x_1*)``.  With this rule the boundary of a cobar complex built
from duals is exactly the transpose of the corresponding bar boundary.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

Letters = Tuple[int, ...]

LEFT = "left"
RIGHT = "right"
BIMODULE_KINDS = ("AA", "CC", "AC", "CA")


class PresentationError(ValueError):
    """Malformed presentation or a structure that fails its relations."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


def toggle(acc: set, item) -> None:
    """Add ``item`` to an F2 formal sum held as a set."""
    if item in acc:
        acc.remove(item)
    else:
        acc.add(item)


def _collect(pairs: Iterable[Tuple[object, object]]) -> Dict[object, FrozenSet]:
    sums: Dict[object, set] = {}
    for key, out in pairs:
        toggle(sums.setdefault(key, set()), out)
    return {k: frozenset(v) for k, v in sums.items() if v}


@dataclass(frozen=True)
class Basis:
    names: Tuple[str, ...]
    degrees: Tuple[int, ...] = ()

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise PresentationError(f"basis names must be distinct: {self.names}")
        if not self.degrees:
            object.__setattr__(self, "degrees", (0,) * len(self.names))
        if len(self.degrees) != len(self.names):
            raise PresentationError("one degree per basis element required")

    def __len__(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise PresentationError(f"unknown basis label {name!r}") from None

    def deg(self, i: int) -> int:
        return self.degrees[i]

    def dual(self) -> "Basis":
        return Basis(tuple(dual_name(n) for n in self.names), tuple(-d for d in self.degrees))

    def show(self, letters: Iterable[int]) -> Tuple[str, ...]:
        return tuple(self.names[i] for i in letters)

    @property
    def graded(self) -> bool:
        return any(self.degrees)


def dual_name(name: str) -> str:
    return name[:-1] if name.endswith("*") else name + "*"


def reversed_dual(letters: Sequence[int]) -> Letters:
    """Dual letters of an input tuple, per the (A⊗B)* = B*⊗A* rule."""
    return tuple(reversed(letters))


# -- structures -----------------------------------------------------------------


@dataclass(frozen=True, eq=True)
class AInfAlgebra:
    """``ops[(x_1..x_k)]`` is the set of basis outputs of mu^k(x_1, ..., x_k)."""

    basis: Basis
    ops: Mapping[Letters, FrozenSet[int]]
    augmentation: Optional[FrozenSet[int]] = None
    name: str = ""

    @classmethod
    def from_terms(cls, basis: Basis, terms: Iterable[Tuple[Sequence[int], int]], augmentation=None, name=""):
        ops = _collect((tuple(i), o) for i, o in terms)
        if any(len(k) == 0 for k in ops):
            raise PresentationError("operations need arity >= 1")
        aug = None if augmentation is None else frozenset(augmentation)
        return cls(basis, ops, aug, name)

    def mu(self, inputs: Letters) -> FrozenSet[int]:
        return self.ops.get(inputs, frozenset())

    @property
    def n_max(self) -> int:
        return max((len(k) for k in self.ops), default=0)

    def terms(self) -> List[Tuple[Letters, int]]:
        return sorted((k, o) for k, outs in self.ops.items() for o in outs)

    def epsilon(self, i: int) -> int:
        if self.augmentation is None:
            raise PresentationError(f"algebra {self.name!r} has no augmentation")
        return int(i in self.augmentation)


@dataclass(frozen=True, eq=True)
class AInfModule:
    """``ops[(a_1..a_k, x)]`` holds mu^{k|1}(a, x) (left) or mu^{1|k}(x, a) (right)."""

    side: str
    basis: Basis
    ops: Mapping[Tuple[Letters, int], FrozenSet[int]]
    name: str = ""

    @classmethod
    def from_terms(cls, side: str, basis: Basis, terms: Iterable[Tuple[Sequence[int], int, int]], name=""):
        if side not in (LEFT, RIGHT):
            raise PresentationError(f"side must be left or right, got {side!r}")
        return cls(side, basis, _collect(((tuple(a), x), o) for a, x, o in terms), name)

    def act(self, letters: Letters, x: int) -> FrozenSet[int]:
        return self.ops.get((letters, x), frozenset())

    @property
    def k_max(self) -> int:
        return max((len(k[0]) for k in self.ops), default=0)

    def terms(self) -> List[Tuple[Letters, int, int]]:
        return sorted((a, x, o) for (a, x), outs in self.ops.items() for o in outs)


@dataclass(frozen=True, eq=True)
class AInfCoalgebra:
    """``coops[c]`` is the set of letter tuples making up the sum of all delta^k(c)."""

    basis: Basis
    coops: Mapping[int, FrozenSet[Letters]]
    coaugmentation: Optional[FrozenSet[int]] = None
    name: str = ""

    @classmethod
    def from_terms(cls, basis: Basis, terms: Iterable[Tuple[int, Sequence[int]]], coaugmentation=None, name=""):
        coops = _collect((c, tuple(out)) for c, out in terms)
        if any(len(t) == 0 for outs in coops.values() for t in outs):
            raise PresentationError("co-operations need arity >= 1")
        co = None if coaugmentation is None else frozenset(coaugmentation)
        return cls(basis, coops, co, name)

    def delta(self, c: int) -> FrozenSet[Letters]:
        return self.coops.get(c, frozenset())

    def terms(self) -> List[Tuple[int, Letters]]:
        return sorted((c, t) for c, outs in self.coops.items() for t in outs)


@dataclass(frozen=True, eq=True)
class AInfComodule:
    """``coops[x]`` holds pairs ``(letters, x')``: delta^{k|1}(x) for left, delta^{1|k}(x) for right."""

    side: str
    basis: Basis
    coops: Mapping[int, FrozenSet[Tuple[Letters, int]]]
    name: str = ""

    @classmethod
    def from_terms(cls, side: str, basis: Basis, terms: Iterable[Tuple[int, Sequence[int], int]], name=""):
        if side not in (LEFT, RIGHT):
            raise PresentationError(f"side must be left or right, got {side!r}")
        return cls(side, basis, _collect((x, (tuple(l), o)) for x, l, o in terms), name)

    def delta(self, x: int) -> FrozenSet[Tuple[Letters, int]]:
        return self.coops.get(x, frozenset())

    def terms(self) -> List[Tuple[int, Letters, int]]:
        return sorted((x, l, o) for x, outs in self.coops.items() for l, o in outs)


@dataclass(frozen=True, eq=True)
class AInfBimodule:
    """One of the four bimodule kinds.

    ========  =====================  ===========================
    kind      key                    outputs
    ========  =====================  ===========================
    ``AA``    ``(left, x, right)``   ``x'``
    ``CC``    ``x``                  ``(left, x', right)``
    ``AC``    ``(left, x)``          ``(x', right)``
    ``CA``    ``(x, right)``         ``(left, x')``
    ========  =====================  ===========================
    """

    kind: str
    basis: Basis
    ops: Mapping[object, FrozenSet[object]]
    name: str = ""

    def __post_init__(self):
        if self.kind not in BIMODULE_KINDS:
            raise PresentationError(f"unknown bimodule kind {self.kind!r}")

    def get(self, key) -> FrozenSet:
        return self.ops.get(key, frozenset())


# -- relation residuals ---------------------------------------------------------


def algebra_residual(a: AInfAlgebra, x: Letters) -> FrozenSet[int]:
    """Left-hand side of the A-infinity relation on the input tuple ``x``."""
    acc: set = set()
    k = len(x)
    for k2 in range(1, k + 1):
        for i in range(0, k - k2 + 1):
            for o in a.mu(x[i:i + k2]):
                for out in a.mu(x[:i] + (o,) + x[i + k2:]):
                    toggle(acc, out)
    return frozenset(acc)


def _mu_runs(a: AInfAlgebra, x: Letters) -> Iterable[Letters]:
    """All tuples obtained from ``x`` by applying one mu_A to a consecutive run."""
    k = len(x)
    for k2 in range(1, k + 1):
        for i in range(0, k - k2 + 1):
            for o in a.mu(x[i:i + k2]):
                yield x[:i] + (o,) + x[i + k2:]


def _delta_runs(c: AInfCoalgebra, letters: Letters) -> Iterable[Letters]:
    """All tuples obtained by expanding exactly one letter with delta_C."""
    for i, ch in enumerate(letters):
        for t in c.delta(ch):
            yield letters[:i] + t + letters[i + 1:]


def module_residual(a: AInfAlgebra, m: AInfModule, letters: Letters, x: int) -> FrozenSet[int]:
    acc: set = set()
    k = len(letters)
    for y in _mu_runs(a, letters):
        for out in m.act(y, x):
            toggle(acc, out)
    if m.side == LEFT:
        for i in range(0, k + 1):
            for x1 in m.act(letters[i:], x):
                for out in m.act(letters[:i], x1):
                    toggle(acc, out)
    else:
        for j in range(0, k + 1):
            for x1 in m.act(letters[:j], x):
                for out in m.act(letters[j:], x1):
                    toggle(acc, out)
    return frozenset(acc)


def coalgebra_residual(c: AInfCoalgebra, x: int) -> FrozenSet[Letters]:
    acc: set = set()
    for t in c.delta(x):
        for u in _delta_runs(c, t):
            toggle(acc, u)
    return frozenset(acc)


def comodule_residual(c: AInfCoalgebra, m: AInfComodule, x: int) -> FrozenSet[Tuple[Letters, int]]:
    acc: set = set()
    for letters, x1 in m.delta(x):
        for u in _delta_runs(c, letters):
            toggle(acc, (u, x1))
        for l2, x2 in m.delta(x1):
            toggle(acc, ((letters + l2) if m.side == LEFT else (l2 + letters), x2))
    return frozenset(acc)


def bimodule_residual(b: AInfBimodule, left, right, key) -> FrozenSet:
    """Relation residual of bimodule ``b``; ``left``/``right`` are the acting (co)algebras."""
    acc: set = set()
    kind = b.kind
    if kind == "AA":
        lt, x, rt = key
        for y in _mu_runs(left, lt):
            for out in b.get((y, x, rt)):
                toggle(acc, out)
        for y in _mu_runs(right, rt):
            for out in b.get((lt, x, y)):
                toggle(acc, out)
        for i in range(len(lt) + 1):
            for j in range(len(rt) + 1):
                for x1 in b.get((lt[i:], x, rt[:j])):
                    for out in b.get((lt[:i], x1, rt[j:])):
                        toggle(acc, out)
    elif kind == "CC":
        x = key
        for lt, x1, rt in b.get(x):
            for u in _delta_runs(left, lt):
                toggle(acc, (u, x1, rt))
            for u in _delta_runs(right, rt):
                toggle(acc, (lt, x1, u))
            for l2, x2, r2 in b.get(x1):
                toggle(acc, (lt + l2, x2, r2 + rt))
    elif kind == "AC":
        lt, x = key
        for y in _mu_runs(left, lt):
            for out in b.get((y, x)):
                toggle(acc, out)
        for x1, rt in b.get((lt, x)):
            for u in _delta_runs(right, rt):
                toggle(acc, (x1, u))
        for i in range(len(lt) + 1):
            for x1, r1 in b.get((lt[i:], x)):
                for x2, r2 in b.get((lt[:i], x1)):
                    toggle(acc, (x2, r2 + r1))
    else:  # CA
        x, rt = key
        for y in _mu_runs(right, rt):
            for out in b.get((x, y)):
                toggle(acc, out)
        for lt, x1 in b.get((x, rt)):
            for u in _delta_runs(left, lt):
                toggle(acc, (u, x1))
        for j in range(len(rt) + 1):
            for l1, x1 in b.get((x, rt[:j])):
                for l2, x2 in b.get((x1, rt[j:])):
                    toggle(acc, (l1 + l2, x2))
    return frozenset(acc)


# -- verifiers ------------------------------------------------------------------


@dataclass
class RelationReport:
    structure: str
    ok: bool
    checked: int
    witness: Optional[tuple] = None
    residual: Tuple = ()

    def __bool__(self) -> bool:
        return self.ok

    def as_dict(self) -> dict:
        return {
            "structure": self.structure,
            "ok": self.ok,
            "checked": self.checked,
            "witness": None if self.witness is None else list(self.witness),
            "residual": [str(r) for r in self.residual],
        }


def _tuples(n: int, max_len: int, min_len: int = 0) -> Iterable[Letters]:
    for k in range(min_len, max_len + 1):
        yield from itertools.product(range(n), repeat=k)


def verify_algebra_relations(a: AInfAlgebra, k_check: int) -> RelationReport:
    if k_check < 1:
        raise ValueError("k_check must be >= 1")
    names = a.basis.names
    n = 0
    for x in _tuples(len(names), k_check, 1):
        n += 1
        res = algebra_residual(a, x)
        if res:
            return RelationReport("algebra", False, n, a.basis.show(x), tuple(sorted(names[o] for o in res)))
    return RelationReport("algebra", True, n)


def verify_module_relations(a: AInfAlgebra, m: AInfModule, k_check: int) -> RelationReport:
    n = 0
    for letters in _tuples(len(a.basis), k_check):
        for x in range(len(m.basis)):
            n += 1
            res = module_residual(a, m, letters, x)
            if res:
                w = a.basis.show(letters) + (m.basis.names[x],)
                if m.side == RIGHT:
                    w = (m.basis.names[x],) + a.basis.show(letters)
                return RelationReport(f"{m.side} module", False, n, w, tuple(sorted(m.basis.names[o] for o in res)))
    return RelationReport(f"{m.side} module", True, n)


def _show_word(basis: Basis, letters: Letters) -> str:
    return "(" + ",".join(basis.show(letters)) + ")"


def verify_coalgebra_relations(c: AInfCoalgebra, k_check: int) -> RelationReport:
    """Checks every basis element; residual words longer than ``k_check`` are ignored."""
    n = 0
    for x in range(len(c.basis)):
        n += 1
        res = [t for t in coalgebra_residual(c, x) if len(t) <= k_check]
        if res:
            return RelationReport("coalgebra", False, n, (c.basis.names[x],), tuple(sorted(_show_word(c.basis, t) for t in res)))
    return RelationReport("coalgebra", True, n)


def verify_comodule_relations(c: AInfCoalgebra, m: AInfComodule, k_check: int) -> RelationReport:
    n = 0
    for x in range(len(m.basis)):
        n += 1
        res = [(l, y) for l, y in comodule_residual(c, m, x) if len(l) <= k_check]
        if res:
            shown = tuple(sorted(f"{_show_word(c.basis, l)}|{m.basis.names[y]}" for l, y in res))
            return RelationReport(f"{m.side} comodule", False, n, (m.basis.names[x],), shown)
    return RelationReport(f"{m.side} comodule", True, n)


def verify_bimodule_relations(b: AInfBimodule, left, right, k_check: int) -> RelationReport:
    """``left``/``right`` are an algebra or coalgebra matching ``b.kind``.

    For kinds with algebra inputs, every input with at most ``k_check`` algebra
    letters in total is checked; for coalgebra outputs, residual terms with more
    than ``k_check`` letters are ignored.
    """
    want = {"A": AInfAlgebra, "C": AInfCoalgebra}
    if not isinstance(left, want[b.kind[0]]) or not isinstance(right, want[b.kind[1]]):
        raise PresentationError(f"bimodule of kind {b.kind} needs matching acting structures")
    nb = len(b.basis)
    keys: Iterable
    if b.kind == "AA":
        keys = (
            (lt, x, rt)
            for total in range(k_check + 1)
            for i in range(total + 1)
            for lt in itertools.product(range(len(left.basis)), repeat=i)
            for rt in itertools.product(range(len(right.basis)), repeat=total - i)
            for x in range(nb)
        )
    elif b.kind == "CC":
        keys = range(nb)
    elif b.kind == "AC":
        keys = ((lt, x) for lt in _tuples(len(left.basis), k_check) for x in range(nb))
    else:
        keys = ((x, rt) for rt in _tuples(len(right.basis), k_check) for x in range(nb))
    n = 0
    for key in keys:
        n += 1
        res = bimodule_residual(b, left, right, key)
        if b.kind != "AA":
            res = frozenset(r for r in res if _letter_count(b.kind, r) <= k_check)
        if res:
            return RelationReport(f"({b.kind[0]},{b.kind[1]}) bimodule", False, n, (key,), tuple(sorted(map(str, res))))
    return RelationReport(f"({b.kind[0]},{b.kind[1]}) bimodule", True, n)


def _letter_count(kind: str, out) -> int:
    if kind == "CC":
        return len(out[0]) + len(out[2])
    if kind == "AC":
        return len(out[1])
    return len(out[0])


# -- duality ----------------------------------------------------------------------


def dualize_algebra(a: AInfAlgebra) -> AInfCoalgebra:
    """delta^k(b*) contains (x_k*, ..., x_1*) whenever mu^k(x_1, ..., x_k) contains b."""
    terms = ((o, reversed_dual(x)) for x, o in a.terms())
    return AInfCoalgebra.from_terms(a.basis.dual(), terms, a.augmentation, name=dual_name(a.name or "A"))


def dualize_coalgebra(c: AInfCoalgebra) -> AInfAlgebra:
    terms = ((reversed_dual(t), x) for x, t in c.terms())
    return AInfAlgebra.from_terms(c.basis.dual(), terms, c.coaugmentation, name=dual_name(c.name or "C"))


def module_to_comodule(a: AInfAlgebra, m: AInfModule) -> AInfComodule:
    """Same underlying space, now a comodule over the dual coalgebra (same side)."""
    terms = ((x, reversed_dual(letters), o) for letters, x, o in m.terms())
    return AInfComodule.from_terms(m.side, m.basis, terms, name=m.name)


def comodule_to_module(c: AInfCoalgebra, m: AInfComodule) -> AInfModule:
    terms = ((reversed_dual(letters), x, o) for x, letters, o in m.terms())
    return AInfModule.from_terms(m.side, m.basis, terms, name=m.name)


def dualize_module(a: AInfAlgebra, m: AInfModule) -> AInfComodule:
    """Linear dual of a module: a left module gives a right comodule on the dual space and vice versa."""
    side = RIGHT if m.side == LEFT else LEFT
    terms = ((o, reversed_dual(letters), x) for letters, x, o in m.terms())
    return AInfComodule.from_terms(side, m.basis.dual(), terms, name=dual_name(m.name or "M"))


def bimodule_as_coalgebra_bimodule(b: AInfBimodule) -> AInfBimodule:
    """An (A,A)-bimodule read as a (A*, A)-bimodule."""
    if b.kind != "AA":
        raise PresentationError("expected an (A,A)-bimodule")
    pairs = []
    for (lt, x, rt), outs in b.ops.items():
        for o in outs:
            pairs.append(((x, rt), (reversed_dual(lt), o)))
    return AInfBimodule("CA", b.basis, _collect(pairs), name=b.name)


# -- builders ---------------------------------------------------------------------


def group_algebra(mult_table: Sequence[Sequence], names: Optional[Sequence[str]] = None, name: str = "") -> AInfAlgebra:
    """Group algebra over F2 from a multiplication table (entries are labels or indices).

    mu^2 is the group law, every other operation vanishes, and the augmentation
    is 1 on each group element.  Non-group tables are rejected with a witness.
    """
    n = len(mult_table)
    if names is None:
        if not all(isinstance(v, int) for row in mult_table for v in row):
            raise PresentationError("label tables need an explicit list of names")
        names = [f"g{i}" for i in range(n)]
    names = list(names)
    pos = {nm: i for i, nm in enumerate(names)}

    def idx(v) -> int:
        if isinstance(v, int):
            if not 0 <= v < n:
                raise PresentationError(f"table entry {v} out of range")
            return v
        if v not in pos:
            raise PresentationError(f"table entry {v!r} is not a basis label")
        return pos[v]

    if any(len(row) != n for row in mult_table):
        raise PresentationError("multiplication table must be square")
    t = [[idx(v) for v in row] for row in mult_table]
    for x, y, z in itertools.product(range(n), repeat=3):
        if t[t[x][y]][z] != t[x][t[y][z]]:
            raise PresentationError("table is not associative", witness=(names[x], names[y], names[z]))
    units = [e for e in range(n) if all(t[e][x] == x and t[x][e] == x for x in range(n))]
    if not units:
        raise PresentationError("table has no identity element", witness=())
    e = units[0]
    for x in range(n):
        if not any(t[x][y] == e and t[y][x] == e for y in range(n)):
            raise PresentationError("element without inverse", witness=(names[x],))
    terms = [((x, y), t[x][y]) for x in range(n) for y in range(n)]
    return AInfAlgebra.from_terms(Basis(tuple(names)), terms, augmentation=range(n), name=name)


def cyclic_group(order: int) -> AInfAlgebra:
    names = ["e"] if order == 1 else (["e", "g"] if order == 2 else ["e"] + [f"g{i}" for i in range(1, order)])
    table = [[(i + j) % order for j in range(order)] for i in range(order)]
    return group_algebra(table, names, name=f"Z/{order}" if order > 1 else "trivial")


def exterior_algebra_rank1(deg: int = 1) -> AInfAlgebra:
    """k[x]/(x^2) with x in degree ``deg``; unital, augmented by 1 -> 1, x -> 0."""
    if deg < 1:
        raise ValueError("deg must be >= 1")
    one, x = 0, 1
    terms = [((one, one), one), ((one, x), x), ((x, one), x)]
    return AInfAlgebra.from_terms(Basis(("1", "x"), (0, deg)), terms, augmentation=[one], name=f"Lambda[x_{deg}]")


def nonassociative_magma() -> AInfAlgebra:
    """Two-element magma with e*e = g and every other product e; (e*e)*g != e*(e*g)."""
    e, g = 0, 1
    terms = [((e, e), g), ((e, g), e), ((g, e), e), ((g, g), e)]
    return AInfAlgebra.from_terms(Basis(("e", "g")), terms, name="magma")


def trivial_module(a: AInfAlgebra, side: str = LEFT) -> AInfModule:
    """One-dimensional module where a basis element acts by its augmentation value."""
    if a.augmentation is None:
        raise PresentationError(f"algebra {a.name!r} has no augmentation")
    terms = [((b,), 0, 0) for b in sorted(a.augmentation)]
    return AInfModule.from_terms(side, Basis(("1",)), terms, name="k")


def zero_module(basis: Basis, side: str = LEFT) -> AInfModule:
    return AInfModule.from_terms(side, basis, [], name="0")


def regular_module(a: AInfAlgebra, side: str = LEFT) -> AInfModule:
    """A acting on itself: mu^{k|1}(a, x) = mu^{k+1}(a, x) (mirrored on the right)."""
    terms = []
    for inputs, o in a.terms():
        if side == LEFT:
            terms.append((inputs[:-1], inputs[-1], o))
        else:
            terms.append((inputs[1:], inputs[0], o))
    return AInfModule.from_terms(side, a.basis, terms, name=a.name)


def algebra_as_bimodule(a: AInfAlgebra) -> AInfBimodule:
    pairs = []
    for inputs, o in a.terms():
        for p in range(len(inputs)):
            pairs.append(((inputs[:p], inputs[p], inputs[p + 1:]), o))
    return AInfBimodule("AA", a.basis, _collect(pairs), name=a.name)


def coalgebra_as_bimodule(c: AInfCoalgebra) -> AInfBimodule:
    pairs = []
    for x, t in c.terms():
        for p in range(len(t)):
            pairs.append((x, (t[:p], t[p], t[p + 1:])))
    return AInfBimodule("CC", c.basis, _collect(pairs), name=c.name)


def algebra_as_ac_bimodule(a: AInfAlgebra) -> AInfBimodule:
    """A as an (A, A*)-bimodule: nu(a; x) = sum over b of mu(a, x, b) ⊗ (dual letters of b)."""
    pairs = []
    for inputs, o in a.terms():
        for p in range(len(inputs)):
            pairs.append(((inputs[:p], inputs[p]), (o, reversed_dual(inputs[p + 1:]))))
    return AInfBimodule("AC", a.basis, _collect(pairs), name=a.name)
