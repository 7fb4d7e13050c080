"""Rooted ribbon trees, their strata in the associahedron, and A-infinity term schemas.

A tree is stored as its nested shape: a leaf is the empty tuple and a vertex is
the tuple of its (ordered) incoming subtrees, so ``((), ((), ()))`` is the
bracketing ``(x(xx))``.  Two trees are isomorphic exactly when their shapes are
equal, which makes the shape a canonical form.  Vertices and internal edges are
addressed by paths (child indices from the root); the internal edge of a
non-root vertex shares its path.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Tuple

Shape = tuple
Path = Tuple[int, ...]
LEAF: Shape = ()


def _leaves(shape: Shape) -> int:
    return 1 if shape == LEAF else sum(_leaves(c) for c in shape)


def _bracket(shape: Shape, counter) -> str:
    if shape == LEAF:
        return str(next(counter))
    return "(" + " ".join(_bracket(c, counter) for c in shape) + ")"


@dataclass(frozen=True, order=True)
class Tree:
    shape: Shape

    def __post_init__(self):
        if self.shape == LEAF:
            raise ValueError("a tree needs at least one vertex")
        for path, node in self._nodes():
            if node != LEAF and len(node) < 2:
                raise ValueError(f"vertex at {path} has arity {len(node)} < 2")

    def _nodes(self) -> Iterable[Tuple[Path, Shape]]:
        stack = [((), self.shape)]
        while stack:
            path, node = stack.pop()
            yield path, node
            if node != LEAF:
                for i in reversed(range(len(node))):
                    stack.append((path + (i,), node[i]))

    @property
    def n_leaves(self) -> int:
        return _leaves(self.shape)

    def vertices(self) -> List[Path]:
        return sorted(p for p, node in self._nodes() if node != LEAF)

    def internal_edges(self) -> List[Path]:
        """Each non-root vertex's outgoing edge, named by that vertex's path."""
        return [p for p in self.vertices() if p]

    def node(self, path: Path) -> Shape:
        node = self.shape
        for i in path:
            node = node[i]
        return node

    def arity(self, v: Path) -> int:
        return len(self.node(v))

    def valency(self, v: Path) -> int:
        return self.arity(v) + 1

    def codim(self) -> int:
        return sum(self.valency(v) - 3 for v in self.vertices())

    def is_trivalent(self) -> bool:
        return self.codim() == 0

    def collapse_edge(self, e: Path) -> "Tree":
        """Merge the vertex at ``e`` into its parent, splicing its inputs in place."""
        if not e:
            raise ValueError("the root is not an internal edge")
        if self.node(e) == LEAF:
            raise ValueError(f"{e} is a leaf, not an internal edge")

        def rebuild(node: Shape, rest: Path) -> Shape:
            i = rest[0]
            if len(rest) == 1:
                return node[:i] + node[i] + node[i + 1:]
            return node[:i] + (rebuild(node[i], rest[1:]),) + node[i + 1:]

        return Tree(rebuild(self.shape, e))

    def bracketing(self) -> str:
        return _bracket(self.shape, itertools.count(1))

    def __str__(self) -> str:
        return self.bracketing()


def corolla(n: int) -> Tree:
    return Tree((LEAF,) * n)


def parse_bracketing(text: str) -> Tree:
    """Inverse of :meth:`Tree.bracketing`; leaf labels must read 1, 2, ..., n."""
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    pos = 0
    expected = itertools.count(1)

    def parse() -> Shape:
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            kids = []
            while tokens[pos] != ")":
                kids.append(parse())
            pos += 1
            return tuple(kids)
        if tok == ")" or int(tok) != next(expected):
            raise ValueError(f"bad bracketing {text!r}")
        return LEAF

    shape = parse()
    if pos != len(tokens):
        raise ValueError(f"trailing tokens in {text!r}")
    return Tree(shape)


def _compositions(n: int, min_parts: int) -> Iterable[Tuple[int, ...]]:
    for parts in range(min_parts, n + 1):
        for cuts in itertools.combinations(range(1, n), parts - 1):
            bounds = (0,) + cuts + (n,)
            yield tuple(bounds[i + 1] - bounds[i] for i in range(parts))


@lru_cache(maxsize=None)
def _shapes(n: int) -> Tuple[Shape, ...]:
    if n == 1:
        return (LEAF,)
    out = []
    for comp in _compositions(n, 2):
        for kids in itertools.product(*(_shapes(p) for p in comp)):
            out.append(tuple(kids))
    return tuple(out)


def enumerate_trees(n: int) -> List[Tree]:
    """All isomorphism classes of trees with n leaves, sorted by bracketing."""
    if n < 2:
        raise ValueError("trees need at least 2 leaves")
    return sorted((Tree(s) for s in _shapes(n)), key=lambda t: t.bracketing())


def strata(n: int) -> Dict[int, List[Tree]]:
    out: Dict[int, List[Tree]] = {}
    for t in enumerate_trees(n):
        out.setdefault(t.codim(), []).append(t)
    return dict(sorted(out.items()))


def wall_adjacency(n: int) -> Dict[Tree, Tuple[Tree, ...]]:
    """For each codimension-one tree, the trivalent trees that collapse onto it."""
    if n < 3:
        raise ValueError("walls need n >= 3")
    s = strata(n)
    walls = {w: [] for w in s.get(1, [])}
    for chamber in s.get(0, []):
        for e in chamber.internal_edges():
            w = chamber.collapse_edge(e)
            if w in walls and chamber not in walls[w]:
                walls[w].append(chamber)
    return {w: tuple(sorted(cs)) for w, cs in walls.items()}


def chamber_graph_is_cycle(adjacency: Mapping[Tree, Tuple[Tree, ...]]) -> bool:
    """True when chambers and walls form a single cycle (each chamber on exactly two walls)."""
    nbrs: Dict[Tree, List[Tree]] = {}
    for cs in adjacency.values():
        if len(cs) != 2:
            return False
        a, b = cs
        nbrs.setdefault(a, []).append(b)
        nbrs.setdefault(b, []).append(a)
    if any(len(v) != 2 for v in nbrs.values()):
        return False
    start = next(iter(nbrs))
    seen, prev, cur = {start}, None, start
    while True:
        nxt = nbrs[cur][0] if nbrs[cur][0] != prev else nbrs[cur][1]
        if nxt == start:
            break
        seen.add(nxt)
        prev, cur = cur, nxt
    return len(seen) == len(nbrs)


@dataclass(frozen=True)
class MetricTree:
    """A tree with non-negative rational lengths on its internal edges."""

    tree: Tree
    lengths: Mapping[Path, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        edges = set(self.tree.internal_edges())
        if set(self.lengths) != edges:
            raise ValueError("lengths must be given on exactly the internal edges")
        if any(Fraction(v) < 0 for v in self.lengths.values()):
            raise ValueError("edge lengths must be non-negative")

    def is_irreducible(self) -> bool:
        return all(v > 0 for v in self.lengths.values())

    def irreducible(self) -> "MetricTree":
        """Collapse zero-length edges until none are left."""
        tree, lengths = self.tree, {p: Fraction(v) for p, v in self.lengths.items()}
        while True:
            zero = sorted((p for p, v in lengths.items() if v == 0), key=len, reverse=True)
            if not zero:
                return MetricTree(tree, lengths)
            e = zero[0]
            width = len(tree.node(e))
            parent, i = e[:-1], e[-1]
            moved: Dict[Path, Fraction] = {}
            for p, v in lengths.items():
                if p == e:
                    continue
                if len(p) > len(parent) and p[:len(parent)] == parent:
                    j = p[len(parent)]
                    if j == i:
                        p = parent + (i + p[len(parent) + 1],) + p[len(parent) + 2:]
                    elif j > i:
                        p = parent + (j + width - 1,) + p[len(parent) + 1:]
                moved[p] = v
            tree, lengths = tree.collapse_edge(e), moved


# -- A-infinity term schemas ------------------------------------------------------


def ainf_terms(k: int) -> List[Tuple[int, int, int]]:
    """Schemas (k1, i, k2): mu^{k1} with mu^{k2} plugged into its i-th input, k + 1 = k1 + k2."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return [(k + 1 - k2, i, k2) for k2 in range(1, k + 1) for i in range(1, k + 2 - k2)]


def schema_tree(k1: int, i: int, k2: int) -> Tree:
    """The two-vertex tree of a schema with both arities at least 2."""
    if k1 < 2 or k2 < 2:
        raise ValueError("trees need arity >= 2 at every vertex")
    kids = [LEAF] * k1
    kids[i - 1] = (LEAF,) * k2
    return Tree(tuple(kids))


def residual_via_schemas(a, x: Tuple[int, ...]) -> frozenset:
    """A-infinity residual of ``a`` on ``x``, summed schema by schema."""
    acc: set = set()
    for k1, i, k2 in ainf_terms(len(x)):
        start = i - 1
        for o in a.mu(tuple(x[start:start + k2])):
            for out in a.mu(tuple(x[:start]) + (o,) + tuple(x[start + k2:])):
                acc ^= {out}
    return frozenset(acc)


def dump_trees(trees: Iterable[Tree]) -> str:
    return "".join(t.bracketing() + "\n" for t in trees)


def load_trees(text: str) -> List[Tree]:
    return [parse_bracketing(line) for line in text.splitlines() if line.strip()]
