"""Nested trees: laminar families of subsets of {1..n} containing {1..n}.

Each subset of size >= 2 is a vertex; the edge below a vertex goes to the
smallest vertex strictly containing it.  The inputs of a vertex (maximal
sub-vertices and free leaves) are ordered by their least leaf.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

Vertex = tuple[int, ...]


class TreeError(ValueError):
    pass


def _laminar(vertices: Iterable[frozenset]) -> bool:
    vs = list(vertices)
    for a, b in combinations(vs, 2):
        if a & b and not (a <= b or b <= a):
            return False
    return True


@dataclass(frozen=True)
class NestedTree:
    n: int
    vertices: tuple[Vertex, ...]

    def __post_init__(self):
        vs = tuple(sorted({tuple(sorted(v)) for v in self.vertices}, key=lambda v: (-len(v), v)))
        object.__setattr__(self, "vertices", vs)
        if self.n == 1:
            if vs:
                raise TreeError("the arity-1 unit tree has no vertices")
            return
        root = tuple(range(1, self.n + 1))
        if root not in vs:
            raise TreeError(f"root {root} missing from {vs}")
        for v in vs:
            if len(v) < 2 or not set(v) <= set(root):
                raise TreeError(f"bad vertex {v}")
        if not _laminar(frozenset(v) for v in vs):
            raise TreeError(f"{vs} is not laminar")

    @classmethod
    def of(cls, vertices: Iterable[Iterable[int]], n: int | None = None) -> "NestedTree":
        vs = [tuple(v) for v in vertices]
        if n is None:
            n = max(max(v) for v in vs)
        return cls(n, tuple(vs))

    @classmethod
    def corolla(cls, n: int) -> "NestedTree":
        return cls(n, (tuple(range(1, n + 1)),) if n > 1 else ())

    @property
    def root(self) -> Vertex:
        return tuple(range(1, self.n + 1))

    @property
    def edges(self) -> int:
        return max(len(self.vertices) - 1, 0)

    def sort_key(self):
        return (len(self.vertices), sorted(self.vertices))

    def to_json(self) -> list[list[int]]:
        return sorted(list(v) for v in self.vertices)

    def __repr__(self):
        return "NestedTree(" + " ".join("{" + ",".join(map(str, v)) + "}" for v in self.vertices) + ")"


def _check_vertex(s: NestedTree, v: Vertex) -> Vertex:
    v = tuple(sorted(v))
    if v not in s.vertices:
        raise TreeError(f"{v} is not a vertex of {s}")
    return v


@lru_cache(maxsize=None)
def children(s: NestedTree, v: Vertex) -> tuple[Vertex, ...]:
    """Maximal vertices strictly inside v, ordered by least leaf."""
    v = _check_vertex(s, v)
    inside = [w for w in s.vertices if len(w) < len(v) and set(w) <= set(v)]
    top = [w for w in inside if not any(len(x) > len(w) and set(w) <= set(x) for x in inside)]
    return tuple(sorted(top, key=min))


@lru_cache(maxsize=None)
def inputs(s: NestedTree, v: Vertex) -> tuple[Vertex | int, ...]:
    """Children and free leaves of v, ordered by least leaf."""
    kids = children(s, v)
    covered = set().union(*map(set, kids)) if kids else set()
    free = [x for x in v if x not in covered]
    items: list[Vertex | int] = list(kids) + free
    return tuple(sorted(items, key=lambda x: x if isinstance(x, int) else x[0]))


def valence(s: NestedTree, v: Vertex) -> int:
    return len(inputs(s, v))


@lru_cache(maxsize=None)
def parent(s: NestedTree, v: Vertex) -> Vertex | None:
    v = _check_vertex(s, v)
    above = [w for w in s.vertices if len(w) > len(v) and set(v) <= set(w)]
    return min(above, key=len) if above else None


@lru_cache(maxsize=None)
def vertex_order(s: NestedTree) -> tuple[Vertex, ...]:
    """Depth-first order from the root, children visited by least leaf."""
    if not s.vertices:
        return ()
    out: list[Vertex] = []

    def visit(v: Vertex):
        out.append(v)
        for w in children(s, v):
            visit(w)

    visit(s.root)
    return tuple(out)


def contract_edge(s: NestedTree, v: Vertex) -> NestedTree:
    v = _check_vertex(s, v)
    if v == s.root:
        raise TreeError("cannot contract the root")
    return NestedTree(s.n, tuple(w for w in s.vertices if w != v))


def graft(s: NestedTree, i: int, t: NestedTree) -> NestedTree:
    """Graft t onto leaf i of s, shifting labels so the result has n+m-1 leaves."""
    n, m = s.n, t.n
    if not 1 <= i <= n:
        raise TreeError(f"slot {i} out of range 1..{n}")
    shifted_t = [tuple(x + i - 1 for x in v) for v in t.vertices]
    block = tuple(range(i, i + m))
    shifted_s = []
    for v in s.vertices:
        w = [x for x in v if x < i] + [x + m - 1 for x in v if x > i]
        if i in v:
            w += list(block)
        shifted_s.append(tuple(sorted(w)))
    return NestedTree(n + m - 1, tuple(shifted_t + shifted_s))


def relabel_tree(s: NestedTree, g: Sequence[int]) -> NestedTree:
    """Image of s under leaf relabelling k -> g[k-1]."""
    return NestedTree(s.n, tuple(tuple(sorted(g[x - 1] for x in v)) for v in s.vertices))


@lru_cache(maxsize=None)
def _trees_on(k: int) -> tuple[frozenset, ...]:
    """All nested trees on leaves {1..k}, as frozensets of frozensets."""
    leaves = tuple(range(1, k + 1))
    out = []
    for family in _child_families(leaves):
        for combo in _products([_relabelled(c) for c in family]):
            out.append(frozenset([frozenset(leaves)]).union(*combo) if combo else frozenset([frozenset(leaves)]))
    return tuple(out)


def _relabelled(block: tuple[int, ...]) -> list[frozenset]:
    return [frozenset(frozenset(block[x - 1] for x in v) for v in tree) for tree in _trees_on(len(block))]


def _products(options: list[list[frozenset]]):
    if not options:
        yield ()
        return
    for first in options[0]:
        for rest in _products(options[1:]):
            yield (first,) + rest


def _child_families(leaves: tuple[int, ...]):
    """Families of disjoint blocks (size >= 2, proper) inside the leaf set."""
    full = len(leaves)

    def rec(rest: tuple[int, ...]):
        if not rest:
            yield ()
            return
        first, others = rest[0], rest[1:]
        yield from rec(others)  # first is a free leaf
        for size in range(1, len(others) + 1):
            for mates in combinations(others, size):
                block = (first,) + mates
                if len(block) == full:
                    continue
                remaining = tuple(x for x in others if x not in mates)
                for tail in rec(remaining):
                    yield (block,) + tail

    yield from rec(leaves)


@lru_cache(maxsize=None)
def _enumerate(n: int) -> tuple[NestedTree, ...]:
    trees = [NestedTree(n, tuple(tuple(sorted(v)) for v in fam)) for fam in _trees_on(n)]
    return tuple(sorted(trees, key=NestedTree.sort_key))


def enumerate_nested_trees(n: int) -> list[NestedTree]:
    if n < 2:
        raise TreeError("nested trees need at least two leaves")
    return list(_enumerate(n))
