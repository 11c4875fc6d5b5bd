"""Cellular chains of the compactified moduli spaces, primal and dual.

A cell is a nested tree with a necklace at every vertex whose arity is the
vertex valence (inputs ordered by least leaf).  Its primal dimension is
2E + sum of decoration dimensions.

Orientation of a primal cell is the ordered product, over vertices in
depth-first order, of (disk of the incoming edge) x (necklace cell); the
root has no disk.  Disks are even-dimensional, so only decoration
dimensions enter Koszul signs.

Boundary:
* a necklace face at one vertex, signed by the dimensions of the
  decorations before it;
* collapsing the disk of an edge S -> T to its boundary circle and gluing:
  the circle turns the lower decoration into its transfer, which is then
  inserted into the based lift of the upper decoration and projected.
The dual complex is the transpose, graded by 2(n-2) - primal dimension.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Mapping, Sequence

from .cacti import (BasedCactusCell, NecklaceCell, Word, _project_word, _transfer,
                    enumerate_necklaces, min_rotation, relabel_sign)
from .homology import Chain, ChainComplex, ComplexError, koszul_sign
from .operads import _compose_words
from .trees import (NestedTree, Vertex, children, contract_edge, enumerate_nested_trees,
                    graft, inputs, parent, relabel_tree, valence, vertex_order)

DEFAULT_MAX_ARITY = 5


class ModuliError(ValueError):
    pass


@dataclass(frozen=True)
class DecoratedTreeCell:
    tree: NestedTree
    decorations: tuple[Word, ...]

    def __post_init__(self):
        order = vertex_order(self.tree)
        if len(order) != len(self.decorations):
            raise ModuliError(f"{len(self.decorations)} decorations for {len(order)} vertices")
        for v, w in zip(order, self.decorations):
            k = valence(self.tree, v)
            if len(w) < 2 or max(w) != k or min_rotation(w)[0] != tuple(w):
                raise ModuliError(f"decoration {w} at {v} is not a canonical necklace of arity {k}")
            NecklaceCell(tuple(w), k)

    @classmethod
    def from_mapping(cls, tree: NestedTree, decorations: Mapping[Vertex, Iterable[int]]) -> "DecoratedTreeCell":
        words = []
        for v in vertex_order(tree):
            w = decorations.get(v)
            if w is None:
                raise ModuliError(f"missing decoration for vertex {v}")
            words.append(min_rotation(tuple(w))[0])
        return cls(tree, tuple(words))

    @property
    def n(self) -> int:
        return self.tree.n

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(w) - max(w) for w in self.decorations)

    @property
    def primal_dim(self) -> int:
        return 2 * self.tree.edges + sum(self.dims)

    @property
    def dual_degree(self) -> int:
        return 2 * (self.n - 2) - self.primal_dim

    def decoration(self, v: Vertex) -> NecklaceCell:
        order = vertex_order(self.tree)
        w = self.decorations[order.index(tuple(v))]
        return NecklaceCell(w, max(w))

    def sort_key(self):
        return (self.tree.sort_key(), [(len(w), w) for w in self.decorations])

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def to_json(self) -> dict:
        order = vertex_order(self.tree)
        return {"tree": self.tree.to_json(),
                "decorations": {",".join(map(str, v)): list(w) for v, w in zip(order, self.decorations)}}

    def __repr__(self):
        parts = [f"{{{','.join(map(str, v))}}}<{','.join(map(str, w))}>"
                 for v, w in zip(vertex_order(self.tree), self.decorations)]
        return "[" + " ".join(parts) + "]"


def _make(tree: NestedTree, words: Sequence[Word]) -> DecoratedTreeCell:
    obj = object.__new__(DecoratedTreeCell)
    object.__setattr__(obj, "tree", tree)
    object.__setattr__(obj, "decorations", tuple(words))
    return obj


def _guard(n: int, max_arity: int | None):
    cap = DEFAULT_MAX_ARITY if max_arity is None else max_arity
    if n < 2:
        raise ModuliError("arity must be at least 2")
    if n > cap:
        raise ModuliError(f"arity {n} above the configured cap {cap}")


@lru_cache(maxsize=None)
def _cells(n: int) -> tuple[DecoratedTreeCell, ...]:
    out = []
    for t in enumerate_nested_trees(n):
        choices = [[c.word for c in enumerate_necklaces(valence(t, v))] for v in vertex_order(t)]
        for combo in product(*choices):
            out.append(_make(t, combo))
    return tuple(out)


def moduli_cells(n: int, max_arity: int | None = None) -> list[DecoratedTreeCell]:
    _guard(n, max_arity)
    return list(_cells(n))


# -- relabelling and reordering ----------------------------------------------

def necklace_relabel(word: Word, g: Sequence[int]) -> tuple[int, Word]:
    """Signed canonical necklace after relabelling lobe k -> g[k-1]."""
    n = len(g)
    w, s = relabel_sign(word, n, g)
    canon, t = _project_word(w, n)
    return s * t, canon


def _reorder(tree: NestedTree, verts: Sequence[Vertex], words: Sequence[Word]) -> tuple[int, DecoratedTreeCell]:
    """Sort factors into the depth-first order of ``tree``; Koszul sign on decoration dims."""
    order = vertex_order(tree)
    pos = {v: p for p, v in enumerate(verts)}
    perm = [pos[v] for v in order]
    parities = [len(w) - max(w) for w in words]
    return koszul_sign(parities, perm), _make(tree, [words[p] for p in perm])


def _input_key(x):
    return x if isinstance(x, int) else x[0]


def merge_permutation(tree: NestedTree, upper: Vertex, lower: Vertex) -> tuple[int, ...]:
    """Relabelling from operadic input order (lower inserted at its slot) to the
    least-leaf order of the merged vertex after contracting ``lower``."""
    up = list(inputs(tree, upper))
    slot = up.index(lower)
    operadic = up[:slot] + list(inputs(tree, lower)) + up[slot + 1:]
    merged = sorted(operadic, key=_input_key)
    where = {_input_key(x): p + 1 for p, x in enumerate(merged)}
    return tuple(where[_input_key(x)] for x in operadic)


@lru_cache(maxsize=None)
def _glue(a: Word, n: int, i: int, b: Word, m: int) -> tuple[tuple[Word, int], ...]:
    """Projection of lift(a) o_i transfer(b): the decoration produced by collapsing an edge."""
    acc: dict[Word, int] = {}
    k = n + m - 1
    for y, sy in _transfer(b, m):
        for w, s in _compose_words(a, n, i, y, m):
            res = _project_word(w, k)
            if res is None:
                continue
            canon, t = res
            acc[canon] = acc.get(canon, 0) + s * sy * t
    return tuple(sorted((w, v) for w, v in acc.items() if v))


def _necklace_faces(word: Word, k: int):
    from .cacti import _necklace_boundary

    return _necklace_boundary(word, k)


@lru_cache(maxsize=None)
def _primal_boundary(cell: DecoratedTreeCell) -> tuple[tuple[DecoratedTreeCell, int], ...]:
    tree = cell.tree
    order = vertex_order(tree)
    words = cell.decorations
    dims = cell.dims
    terms: dict[DecoratedTreeCell, int] = {}

    def add(c: DecoratedTreeCell, v: int):
        terms[c] = terms.get(c, 0) + v

    prefix = 0
    for p, v in enumerate(order):
        sign = -1 if prefix % 2 else 1
        for face, s in _necklace_faces(words[p], valence(tree, v)):
            new = list(words)
            new[p] = face
            add(_make(tree, new), sign * s)
        prefix += dims[p]

    for ps in range(1, len(order)):
        lower = order[ps]
        upper = parent(tree, lower)
        pt = order.index(upper)
        between = sum(dims[pt + 1:ps])
        sign = -1 if (sum(dims[:ps]) + (dims[ps] + 1) * between) % 2 else 1
        slot = inputs(tree, upper).index(lower) + 1
        g = merge_permutation(tree, upper, lower)
        new_tree = contract_edge(tree, lower)
        verts = [v for v in order if v != lower]
        for w, c in _glue(words[pt], valence(tree, upper), slot, words[ps], valence(tree, lower)):
            s, canon = necklace_relabel(w, g)
            new_words = [canon if v == upper else words[order.index(v)] for v in verts]
            t, cell2 = _reorder(new_tree, verts, new_words)
            add(cell2, sign * c * s * t)
    return tuple((c, v) for c, v in terms.items() if v)


def primal_boundary(cell: DecoratedTreeCell) -> Chain:
    return Chain(cell.primal_dim - 1, dict(_primal_boundary(cell)))


@lru_cache(maxsize=None)
def _primal_complex(n: int) -> ChainComplex:
    cells = _cells(n)
    top = 2 * (n - 2)
    basis = {k: [c for c in cells if c.primal_dim == k] for k in range(top + 1)}
    return ChainComplex.from_boundary_map(basis, lambda c: dict(_primal_boundary(c)), f"primal({n})")


def primal_complex(n: int, max_arity: int | None = None) -> ChainComplex:
    _guard(n, max_arity)
    return _primal_complex(n)


@lru_cache(maxsize=None)
def _dual_complex(n: int) -> ChainComplex:
    return _primal_complex(n).transpose(2 * (n - 2), f"dual({n})")


def dual_complex(n: int, max_arity: int | None = None) -> ChainComplex:
    """Dual cells graded by 2(n-2) - primal dimension, boundary = transposed primal boundary."""
    _guard(n, max_arity)
    return _dual_complex(n)


@lru_cache(maxsize=None)
def _cofaces(n: int) -> dict:
    out: dict[DecoratedTreeCell, dict[DecoratedTreeCell, int]] = {}
    for c in _cells(n):
        for f, v in _primal_boundary(c):
            out.setdefault(f, {})[c] = v
    return out


def dual_boundary(cell: DecoratedTreeCell) -> Chain:
    """Sum over primal cofaces c' of [d c' : cell] c'."""
    return Chain(cell.dual_degree - 1, dict(_cofaces(cell.n).get(cell, {})))


def dual_boundary_chain(x: Chain) -> Chain:
    terms: dict = {}
    for c, v in x.terms.items():
        for f, s in _cofaces(c.n).get(c, {}).items():
            terms[f] = terms.get(f, 0) + s * v
    return Chain(x.degree - 1, terms)


# -- symmetric action ----------------------------------------------------------

def act_cell(g: Sequence[int], cell: DecoratedTreeCell) -> tuple[int, DecoratedTreeCell]:
    """Relabel leaves k -> g[k-1]; decorations follow their inputs."""
    n = cell.n
    if sorted(g) != list(range(1, n + 1)):
        raise ModuliError(f"{tuple(g)} is not a permutation of 1..{n}")
    tree = cell.tree
    new_tree = relabel_tree(tree, g)

    def image(x):
        return g[x - 1] if isinstance(x, int) else tuple(sorted(g[y - 1] for y in x))

    sign = 1
    verts, words = [], []
    for v, w in zip(vertex_order(tree), cell.decorations):
        new_inputs = inputs(new_tree, image(v))
        where = {_input_key(x): p + 1 for p, x in enumerate(new_inputs)}
        perm = tuple(where[_input_key(image(x))] for x in inputs(tree, v))
        s, canon = necklace_relabel(w, perm)
        sign *= s
        verts.append(image(v))
        words.append(canon)
    t, out = _reorder(new_tree, verts, words)
    return sign * t, out


def act_chain(g: Sequence[int], x: Chain) -> Chain:
    terms: dict = {}
    for c, v in x.terms.items():
        s, img = act_cell(g, c)
        terms[img] = terms.get(img, 0) + s * v
    return Chain(x.degree, terms)


# -- dual operad ---------------------------------------------------------------


def _unit_cell() -> DecoratedTreeCell:
    return _make(NestedTree(1, ()), ())


def graft_sign(x: DecoratedTreeCell, i: int, y: DecoratedTreeCell) -> tuple[int, DecoratedTreeCell]:
    """Grafted cell with the Koszul sign of shuffling (x factors, y factors) into depth-first order."""
    n, m = x.n, y.n
    tree = graft(x.tree, i, y.tree)
    block = tuple(range(i, i + m))

    def lift_x(v: Vertex) -> Vertex:
        w = [a for a in v if a < i] + [a + m - 1 for a in v if a > i]
        if i in v:
            w += list(block)
        return tuple(sorted(w))

    verts = [lift_x(v) for v in vertex_order(x.tree)] + \
            [tuple(a + i - 1 for a in v) for v in vertex_order(y.tree)]
    words = list(x.decorations) + list(y.decorations)
    return _reorder(tree, verts, words)


def compose_dual(x: DecoratedTreeCell, i: int, y: DecoratedTreeCell) -> Chain:
    """Dual-cell composition x o_i y: a single signed cell in degree deg x + deg y."""
    if not 1 <= i <= x.n:
        raise ModuliError(f"slot {i} out of range 1..{x.n}")
    sign, cell = graft_sign(x, i, y)
    return Chain(cell.dual_degree if cell.n > 1 else 0, {cell: sign})


def compose_dual_chains(x: Chain, i: int, y: Chain) -> Chain:
    terms: dict = {}
    for a, ca in x.terms.items():
        for b, cb in y.terms.items():
            for c, s in compose_dual(a, i, b).terms.items():
                terms[c] = terms.get(c, 0) + s * ca * cb
    return Chain(x.degree + y.degree, terms)


def unit_cell() -> DecoratedTreeCell:
    """The formal arity-one unit for dual compositions."""
    return _unit_cell()


# -- fundamental classes --------------------------------------------------------

@lru_cache(maxsize=None)
def _fundamental_class(n: int) -> Chain:
    from .homology import smith_normal_form

    dual = _dual_complex(n)
    top = 2 * (n - 2)
    cells = dual.basis[top]
    mat = dual.d(top)
    if not cells:
        raise ModuliError("no top-degree cells")
    # kernel of the top boundary, found through the right transform of the SNF
    snf = smith_normal_form(mat)
    kernel = [[row[j] for row in snf.right.to_dense()] for j in range(snf.rank, mat.cols)]
    if len(kernel) != 1:
        raise ModuliError(f"top-degree kernel has rank {len(kernel)}, expected 1")
    vec = kernel[0]
    first = next(i for i, v in enumerate(vec) if v)
    if vec[first] < 0:
        vec = [-v for v in vec]
    if any(abs(v) != 1 for v in vec if v):
        from math import gcd
        g = 0
        for v in vec:
            g = gcd(g, v)
        vec = [v // g for v in vec]
    return dual.chain(top, vec)


def fundamental_class(n: int, max_arity: int | None = None) -> Chain:
    """Top-degree dual cycle, normalized so its first basis cell has coefficient +1."""
    _guard(n, max_arity)
    return _fundamental_class(n)
