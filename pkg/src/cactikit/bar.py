"""Bar construction of the gravity chain operad and the cobar of that bar.

A bar element is a nested tree with a gravity cell at each vertex, read as
the ordered tensor (s a_v) over vertices in depth-first order, so the
symbol of a vertex has degree |a_v| + 1 = dim + 2.  Sign conventions:

* d(s a) = s(d a), applied with the Koszul sign of the symbols before it;
* contracting an edge S -> T first moves s a_S next to s a_T, then applies
  s a_T (x) s a_S -> (-1)^(|a_T| + 1) s(a_T o_slot a_S), Koszul-signed by the
  symbols before s a_T, and finally relabels and re-sorts.

These are the conventions under which the bar differential coincides with
the cellular boundary of the moduli cells; the module checks it rather than
assuming it.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Hashable, Sequence

from .cacti import enumerate_necklaces, necklace_boundary, NecklaceCell
from .homology import ChainComplex, HomologySummary, homology, koszul_sign
from .moduli import (DecoratedTreeCell, ModuliError, _cells, _make, _primal_boundary, _reorder,
                     merge_permutation, necklace_relabel)
from .operads import _compose_grav
from .trees import NestedTree, Vertex, inputs, parent, valence, vertex_order

COBAR_MAX_ARITY = 3


@dataclass(frozen=True)
class GravOperad:
    """The interface the bar construction needs, for gravity chains."""

    name: str = "grav"

    def cells(self, k: int):
        return [c.word for c in enumerate_necklaces(k)]

    def degree(self, word) -> int:
        return len(word) - max(word) + 1

    def boundary(self, word):
        k = max(word)
        return [(f.word, v) for f, v in necklace_boundary(NecklaceCell(word, k)).terms.items()]

    def compose(self, a, i: int, b):
        return _compose_grav(a, max(a), i, b, max(b))

    def relabel(self, word, g):
        return necklace_relabel(word, g)


GRAV = GravOperad()


def bar_degree(cell: DecoratedTreeCell) -> int:
    return sum(GRAV.degree(w) + 1 for w in cell.decorations)


@lru_cache(maxsize=None)
def _bar_differential(cell: DecoratedTreeCell, op: GravOperad = GRAV) -> tuple:
    tree = cell.tree
    order = vertex_order(tree)
    words = cell.decorations
    sym = [op.degree(w) + 1 for w in words]  # degrees of the s a_v
    terms: dict[DecoratedTreeCell, int] = {}

    def add(c, v):
        terms[c] = terms.get(c, 0) + v

    before = 0
    for p in range(len(order)):
        sign = -1 if before % 2 else 1
        for face, v in op.boundary(words[p]):
            new = list(words)
            new[p] = face
            add(_make(tree, new), sign * v)
        before += sym[p]

    for ps in range(1, len(order)):
        lower = order[ps]
        upper = parent(tree, lower)
        pt = order.index(upper)
        move = sym[ps] * sum(sym[pt + 1:ps])
        prefix = sum(sym[:pt])
        mu = op.degree(words[pt]) + 1
        sign = -1 if (move + prefix + mu) % 2 else 1
        slot = inputs(tree, upper).index(lower) + 1
        g = merge_permutation(tree, upper, lower)
        new_tree = tree.__class__(tree.n, tuple(v for v in tree.vertices if v != lower))
        verts = [v for v in order if v != lower]
        for w, c in op.compose(words[pt], slot, words[ps]):
            s, canon = op.relabel(w, g)
            new_words = [canon if v == upper else words[order.index(v)] for v in verts]
            t, out = _reorder(new_tree, verts, new_words)
            add(out, sign * c * s * t)
    return tuple((c, v) for c, v in terms.items() if v)


def bar_differential(cell: DecoratedTreeCell) -> dict:
    return dict(_bar_differential(cell))


@lru_cache(maxsize=None)
def bar_complex(n: int) -> ChainComplex:
    cells = _cells(n)
    degs = sorted({bar_degree(c) for c in cells})
    basis = {k: [c for c in cells if bar_degree(c) == k] for k in range(degs[0], degs[-1] + 1)}
    return ChainComplex.from_boundary_map(basis, bar_differential, f"B(grav)({n})")


def bar_identification(n: int) -> dict:
    """Compare the bar complex with the primal moduli complex cell by cell."""
    report = {"arity": n, "basis": True, "offset": 2, "differential": True, "mismatch": None}
    for c in _cells(n):
        if bar_degree(c) != c.primal_dim + 2:
            report.update(basis=False, mismatch=f"{c!r}: bar degree {bar_degree(c)}, cell dim {c.primal_dim}")
            return report
    for c in _cells(n):
        if dict(_bar_differential(c)) != dict(_primal_boundary(c)):
            report.update(differential=False, mismatch=f"differential differs on {c!r}")
            return report
    report["cells"] = len(_cells(n))
    return report


# -- cooperad decomposition --------------------------------------------------

def _collapse(tree: NestedTree, sub: Vertex) -> tuple[NestedTree, dict]:
    """Tree with the subtree at ``sub`` shrunk to the leaf min(sub), relabelled to 1..k."""
    keep = [x for x in range(1, tree.n + 1) if x not in sub or x == min(sub)]
    label = {x: p + 1 for p, x in enumerate(keep)}
    verts = []
    for v in tree.vertices:
        if set(v) <= set(sub):
            continue
        verts.append(tuple(sorted(label[x] for x in v if x in label)))
    return NestedTree(len(keep), tuple(verts)), label


def split(cell: DecoratedTreeCell, sub: Vertex, parity: Callable[[tuple], int]):
    """Split at a non-root vertex: (upper, lower, sign) with the Koszul sign
    of moving the lower factors after the upper ones."""
    tree = cell.tree
    order = vertex_order(tree)
    below = [p for p, v in enumerate(order) if set(v) <= set(sub)]
    above = [p for p in range(len(order)) if p not in below]
    sign = koszul_sign([parity(w) for w in cell.decorations], above + below)
    up_tree, _ = _collapse(tree, sub)
    low_label = {x: p + 1 for p, x in enumerate(sorted(sub))}
    low_tree = NestedTree(len(sub), tuple(tuple(low_label[x] for x in order[p]) for p in below))
    upper = _make(up_tree, [cell.decorations[p] for p in above])
    lower = _make(low_tree, [cell.decorations[p] for p in below])
    return upper, lower, sign


def partial_decompositions(cell: DecoratedTreeCell):
    """All (i, upper, lower, sign) with upper o_i lower = cell, i.e. splits at
    non-root vertices whose leaves form the interval i..i+m-1."""
    out = []
    for v in vertex_order(cell.tree)[1:]:
        if v[-1] - v[0] + 1 != len(v):
            continue
        upper, lower, sign = split(cell, v, lambda w: GRAV.degree(w) + 1)
        out.append((v[0], upper, lower, sign))
    return out


# -- cobar of the bar ----------------------------------------------------------

@dataclass(frozen=True)
class CobarBarElement:
    cell: DecoratedTreeCell
    outer: frozenset  # non-root vertices whose incoming edge is an outer (cobar) edge

    def block_roots(self) -> list[Vertex]:
        return [v for v in vertex_order(self.cell.tree) if v == self.cell.tree.root or v in self.outer]

    def degree(self) -> int:
        return bar_degree(self.cell) - len(self.block_roots())

    def __repr__(self):
        marks = {v: ("|" if v in self.outer else "") for v in vertex_order(self.cell.tree)}
        parts = [f"{marks[v]}{{{','.join(map(str, v))}}}<{','.join(map(str, w))}>"
                 for v, w in zip(vertex_order(self.cell.tree), self.cell.decorations)]
        return "Omega[" + " ".join(parts) + "]"


def _block_of(tree: NestedTree, outer: frozenset) -> dict[Vertex, Vertex]:
    root = tree.root
    out = {}
    for v in vertex_order(tree):
        if v == root or v in outer:
            out[v] = v
        else:
            out[v] = out[parent(tree, v)]
    return out


def _symbols(el: CobarBarElement) -> tuple[list, dict]:
    """Canonical symbol order: depth-first, each block root preceded by its desuspension."""
    tree = el.cell.tree
    par = {}
    seq = []
    for v, w in zip(vertex_order(tree), el.cell.decorations):
        if v == tree.root or v in el.outer:
            seq.append(("s", v))
            par[("s", v)] = 1
        seq.append(("a", v))
        par[("a", v)] = GRAV.degree(w) + 1
    return seq, par


def _contiguous(el: CobarBarElement) -> list:
    tree = el.cell.tree
    blocks = _block_of(tree, el.outer)
    seq = []
    for r in el.block_roots():
        seq.append(("s", r))
        seq.extend(("a", v) for v in vertex_order(tree) if blocks[v] == r)
    return seq


def _perm_sign(src: Sequence[Hashable], dst: Sequence[Hashable], par: dict) -> int:
    pos = {x: p for p, x in enumerate(src)}
    return koszul_sign([par[x] for x in src], [pos[x] for x in dst])


def _block_cell(el: CobarBarElement, root: Vertex) -> tuple[DecoratedTreeCell, dict[int, tuple[int, ...]]]:
    """The bar element of one block, with its effective leaves relabelled 1..k."""
    tree = el.cell.tree
    blocks = _block_of(tree, el.outer)
    members = [v for v in vertex_order(tree) if blocks[v] == root]
    lower_roots = [v for v in el.outer if blocks[parent(tree, v)] == root]
    rep = {}
    for x in root:
        cover = next((s for s in lower_roots if x in s), None)
        key = min(cover) if cover else x
        rep.setdefault(key, set()).add(x)
    keys = sorted(rep)
    label = {k: p + 1 for p, k in enumerate(keys)}
    leaf_of = {}
    for k, xs in rep.items():
        for x in xs:
            leaf_of[x] = label[k]
    verts = [tuple(sorted({leaf_of[x] for x in v})) for v in members]
    words = [el.cell.decorations[vertex_order(tree).index(v)] for v in members]
    block_tree = NestedTree(len(keys), tuple(verts))
    # depth-first orders agree after collapsing, since least leaves are kept
    expand = {label[k]: tuple(sorted(xs)) for k, xs in rep.items()}
    return _make(block_tree, words), expand


def _expand_vertex(v: Vertex, expand: dict) -> Vertex:
    return tuple(sorted(x for leaf in v for x in expand[leaf]))


def _replace_block(el: CobarBarElement, root: Vertex, new_block: DecoratedTreeCell,
                   expand: dict, extra_outer: Vertex | None = None) -> CobarBarElement:
    tree = el.cell.tree
    blocks = _block_of(tree, el.outer)
    old_order = vertex_order(tree)
    keep = {v: w for v, w in zip(old_order, el.cell.decorations) if blocks[v] != root}
    for v, w in zip(vertex_order(new_block.tree), new_block.decorations):
        keep[_expand_vertex(v, expand)] = w
    new_tree = NestedTree(tree.n, tuple(keep))
    outer = set(el.outer)
    if extra_outer is not None:
        outer.add(extra_outer)
    cell = _make(new_tree, [keep[v] for v in vertex_order(new_tree)])
    return CobarBarElement(cell, frozenset(outer))


def cobar_bar_differential(el: CobarBarElement) -> dict:
    seq, par = _symbols(el)
    contig = _contiguous(el)
    to_contig = _perm_sign(seq, contig, par)
    terms: dict[CobarBarElement, int] = {}
    before = 0
    for root in el.block_roots():
        block, expand = _block_cell(el, root)
        sign0 = to_contig * (-1 if before % 2 else 1)
        # internal differential: d(s^-1 X) = -s^-1 dX
        for new_block, c in _bar_differential(block):
            new = _replace_block(el, root, new_block, expand)
            nseq, npar = _symbols(new)
            ncontig = _contiguous(new)
            s = _perm_sign(ncontig, nseq, npar)
            terms[new] = terms.get(new, 0) - sign0 * c * s
        # decomposition: s^-1 X -> -(-1)^|U| s^-1 U  s^-1 L
        for sub in vertex_order(block.tree)[1:]:
            upper, lower, eps = split(block, sub, lambda w: GRAV.degree(w) + 1)
            u_deg = bar_degree(upper)
            full_sub = _expand_vertex(sub, expand)
            new = _replace_block(el, root, block, expand, extra_outer=full_sub)
            nseq, npar = _symbols(new)
            nblocks = _block_of(new.cell.tree, new.outer)
            # symbol list right after the split, blocks otherwise in old contiguous order
            produced = []
            for r in el.block_roots():
                if r != root:
                    produced.append(("s", r))
                    produced.extend(("a", v) for v in vertex_order(new.cell.tree) if nblocks[v] == r)
                    continue
                produced.append(("s", root))
                produced.extend(("a", v) for v in vertex_order(new.cell.tree) if nblocks[v] == root)
                produced.append(("s", full_sub))
                produced.extend(("a", v) for v in vertex_order(new.cell.tree) if nblocks[v] == full_sub)
            s = _perm_sign(produced, nseq, npar)
            sign = -sign0 * eps * (-1 if u_deg % 2 else 1) * s
            terms[new] = terms.get(new, 0) + sign
        before += 1 + bar_degree(block)
    return {k: v for k, v in terms.items() if v}


def cobar_bar_elements(n: int) -> list[CobarBarElement]:
    out = []
    for c in _cells(n):
        nonroot = vertex_order(c.tree)[1:]
        for mask in range(1 << len(nonroot)):
            outer = frozenset(v for b, v in enumerate(nonroot) if mask >> b & 1)
            out.append(CobarBarElement(c, outer))
    return out


def cobar_bar_complex(n: int, max_arity: int | None = None) -> ChainComplex:
    cap = COBAR_MAX_ARITY if max_arity is None else max_arity
    if n > cap:
        raise ModuliError(f"cobar-bar complex refused for arity {n} (cap {cap})")
    els = cobar_bar_elements(n)
    degs = sorted({e.degree() for e in els})
    basis = {k: [e for e in els if e.degree() == k] for k in range(degs[0], degs[-1] + 1)}
    return ChainComplex.from_boundary_map(basis, cobar_bar_differential, f"OmegaB(grav)({n})")


def cobar_bar_homology(n: int, max_arity: int | None = None) -> dict:
    """Homology of the cobar-bar complex against gravity chains (shifted by one)."""
    from .cacti import unbased_complex

    h = homology(cobar_bar_complex(n, max_arity))
    g = homology(unbased_complex(n))
    expected = {k + 1: b for k, b in g.betti.items()}
    got = {k: b for k, b in h.betti.items() if b}
    want = {k: b for k, b in expected.items() if b}
    return {"arity": n, "cobar_bar": h, "grav": expected,
            "match": got == want and h.is_torsion_free()}
