"""Partial compositions of based cacti chains and of the gravity chain operad.

A based composite u o_i v traverses u, and while on lobe i walks along v
stretched by the arity of v.  The r arcs of lobe i cut v's path into r
consecutive blocks; each cut point sits inside an arc of v whose letter is
then duplicated into both neighbouring blocks.  The orientation of each
summand is the sign of the Jacobian of this piecewise-linear map from
(u coordinates, v coordinates) to the coordinates of the summand.

The gravity composition is pulled back through the transfer: the unique
chain c with transfer(c) = transfer(a) o_i transfer(b).
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Sequence

from .cacti import (BasedCactusCell, CellError, NecklaceCell, Word, _sub, _transfer,
                    arc_forms, is_admissible, min_rotation, orientation_sign, transfer_chain)
from .homology import Chain


class CompositionError(ArithmeticError):
    pass


def _add(a: dict[int, int], b: dict[int, int], k: int = 1) -> dict[int, int]:
    out = dict(a)
    for key, v in b.items():
        out[key] = out.get(key, 0) + k * v
    return out


def _scale(a: dict[int, int], k: int) -> dict[int, int]:
    return {key: k * v for key, v in a.items()}


@lru_cache(maxsize=None)
def _compose_words(u: Word, n: int, i: int, v: Word, m: int) -> tuple[tuple[Word, int], ...]:
    if not 1 <= i <= n:
        raise CompositionError(f"slot {i} out of range 1..{n}")
    ufor, udim = arc_forms(u, n)
    vfor, vdim = arc_forms(v, m, offset=udim)
    ndim = udim + vdim
    occ = [p for p, x in enumerate(u) if x == i]
    r, l = len(occ), len(v)

    def lift(x: int) -> int:
        return x if x < i else x + m - 1

    # cumulative positions along v's path (in units where each lobe has length 1)
    ends = []
    acc: dict[int, int] = {}
    for q in range(l):
        acc = _add(acc, vfor[q])
        ends.append(acc)
    starts = [{}] + ends[:-1]
    cutpos = []
    acc = {}
    for j in range(r - 1):
        acc = _add(acc, ufor[occ[j]])
        cutpos.append(_scale(acc, m))

    out = []
    for cuts in combinations_with_replacement(range(l), r - 1):
        blocks: list[list[tuple[int, dict[int, int]]]] = [[]]
        j = 0
        for q in range(l):
            left = starts[q]
            letter = v[q] + i - 1
            while j < r - 1 and cuts[j] == q:
                blocks[-1].append((letter, _sub(cutpos[j], left)))
                left = cutpos[j]
                blocks.append([])
                j += 1
            blocks[-1].append((letter, _sub(ends[q], left)))
        word: list[int] = []
        forms: list[dict[int, int]] = []
        b = 0
        for p, x in enumerate(u):
            if x == i:
                for letter, f in blocks[b]:
                    word.append(letter)
                    forms.append(f)
                b += 1
            else:
                word.append(lift(x))
                forms.append(ufor[p])
        word_t = tuple(word)
        if not is_admissible(word_t, n + m - 1):
            raise CompositionError(f"composite {word_t} of {u} o_{i} {v} is not admissible")
        out.append((word_t, orientation_sign(word_t, n + m - 1, forms, ndim)))
    return tuple(out)


def compose_based(u: BasedCactusCell, i: int, v: BasedCactusCell) -> Chain:
    """u o_i v as a chain of based cells of arity n+m-1."""
    terms: dict[BasedCactusCell, int] = {}
    for w, s in _compose_words(u.word, u.arity, i, v.word, v.arity):
        key = BasedCactusCell.trusted(w, u.arity + v.arity - 1)
        terms[key] = terms.get(key, 0) + s
    return Chain(u.dim + v.dim, terms)


def compose_based_chains(x: Chain, i: int, y: Chain) -> Chain:
    terms: dict[BasedCactusCell, int] = {}
    for a, ca in x.terms.items():
        for b, cb in y.terms.items():
            for w, s in _compose_words(a.word, a.arity, i, b.word, b.arity):
                key = BasedCactusCell.trusted(w, a.arity + b.arity - 1)
                terms[key] = terms.get(key, 0) + s * ca * cb
    return Chain(x.degree + y.degree, terms)


@lru_cache(maxsize=None)
def _compose_grav(a: Word, n: int, i: int, b: Word, m: int) -> tuple[tuple[Word, int], ...]:
    if not 1 <= i <= n:
        raise CompositionError(f"slot {i} out of range 1..{n}")
    k = n + m - 1
    target: dict[Word, int] = {}
    for x, sx in _transfer(a, n):
        for y, sy in _transfer(b, m):
            for w, s in _compose_words(x, n, i, y, m):
                target[w] = target.get(w, 0) + s * sx * sy
    target = {w: v for w, v in target.items() if v}
    coeffs: dict[Word, int] = {}
    for w in sorted(target):
        if w[0] != w[-1]:
            continue
        neck = min_rotation(w[:-1])[0]
        if neck in coeffs:
            continue
        sign = dict(_transfer(neck, k)).get(w)
        if sign is None:
            raise CompositionError(f"{w} is not a transfer summand of <{neck}>")
        coeffs[neck] = target[w] * sign
    rebuilt: dict[Word, int] = {}
    for neck, c in coeffs.items():
        for w, s in _transfer(neck, k):
            rebuilt[w] = rebuilt.get(w, 0) + c * s
    rebuilt = {w: v for w, v in rebuilt.items() if v}
    if rebuilt != target:
        raise CompositionError(f"transfer(<{a}>) o_{i} transfer(<{b}>) is not in the image of the transfer")
    return tuple(sorted((w, c) for w, c in coeffs.items() if c))


def compose_grav(a: NecklaceCell, i: int, b: NecklaceCell) -> Chain:
    """Gravity composition; the result has cell dimension dim a + dim b + 1."""
    k = a.arity + b.arity - 1
    terms = {NecklaceCell.trusted(w, k): c for w, c in _compose_grav(a.word, a.arity, i, b.word, b.arity)}
    return Chain(a.dim + b.dim + 1, terms)


def compose_grav_chains(x: Chain, i: int, y: Chain) -> Chain:
    terms: dict[NecklaceCell, int] = {}
    for a, ca in x.terms.items():
        for b, cb in y.terms.items():
            for w, c in _compose_grav(a.word, a.arity, i, b.word, b.arity):
                key = NecklaceCell.trusted(w, a.arity + b.arity - 1)
                terms[key] = terms.get(key, 0) + c * ca * cb
    return Chain(x.degree + y.degree + 1, terms)


def grav_transfer_identity(a: NecklaceCell, i: int, b: NecklaceCell) -> bool:
    """transfer(a o_i b) == transfer(a) o_i transfer(b), exactly."""
    lhs = transfer_chain(compose_grav(a, i, b))
    rhs = compose_based_chains(transfer_chain(Chain(a.dim, {a: 1})), i,
                               transfer_chain(Chain(b.dim, {b: 1})))
    return lhs == rhs


def block_permutation(n: int, i: int, m: int, outer: Sequence[int] | None = None,
                      inner: Sequence[int] | None = None) -> tuple[int, ...]:
    """Relabelling of a composite of arities (n, m) at slot i induced by
    relabellings of the outer and inner pieces."""
    outer = tuple(outer) if outer is not None else tuple(range(1, n + 1))
    inner = tuple(inner) if inner is not None else tuple(range(1, m + 1))
    new_i = outer[i - 1]

    def place(x: int) -> int:  # outer label (not the slot) after relabelling
        y = outer[x - 1]
        return y if y < new_i else y + m - 1

    g = []
    for x in range(1, n + m):
        if x < i:
            g.append(place(x))
        elif x < i + m:
            g.append(new_i + inner[x - i] - 1)
        else:
            g.append(place(x - m + 1))
    return tuple(g)


# -- axiom checks ------------------------------------------------------------

def _unit_chain(cell) -> Chain:
    return Chain(cell.dim, {cell: 1})


class _Family:
    """The operations of one operad needed by the axiom checks."""

    def __init__(self, name, cells, compose, boundary, act, degree, min_arity):
        self.name = name
        self.cells = cells
        self.compose = compose
        self.boundary = boundary
        self.act = act
        self.degree = degree
        self.min_arity = min_arity


def _families(budget: int):
    from .cacti import act_chain, boundary_chain, enumerate_based_cells, enumerate_necklaces

    cact = _Family("Cact", enumerate_based_cells, compose_based_chains, boundary_chain,
                   act_chain, lambda c: c.dim, 1)
    grav = _Family("grav", enumerate_necklaces, compose_grav_chains, boundary_chain,
                   act_chain, lambda c: c.dim + 1, 2)
    return cact, grav


def _permutations_sample(n: int):
    from itertools import permutations

    return [p for p in permutations(range(1, n + 1))]


def check_operad_axioms(arity_budget: int = 5, families: Sequence[str] = ("Cact", "grav")) -> dict:
    """Exhaustive axiom checks for all cells with total arity within the budget.

    Returns {check name: {"checked": count, "failures": [descriptions]}}.
    """
    report: dict[str, dict] = {}

    def record(name: str, ok: bool, what: str):
        entry = report.setdefault(name, {"checked": 0, "failures": []})
        entry["checked"] += 1
        if not ok:
            entry["failures"].append(what)

    for fam in _families(arity_budget):
        if fam.name not in families:
            continue
        lo = fam.min_arity
        cells = {n: fam.cells(n) for n in range(lo, arity_budget + 1)}

        # unit laws (based only)
        if fam.name == "Cact":
            unit = BasedCactusCell((1,), 1)
            for n in range(1, arity_budget + 1):
                for u in cells[n]:
                    x = _unit_chain(u)
                    for i in range(1, n + 1):
                        record("Cact.unit", compose_based(u, i, unit) == x, f"{u} o_{i} 1")
                    record("Cact.unit", compose_based(unit, 1, u) == x, f"1 o_1 {u}")

        for n in range(lo, arity_budget + 1):
            for m in range(lo, arity_budget + 2 - n):
                for a in cells[n]:
                    xa = _unit_chain(a)
                    da = fam.boundary(xa)
                    for b in cells[m]:
                        xb = _unit_chain(b)
                        db = fam.boundary(xb)
                        for i in range(1, n + 1):
                            ab = fam.compose(xa, i, xb)
                            # Leibniz
                            lhs = fam.boundary(ab)
                            rhs = fam.compose(da, i, xb) + (-1) ** fam.degree(a) * fam.compose(xa, i, db)
                            record(f"{fam.name}.leibniz", lhs == rhs, f"d({a} o_{i} {b})")
        # equivariance, sampled over all permutations for arities <= 3 and
        # transpositions/cycles beyond
        for n in range(lo, arity_budget + 1):
            for m in range(lo, arity_budget + 2 - n):
                outer_perms = _perm_family(n)
                inner_perms = _perm_family(m)
                for a in cells[n]:
                    xa = _unit_chain(a)
                    for b in cells[m]:
                        xb = _unit_chain(b)
                        for i in range(1, n + 1):
                            ab = fam.compose(xa, i, xb)
                            for g in outer_perms:
                                lhs = fam.act(block_permutation(n, i, m, outer=g), ab)
                                rhs = fam.compose(fam.act(g, xa), g[i - 1], xb)
                                record(f"{fam.name}.equivariance", lhs == rhs, f"{g} on {a} o_{i} {b}")
                            for h in inner_perms:
                                lhs = fam.act(block_permutation(n, i, m, inner=h), ab)
                                rhs = fam.compose(xa, i, fam.act(h, xb))
                                record(f"{fam.name}.equivariance", lhs == rhs, f"{h} on {a} o_{i} {b}")
        # associativity, sequential and parallel
        for n in range(lo, arity_budget + 1):
            for m in range(lo, arity_budget + 2 - n):
                for p in range(lo, arity_budget + 3 - n - m):
                    for a in cells[n]:
                        xa = _unit_chain(a)
                        for b in cells[m]:
                            xb = _unit_chain(b)
                            for c in cells[p]:
                                xc = _unit_chain(c)
                                sign = (-1) ** (fam.degree(b) * fam.degree(c))
                                for i in range(1, n + 1):
                                    ab = fam.compose(xa, i, xb)
                                    for j in range(1, n + m):
                                        lhs = fam.compose(ab, j, xc)
                                        if i <= j < i + m:
                                            rhs = fam.compose(xa, i, fam.compose(xb, j - i + 1, xc))
                                            name = "sequential"
                                        elif j < i:
                                            rhs = sign * fam.compose(fam.compose(xa, j, xc), i + p - 1, xb)
                                            name = "parallel"
                                        else:
                                            rhs = sign * fam.compose(fam.compose(xa, j - m + 1, xc), i, xb)
                                            name = "parallel"
                                        record(f"{fam.name}.associativity.{name}", lhs == rhs,
                                               f"({a} o_{i} {b}) o_{j} {c}")
        # transfer identity
        if fam.name == "grav":
            for n in range(2, arity_budget + 1):
                for m in range(2, arity_budget + 2 - n):
                    for a in cells[n]:
                        for b in cells[m]:
                            for i in range(1, n + 1):
                                try:
                                    ok = grav_transfer_identity(a, i, b)
                                except CompositionError:
                                    ok = False
                                record("grav.transfer_factorization", ok, f"{a} o_{i} {b}")
    return report


def _perm_family(n: int) -> list[tuple[int, ...]]:
    """All permutations for small n; adjacent transpositions and the long cycle otherwise."""
    if n <= 3:
        return _permutations_sample(n)
    out = []
    for k in range(1, n):
        g = list(range(1, n + 1))
        g[k - 1], g[k] = g[k], g[k - 1]
        out.append(tuple(g))
    out.append(tuple(list(range(2, n + 1)) + [1]))
    return out
