"""Cells of based and unbased cacti, their boundaries, projection and transfer.

A based cell is a word over {1..n}; the occurrences of a letter k are the
arcs of lobe k, and the cell is the product over lobes of simplices whose
barycentric coordinates are the arc lengths.

Orientation convention (used everywhere in the package):

* lobes are ordered by label, each simplex by the order of its arcs in the
  word, i.e. the oriented coordinates are the lengths of all arcs except the
  first one of each lobe;
* a necklace cell carries the orientation of its canonical-rotation lift;
* the transfer of a necklace is oriented as (circle) x (necklace cell).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .homology import Chain, ChainComplex, koszul_sign

Word = tuple[int, ...]


class CellError(ValueError):
    pass


def _has_crossing(word: Sequence[int]) -> bool:
    """True if some subsequence reads (i, j, i, j) with i != j."""
    letters = set(word)
    for i in letters:
        for j in letters:
            if i == j:
                continue
            want = (i, j, i, j)
            k = 0
            for x in word:
                if x == want[k]:
                    k += 1
                    if k == 4:
                        return True
    return False


def is_admissible(word: Sequence[int], n: int | None = None) -> bool:
    word = tuple(word)
    if not word:
        return False
    if n is None:
        n = max(word)
    if set(word) != set(range(1, n + 1)):
        return False
    if any(a == b for a, b in zip(word, word[1:])):
        return False
    return not _has_crossing(word)


def is_cyclic_admissible(word: Sequence[int], n: int | None = None) -> bool:
    word = tuple(word)
    if len(word) < 2 or word[0] == word[-1]:
        return False
    return is_admissible(word, n)


def min_rotation(word: Sequence[int]) -> tuple[Word, int]:
    """Lexicographically least rotation and the shift s with rot = word[s:] + word[:s]."""
    word = tuple(word)
    best, shift = word, 0
    for s in range(1, len(word)):
        rot = word[s:] + word[:s]
        if rot < best:
            best, shift = rot, s
    return best, shift


def _sort_key(cell):
    return (len(cell.word), cell.word)


@dataclass(frozen=True, slots=True)
class BasedCactusCell:
    word: Word
    arity: int

    def __post_init__(self):
        if not is_admissible(self.word, self.arity):
            raise CellError(f"inadmissible based word {self.word} for arity {self.arity}")

    @classmethod
    def trusted(cls, word: Word, arity: int) -> "BasedCactusCell":
        obj = object.__new__(cls)
        object.__setattr__(obj, "word", word)
        object.__setattr__(obj, "arity", arity)
        return obj

    @classmethod
    def of(cls, word: Iterable[int]) -> "BasedCactusCell":
        word = tuple(word)
        return cls(word, max(word))

    @property
    def dim(self) -> int:
        return len(self.word) - self.arity

    def __lt__(self, other):
        return _sort_key(self) < _sort_key(other)

    def __repr__(self):
        return "(" + ",".join(map(str, self.word)) + ")"


@dataclass(frozen=True, slots=True)
class NecklaceCell:
    word: Word
    arity: int

    def __post_init__(self):
        if self.arity < 2 or not is_cyclic_admissible(self.word, self.arity):
            raise CellError(f"inadmissible cyclic word {self.word} for arity {self.arity}")
        if min_rotation(self.word)[0] != self.word:
            raise CellError(f"{self.word} is not the least rotation")

    @classmethod
    def trusted(cls, word: Word, arity: int) -> "NecklaceCell":
        obj = object.__new__(cls)
        object.__setattr__(obj, "word", word)
        object.__setattr__(obj, "arity", arity)
        return obj

    @classmethod
    def of(cls, word: Iterable[int]) -> "NecklaceCell":
        word = tuple(word)
        return cls(min_rotation(word)[0], max(word))

    @property
    def dim(self) -> int:
        return len(self.word) - self.arity

    def __lt__(self, other):
        return _sort_key(self) < _sort_key(other)

    def __repr__(self):
        return "<" + ",".join(map(str, self.word)) + ">"


def lobe_sizes(word: Sequence[int], n: int) -> list[int]:
    sizes = [0] * (n + 1)
    for x in word:
        sizes[x] += 1
    return sizes


# -- enumeration -------------------------------------------------------------

def _words(n: int, max_len: int) -> list[Word]:
    out: list[Word] = []
    word: list[int] = []

    def crossing_if_appended(c: int) -> bool:
        # appending c closes (i, c, i, c) iff some occurrence of c is
        # surrounded by a letter i
        for p, x in enumerate(word):
            if x != c:
                continue
            before = set(word[:p])
            if before.intersection(word[p + 1:]) - {c}:
                return True
        return False

    def grow():
        missing = n - len(set(word))
        if missing == 0:
            out.append(tuple(word))
        if len(word) + max(missing, 1) > max_len:
            return
        for c in range(1, n + 1):
            if word and word[-1] == c:
                continue
            if crossing_if_appended(c):
                continue
            word.append(c)
            grow()
            word.pop()

    grow()
    return out


@lru_cache(maxsize=None)
def _based_cells(n: int) -> tuple[BasedCactusCell, ...]:
    cells = [BasedCactusCell(w, n) for w in _words(n, 2 * n - 1)]
    return tuple(sorted(cells, key=_sort_key))


def enumerate_based_cells(n: int, dim: int | None = None) -> list[BasedCactusCell]:
    if n < 1:
        raise CellError("arity must be at least 1")
    cells = _based_cells(n)
    if dim is None:
        return list(cells)
    return [c for c in cells if c.dim == dim]


@lru_cache(maxsize=None)
def _necklaces(n: int) -> tuple[NecklaceCell, ...]:
    seen = set()
    for w in _words(n, 2 * n - 2):
        if w[0] != w[-1] and min_rotation(w)[0] == w:
            seen.add(w)
    return tuple(sorted((NecklaceCell(w, n) for w in seen), key=_sort_key))


def enumerate_necklaces(n: int, dim: int | None = None) -> list[NecklaceCell]:
    if n < 2:
        raise CellError("necklaces need arity at least 2")
    cells = _necklaces(n)
    if dim is None:
        return list(cells)
    return [c for c in cells if c.dim == dim]


# -- boundaries --------------------------------------------------------------

def _face_terms(word: Word, n: int) -> list[tuple[Word, int]]:
    sizes = lobe_sizes(word, n)
    before = [0] * (n + 2)
    for k in range(1, n + 1):
        before[k + 1] = before[k] + sizes[k] - 1
    seen = [0] * (n + 1)
    out = []
    for p, k in enumerate(word):
        occ = seen[k]
        seen[k] += 1
        if sizes[k] < 2:
            continue
        face = word[:p] + word[p + 1:]
        if p and p + 1 < len(word) and word[p - 1] == word[p + 1]:
            continue
        sign = -1 if (occ + before[k]) % 2 else 1
        out.append((face, sign))
    return out


@lru_cache(maxsize=None)
def _based_boundary(word: Word, n: int) -> tuple[tuple[Word, int], ...]:
    return tuple(_face_terms(word, n))


def based_boundary(c: BasedCactusCell) -> Chain:
    terms: dict[BasedCactusCell, int] = {}
    for face, s in _based_boundary(c.word, c.arity):
        key = BasedCactusCell.trusted(face, c.arity)
        terms[key] = terms.get(key, 0) + s
    return Chain(c.dim - 1, terms)


def _project_word(word: Word, n: int) -> tuple[Word, int] | None:
    if len(word) < 2 or word[0] == word[-1]:
        return None
    canon, shift = min_rotation(word)
    sizes = lobe_sizes(word, n)
    head = lobe_sizes(word[:shift], n)
    parity = sum(head[k] * (sizes[k] - 1) for k in range(1, n + 1)) % 2
    return canon, -1 if parity else 1


def project(c: BasedCactusCell) -> tuple[int, NecklaceCell] | None:
    """Signed image under the quotient map, or None when the cell collapses."""
    if c.arity < 2:
        return None
    res = _project_word(c.word, c.arity)
    if res is None:
        return None
    canon, sign = res
    return sign, NecklaceCell.trusted(canon, c.arity)


def project_chain(x: Chain) -> Chain:
    terms: dict[NecklaceCell, int] = {}
    for cell, v in x.terms.items():
        res = project(cell)
        if res is not None:
            s, w = res
            terms[w] = terms.get(w, 0) + s * v
    return Chain(x.degree, terms)


@lru_cache(maxsize=None)
def _necklace_boundary(word: Word, n: int) -> tuple[tuple[Word, int], ...]:
    acc: dict[Word, int] = {}
    for face, s in _based_boundary(word, n):
        res = _project_word(face, n)
        if res is None:
            continue
        canon, t = res
        acc[canon] = acc.get(canon, 0) + s * t
    return tuple((w, v) for w, v in acc.items() if v)


def necklace_boundary(w: NecklaceCell) -> Chain:
    return Chain(w.dim - 1, {NecklaceCell.trusted(f, w.arity): v for f, v in _necklace_boundary(w.word, w.arity)})


# -- orientation via Jacobians ----------------------------------------------

def _det(rows: list[list[int]]) -> int:
    """Bareiss fraction-free determinant."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def arc_forms(word: Word, n: int, offset: int = 0) -> tuple[list[dict[int, int]], int]:
    """Linear part of each arc length in the oriented coordinates of the cell.

    Coordinates are numbered from ``offset``; returns the forms and the
    number of coordinates used.
    """
    sizes = lobe_sizes(word, n)
    start = [0] * (n + 2)
    for k in range(1, n + 1):
        start[k + 1] = start[k] + sizes[k] - 1
    seen = [0] * (n + 1)
    forms = []
    for k in word:
        occ = seen[k]
        seen[k] += 1
        if occ:
            forms.append({offset + start[k] + occ - 1: 1})
        else:
            forms.append({offset + start[k] + t: -1 for t in range(sizes[k] - 1)})
    return forms, start[n + 1]


def orientation_sign(word: Word, n: int, forms: Sequence[dict[int, int]], ncoords: int) -> int:
    """Sign of the Jacobian from source coordinates to the oriented coordinates of ``word``.

    ``forms[p]`` is the linear part of the length of arc p of the target.
    """
    sizes = lobe_sizes(word, n)
    start = [0] * (n + 2)
    for k in range(1, n + 1):
        start[k + 1] = start[k] + sizes[k] - 1
    dim = start[n + 1]
    if dim != ncoords:
        raise CellError(f"dimension mismatch: target {dim}, source {ncoords}")
    rows = [[0] * dim for _ in range(dim)]
    seen = [0] * (n + 1)
    for p, k in enumerate(word):
        occ = seen[k]
        seen[k] += 1
        if occ:
            row = rows[start[k] + occ - 1]
            for col, v in forms[p].items():
                row[col] += v
    det = _det(rows)
    if det == 0:
        raise CellError(f"degenerate Jacobian for {word}")
    return 1 if det > 0 else -1


def _sub(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) - v
    return out


@lru_cache(maxsize=None)
def _transfer(word: Word, n: int) -> tuple[tuple[Word, int], ...]:
    l = len(word)
    forms, dim = arc_forms(word, n, offset=1)
    theta = {0: 1}
    out = []
    for j in range(l):
        based = word[j:] + word[:j] + (word[j],)
        tforms = [_sub(forms[j], theta)] + [forms[(j + t) % l] for t in range(1, l)] + [theta]
        out.append((based, orientation_sign(based, n, tforms, dim + 1)))
    return tuple(out)


def transfer(w: NecklaceCell) -> Chain:
    """Sum over base-point positions, one per arc, oriented as circle x cell."""
    return Chain(w.dim + 1, {BasedCactusCell.trusted(b, w.arity): s for b, s in _transfer(w.word, w.arity)})


def transfer_chain(x: Chain) -> Chain:
    terms: dict[BasedCactusCell, int] = {}
    for w, v in x.terms.items():
        for b, s in _transfer(w.word, w.arity):
            key = BasedCactusCell.trusted(b, w.arity)
            terms[key] = terms.get(key, 0) + s * v
    return Chain(x.degree + 1, terms)


# -- symmetric group action --------------------------------------------------

def relabel_sign(word: Word, n: int, g: Sequence[int]) -> tuple[Word, int]:
    """Relabel lobe k as g[k-1]; the sign permutes the simplex factors."""
    sizes = lobe_sizes(word, n)
    inv = [0] * (n + 1)
    for k in range(1, n + 1):
        inv[g[k - 1]] = k
    parities = [sizes[k] - 1 for k in range(1, n + 1)]
    sign = koszul_sign(parities, [inv[p] - 1 for p in range(1, n + 1)])
    return tuple(g[x - 1] for x in word), sign


def _check_perm(g: Sequence[int], n: int):
    if sorted(g) != list(range(1, n + 1)):
        raise CellError(f"{tuple(g)} is not a permutation of 1..{n}")


def symmetric_action(g: Sequence[int], c):
    """Signed image of a based or necklace cell under the relabelling k -> g[k-1]."""
    _check_perm(g, c.arity)
    word, sign = relabel_sign(c.word, c.arity, g)
    if isinstance(c, BasedCactusCell):
        return sign, BasedCactusCell.trusted(word, c.arity)
    canon, t = _project_word(word, c.arity)
    return sign * t, NecklaceCell.trusted(canon, c.arity)


def act_chain(g: Sequence[int], x: Chain) -> Chain:
    terms: dict = {}
    for cell, v in x.terms.items():
        s, img = symmetric_action(g, cell)
        terms[img] = terms.get(img, 0) + s * v
    return Chain(x.degree, terms)


def boundary_chain(x: Chain) -> Chain:
    terms: dict = {}
    for cell, v in x.terms.items():
        d = based_boundary(cell) if isinstance(cell, BasedCactusCell) else necklace_boundary(cell)
        for f, s in d.terms.items():
            terms[f] = terms.get(f, 0) + s * v
    return Chain(x.degree - 1, terms)


# -- complexes ---------------------------------------------------------------

@lru_cache(maxsize=None)
def based_complex(n: int) -> ChainComplex:
    cells = enumerate_based_cells(n)
    basis = {k: [c for c in cells if c.dim == k] for k in range(n)}
    return ChainComplex.from_boundary_map(basis, lambda c: based_boundary(c).terms, f"based({n})")


@lru_cache(maxsize=None)
def unbased_complex(n: int) -> ChainComplex:
    cells = enumerate_necklaces(n)
    basis = {k: [c for c in cells if c.dim == k] for k in range(n - 1)}
    return ChainComplex.from_boundary_map(basis, lambda c: necklace_boundary(c).terms, f"unbased({n})")
