"""Exact integer linear algebra for finite chain complexes.

Matrices are sparse triplets of Python ints. Smith normal form with
transforms runs densely (small matrices only); invariant factors of large
matrices come from the sparse elimination kernel in ``_elim``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, Mapping, NamedTuple, Sequence

from . import _elim

DENSE_LIMIT = 400


class ComplexError(ValueError):
    pass


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self):
        acc: dict[tuple[int, int], int] = {}
        for r, c, v in self.entries:
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise IndexError(f"entry ({r}, {c}) outside {self.rows}x{self.cols}")
            acc[r, c] = acc.get((r, c), 0) + v
        clean = tuple(sorted((r, c, v) for (r, c), v in acc.items() if v))
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "IntMatrix":
        nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        ents = [(i, j, v) for i, row in enumerate(rows) for j, v in enumerate(row) if v]
        return cls(nrows, ncols, tuple(ents))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple((i, i, 1) for i in range(n)))

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for r, c, v in self.entries:
            out[r][c] = v
        return out

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, tuple((c, r, v) for r, c, v in self.entries))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        by_row: dict[int, list[tuple[int, int]]] = {}
        for r, c, v in other.entries:
            by_row.setdefault(r, []).append((c, v))
        acc: dict[tuple[int, int], int] = {}
        for r, k, v in self.entries:
            for c, w in by_row.get(k, ()):
                acc[r, c] = acc.get((r, c), 0) + v * w
        return IntMatrix(self.rows, other.cols, tuple((r, c, v) for (r, c), v in acc.items()))

    def apply(self, vec: Sequence[int]) -> list[int]:
        out = [0] * self.rows
        for r, c, v in self.entries:
            out[r] += v * vec[c]
        return out

    def row_dicts(self) -> list[dict[int, int]]:
        out: list[dict[int, int]] = [{} for _ in range(self.rows)]
        for r, c, v in self.entries:
            out[r][c] = v
        return out


class SmithForm(NamedTuple):
    factors: tuple[int, ...]
    rank: int
    left: IntMatrix | None
    right: IntMatrix | None


def _smith_dense(a: list[list[int]], m: int, n: int):
    """Dense SNF with transforms: returns (diag, U, V) with U a V = diag."""
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        ra, rs = a[dst], a[src]
        for k in range(n):
            if rs[k]:
                ra[k] += q * rs[k]
        ua, us = u[dst], u[src]
        for k in range(m):
            if us[k]:
                ua[k] += q * us[k]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for row in a:
            if row[src]:
                row[dst] += q * row[src]
        for row in v:
            if row[src]:
                row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, pi, pj = best
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                best = None
                for i in range(t, m):
                    for j in ([t] if i > t else range(t, n)):
                        x = a[i][j]
                        if x and (best is None or abs(x) < best[0]):
                            best = (abs(x), i, j)
                _, pi, pj = best
                swap_rows(t, pi)
                swap_cols(t, pj)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if a[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    diag = [a[i][i] for i in range(min(m, n)) if a[i][i]]
    return diag, u, v


def smith_normal_form(mat: IntMatrix, transforms: bool = True) -> SmithForm:
    """Invariant factors, rank and (optionally) unimodular U, V with U·mat·V diagonal."""
    if not transforms:
        factors = _elim.invariant_factors(mat.rows, mat.cols, mat.entries)
        return SmithForm(tuple(factors), len(factors), None, None)
    diag, u, v = _smith_dense(mat.to_dense(), mat.rows, mat.cols)
    return SmithForm(tuple(diag), len(diag), IntMatrix.from_dense(u, mat.rows),
                     IntMatrix.from_dense(v, mat.cols))


def rank_mod2(mat: IntMatrix) -> int:
    rows: dict[int, int] = {}
    for r, c, v in mat.entries:
        if v & 1:
            rows[r] = rows.get(r, 0) ^ (1 << c)
    pivots: dict[int, int] = {}
    rank = 0
    for bits in rows.values():
        while bits:
            top = bits.bit_length() - 1
            if top in pivots:
                bits ^= pivots[top]
            else:
                pivots[top] = bits
                rank += 1
                break
    return rank


@dataclass(frozen=True)
class Chain:
    """Formal integer combination of cells in a fixed degree."""

    degree: int
    terms: Mapping[Hashable, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {k: v for k, v in self.terms.items() if v}
        object.__setattr__(self, "terms", clean)

    @classmethod
    def zero(cls, degree: int) -> "Chain":
        return cls(degree, {})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __getitem__(self, cell) -> int:
        return self.terms.get(cell, 0)

    def _check(self, other: "Chain"):
        if self.terms and other.terms and self.degree != other.degree:
            raise ValueError(f"degree mismatch {self.degree} vs {other.degree}")

    def __add__(self, other: "Chain") -> "Chain":
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return Chain(self.degree if self.terms else other.degree, out)

    def __neg__(self) -> "Chain":
        return Chain(self.degree, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def __mul__(self, k: int) -> "Chain":
        return Chain(self.degree, {c: k * v for c, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Chain):
            return NotImplemented
        if not self.terms and not other.terms:
            return True
        return self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms.items())))

    def mod2(self) -> "Chain":
        return Chain(self.degree, {k: v % 2 for k, v in self.terms.items()})

    def sorted_terms(self, key=None) -> list[tuple[Any, int]]:
        return sorted(self.terms.items(), key=(lambda kv: key(kv[0])) if key else None)


class ChainComplex:
    """Graded basis plus boundary matrices d_k: C_k -> C_{k-1}.

    ``boundary[k]`` has shape (len(basis[k-1]), len(basis[k])).  Missing
    degrees are treated as zero groups.
    """

    def __init__(self, basis: Mapping[int, Sequence[Hashable]],
                 boundary: Mapping[int, IntMatrix], name: str = ""):
        self.name = name
        self.basis = {k: list(v) for k, v in basis.items()}
        self.index = {k: {c: i for i, c in enumerate(v)} for k, v in self.basis.items()}
        self.boundary = dict(boundary)
        for k, mat in self.boundary.items():
            want = (len(self.basis.get(k - 1, ())), len(self.basis.get(k, ())))
            if (mat.rows, mat.cols) != want:
                raise ComplexError(f"boundary in degree {k} has shape {(mat.rows, mat.cols)}, expected {want}")

    @classmethod
    def from_boundary_map(cls, basis: Mapping[int, Sequence[Hashable]], d, name: str = "") -> "ChainComplex":
        """Build from a function cell -> {face: coeff}."""
        mats = {}
        idx = {k: {c: i for i, c in enumerate(v)} for k, v in basis.items()}
        for k, cells in basis.items():
            if k - 1 not in basis:
                continue
            lower = idx[k - 1]
            ents = []
            for j, cell in enumerate(cells):
                for face, v in d(cell).items():
                    if v:
                        if face not in lower:
                            raise ComplexError(f"face {face!r} of {cell!r} not in degree {k - 1} basis")
                        ents.append((lower[face], j, v))
            mats[k] = IntMatrix(len(basis[k - 1]), len(cells), tuple(ents))
        return cls(basis, mats, name)

    @property
    def degrees(self) -> list[int]:
        return sorted(self.basis)

    def rank(self, k: int) -> int:
        return len(self.basis.get(k, ()))

    def d(self, k: int) -> IntMatrix:
        if k in self.boundary:
            return self.boundary[k]
        return IntMatrix(self.rank(k - 1), self.rank(k))

    def vector(self, x: Chain) -> list[int]:
        idx = self.index.get(x.degree, {})
        vec = [0] * self.rank(x.degree)
        for cell, v in x.terms.items():
            if cell not in idx:
                raise KeyError(f"{cell!r} is not a basis cell in degree {x.degree}")
            vec[idx[cell]] += v
        return vec

    def chain(self, degree: int, vec: Sequence[int]) -> Chain:
        cells = self.basis.get(degree, [])
        return Chain(degree, {cells[i]: v for i, v in enumerate(vec) if v})

    def apply_d(self, x: Chain) -> Chain:
        return self.chain(x.degree - 1, self.d(x.degree).apply(self.vector(x)))

    def transpose(self, top: int, name: str = "") -> "ChainComplex":
        """Dual complex regraded by k -> top - k, with transposed boundaries."""
        basis = {top - k: v for k, v in self.basis.items()}
        mats = {top - k + 1: mat.transpose() for k, mat in self.boundary.items()}
        return ChainComplex(basis, mats, name)


@dataclass(frozen=True)
class HomologySummary:
    betti: dict[int, int]
    torsion: dict[int, tuple[int, ...]]
    euler: int

    def betti_list(self) -> list[int]:
        if not self.betti:
            return []
        lo, hi = min(self.betti), max(self.betti)
        return [self.betti.get(k, 0) for k in range(lo, hi + 1)]

    def is_torsion_free(self) -> bool:
        return not any(self.torsion.values())


class Failure(NamedTuple):
    degree: int
    row: int
    col: int
    value: int


def verify_complex(c: ChainComplex) -> tuple[bool, Failure | None]:
    """True iff every d_{k-1} d_k vanishes; otherwise the first offending entry."""
    for k in c.degrees:
        if k - 1 not in c.boundary or k not in c.boundary:
            continue
        prod = c.boundary[k - 1] @ c.boundary[k]
        if prod.entries:
            r, col, v = prod.entries[0]
            return False, Failure(k, r, col, v)
    return True, None


def homology(c: ChainComplex, check: bool = True) -> HomologySummary:
    if check:
        ok, bad = verify_complex(c)
        if not ok:
            raise ComplexError(f"d^2 != 0 from degree {bad.degree}: entry ({bad.row}, {bad.col}) = {bad.value}")
    factors = {k: smith_normal_form(c.d(k), transforms=False).factors for k in c.degrees}
    betti, torsion = {}, {}
    for k in c.degrees:
        rk_out = len(factors.get(k, ()))
        rk_in = len(factors.get(k + 1, ()))
        betti[k] = c.rank(k) - rk_out - rk_in
        torsion[k] = tuple(f for f in factors.get(k + 1, ()) if f > 1)
    euler = sum((-1) ** k * c.rank(k) for k in c.degrees)
    if euler != sum((-1) ** k * b for k, b in betti.items()):
        raise ComplexError("Euler characteristic mismatch between cells and Betti numbers")
    return HomologySummary(betti, torsion, euler)


def betti_mod2(c: ChainComplex) -> dict[int, int]:
    ranks = {k: rank_mod2(c.d(k)) for k in c.degrees}
    return {k: c.rank(k) - ranks[k] - ranks.get(k + 1, 0) for k in c.degrees}


def mod2_prediction(h: HomologySummary) -> dict[int, int]:
    """Universal coefficients: dim H_k(F2) = b_k + #even torsion in k + #even torsion in k-1."""
    out = {}
    for k, b in h.betti.items():
        ev = sum(1 for f in h.torsion.get(k, ()) if f % 2 == 0)
        ev += sum(1 for f in h.torsion.get(k - 1, ()) if f % 2 == 0)
        out[k] = b + ev
    return out


def is_boundary(x: Chain, c: ChainComplex) -> Chain | None:
    """A chain w with d w = x, or None when x represents a nonzero class."""
    dx = c.apply_d(x)
    if dx.terms:
        raise ComplexError(f"not a cycle: d x = {dict(dx.terms)!r}")
    k = x.degree
    if not x.terms:
        return Chain.zero(k + 1)
    mat = c.d(k + 1)
    snf = smith_normal_form(mat)
    ux = snf.left.apply(c.vector(x))
    z = [0] * mat.cols
    for i, v in enumerate(ux):
        if i < snf.rank:
            q, r = divmod(v, snf.factors[i])
            if r:
                return None
            z[i] = q
        elif v:
            return None
    w = c.chain(k + 1, snf.right.apply(z))
    if c.apply_d(w) != x:
        raise ComplexError("boundary witness failed re-multiplication")
    return w


def koszul_sign(parities: Sequence[int], order: Iterable[int]) -> int:
    """Sign of reordering graded symbols: new position p holds old symbol order[p]."""
    order = list(order)
    s = 0
    for a in range(len(order)):
        pa = parities[order[a]] & 1
        if not pa:
            continue
        for b in range(a + 1, len(order)):
            if order[b] < order[a] and parities[order[b]] & 1:
                s ^= 1
    return -1 if s else 1


def perm_sign(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    s = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            s = -s
    return s
