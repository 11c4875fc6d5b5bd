"""Independent oracles and relation certificates."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable

from .bar import bar_complex, bar_identification, partial_decompositions
from .cacti import (NecklaceCell, act_chain as act_grav, based_complex, enumerate_necklaces,
                    transfer, unbased_complex)
from .homology import Chain, ChainComplex, ComplexError, homology, is_boundary, verify_complex
from .moduli import (_cells, act_chain as act_dual, compose_dual, compose_dual_chains, dual_complex,
                     fundamental_class, primal_complex)
from .operads import check_operad_axioms, compose_grav_chains, grav_transfer_identity
from .trees import enumerate_nested_trees, valence, vertex_order


@dataclass(frozen=True)
class IntPolynomial:
    coefficients: tuple[int, ...]

    def __post_init__(self):
        c = list(self.coefficients)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coefficients", tuple(c))

    @classmethod
    def constant(cls, a: int) -> "IntPolynomial":
        return cls((a,))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b = self.coefficients, other.coefficients
        m = max(len(a), len(b))
        return IntPolynomial(tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(m)))

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b = self.coefficients, other.coefficients
        if not a or not b:
            return IntPolynomial(())
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] += x * y
        return IntPolynomial(tuple(out))

    def __call__(self, x: int) -> int:
        return sum(c * x ** i for i, c in enumerate(self.coefficients))

    def __repr__(self):
        return f"IntPolynomial({list(self.coefficients)})"


ONE = IntPolynomial((1,))


def _prod(polys: Iterable[IntPolynomial]) -> IntPolynomial:
    out = ONE
    for p in polys:
        out = out * p
    return out


def arnold_poincare(n: int, reduced: bool = False) -> IntPolynomial:
    if n < 2 and reduced:
        raise ValueError("the reduced polynomial needs n >= 2")
    start = 2 if reduced else 1
    return _prod(IntPolynomial((1, k)) for k in range(start, n))


def moduli_betti_oracle(n: int) -> IntPolynomial:
    """Sum over nested trees of the stratum point counts, as a polynomial in q."""
    total = IntPolynomial(())
    for t in enumerate_nested_trees(n):
        total = total + _prod(IntPolynomial((-k, 1)) for v in vertex_order(t) for k in range(2, valence(t, v)))
    return total


def _interleave(p: IntPolynomial) -> list[int]:
    out = []
    for i, c in enumerate(p.coefficients):
        if i:
            out.append(0)
        out.append(c)
    return out


# -- certificates ---------------------------------------------------------------

@dataclass(frozen=True)
class Certificate:
    check: str
    status: str
    witness: Chain | None = None
    residual: Chain | None = None
    details: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        return {"check": self.check, "status": self.status,
                "witness": chain_to_json(self.witness), "residual": chain_to_json(self.residual)}


def _cert(name: str, ok: bool, witness=None, residual=None, details: Iterable[str] = ()) -> Certificate:
    return Certificate(name, "pass" if ok else "fail", witness, residual, tuple(details))


def cell_to_json(cell):
    if hasattr(cell, "to_json"):
        return cell.to_json()
    return list(cell.word)


def chain_to_json(x: Chain | None):
    if x is None:
        return None
    terms = sorted(x.terms.items(), key=lambda kv: kv[0].sort_key() if hasattr(kv[0], "sort_key") else kv[0])
    return {"degree": x.degree, "terms": [[cell_to_json(c), v] for c, v in terms]}


# -- checks -----------------------------------------------------------------------

def _complexes(n: int) -> dict[str, ChainComplex]:
    return {"based": based_complex(n), "unbased": unbased_complex(n),
            "moduli": primal_complex(n, max_arity=max(n, 5)), "dual": dual_complex(n, max_arity=max(n, 5))}


def check_d2(n: int) -> Certificate:
    notes, ok = [], True
    for name, c in _complexes(n).items():
        good, bad = verify_complex(c)
        if not good:
            ok = False
            notes.append(f"{name}: d^2 entry {bad}")
    return _cert(f"d2(n={n})", ok, details=notes)


def check_oracles(n: int) -> Certificate:
    notes, ok = [], True
    cx = _complexes(n)
    hs = {k: homology(c) for k, c in cx.items()}
    want = {"based": list(arnold_poincare(n).coefficients),
            "unbased": list(arnold_poincare(n, reduced=True).coefficients),
            "moduli": _interleave(moduli_betti_oracle(n)),
            "dual": _interleave(moduli_betti_oracle(n))}
    for name, h in hs.items():
        got = h.betti_list()
        if got != want[name] or not h.is_torsion_free():
            ok = False
            notes.append(f"{name}: betti {got}, expected {want[name]}, torsion {h.torsion}")
    chis = {"primal cells": hs["moduli"].euler, "dual cells": hs["dual"].euler,
            "betti": sum((-1) ** k * b for k, b in hs["dual"].betti.items()),
            "oracle": moduli_betti_oracle(n)(1)}
    if len(set(chis.values())) != 1:
        ok = False
        notes.append(f"euler characteristics disagree: {chis}")
    return _cert(f"oracle(n={n})", ok, details=notes)


def check_transfer(n: int) -> Certificate:
    """d tau = -tau d on every necklace, tau injective, and composition factorization."""
    notes, ok = [], True
    based, unbased = based_complex(n), unbased_complex(n)
    for k, cells in unbased.basis.items():
        for c in cells:
            lhs = based.apply_d(transfer(c))
            rhs = transfer_of(unbased.apply_d(Chain(k, {c: 1})), k)
            if lhs + rhs:
                ok = False
                notes.append(f"chain map fails on {c!r}")
        if cells:
            rows = [based.vector(transfer(c)) for c in cells]
            if _rank(rows) != len(cells):
                ok = False
                notes.append(f"transfer not injective in degree {k}")
    for a_n in range(2, n + 1):
        for b_n in range(2, n - a_n + 2):
            for a, b in product(enumerate_necklaces(a_n), enumerate_necklaces(b_n)):
                for i in range(1, a_n + 1):
                    if not grav_transfer_identity(a, i, b):
                        ok = False
                        notes.append(f"factorization fails for {a!r} o_{i} {b!r}")
    return _cert(f"transfer(n={n})", ok, details=notes)


def transfer_of(x: Chain, k: int) -> Chain:
    out = Chain.zero(k)
    for c, v in x.terms.items():
        out = out + v * transfer(c)
    return out


def _rank(rows: list[list[int]]) -> int:
    from .homology import IntMatrix, smith_normal_form

    mat = IntMatrix.from_dense(rows)
    return smith_normal_form(mat, transforms=False).rank


def bracket(k: int) -> Chain:
    """The least 0-dimensional necklace of arity k, as a chain of grav degree one."""
    return Chain(0, {NecklaceCell(tuple(range(1, k + 1)), k): 1})


def jacobi_sum(k: int, l: int) -> Chain:
    """Left side minus right side of the generalized Jacobi relation, all variables even."""
    n_total = k + l
    total = Chain.zero(1)
    for i, j in combinations(range(1, k + 1), 2):
        rest = [x for x in range(1, k + 1) if x not in (i, j)]
        sigma = (i, j, *rest, *range(k + 1, n_total + 1))
        total = total + act_grav(sigma, compose_grav_chains(bracket(k - 1 + l), 1, bracket(2)))
    if l:
        total = total - compose_grav_chains(bracket(1 + l), 1, bracket(k))
    return total


def check_jacobi(k: int, l: int) -> Certificate:
    name = f"jacobi(k={k},l={l})"
    if k < 2 or l < 0:
        raise ValueError("need k >= 2 and l >= 0")
    if k == 2 and l == 0:
        return _cert(name, True, residual=Chain.zero(1), details=["single bracket, nothing to relate"])
    residual = jacobi_sum(k, l)
    if k == 3 and l == 0:
        return _cert(name, residual.is_zero(), residual=residual)
    c = unbased_complex(k + l)
    try:
        witness = is_boundary(residual, c)
    except ComplexError as err:
        return _cert(name, False, residual=residual, details=[str(err)])
    ok = witness is not None and c.apply_d(witness) == residual
    return _cert(name, ok, witness=witness, residual=residual)


def hycom_sum(case: int) -> Chain:
    """Difference of the two sides of the associativity relation among fundamental classes."""
    m2, m3 = fundamental_class(2), fundamental_class(3)
    if case == 0:
        return compose_dual_chains(m2, 1, m2) - compose_dual_chains(m2, 2, m2)
    if case == 1:
        lhs = compose_dual_chains(m3, 1, m2) + act_dual((1, 2, 4, 3), compose_dual_chains(m2, 1, m3))
        rhs = compose_dual_chains(m3, 2, m2) + compose_dual_chains(m2, 2, m3)
        return lhs - rhs
    raise ValueError("hycom case must be 0 or 1")


def check_hycom(case: int) -> Certificate:
    name = f"hycom(n={case})"
    residual = hycom_sum(case)
    c = dual_complex(case + 3)
    try:
        witness = is_boundary(residual, c)
    except ComplexError as err:
        return _cert(name, False, residual=residual, details=[str(err)])
    ok = witness is not None and c.apply_d(witness) == residual
    return _cert(name, ok, witness=witness, residual=residual)


def check_koszul(n: int) -> Certificate:
    """Dual of the bar cooperad of grav against the dual cells, up to the s^(2-2n) shift."""
    notes, ok = [], True
    bar = bar_complex(n)
    dual = dual_complex(n, max_arity=max(n, 5))
    # (i) graded bijection: bar degree d <-> dual degree 2n - 2 - d
    for d, cells in bar.basis.items():
        if sorted(cells) != sorted(dual.basis.get(2 * n - 2 - d, [])):
            ok = False
            notes.append(f"basis mismatch in bar degree {d}")
    # (ii) the dual of the bar differential is the dual-cell differential
    for k in dual.basis:
        if k - 1 not in dual.basis:
            continue
        d = 2 * n - 2 - k
        want = {(dual.basis[k - 1][r], dual.basis[k][c]): v for r, c, v in dual.d(k).entries}
        got = {}
        if d + 1 in bar.basis:
            got = {(bar.basis[d + 1][c], bar.basis[d][r]): v for r, c, v in bar.d(d + 1).entries}
        if got != want:
            ok = False
            notes.append(f"differential mismatch in dual degree {k}")
    # (iii) decomposition constants against grafting, every pair of total arity n
    seen = set()
    for z in _cells(n):
        for i, x, y, sign in partial_decompositions(z):
            seen.add((x, i, y))
            if compose_dual(x, i, y) != Chain(z.dual_degree, {z: sign}):
                ok = False
                notes.append(f"structure constant mismatch: {x!r} o_{i} {y!r}")
    pairs = sum(len(_cells(a)) * len(_cells(n + 1 - a)) * a for a in range(2, n))
    if len(seen) != pairs:
        ok = False
        notes.append(f"{len(seen)} decompositions for {pairs} grafting pairs")
    return _cert(f"koszul(n={n})", ok, details=notes)


def check_bar(n: int) -> Certificate:
    r = bar_identification(n)
    ok = r["basis"] and r["differential"]
    return _cert(f"bar(n={n})", ok, details=[r["mismatch"]] if r["mismatch"] else [])


def check_poincare_duality(n: int) -> Certificate:
    h = homology(dual_complex(n, max_arity=max(n, 5)))
    top = 2 * (n - 2)
    b = [h.betti.get(k, 0) for k in range(top + 1)]
    notes = []
    if b != b[::-1]:
        notes.append(f"betti {b} not symmetric")
    if not h.is_torsion_free():
        notes.append(f"torsion {h.torsion}")
    if any(b[1::2]):
        notes.append(f"odd betti numbers {b[1::2]}")
    if b != _interleave(moduli_betti_oracle(n)):
        notes.append(f"betti {b} differ from the oracle")
    return _cert(f"duality(n={n})", not notes, details=notes)


def check_axioms(budget: int) -> Certificate:
    report = check_operad_axioms(budget)
    notes = [f"{name}: {f}" for name, e in sorted(report.items()) for f in e["failures"]]
    return _cert(f"axioms(budget={budget})", not notes, details=notes)


CHECKS = ("d2", "transfer", "axioms", "jacobi", "hycom", "koszul", "duality", "oracle", "bar")


def run_checks(check: str, arity: int | None = None, max_arity: int = 4, k: int | None = None,
               l: int | None = None) -> list[Certificate]:
    """Certificates for one named check (or all), each a pure independent computation."""
    tasks = plan(check, arity, max_arity, k, l)
    return sorted((fn(*args) for fn, args in tasks), key=lambda c: c.check)


def plan(check: str, arity: int | None, max_arity: int, k: int | None = None, l: int | None = None):
    if check not in CHECKS + ("all",):
        raise ValueError(f"unknown check {check!r}")
    ns = [arity] if arity is not None else list(range(2, max_arity + 1))
    tasks = []
    if check in ("d2", "all"):
        tasks += [(check_d2, (n,)) for n in ns]
    if check in ("oracle", "all"):
        tasks += [(check_oracles, (n,)) for n in ns]
    if check in ("transfer", "all"):
        tasks += [(check_transfer, (n,)) for n in ns]
    if check in ("duality", "all"):
        tasks += [(check_poincare_duality, (n,)) for n in ns]
    if check in ("koszul", "all"):
        tasks += [(check_koszul, (n,)) for n in ns if n <= 4]
    if check in ("bar", "all"):
        tasks += [(check_bar, (n,)) for n in ns if n <= 4]
    if check in ("axioms", "all"):
        tasks.append((check_axioms, (arity or max_arity,)))
    if check == "jacobi" and k is not None:
        tasks.append((check_jacobi, (k, l or 0)))
    elif check in ("jacobi", "all"):
        tasks += [(check_jacobi, kl) for kl in ((3, 0), (3, 1), (4, 0)) if sum(kl) <= max(max_arity, 3)]
    if check in ("hycom", "all"):
        tasks += [(check_hycom, (c,)) for c in (0, 1) if c + 3 <= max(max_arity, 3)]
    return tasks
