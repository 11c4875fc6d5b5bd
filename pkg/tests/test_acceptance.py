"""One test per acceptance criterion; each prints a single PASS/FAIL line."""
import subprocess
import sys

from cactikit.bar import bar_identification, cobar_bar_homology
from cactikit.cacti import based_complex, enumerate_necklaces, unbased_complex
from cactikit.homology import homology, verify_complex
from cactikit.moduli import dual_complex, primal_complex
from cactikit.operads import check_operad_axioms
from cactikit.trees import enumerate_nested_trees
from cactikit.verification import (arnold_poincare, check_hycom, check_jacobi, check_koszul, check_transfer,
                                   moduli_betti_oracle)

ARITIES = (2, 3, 4, 5)


def sizes(cx):
    return tuple(len(v) for _, v in sorted(cx.basis.items()))


def test_criterion_01_complexes_square_to_zero(acceptance):
    bad = []
    for n in ARITIES:
        for name, cx in (("based", based_complex(n)), ("unbased", unbased_complex(n)),
                         ("primal", primal_complex(n)), ("dual", dual_complex(n))):
            if not verify_complex(cx)[0]:
                bad.append(f"{name}({n})")
    assert acceptance(1, "d^2 = 0 for based, unbased, primal, dual, n = 2..5", not bad, ", ".join(bad))


def test_criterion_02_configuration_space_homology(acceptance):
    bad = []
    for n in ARITIES:
        for cx, poly in ((based_complex(n), arnold_poincare(n)), (unbased_complex(n), arnold_poincare(n, reduced=True))):
            h = homology(cx)
            if h.betti_list() != list(poly.coefficients) or not h.is_torsion_free():
                bad.append(f"{cx.name}: {h.betti_list()}")
    spot = (homology(based_complex(4)).betti_list() == [1, 6, 11, 6]
            and homology(unbased_complex(4)).betti_list() == [1, 5, 6]
            and homology(unbased_complex(5)).betti_list() == [1, 9, 26, 24])
    assert acceptance(2, "Betti of based/unbased cacti equal the product formulas", not bad and spot, ", ".join(bad))


def test_criterion_03_moduli_homology(acceptance):
    want = {3: [1, 0, 1], 4: [1, 0, 5, 0, 1], 5: [1, 0, 16, 0, 16, 0, 1]}
    bad = []
    for n, b in want.items():
        h = homology(dual_complex(n))
        oracle = []
        for i, c in enumerate(moduli_betti_oracle(n).coefficients):
            oracle += ([0] if i else []) + [c]
        got = h.betti_list()
        if got != b or got != oracle or got != got[::-1] or not h.is_torsion_free():
            bad.append(f"n={n}: {got}")
    assert acceptance(3, "dual-complex Betti match the point-count oracle, no torsion, symmetric", not bad,
                      ", ".join(bad))


def test_criterion_04_cell_counts(acceptance):
    got = (sizes(primal_complex(3)), sizes(dual_complex(3)), sizes(unbased_complex(3)), len(enumerate_nested_trees(3)))
    ok = got == ((2, 3, 3), (3, 3, 2), (2, 3), 4)
    assert acceptance(4, "cell counts (2,3,3), (3,3,2), (2,3) and 4 nested trees", ok, str(got))


def test_criterion_05_transfer_and_operad_axioms(acceptance):
    bad = [c.check for c in (check_transfer(n) for n in ARITIES) if not c.passed]
    report = check_operad_axioms(arity_budget=5)
    failed = [name for name, e in report.items() if e["failures"]]
    checked = sum(e["checked"] for e in report.values())
    ok = not bad and not failed and all(e["checked"] for e in report.values())
    assert acceptance(5, "transfer chain map, factorization and operad axioms, total arity <= 5", ok,
                      f"{checked} instances" + (f"; failed {bad + failed}" if not ok else ""))


def test_criterion_06_bar_identification(acceptance):
    reports = [bar_identification(n) for n in (2, 3, 4)]
    ok = all(r["basis"] and r["differential"] and r["offset"] == 2 for r in reports)
    assert acceptance(6, "bar construction of grav equals the primal complex shifted by 2, n = 2..4", ok,
                      "; ".join(str(r["mismatch"]) for r in reports if r["mismatch"]))


def test_criterion_07_relations(acceptance):
    certs = [check_jacobi(3, 0), check_jacobi(3, 1), check_jacobi(4, 0), check_hycom(0), check_hycom(1)]
    ok = all(c.passed for c in certs) and certs[0].residual.is_zero()
    ok = ok and all(c.witness is not None for c in certs[1:])
    assert acceptance(7, "Jacobi (3,0) vanishes; (3,1), (4,0), Hycom n=0,1 have integral witnesses", ok,
                      ", ".join(c.check for c in certs if not c.passed))


def test_criterion_08_koszul_duality(acceptance):
    certs = [check_koszul(n) for n in (2, 3, 4)]
    ok = all(c.passed for c in certs)
    assert acceptance(8, "dual of the bar cooperad matches the dual cells with grafting, n = 2..4", ok,
                      "; ".join(d for c in certs for d in c.details))


def test_criterion_09_cobar_bar(acceptance):
    reports = [cobar_bar_homology(n) for n in (2, 3)]
    ok = all(r["match"] for r in reports)
    got = [{k: b for k, b in r["cobar_bar"].betti.items() if b} for r in reports]
    assert acceptance(9, "cobar-bar homology matches grav, n = 2, 3", ok, str(got))


def test_criterion_10_determinism(acceptance):
    cmd = [sys.executable, "-m", "cactikit", "verify", "--check", "all", "--max-arity", "4"]
    runs = [subprocess.run(cmd, capture_output=True) for _ in range(2)]
    ok = runs[0].returncode == 0 and runs[0].stdout == runs[1].stdout and runs[0].stdout
    assert acceptance(10, "verify --check all --max-arity 4 is byte-identical across runs", bool(ok),
                      f"{len(runs[0].stdout.splitlines())} certificates")


if __name__ == "__main__":
    import pytest

    sys.exit(pytest.main([__file__, "-q"]))
