"""Exact cellular chain models of cacti and of genus-zero moduli spaces."""
from ._elim import BACKEND
from .bar import bar_complex, bar_differential, bar_identification, cobar_bar_complex, cobar_bar_homology
from .cacti import (BasedCactusCell, CellError, NecklaceCell, based_boundary, based_complex,
                    enumerate_based_cells, enumerate_necklaces, necklace_boundary, project,
                    symmetric_action, transfer, unbased_complex)
from .homology import (Chain, ChainComplex, ComplexError, HomologySummary, IntMatrix, homology,
                       is_boundary, smith_normal_form, verify_complex)
from .moduli import (DecoratedTreeCell, ModuliError, compose_dual, dual_boundary, dual_complex,
                     fundamental_class, moduli_cells, primal_boundary, primal_complex)
from .operads import CompositionError, check_operad_axioms, compose_based, compose_grav
from .trees import NestedTree, TreeError, contract_edge, enumerate_nested_trees, graft
from .verification import (Certificate, IntPolynomial, arnold_poincare, check_hycom, check_jacobi,
                           check_koszul, check_poincare_duality, check_transfer, moduli_betti_oracle)

__version__ = "0.1.0"
