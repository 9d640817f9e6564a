"""Verification workbench for nearest-neighbour correlations of the
supersymmetric XYZ spin chain.

The exact pipeline builds tau-function polynomials by a Toda-type recursion
and assembles the correlation quantity f_n from them.  Independent pipelines
(brute-force diagonalization, a Painleve VI Backlund construction, and a
numerical Q-eigenvalue solver) cross-check the same quantity.
"""

__version__ = "0.1.0"
