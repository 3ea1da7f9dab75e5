"""congtop: exact rank formulas for the top cohomology of the principal
congruence subgroups of SL_n(Z) at a prime level, cross-checked by explicit
finite-field simplicial complexes and integer homology.

Modules:
    gfq        exact linear algebra / enumeration over F_p
    complexes  the simplicial complex families over F_p
    homology   boundary matrices, exact and multi-modular Betti numbers, SNF
    formulas   the rank recursion and the closed-form bounds
    lifting    constructive lifts from SL_n(F_p) to integer matrices
    cli        command-line interface
"""

__version__ = "0.1.0"
