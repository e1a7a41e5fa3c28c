"""Numerical critical values of tensor-product L-functions.

The package evaluates L-functions built from modular-form Hecke
eigenvalues (GL2 x GSp2 tensor products of degree 8, and GSp2 x GSp2
products of degree 16) at critical points, using an approximate
functional equation with a family of test functions and a
least-squares combination that suppresses the contribution of unknown
Dirichlet coefficients.  Normalized ratios of critical values are then
identified as exact rationals, and the related integer congruences
between Hecke eigenvalues are verified with exact arithmetic.

Layout:

    heckedata   eigenform coefficient generation, eigenvalue file input,
                embedded congruence tables
    euler       exact local-factor algebra and Dirichlet expansion
    hodge       Hodge points, gamma shifts, sign, critical points
    cgamma      arbitrary-precision complex gamma function
    afe         approximate-functional-equation coefficients and values
    weights     least-squares test-function weights, combined values
    rational    rational identification and integer factorization
    congruence  eigenvalue congruence tables and checks
    cases       the built-in L-function cases
    cli         command-line interface
"""

__version__ = "0.1.0"
