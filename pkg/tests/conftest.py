"""Shared fixtures: synthetic genus-2 eigenvalue tables.

The spinor local factor of a Klingen-Eisenstein lift is known exactly
in terms of the underlying elliptic eigenform, so arithmetically
consistent (lambda_p, lambda_{p^2}) tables for a type (j, k) can be
generated on the fly: lambda_p is minus the X coefficient of the
lift's quartic, and lambda_{p^2} follows from the X^2 coefficient.
Feeding such a table back through `spinor_local_factor` reproduces the
lift's factor bit for bit, which makes the tables ideal end-to-end
test data — real enough to exercise every code path, available
without any external input.

For odd j + k no lift exists; `zero_table` provides a syntactically
valid table (all eigenvalues 0) for exercising plumbing in that case.
"""

import pytest

from lcrit import euler, heckedata
from lcrit.primes import primes_upto


def _klingen_rows(ell, j, k, max_prime):
    form = heckedata.elliptic_coefficients(ell, max_prime)
    rows = []
    for p in primes_upto(max_prime):
        q = euler.klingen_spinor_factor(form.a(p), p, ell, k)
        lam_p = -q.coefficients[1]
        lam_p2 = lam_p * lam_p - q.coefficients[2] - p ** (j + 2 * k - 4)
        rows.append((p, lam_p, lam_p2))
    return rows


@pytest.fixture(scope="session")
def klingen_table_text():
    """Factory: eigenvalue-file text for the weight-ell Klingen lift of
    type (j, k) = (ell - k, k), covering primes up to max_prime."""

    def make(ell, j, k, max_prime):
        assert j + k == ell
        lines = ["# synthetic Klingen-lift eigenvalues", "j %d k %d" % (j, k)]
        for p, lam_p, lam_p2 in _klingen_rows(ell, j, k, max_prime):
            lines.append("%d %d %d" % (p, lam_p, lam_p2))
        return "\n".join(lines) + "\n"

    return make


@pytest.fixture(scope="session")
def zero_table_text():
    """Factory: all-zero eigenvalue table for type (j, k)."""

    def make(j, k, max_prime):
        lines = ["j %d k %d" % (j, k)]
        for p in primes_upto(max_prime):
            lines.append("%d 0 0" % p)
        return "\n".join(lines) + "\n"

    return make
