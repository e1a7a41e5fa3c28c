"""Exact-integer Euler-factor algebra.

Local factors are polynomials det(1 - Frob_p X) = sum c_i X^i with
integer coefficients, c_0 = 1, and inverse roots of absolute value
p^(w/2) where w is the motivic weight.  The constructors cover the
inputs appearing in this package:

* degree 2: 1 - a_p X + p^(l-1) X^2 for an elliptic eigenform;
* degree 3: the symmetric square of the above;
* degree 4: the spinor quartic of a genus-2 eigenform of type (j, k),
  1 - lam(p) X + (lam(p)^2 - lam(p^2) - p^(j+2k-4)) X^2
    - lam(p) p^(j+2k-3) X^3 + p^(2j+4k-6) X^4,
  and the same quartic for the non-cuspidal (Klingen-type) lift of an
  elliptic form, whose roots are {a, b, p^(k-2) a, p^(k-2) b};
* arbitrary tensor products, computed exactly through power sums: if
  s_k(A), s_k(B) are the k-th power sums of the roots of A and B, then
  the roots of the tensor factor are all products, so its power sums
  are s_k(A) s_k(B); Newton's identities convert coefficients to power
  sums and back without ever computing a root numerically.

Dirichlet expansion inverts the local factors: sum_e b_{p^e} X^e =
1/C_p(X) termwise, then multiplicativity fills in composite indices.
Coefficients are kept in the motivic (integer) normalisation
throughout; division by n^(w/2) happens only at evaluation time.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConsistencyError, DomainError
from .primes import is_prime, smallest_prime_factor_table

# ---------------------------------------------------------------------------
# local factors


@dataclass(frozen=True)
class LocalFactor:
    """det(1 - Frob_p X) with exact integer coefficients c_0..c_d.

    Construction validates the structure that every factor built here
    must have: c_0 = 1, |c_d| = p^(dw/2) (as an exact integer identity
    c_d^2 = p^(dw)), and the self-dual symmetry
    c_{d-i} p^(wi) = c_d c_i, which says the root multiset is stable
    under a -> p^w / a.
    """

    p: int
    weight: int
    coefficients: tuple

    def __post_init__(self):
        c = tuple(int(x) for x in self.coefficients)
        object.__setattr__(self, "coefficients", c)
        d = self.degree
        if d < 1:
            raise DomainError("local factor needs degree >= 1")
        if not is_prime(self.p):
            raise DomainError("%d is not prime" % self.p)
        if c[0] != 1:
            raise ConsistencyError("c_0 must be 1, got %d" % c[0])
        p, w = self.p, self.weight
        if c[d] ** 2 != p ** (d * w):
            raise ConsistencyError(
                "constant-vs-top mismatch: c_d^2 != p^(dw) at p=%d" % p
            )
        for i in range(d + 1):
            if c[d - i] * p ** (w * i) != c[d] * c[i]:
                raise ConsistencyError(
                    "self-dual symmetry fails at p=%d, i=%d" % (p, i)
                )

    @property
    def degree(self):
        return len(self.coefficients) - 1

    def power_sums(self, count):
        """s_1..s_count of the inverse roots, by Newton's identities."""
        c = self.coefficients
        d = self.degree
        s = []
        for k in range(1, count + 1):
            acc = -k * c[k] if k <= d else 0
            for i in range(1, min(k, d + 1)):
                if k - i >= 1:
                    acc -= c[i] * s[k - i - 1]
            s.append(acc)
        return s


def _from_power_sums(p, weight, s, degree):
    """Invert Newton's identities: power sums -> monic-reciprocal coefficients."""
    c = [Fraction(1)]
    for k in range(1, degree + 1):
        acc = Fraction(s[k - 1])
        for i in range(1, k):
            acc += c[i] * s[k - i - 1]
        c.append(-acc / k)
    ints = []
    for x in c:
        if x.denominator != 1:
            raise ConsistencyError(
                "tensor coefficient is not an integer (%s); bad input factor?" % x
            )
        ints.append(int(x))
    return LocalFactor(p=p, weight=weight, coefficients=tuple(ints))


def hecke_local_factor(a_p, p, ell):
    """1 - a_p X + p^(ell-1) X^2 of an eigenform of weight ell."""
    if ell < 12 or ell % 2:
        raise DomainError("weight must be even and >= 12")
    return LocalFactor(p=p, weight=ell - 1, coefficients=(1, -a_p, p ** (ell - 1)))


def sym2_local_factor(a_p, p, ell):
    """Symmetric square: roots a1^2, a1 a2, a2^2 (degree 3, weight 2 ell - 2)."""
    if ell < 12 or ell % 2:
        raise DomainError("weight must be even and >= 12")
    e1 = a_p**2 - p ** (ell - 1)
    e2 = p ** (ell - 1) * e1
    e3 = p ** (3 * (ell - 1))
    return LocalFactor(p=p, weight=2 * ell - 2, coefficients=(1, -e1, e2, -e3))


def spinor_local_factor(lam_p, lam_p2, p, j, k):
    """Spinor quartic of a genus-2 eigenform of type (j, k)."""
    if j < 0 or j % 2:
        raise DomainError("j must be a nonnegative even integer")
    if k < 3:
        raise DomainError("k must be an integer >= 3")
    w = j + 2 * k - 3
    c2 = lam_p**2 - lam_p2 - p ** (j + 2 * k - 4)
    return LocalFactor(
        p=p,
        weight=w,
        coefficients=(1, -lam_p, c2, -lam_p * p**w, p ** (2 * w)),
    )


def tate_twist(factor, m):
    """Replace each root a by p^m a, i.e. shift s -> s - m: c_i -> c_i p^(mi)."""
    p = factor.p
    coeffs = tuple(
        c * p ** (m * i) for i, c in enumerate(factor.coefficients)
    )
    return LocalFactor(p=p, weight=factor.weight + 2 * m, coefficients=coeffs)


def zeta_local_factor(p, m=0):
    """Local factor 1 - p^m X of the shifted zeta function zeta(s - m)."""
    return LocalFactor(p=p, weight=2 * m, coefficients=(1, -(p**m)))


def poly_mul(a, b):
    """Plain convolution of small coefficient tuples (exact)."""
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return tuple(out)


def klingen_spinor_factor(a_p, p, ell, k):
    """Spinor quartic of the Klingen-type (non-cuspidal) lift of an
    elliptic eigenform of weight ell = j + k: roots {a, b, p^(k-2) a,
    p^(k-2) b}, i.e. hecke(a_p) times its Tate twist by k - 2."""
    j = ell - k
    if j < 0 or j % 2:
        raise DomainError("need ell = j + k with j = ell - k even and >= 0")
    base = hecke_local_factor(a_p, p, ell)
    twisted = tate_twist(base, k - 2)
    coeffs = poly_mul(base.coefficients, twisted.coefficients)
    return LocalFactor(p=p, weight=j + 2 * k - 3, coefficients=coeffs)


def tensor_local_factor(a, b):
    """Tensor product: the factor whose roots are all products of a
    root of `a` with a root of `b` (degree d_a d_b, weight w_a + w_b).

    Exact route: coefficients -> power sums (Newton), multiply power
    sums pointwise, power sums -> coefficients (Newton over rationals),
    asserting integrality.
    """
    if a.p != b.p:
        raise DomainError("tensor factors must share the prime (%d vs %d)" % (a.p, b.p))
    degree = a.degree * b.degree
    sa = a.power_sums(degree)
    sb = b.power_sums(degree)
    st = [x * y for x, y in zip(sa, sb)]
    return _from_power_sums(a.p, a.weight + b.weight, st, degree)


# ---------------------------------------------------------------------------
# Dirichlet expansion


@dataclass(frozen=True)
class DirichletSeries:
    """b_1..b_N of prod_p C_p(p^-s)^-1 in motivic normalisation.

    `known` is the set of indices whose coefficient is determined by
    the supplied local factors; values[n-1] is meaningful only for
    n in known.  A prime with only b_p available (no full local factor)
    contributes b_p at exponent 1 and leaves p^2, p^3, ... unknown.
    """

    degree: int
    weight: int
    values: tuple
    known: frozenset

    @property
    def n_max(self):
        return len(self.values)

    def b(self, n):
        if n not in self.known:
            raise DomainError("coefficient b_%d is not determined" % n)
        return self.values[n - 1]


def _invert_local(coeffs, e_max):
    """First e_max+1 coefficients of 1 / sum c_i X^i (integer recursion)."""
    d = len(coeffs) - 1
    out = [1]
    for e in range(1, e_max + 1):
        acc = 0
        for i in range(1, min(e, d) + 1):
            acc -= coeffs[i] * out[e - i]
        out.append(acc)
    return out


def dirichlet_expand(factors, n_max, degree, weight, partial=None):
    """Expand local factors into Dirichlet coefficients b_1..b_{n_max}.

    factors: map prime -> LocalFactor (all of the given degree/weight).
    partial: optional map prime -> b_p for primes where only the first
    coefficient is known (no lambda(p^2) data, say).
    """
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    partial = partial or {}
    for p, factor in factors.items():
        if factor.p != p:
            raise DomainError("factor at key %d is for prime %d" % (p, factor.p))
        if factor.degree != degree or factor.weight != weight:
            raise DomainError(
                "factor at p=%d has degree/weight (%d, %d), expected (%d, %d)"
                % (p, factor.degree, factor.weight, degree, weight)
            )
    values = [0] * n_max
    known = bytearray(n_max + 1)
    values[0] = 1
    known[1] = 1
    # prime powers
    for p, factor in factors.items():
        if p > n_max:
            continue
        e_max = 0
        while p ** (e_max + 1) <= n_max:
            e_max += 1
        powers = _invert_local(factor.coefficients, e_max)
        for e in range(1, e_max + 1):
            values[p**e - 1] = powers[e]
            known[p**e] = 1
    for p, b_p in partial.items():
        if p in factors:
            raise DomainError("prime %d has both a full factor and partial data" % p)
        if p <= n_max:
            values[p - 1] = b_p
            known[p] = 1
    # composites by multiplicativity over the smallest prime factor
    spf = smallest_prime_factor_table(n_max)
    for n in range(2, n_max + 1):
        p = spf[n]
        q = p
        m = n // p
        while m % p == 0:
            q *= p
            m //= p
        if m == 1:
            continue  # prime power, already handled
        if known[q] and known[m]:
            values[n - 1] = values[q - 1] * values[m - 1]
            known[n] = 1
    return DirichletSeries(
        degree=degree,
        weight=weight,
        values=tuple(values),
        known=frozenset(i for i in range(1, n_max + 1) if known[i]),
    )


def coefficient_bound(n, degree, weight, normalization="analytic"):
    """Sharp multiplicative bound on |b_n| from |roots| = p^(w/2).

    In the analytic normalisation |b_n| <= d_degree(n), the number of
    ordered factorisations of n into `degree` parts (at p^e this is the
    multiset count C(e + d - 1, d - 1)); the motivic normalisation
    scales by n^(w/2).
    """
    if n < 1:
        raise DomainError("index must be >= 1")
    if normalization not in ("analytic", "motivic"):
        raise DomainError("normalization must be 'analytic' or 'motivic'")
    bound = 1
    m = n
    d = 2
    while d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            bound *= math.comb(e + degree - 1, degree - 1)
        d += 1 if d == 2 else 2
    if m > 1:
        bound *= degree
    if normalization == "motivic":
        import mpmath as mp

        return bound * mp.mpf(n) ** (mp.mpf(weight) / 2)
    return bound
