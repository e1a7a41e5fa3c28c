"""Exact rational identification of high-precision values.

Given a value known to lie in [v - r, v + r], the candidate is the
smallest-denominator rational in the interval (found by a continued-
fraction / Stern-Brocot walk on exact endpoints).  The verdict is
"identified" only when that candidate is the *only* rational in the
interval with denominator below the configured bound: its immediate
Farey neighbours at the bound denominator are computed exactly, and if
either falls inside the interval the result is reported as "ambiguous"
rather than forcing an answer.  All interval arithmetic is exact
(binary floats convert to Fractions losslessly), so the verdict is a
theorem about the interval, not a heuristic.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .primes import is_prime, primes_upto

DEFAULT_DEN_BOUND = 10**6


def _to_fraction(x):
    if isinstance(x, (Fraction, int)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    mpf_tuple = getattr(x, "_mpf_", None)
    if mpf_tuple is not None:
        sign, man, exp, _ = mpf_tuple
        man = int(man)  # gmpy-backed mpmath stores mpz mantissas
        if man == 0 and x != 0:
            raise DomainError("cannot convert special value %r" % x)
        man = -man if sign else man
        return Fraction(man) * Fraction(2) ** int(exp)
    raise DomainError("cannot convert %r to an exact fraction" % (x,))


def _simplest_in_interval(lo, hi):
    """Smallest-denominator fraction in [lo, hi] (exact; lo <= hi)."""
    if lo > hi:
        raise DomainError("empty interval")
    if lo <= 0 <= hi:
        return Fraction(0)
    if hi < 0:
        return -_simplest_in_interval(-hi, -lo)
    # 0 < lo <= hi
    fl = lo.numerator // lo.denominator
    if lo == fl:
        return Fraction(fl)
    if fl + 1 <= hi:
        return Fraction(fl + 1)
    inner = _simplest_in_interval(1 / (hi - fl), 1 / (lo - fl))
    return fl + 1 / inner


def _farey_neighbours(frac, bound):
    """The fractions adjacent to `frac` among all rationals with
    denominator <= bound (frac itself must satisfy that)."""
    p, q = frac.numerator, frac.denominator
    if q > bound:
        raise DomainError("fraction exceeds denominator bound")
    if q == 1:
        return Fraction(p * bound - 1, bound), Fraction(p * bound + 1, bound)
    # left neighbour a/b with p b - a q = 1, right c/d with c q - p d = 1
    b0 = pow(p, -1, q)
    a0 = (p * b0 - 1) // q
    k = (bound - b0) // q
    left = Fraction(a0 + k * p, b0 + k * q)
    d0 = q - b0
    c0 = (p * d0 + 1) // q
    k = (bound - d0) // q
    right = Fraction(c0 + k * p, d0 + k * q)
    return left, right


@dataclass(frozen=True)
class RationalIdentification:
    value: Fraction
    radius: Fraction
    verdict: str  # "identified" | "ambiguous" | "none"
    numerator: object  # int, or None when verdict == "none"
    denominator: object  # positive int, or None
    numerator_factors: tuple
    denominator_factors: tuple

    @property
    def fraction(self):
        if self.numerator is None:
            raise DomainError("no candidate rational")
        return Fraction(self.numerator, self.denominator)


def identify_rational(value, radius, den_bound=DEFAULT_DEN_BOUND):
    """Identify value +- radius as a rational with denominator <= den_bound."""
    v = _to_fraction(value)
    r = _to_fraction(radius)
    if r < 0:
        raise DomainError("radius must be >= 0")
    if den_bound < 1:
        raise DomainError("denominator bound must be >= 1")
    lo, hi = v - r, v + r
    cand = _simplest_in_interval(lo, hi)
    if cand.denominator > den_bound:
        return RationalIdentification(
            value=v, radius=r, verdict="none",
            numerator=None, denominator=None,
            numerator_factors=(), denominator_factors=(),
        )
    left, right = _farey_neighbours(cand, den_bound)
    unique = left < lo and hi < right
    return RationalIdentification(
        value=v, radius=r,
        verdict="identified" if unique else "ambiguous",
        numerator=cand.numerator, denominator=cand.denominator,
        numerator_factors=factorize(abs(cand.numerator)) if cand.numerator else (),
        denominator_factors=factorize(cand.denominator),
    )


# ---------------------------------------------------------------------------
# factorization

_TRIAL_LIMIT = 10**6


def _brent_rho(n, c):
    """One Brent-cycle attempt at a nontrivial factor of odd composite n."""
    y, r, q = 2, 1, 1
    g, ys, x = 1, 0, 0
    m = 128
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        r *= 2
    if g == n:
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
    return g if g != n else None


def _factor_large(n, out):
    """Factor n (no prime divisors below the trial limit) into `out`."""
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    g = None
    for c in range(1, 64):  # deterministic seed sequence
        g = _brent_rho(n, c)
        if g is not None and 1 < g < n:
            break
        g = None
    if g is None:
        raise DomainError("failed to factor %d" % n)
    _factor_large(g, out)
    _factor_large(n // g, out)


def factorize(n):
    """Prime factorization of n >= 1 as a sorted tuple of (p, e)."""
    if n < 1:
        raise DomainError("can only factor positive integers")
    n = int(n)
    out = {}
    for p in primes_upto(min(_TRIAL_LIMIT, math.isqrt(n) + 1)):
        if p * p > n:
            break
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    if n > 1:
        if n < _TRIAL_LIMIT**2 or is_prime(n):
            out[n] = out.get(n, 0) + 1
        else:
            _factor_large(n, out)
    return tuple(sorted(out.items()))


def factor_string(n):
    """Render n like its reference tables: sign, then 'p^e' terms joined
    by '.', exponent omitted when 1.  factor_string(-6816) = '-2^5.3.71'."""
    n = int(n)
    if n == 0:
        return "0"
    parts = []
    for p, e in factorize(abs(n)):
        parts.append("%d^%d" % (p, e) if e > 1 else str(p))
    return ("-" if n < 0 else "") + (".".join(parts) or "1")


def check_prediction(ident, numerator_primes=(), denominator_primes=()):
    """Check which predicted primes actually divide the identified
    numerator / denominator.  Returns a list of per-prime records."""
    if ident.verdict != "identified":
        raise DomainError("prediction check requires an identified rational")
    report = []
    num = abs(ident.numerator)
    den = ident.denominator
    for p in numerator_primes:
        report.append({"prime": p, "side": "numerator", "hit": num % p == 0})
    for p in denominator_primes:
        report.append({"prime": p, "side": "denominator", "hit": den % p == 0})
    return report
