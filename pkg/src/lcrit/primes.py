"""Small deterministic prime utilities shared across the package.

Everything here is exact and deterministic: a cached sieve for small
ranges, and Miller-Rabin with the fixed base set {2, 3, ..., 37} for
larger inputs, which is a proven primality test for n < 3.317e24
(Sorenson-Webster).  All integers handled by this package are well
inside that range.
"""

from .errors import DomainError

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_LIMIT = 3317044064679887385961981  # deterministic below this

_sieve_limit = 0
_sieve = None  # bytearray, _sieve[n] == 1 iff n prime
_prime_list = []


def _ensure_sieve(limit):
    global _sieve_limit, _sieve, _prime_list
    if limit <= _sieve_limit:
        return
    limit = max(limit, 2 * _sieve_limit, 1 << 16)
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, int(limit**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    _sieve = sieve
    _sieve_limit = limit
    _prime_list = [i for i in range(2, limit + 1) if sieve[i]]


def primes_upto(n):
    """List of all primes <= n."""
    if n < 2:
        return []
    _ensure_sieve(n)
    if n == _sieve_limit:
        return list(_prime_list)
    import bisect

    cut = bisect.bisect_right(_prime_list, n)
    return _prime_list[:cut]


def is_prime(n):
    if n < 2:
        return False
    if n <= max(_sieve_limit, 1 << 16):
        _ensure_sieve(max(n, 1 << 16))
        return bool(_sieve[n])
    if n >= _MR_LIMIT:
        raise DomainError("primality test not deterministic for %d" % n)
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n):
    n += 1
    while not is_prime(n):
        n += 1
    return n


def smallest_prime_factor_table(n):
    """Array spf with spf[m] = least prime factor of m, for m <= n."""
    spf = list(range(n + 1))
    for i in range(2, int(n**0.5) + 1):
        if spf[i] == i:
            for m in range(i * i, n + 1, i):
                if spf[m] == m:
                    spf[m] = i
    return spf
