"""Hecke eigenvalue inputs.

Three sources of eigenvalue data feed the rest of the package:

* elliptic eigenforms of level one, generated on demand by exact
  q-expansion arithmetic (`elliptic_coefficients`);
* eigenvalue tables for vector-valued genus-2 eigenforms, loaded from
  plain-text files (`load_siegel_eigenvalues`) -- these cannot be
  computed here (that takes point counts over finite fields) and are
  treated strictly as input data;
* small built-in tables of traces and component eigenvalues underlying
  the congruence checks (`builtin_table`), embedded exactly as printed
  in the source material.

q-expansion route: for the supported weights the cusp space is
one-dimensional, so the eigenform is Delta = q prod (1-q^n)^24 times a
monomial in the Eisenstein series E4, E6.  Delta comes from Jacobi's
identity eta^3 = sum_{k>=0} (-1)^k (2k+1) q^(k(k+1)/2) and three
squarings; all series multiplication is exact big-integer arithmetic
via Kronecker substitution (pack coefficients into one huge integer,
multiply, unpack), which keeps 20000-term products fast.
"""

from dataclasses import dataclass, field

import gmpy2

from .errors import DomainError, ParseError
from .primes import is_prime as _is_prime, next_prime as _next_prime

# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class EllipticEigenform:
    """Normalised cuspidal Hecke eigenform of level one.

    `coefficients[i]` is a_{i+1}, so coefficients[0] == a_1 == 1.
    """

    weight: int
    coefficients: tuple

    def a(self, n):
        if not 1 <= n <= len(self.coefficients):
            raise DomainError("coefficient index %d out of range" % n)
        return self.coefficients[n - 1]

    @property
    def n_max(self):
        return len(self.coefficients)


@dataclass(frozen=True)
class SiegelEigenvalueTable:
    """Eigenvalues lambda(p), lambda(p^2) of a vector-valued genus-2
    eigenform of type (j, k), for all primes up to max_prime.

    entries maps p -> (lambda_p, lambda_p2); lambda_p2 is None when the
    input file did not supply it (the local Euler factor is then only
    partially known).  The eigenvalue normalisation cannot be validated
    from the file alone; `scaling_assumption` records what the rest of
    the package assumes.
    """

    j: int
    k: int
    entries: dict
    max_prime: int
    scaling_assumption: str = (
        "eigenvalues of the Hecke operators T(p), T(p^2) in the classical "
        "arithmetic normalisation (integral, unscaled by powers of p)"
    )

    @property
    def primes(self):
        return tuple(sorted(self.entries))


@dataclass(frozen=True)
class RecipeTerm:
    """One term coeff * p^exponent * stream[p] of an integer combination."""

    coeff: int
    exponent: int
    stream: str

    def value(self, p, streams):
        if p not in streams[self.stream]:
            raise DomainError("prime %d missing from stream %r" % (p, self.stream))
        return self.coeff * p**self.exponent * streams[self.stream][p]


@dataclass(frozen=True)
class DerivationStep:
    """Recompute streams[target] as streams[source] minus a sum of terms.

    Mirrors the subtraction of endoscopic contributions from a trace on
    a full space of algebraic modular forms: the embedded table already
    holds the printed result column, and the step lets it be recomputed
    and cross-checked.
    """

    target: str
    source: str
    subtract: tuple


@dataclass(frozen=True)
class CombinationRecipe:
    """Signed integer combination of streams whose value should be
    divisible by `modulus` at every tabulated prime."""

    terms: tuple
    modulus: int
    description: str


@dataclass(frozen=True)
class CongruenceDataset:
    """All printed integers behind one congruence example, plus the
    derivation steps and the final combination recipe."""

    example_id: int
    modulus: int
    primes: tuple
    streams: dict
    derivations: tuple
    combination: CombinationRecipe
    expected_factorizations: dict
    extra_divisor: int = None


# ---------------------------------------------------------------------------
# exact power-series arithmetic (coefficient lists indexed by exponent)


def _pack(coeffs, width_bytes):
    buf = bytearray(len(coeffs) * width_bytes)
    for i, c in enumerate(coeffs):
        if c:
            buf[i * width_bytes : (i + 1) * width_bytes] = c.to_bytes(
                width_bytes, "little"
            )
    return int.from_bytes(buf, "little")


def _unpack(value, width_bytes, count):
    buf = value.to_bytes(count * width_bytes, "little")
    return [
        int.from_bytes(buf[i * width_bytes : (i + 1) * width_bytes], "little")
        for i in range(count)
    ]


def poly_mul_trunc(a, b, n_max):
    """Product of integer coefficient lists, truncated to degree n_max.

    Kronecker substitution with a nonnegative/negative split: a signed
    sequence is a difference of two nonnegative ones, and the four
    (well, two after regrouping) nonnegative products pack into single
    big integers whose product gmpy2 evaluates with FFT multiplication.
    """
    la = min(len(a), n_max + 1)
    lb = min(len(b), n_max + 1)
    if la == 0 or lb == 0:
        return []
    a = a[:la]
    b = b[:lb]
    out_len = min(la + lb - 1, n_max + 1)
    max_a = max(abs(c) for c in a)
    max_b = max(abs(c) for c in b)
    if max_a == 0 or max_b == 0:
        return [0] * out_len
    # any coefficient of any partial product is at most this
    bound = max_a * max_b * min(la, lb)
    width_bytes = (2 * bound).bit_length() // 8 + 1

    apos = [c if c > 0 else 0 for c in a]
    aneg = [-c if c < 0 else 0 for c in a]
    bpos = [c if c > 0 else 0 for c in b]
    bneg = [-c if c < 0 else 0 for c in b]

    def mul(x, y, xmax, ymax):
        if xmax == 0 or ymax == 0:
            return None
        return gmpy2.mpz(_pack(x, width_bytes)) * gmpy2.mpz(_pack(y, width_bytes))

    pp = mul(apos, bpos, max(apos), max(bpos))
    nn = mul(aneg, bneg, max(aneg), max(bneg))
    pn = mul(apos, bneg, max(apos), max(bneg))
    np_ = mul(aneg, bpos, max(aneg), max(bpos))

    # keep only the low slots when the true product is longer than the
    # truncated output (each slot is self-contained, so this is exact)
    mask = (1 << (8 * width_bytes * out_len)) - 1
    plus = int((pp or 0) + (nn or 0)) & mask
    minus = int((pn or 0) + (np_ or 0)) & mask
    pos_part = _unpack(plus, width_bytes, out_len) if plus else [0] * out_len
    neg_part = _unpack(minus, width_bytes, out_len) if minus else [0] * out_len
    return [x - y for x, y in zip(pos_part, neg_part)]


def _eta_cubed(n_max):
    """sum_{k>=0} (-1)^k (2k+1) q^(k(k+1)/2), truncated to degree n_max."""
    out = [0] * (n_max + 1)
    k = 0
    while k * (k + 1) // 2 <= n_max:
        out[k * (k + 1) // 2] = (2 * k + 1) * (-1 if k % 2 else 1)
        k += 1
    return out


def _delta_expansion(n_max):
    """Coefficients tau(n) of Delta for n = 0..n_max (tau(0) = 0)."""
    if n_max < 1:
        return [0] * (n_max + 1)
    p = _eta_cubed(n_max - 1)  # Delta = q * (eta^3)^8
    p = poly_mul_trunc(p, p, n_max - 1)
    p = poly_mul_trunc(p, p, n_max - 1)
    p = poly_mul_trunc(p, p, n_max - 1)
    return [0] + p


def _divisor_power_sums(power, n_max):
    """sigma_power(n) for n = 0..n_max by sieving (entry 0 unused, = 0)."""
    sig = [0] * (n_max + 1)
    for d in range(1, n_max + 1):
        dp = d**power
        for m in range(d, n_max + 1, d):
            sig[m] += dp
    return sig


def eisenstein_expansion(weight, n_max):
    """E4 or E6, normalised to constant term 1, to degree n_max."""
    if weight == 4:
        mult, power = 240, 3
    elif weight == 6:
        mult, power = -504, 5
    else:
        raise DomainError("only E4 and E6 are provided, not E%s" % weight)
    sig = _divisor_power_sums(power, n_max)
    return [1] + [mult * s for s in sig[1:]]


# weight -> Eisenstein factors multiplying Delta; these are exactly the
# even weights with a one-dimensional cusp space
_WEIGHT_FACTORS = {
    12: (),
    16: (4,),
    18: (6,),
    20: (4, 4),
    22: (4, 6),
    26: (4, 4, 6),
}


def elliptic_coefficients(weight, n_max):
    """The eigenform of weight `weight` (one of 12, 16, 18, 20, 22, 26)
    as exact coefficients a_1..a_{n_max}."""
    if weight not in _WEIGHT_FACTORS:
        raise DomainError(
            "weight %s: cusp space is not one-dimensional (supported: %s)"
            % (weight, sorted(_WEIGHT_FACTORS))
        )
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    series = _delta_expansion(n_max)
    for eis_weight in _WEIGHT_FACTORS[weight]:
        series = poly_mul_trunc(series, eisenstein_expansion(eis_weight, n_max), n_max)
    assert series[1] == 1, "normalisation a_1 = 1 failed"
    return EllipticEigenform(weight=weight, coefficients=tuple(series[1 : n_max + 1]))


# ---------------------------------------------------------------------------
# Siegel eigenvalue files


def load_siegel_eigenvalues(path):
    """Parse an eigenvalue file into a SiegelEigenvalueTable.

    Format: '#' starts a comment; first non-comment line is
    "j <int> k <int>"; each further line is "p lambda(p) lambda(p^2)"
    with exact decimal integers.  The third token may be absent or '?'
    when lambda(p^2) is unavailable.  Primes must be ascending and
    contiguous from 2.
    """
    header = None
    entries = {}
    expected_p = 2
    last_line = 0
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            last_line = lineno
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tokens = line.split()
            if header is None:
                if len(tokens) != 4 or tokens[0] != "j" or tokens[2] != "k":
                    raise ParseError(
                        "expected header 'j <int> k <int>', got %r" % line,
                        line=lineno,
                    )
                try:
                    j, k = int(tokens[1]), int(tokens[3])
                except ValueError:
                    raise ParseError("non-integer in header %r" % line, line=lineno)
                if j < 0 or j % 2:
                    raise ParseError("j must be a nonnegative even integer", line=lineno)
                if k < 3:
                    raise ParseError("k must be an integer >= 3", line=lineno)
                header = (j, k)
                continue
            if len(tokens) not in (2, 3):
                raise ParseError(
                    "expected 'p lambda(p) [lambda(p^2)]', got %r" % line,
                    line=lineno,
                )
            try:
                p = int(tokens[0])
                lam_p = int(tokens[1])
            except ValueError:
                raise ParseError("non-integer token in %r" % line, line=lineno)
            lam_p2 = None
            if len(tokens) == 3 and tokens[2] != "?":
                try:
                    lam_p2 = int(tokens[2])
                except ValueError:
                    raise ParseError("non-integer token in %r" % line, line=lineno)
            if not _is_prime(p):
                raise ParseError("%d is not prime" % p, line=lineno)
            if p != expected_p:
                raise ParseError(
                    "expected prime %d next (ascending, no gaps), got %d"
                    % (expected_p, p),
                    line=lineno,
                )
            entries[p] = (lam_p, lam_p2)
            expected_p = _next_prime(p)
    if header is None:
        raise ParseError("no header line", line=last_line)
    if not entries:
        raise ParseError("no data", line=last_line)
    return SiegelEigenvalueTable(
        j=header[0], k=header[1], entries=entries, max_prime=max(entries)
    )


# ---------------------------------------------------------------------------
# built-in congruence tables
#
# Every integer below is embedded exactly as printed in the reference
# tables (traces of Hecke operators on spaces of algebraic modular
# forms, component eigenvalues, and the factorizations of the final
# combinations).  Nothing here is computed; the point is to have an
# independent record that the computations elsewhere must reproduce.

_EX3 = CongruenceDataset(
    example_id=3,
    modulus=71,
    primes=(2, 3, 5, 7, 11, 53),
    streams={
        "ap_f16": {
            2: 216,
            3: -3348,
            5: 52110,
            7: 2822456,
            11: 20586852,
            53: 6797151655902,
        },
        "lambda_F": {
            2: -96,
            3: -527688,
            5: 596139180,
            7: -3608884496,
            11: 3047542095144,
            53: -3921035060705523617268,
        },
        "so7_trace": {
            2: 6816,
            3: -474120,
            5: 145932324,
            7: 49205357040,
            11: 3229012641000,
            53: -89346100795036491708,
        },
        "t_25_15_5": {
            2: 0,
            3: 867132,
            5: -613050606,
            7: 5377223544,
            11: -3134062555596,
            53: 989150772174783875874,
        },
    },
    derivations=(
        DerivationStep(
            target="t_25_15_5",
            source="so7_trace",
            subtract=(
                RecipeTerm(1, 5, "ap_f16"),
                RecipeTerm(1, 0, "lambda_F"),
            ),
        ),
    ),
    combination=CombinationRecipe(
        terms=(
            RecipeTerm(-1, 0, "t_25_15_5"),
            RecipeTerm(1, 5, "ap_f16"),
            RecipeTerm(1, 0, "lambda_F"),
        ),
        modulus=71,
        description="-T(Delta_{25,15,5}) + p^5 a_p(f16) + lambda_F(p)",
    ),
    expected_factorizations={
        2: "2^5.3.71",
        3: "-2^7.3^5.71",
        5: "2^9.3.23.71.547",
        7: "2^8.3^4.7^2.13.41.71",
        11: "2^7.3.23.71.15145211",
        53: "-2^9.3^3.71.73.1031.27990002153",
    },
)

_EX4 = CongruenceDataset(
    example_id=4,
    modulus=61,
    primes=(2, 3, 5, 7, 11, 53),
    streams={
        "ap_f16": {
            2: 216,
            3: -3348,
            5: 52110,
            7: 2822456,
            11: 20586852,
            53: 6797151655902,
        },
        "lambda_F": {
            2: 1680,
            3: -6120,
            5: 2718300,
            7: 6916898800,
            11: -1417797110136,
            53: -15111411349636553220,
        },
        "so7_trace": {
            2: 4416,
            3: 148104,
            5: -89271276,
            7: 10652657232,
            11: -764339838888,
            53: 86535126376033794804,
        },
        "t_23_15_7": {
            2: -720,
            3: 425412,
            5: -124558326,
            7: -3040958424,
            11: 352045171116,
            53: 48013741730657079162,
        },
    },
    derivations=(
        DerivationStep(
            target="t_23_15_7",
            source="so7_trace",
            subtract=(
                RecipeTerm(1, 4, "ap_f16"),
                RecipeTerm(1, 0, "lambda_F"),
            ),
        ),
    ),
    combination=CombinationRecipe(
        terms=(
            RecipeTerm(-1, 0, "t_23_15_7"),
            RecipeTerm(1, 4, "ap_f16"),
            RecipeTerm(1, 0, "lambda_F"),
        ),
        modulus=61,
        description="-T(Delta_{23,15,7}) + p^4 a_p(f16) + lambda_F(p)",
    ),
    expected_factorizations={
        2: "2^5.3.61",
        3: "-2^8.3^2.5.61",
        5: "2^10.3.61.853",
        7: "2^9.3^7.5.7^2.61",
        11: "-2^8.3.5.7^2.31.61.4127",
        53: "-2^10.3^3.5.17.61.66215793179",
    },
    # the combination is in fact divisible by 2^5 . 3 . 61, not just 61
    extra_divisor=96,
)

_EX5 = CongruenceDataset(
    example_id=5,
    modulus=17,
    primes=(2, 3, 5, 7),
    streams={
        "ap_f16": {2: 216, 3: -3348, 5: 52110, 7: 2822456},
        "ap_f20": {2: 456, 3: 50652, 5: -2377410, 7: -16917544},
        "ap_f12": {2: -24, 3: 252, 5: 4830, 7: -16744},
        "lambda_F": {2: -96, 3: -527688, 5: 596139180, 7: -3608884496},
        "so7_trace": {2: 10176, 3: 929988, 5: -36016170, 7: -40517568504},
        "t_pair_25_19_5": {2: 6624, 3: 90072, 5: -334979100, 7: -31105966416},
        "so9_trace": {2: 5280, 3: 889920, 5: -345413400, 7: -29042227200},
        "t_25_19_11_5": {2: 4800, 3: -302400, 5: -765121800, 7: 29642547200},
    },
    derivations=(
        # trace of T(p) on the endoscopic pair: subtract the lift of the
        # weight-20 form (twisted by p^3) and lambda_F from the SO(7) trace
        DerivationStep(
            target="t_pair_25_19_5",
            source="so7_trace",
            subtract=(
                RecipeTerm(1, 0, "lambda_F"),
                RecipeTerm(1, 3, "ap_f20"),
            ),
        ),
        # then the SO(9) trace minus the pair contribution, where each
        # member of the pair also drags in p^7 tau(p)
        DerivationStep(
            target="t_25_19_11_5",
            source="so9_trace",
            subtract=(
                RecipeTerm(1, 0, "t_pair_25_19_5"),
                RecipeTerm(2, 7, "ap_f12"),
            ),
        ),
    ),
    combination=CombinationRecipe(
        terms=(
            RecipeTerm(-1, 0, "t_25_19_11_5"),
            RecipeTerm(1, 3, "ap_f16"),
            RecipeTerm(1, 7, "ap_f16"),
            RecipeTerm(1, 0, "lambda_F"),
        ),
        modulus=17,
        description="-T(Delta_{25,19,11,5}) + (p^3 + p^7) a_p(f16) + lambda_F(p)",
    ),
    expected_factorizations={
        2: "2^5.3^2.5.17",
        3: "-2^8.3^3.5.13.17",
        5: "2^10.3^2.5.17.53.131",
        7: "2^9.3^3.5.7.17.191.1459",
    },
)

_EX6 = CongruenceDataset(
    example_id=6,
    modulus=37,
    primes=(2, 3, 5, 7),
    streams={
        "t_25_21_15_9": {2: -7200, 3: 631200, 5: 6175800, 7: 25981995200},
        "lambda_F": {2: 1344, 3: -6408, 5: -30774900, 7: 451366384},
        "lambda_G": {2: -3696, 3: 511272, 5: 118996620, 7: -82574511536},
    },
    derivations=(),
    combination=CombinationRecipe(
        terms=(
            RecipeTerm(1, 2, "lambda_F"),
            RecipeTerm(1, 0, "lambda_G"),
            RecipeTerm(-1, 0, "t_25_21_15_9"),
        ),
        modulus=37,
        description="p^2 lambda_F(p) + lambda_G(p) - T(Delta_{25,21,15,9})",
    ),
    expected_factorizations={
        2: "2^4.3.5.37",
        3: "-2^6.3.5^2.37",
        5: "-2^8.3.5.37.4621",
        7: "-2^7.3^3.5.37.135197",
    },
)

_BUILTIN = {3: _EX3, 4: _EX4, 5: _EX5, 6: _EX6}


def builtin_table(example_id):
    """The embedded congruence dataset for example_id in {3, 4, 5, 6}."""
    if example_id not in _BUILTIN:
        raise DomainError(
            "no built-in table for example %r (have 3, 4, 5, 6)" % (example_id,)
        )
    return _BUILTIN[example_id]
