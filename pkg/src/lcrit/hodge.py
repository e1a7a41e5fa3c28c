"""Hodge points, gamma shifts, sign, and critical points.

A motive of even rank d and motivic weight w with no middle Hodge piece
has Hodge decomposition +(H^(p,q) + H^(q,p)) with q = w - p; we store
one representative per conjugate pair, reduced to min(p, w - p).  The
completed L-function is

    Lambda(s) = prod_i Gamma_C(s + (w/2 - p_i)) * L(s)  (analytic s),

with Gamma_C(s) = (2 pi)^(-s) Gamma(s), satisfying Lambda(s) =
eps * Lambda(1 - s).  Each conjugate pair (p, q) contributes i^(q-p+1)
to eps.  Critical points are the integers t (motivic) with
p_max < t <= w - p_max, i.e. where neither gamma(s) nor gamma(w+1-s)
has a pole.

Tensor products act on Hodge points by pairwise sums of the full
(unreduced) point sets, re-reduced mod the new weight.  That single
rule reproduces the degree-8 point set for elliptic x genus-2 and
extends it to the degree-16 genus-2 x genus-2 case.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import ConsistencyError, DomainError


@dataclass(frozen=True)
class HodgeData:
    """Motivic weight and reduced Hodge points (one per conjugate pair)."""

    weight: int
    points: tuple

    def __post_init__(self):
        pts = tuple(sorted(int(p) for p in self.points))
        object.__setattr__(self, "points", pts)
        for p in pts:
            if not 0 <= 2 * p <= self.weight:
                raise DomainError(
                    "Hodge point %d outside [0, w/2] for weight %d" % (p, self.weight)
                )
            if 2 * p == self.weight:
                raise DomainError(
                    "middle Hodge piece (p = w/2) is not supported here"
                )

    @property
    def degree(self):
        return 2 * len(self.points)

    def full_points(self):
        """All degree-many points, conjugates included, sorted."""
        return tuple(sorted([p for p in self.points] + [self.weight - p for p in self.points]))


@dataclass(frozen=True)
class FunctionalEquationData:
    """Everything the evaluator needs about Lambda(s) = eps Lambda(1-s)."""

    degree: int
    weight: int
    shifts: tuple  # Gamma_C shifts in analytic normalisation, descending
    sign: int
    critical_motivic: tuple
    critical_analytic: tuple
    conductor: int = 1

    def analytic_point(self, t_motivic):
        value = Fraction(t_motivic) - Fraction(self.weight, 2)
        return int(value) if value.denominator == 1 else value

    def motivic_point(self, t_analytic):
        value = Fraction(t_analytic) + Fraction(self.weight, 2)
        return int(value) if value.denominator == 1 else value


def elliptic_hodge_points(ell):
    """Hodge data of the rank-2 motive of a weight-ell eigenform."""
    if ell < 12 or ell % 2:
        raise DomainError("weight must be even and >= 12")
    return HodgeData(weight=ell - 1, points=(0,))


def spinor_hodge_points(j, k):
    """Hodge data of the rank-4 spinor motive of a type-(j,k) eigenform."""
    if j < 0 or j % 2:
        raise DomainError("j must be a nonnegative even integer")
    if k < 3:
        raise DomainError("k must be an integer >= 3")
    return HodgeData(weight=j + 2 * k - 3, points=(0, k - 2))


def tensor_hodge_points(a, b):
    """Hodge data of a tensor product: pairwise sums of full point sets,
    reduced to representatives mod the new weight."""
    w = a.weight + b.weight
    sums = [pa + pb for pa in a.full_points() for pb in b.full_points()]
    reduced = sorted(min(x, w - x) for x in sums)
    # every reduced point must occur an even number of times: keep half
    half = []
    counts = {}
    for x in reduced:
        counts[x] = counts.get(x, 0) + 1
    for x in sorted(counts):
        if counts[x] % 2:
            raise ConsistencyError(
                "Hodge point %d has odd multiplicity after reduction" % x
            )
        half.extend([x] * (counts[x] // 2))
    return HodgeData(weight=w, points=tuple(half))


def hodge_points(ell, j, k):
    """Hodge data of the rank-8 tensor (elliptic weight ell) x (genus-2
    type (j,k)): w = j + 2k + ell - 4 and points
    {0, k-2, min(ell-1, j+2k-3), min(j+k-1, k+ell-3)}."""
    data = tensor_hodge_points(elliptic_hodge_points(ell), spinor_hodge_points(j, k))
    expected = tuple(
        sorted(
            [0, k - 2, min(ell - 1, j + 2 * k - 3), min(j + k - 1, k + ell - 3)]
        )
    )
    assert data.points == expected, (data.points, expected)
    assert data.weight == j + 2 * k + ell - 4
    return data


def functional_equation(h):
    """FunctionalEquationData for the motive with Hodge data h."""
    w = h.weight
    shifts = []
    for p in h.points:
        value = Fraction(w, 2) - p
        shifts.append(int(value) if value.denominator == 1 else value)
    shifts.sort(reverse=True)
    # sign: product of i^(q - p + 1) over conjugate pairs
    exponent = sum(w - 2 * p + 1 for p in h.points) % 4
    if exponent == 0:
        sign = 1
    elif exponent == 2:
        sign = -1
    else:
        raise ConsistencyError(
            "sign recipe gave i^%d; Hodge data is not self-dual-compatible"
            % exponent
        )
    p_max = max(h.points)
    critical_motivic = tuple(range(p_max + 1, w - p_max + 1))
    half = Fraction(w, 2)
    critical_analytic = tuple(
        int(t - half) if (Fraction(t) - half).denominator == 1 else Fraction(t) - half
        for t in critical_motivic
    )
    return FunctionalEquationData(
        degree=h.degree,
        weight=w,
        shifts=tuple(shifts),
        sign=sign,
        critical_motivic=critical_motivic,
        critical_analytic=critical_analytic,
    )


def critical_points(fe):
    """Critical points in the analytic normalisation."""
    return list(fe.critical_analytic)
