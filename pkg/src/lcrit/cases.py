"""Evaluation-case registry and tensor Dirichlet-series assembly.

Four supported cases, each pinning down (a) the functional equation,
derived from Hodge data, (b) which eigenvalue tables supply the
coefficients, and (c) the predicted primes from the congruence module:

  case 1:  elliptic weight 16 x genus-2 type (4, 12), degree 8
  case 2:  elliptic weight 18 x genus-2 type (4, 15), degree 8
  case 3:  elliptic weight 16 x genus-2 type (6, 10), degree 8
  case 4:  genus-2 (8, 8) x genus-2 (14, 7), degree 16

The elliptic eigenform is generated exactly on demand; the genus-2
eigenvalues must come from input files (see
`heckedata.load_siegel_eigenvalues` for the format).
"""

import dataclasses
import math
from dataclasses import dataclass
from fractions import Fraction

from .congruence import predictions_for_case
from .errors import DomainError
from .euler import (
    dirichlet_expand,
    hecke_local_factor,
    spinor_local_factor,
    tensor_local_factor,
)
from .heckedata import elliptic_coefficients
from .hodge import (
    elliptic_hodge_points,
    functional_equation,
    spinor_hodge_points,
    tensor_hodge_points,
)
from .primes import primes_upto


@dataclass(frozen=True)
class CaseSpec:
    """One supported tensor-product evaluation case."""

    case: int
    elliptic_weight: object  # int, or None for the degree-16 case
    siegel_types: tuple  # ((j, k),) or ((j1, k1), (j2, k2))
    coefficient_files: tuple  # conventional eigenvalue-file names
    fe: object  # FunctionalEquationData
    predictions: tuple  # PredictedPrime entries applying to this case

    @property
    def degree(self):
        return self.fe.degree

    def label(self):
        if self.elliptic_weight is not None:
            (j, k), = self.siegel_types
            return "elliptic weight %d x genus-2 (j, k) = (%d, %d)" % (
                self.elliptic_weight, j, k,
            )
        (j1, k1), (j2, k2) = self.siegel_types
        return "genus-2 (j, k) = (%d, %d) x genus-2 (j, k) = (%d, %d)" % (
            j1, k1, j2, k2,
        )


def _degree8_case(case, ell, j, k):
    hodge = tensor_hodge_points(
        elliptic_hodge_points(ell), spinor_hodge_points(j, k)
    )
    return CaseSpec(
        case=case,
        elliptic_weight=ell,
        siegel_types=((j, k),),
        coefficient_files=("j%dk%d.txt" % (j, k),),
        fe=functional_equation(hodge),
        predictions=predictions_for_case(case),
    )


def _degree16_case(case, type1, type2):
    hodge = tensor_hodge_points(
        spinor_hodge_points(*type1), spinor_hodge_points(*type2)
    )
    return CaseSpec(
        case=case,
        elliptic_weight=None,
        siegel_types=(type1, type2),
        coefficient_files=tuple(
            "j%dk%d.txt" % (j, k) for j, k in (type1, type2)
        ),
        fe=functional_equation(hodge),
        predictions=predictions_for_case(case),
    )


_CASES = {
    1: _degree8_case(1, 16, 4, 12),
    2: _degree8_case(2, 18, 4, 15),
    3: _degree8_case(3, 16, 6, 10),
    4: _degree16_case(4, (8, 8), (14, 7)),
}


def case_ids():
    return tuple(sorted(_CASES))


def case_spec(case):
    if case not in _CASES:
        raise DomainError("unknown case %r (supported: 1, 2, 3, 4)" % (case,))
    return _CASES[case]


# ---------------------------------------------------------------------------
# Dirichlet-series assembly


def tensor_series(spec, tables, n_max):
    """Dirichlet coefficients b_1..b_{n_max} (motivic normalisation) of
    the tensor-product L-function of `spec`, from the given eigenvalue
    tables (one per entry of spec.siegel_types, in order).

    A prime whose table row lacks lambda(p^2) contributes only b_p
    (marked partial); primes beyond the tables are unknown.
    """
    if len(tables) != len(spec.siegel_types):
        raise DomainError(
            "case %d needs %d eigenvalue table(s), got %d"
            % (spec.case, len(spec.siegel_types), len(tables))
        )
    for table, (j, k) in zip(tables, spec.siegel_types):
        if (table.j, table.k) != (j, k):
            raise DomainError(
                "eigenvalue table is for type (%d, %d); case %d needs (%d, %d)"
                % (table.j, table.k, spec.case, j, k)
            )
    if spec.elliptic_weight is not None:
        return _series_elliptic_siegel(spec, tables[0], n_max)
    return _series_siegel_siegel(spec, tables, n_max)


def _series_elliptic_siegel(spec, table, n_max):
    ell = spec.elliptic_weight
    j, k = table.j, table.k
    form = elliptic_coefficients(ell, table.max_prime)
    factors = {}
    partial = {}
    for p in table.primes:
        lam_p, lam_p2 = table.entries[p]
        a_p = form.a(p)
        if lam_p2 is None:
            # only the X^1 coefficient of the local factor is known
            partial[p] = a_p * lam_p
        else:
            factors[p] = tensor_local_factor(
                hecke_local_factor(a_p, p, ell),
                spinor_local_factor(lam_p, lam_p2, p, j, k),
            )
    return dirichlet_expand(
        factors, n_max, spec.fe.degree, spec.fe.weight, partial=partial
    )


def _series_siegel_siegel(spec, tables, n_max):
    ta, tb = tables
    factors = {}
    partial = {}
    for p in sorted(set(ta.primes) & set(tb.primes)):
        la_p, la_p2 = ta.entries[p]
        lb_p, lb_p2 = tb.entries[p]
        if la_p2 is None or lb_p2 is None:
            partial[p] = la_p * lb_p
        else:
            factors[p] = tensor_local_factor(
                spinor_local_factor(la_p, la_p2, p, ta.j, ta.k),
                spinor_local_factor(lb_p, lb_p2, p, tb.j, tb.k),
            )
    return dirichlet_expand(
        factors, n_max, spec.fe.degree, spec.fe.weight, partial=partial
    )


# ---------------------------------------------------------------------------
# evaluation-point helpers


def quadrature_for_point(qp, s0):
    """Quadrature parameters adequate for the point s0: the contour
    abscissa is raised until min(s0 + nu, 1 - s0 + nu) >= 3, so both
    Dirichlet sums inside the identity keep a convergence margin."""
    s0 = Fraction(s0)
    need = 3 - min(s0, 1 - s0)
    nu_min = int(math.ceil(need))
    if qp.nu >= nu_min:
        return qp
    return dataclasses.replace(qp, nu=nu_min)


def default_window(series, degree, window_max=500):
    """Unknown-coefficient window for the weight solver: the unknown
    prime indices up to window_max, each with the sharp analytic bound
    |b_p| <= degree.  (Unknown composites below the cutoff are rarer
    and smaller; the primes carry the error.)"""
    if window_max < 2:
        raise DomainError("window_max must be >= 2")
    cut = min(window_max, series.n_max)
    window = tuple(p for p in primes_upto(cut) if p not in series.known)
    bounds = {p: degree for p in window}
    return window, bounds
