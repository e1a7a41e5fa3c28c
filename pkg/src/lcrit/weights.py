"""Least-squares combination of coefficient rows.

Several test functions give several partial sums converging to the
same L-value; their unknown-coefficient error terms, however, differ,
and empirically the row values at the first unknown indices are
strongly negatively correlated between suitable betas.  Choosing
weights w_j with sum w_j = 1 to minimise

    sum_{n in window} bound(n)^2 (sum_j w_j c_{beta_j}(n))^2

therefore cancels most of the unknown-term error while leaving the
value itself (a weighted average of equal quantities) untouched.  The
constrained least-squares problem is solved exactly through the
bordered normal equations

    [ 2 A^T A   1 ] [w]   [0]
    [   1^T     0 ] [l] = [1]

at working precision; a singular system falls back to the minimum-norm
solution (pseudo-inverse), which also breaks ties between duplicate
rows by splitting weight equally.
"""

from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from . import afe
from .errors import DomainError


@dataclass(frozen=True)
class WeightSolution:
    betas: tuple
    weights: tuple  # mpf, sums to 1 exactly at working precision
    objective: object  # mpf, value of the minimised sum at the solution
    window: tuple  # unknown indices actually used
    metadata: dict


def _exact_unit_sum(ws):
    """Nudge one weight so that left-to-right summation gives exactly 1
    at the current precision.

    Entries are first rounded to the working precision: linear-algebra
    routines hand back values carrying guard bits beyond the context,
    and a sum that is exact with those bits present need not stay exact
    once the values are rounded.  The nudge prefers the last weight but
    falls back to earlier ones — a weight in a wide binade (ulp coarser
    than the residual) cannot always absorb the correction, while a
    smaller-magnitude weight can.
    """
    ws = [mp.mpf(w) for w in ws]
    for idx in reversed(range(len(ws))):
        trial = list(ws)
        for _ in range(4):
            total = mp.mpf(0)
            for w in trial:
                total += w
            if total == 1:
                return tuple(trial)
            trial[idx] += 1 - total
    raise DomainError("weight normalisation did not converge")


def _pinv_solve(B, rhs):
    U, S, V = mp.svd(B)
    top = max(S[i] for i in range(S.rows))
    cutoff = top * mp.mpf(10) ** (-(mp.mp.dps - 10))
    y = U.T * rhs
    for i in range(S.rows):
        y[i] = y[i] / S[i] if S[i] > cutoff else mp.mpf(0)
    return V.T * y


def solve_weights(matrix, unknown, bounds=None):
    """Optimal sum-one weights for the rows of `matrix` against the
    unknown indices `unknown`, with per-index error bounds `bounds`
    (mapping n -> bound; default 1 for every index)."""
    rows = matrix.rows
    if not rows:
        raise DomainError("matrix has no rows")
    window = tuple(sorted(set(unknown)))
    if not window:
        raise DomainError("unknown index set is empty")
    n_max = matrix.n_max
    for n in window:
        if not 1 <= n <= n_max:
            raise DomainError("unknown index %d outside computed range" % n)
    qp = matrix.qp
    r = len(rows)
    with mp.workdps(qp.dps + qp.guard):
        if bounds is None:
            bnd = {n: mp.mpf(1) for n in window}
        else:
            bnd = {n: mp.mpf(bounds[n]) for n in window}
        A = mp.matrix(len(window), r)
        for i, n in enumerate(window):
            for j in range(r):
                A[i, j] = bnd[n] * rows[j].entries[n - 1]
        # bordered normal equations
        B = mp.matrix(r + 1, r + 1)
        ata = A.T * A
        for i in range(r):
            for j in range(r):
                B[i, j] = 2 * ata[i, j]
            B[i, r] = mp.mpf(1)
            B[r, i] = mp.mpf(1)
        rhs = mp.matrix([mp.mpf(0)] * r + [mp.mpf(1)])
        fallback = False
        try:
            # TypeError: mpmath's LU pivoting trips over a None pivot on
            # some exactly singular matrices instead of reporting them
            sol = mp.lu_solve(B, rhs)
        except (ZeroDivisionError, TypeError):
            sol = _pinv_solve(B, rhs)
            fallback = True
        ws = _exact_unit_sum(sol[i] for i in range(r))
        resid = A * mp.matrix(ws)
        objective = mp.fsum(x * x for x in resid)
    return WeightSolution(
        betas=matrix.betas,
        weights=ws,
        objective=+objective,
        window=window,
        metadata={"singular_fallback": fallback, "rows": r},
    )


def combined_evaluation(matrix, weights, series, s0=None):
    """partial_value of the weighted row combination; the error radius
    is computed on the combined coefficients (so the cancellation the
    weights buy is reflected), not as a weighted sum of row radii."""
    if isinstance(weights, WeightSolution):
        weights = weights.weights
    weights = tuple(weights)
    if len(weights) != len(matrix.rows):
        raise DomainError("need one weight per row")
    qp = matrix.qp
    with mp.workdps(qp.dps + qp.guard):
        ws = [mp.mpf(w) for w in weights]
        total = mp.mpf(0)
        for w in ws:
            total += w
        if abs(total - 1) > mp.mpf(10) ** (-(qp.dps - 2)):
            raise DomainError("weights must sum to 1 (got %s)" % mp.nstr(total, 8))
        ws = _exact_unit_sum(ws)
    combined = afe.combine_rows(matrix.rows, ws)
    return afe.partial_value(combined, series, s0=s0)
