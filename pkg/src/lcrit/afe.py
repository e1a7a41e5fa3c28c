"""Approximate-functional-equation evaluation of L-values.

For a completed function Lambda(s) = G(s) L(s) = eps Lambda(1-s) with
G(s) = prod_i Gamma_C(s + delta_i), conductor 1, the identity

    L(s0) = sum_n c(n) b_n,
    c(n) = h1(s0, n) + eps h2(1 - s0, n),

holds with h1, h2 given by Mellin integrals over a vertical line
Re z = nu > 0:

    h1(s, n) = 1/(g(s) G(s)) * (1/2 pi i) int g(s+z) G(s+z) n^-(s+z) dz/z,

and h2 the mirror-image integral producing n^-(1-s0+z).  The test
function used here is the even combination

    tau(z) = exp(alpha z^2) cos(beta z),

centred at the evaluation point (g(s0) = 1): for self-dual cases the
published coefficients are the real parts of the one-sided
exp(i beta (s-s0) + alpha (s-s0)^2) version, and since conjugating beta
mirrors the coefficient, taking cos() is exact, not an approximation.
Both integrals are evaluated as Riemann sums over z = nu + i m h,
|m| <= M; the integrand decays like exp(-(d pi/4 - |beta|)|t| -
alpha t^2) for degree d, so the truncation point is extended
automatically until an envelope bound at the endpoint is negligible.

Precision policy: the node weights are computed once per
(case, s0, quadrature, test function) at a working precision of
dps + guard + (magnitude of the summed weights) digits; each c(n) is
then a short complex dot product, executed in gmpy2 for speed.  The
sum is exactly real in exact arithmetic (terms at +-m are conjugate);
the imaginary residue is asserted below 10^-(dps + guard/2) and
discarded, and a failed assertion triggers one full retry at doubled
precision before giving up.

The quadrature itself carries two systematic error sources besides
rounding: truncation (controlled by the envelope check) and the step
size, whose Poisson-summation error floor is of order exp(-2 pi nu/h)
*independently of n*.  partial_value folds both into its reported
radius.
"""

import math
from dataclasses import dataclass, replace
from fractions import Fraction

import gmpy2
import mpmath as mp

from . import cgamma
from .errors import DomainError, PrecisionError

N_DEFAULT = 20000  # default series length for full evaluations


class _ImResidueError(PrecisionError):
    """Internal: imaginary-part check failed; retry at higher dps."""

# ---------------------------------------------------------------------------
# parameter types


@dataclass(frozen=True)
class TestFunction:
    """tau(z) = exp(alpha z^2) cos(beta z), alpha >= 0.

    With alpha = 0 admissibility requires |beta| < degree * pi / 4, or
    the integrand stops decaying; any real beta is fine for alpha > 0
    (the Gaussian wins), though the truncation point grows with beta.
    """

    alpha: Fraction = Fraction(1, 1000)
    beta: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "beta", Fraction(self.beta))
        if self.alpha < 0:
            raise DomainError("alpha must be >= 0")

    def check_admissible(self, degree):
        if self.alpha > 0:
            return
        if abs(self.beta) >= Fraction(degree) * Fraction(math.pi) / 4:
            raise DomainError(
                "test function beta=%s inadmissible for degree %d (needs |beta| < d pi/4)"
                % (self.beta, degree)
            )


@dataclass(frozen=True)
class QuadratureParams:
    """Riemann-sum parameters: contour Re z = nu, step h, |Im z| <= trunc
    (extended automatically when auto_extend), dps target digits plus
    guard digits of working margin."""

    nu: int = 3
    step: Fraction = Fraction(1, 5)
    trunc: int = 29
    dps: int = 40
    guard: int = 10
    auto_extend: bool = True

    def __post_init__(self):
        object.__setattr__(self, "step", Fraction(self.step))
        if self.nu <= 0:
            raise DomainError("nu must be positive")
        if self.step <= 0:
            raise DomainError("step must be positive")
        if self.trunc <= 0:
            raise DomainError("truncation must be positive")
        if self.dps < 10:
            raise DomainError("dps must be >= 10")
        if self.guard < 0:
            raise DomainError("guard must be >= 0")


@dataclass(frozen=True)
class CoefficientRow:
    """One beta-row of c(n) values, n = 1..n_max, plus the context
    needed to interpret them.  A weighted combination of rows (see
    combine_rows) is stored in the same shape with g = None and the
    (weight, source row) pairs kept in `components` so the error
    analysis can still see the per-row tail behaviour."""

    fe: object
    s0: Fraction
    g: object  # TestFunction, or None for a combined row
    qp: QuadratureParams
    entries: tuple
    t_eff: Fraction  # actual truncation after auto-extension
    weight_scale: object  # sum |W1| + |W2| (mpf), sets the noise floor
    components: tuple = None

    @property
    def n_max(self):
        return len(self.entries)

    def c(self, n):
        if not 1 <= n <= len(self.entries):
            raise DomainError("c(%d) not computed (row has %d)" % (n, len(self.entries)))
        return self.entries[n - 1]


def combine_rows(rows, weights):
    """Pointwise weighted combination sum_j w_j c_{beta_j}(n).

    The combined entries keep whatever cancellation the weights achieve;
    the noise scale and tail constants add with |w_j| (no cancellation
    is claimed for error terms)."""
    rows = tuple(rows)
    weights = tuple(weights)
    if not rows or len(rows) != len(weights):
        raise DomainError("need one weight per row")
    base = rows[0]
    for r in rows[1:]:
        if r.fe is not base.fe and r.fe != base.fe:
            raise DomainError("rows combine only within one case")
        if r.s0 != base.s0 or r.qp != base.qp or r.n_max != base.n_max:
            raise DomainError("rows combine only on a common grid")
    qp = base.qp
    with mp.workdps(qp.dps + qp.guard + 10):
        ws = [mp.mpf(w) for w in weights]
        entries = tuple(
            mp.fsum(w * r.entries[i] for w, r in zip(ws, rows))
            for i in range(base.n_max)
        )
        scale = mp.fsum(abs(w) * r.weight_scale for w, r in zip(ws, rows))
    return CoefficientRow(
        fe=base.fe,
        s0=base.s0,
        g=None,
        qp=qp,
        entries=entries,
        t_eff=max(r.t_eff for r in rows),
        weight_scale=scale,
        components=tuple(zip(ws, rows)),
    )


@dataclass(frozen=True)
class AfeCoefficientMatrix:
    fe: object
    s0: Fraction
    qp: QuadratureParams
    rows: tuple

    @property
    def betas(self):
        return tuple(r.g.beta for r in self.rows)

    @property
    def n_max(self):
        return self.rows[0].n_max if self.rows else 0

    def row(self, beta):
        beta = Fraction(beta)
        for r in self.rows:
            if r.g.beta == beta:
                return r
        raise DomainError("no row for beta=%s" % beta)


@dataclass(frozen=True)
class NumericResult:
    value: object  # mpf
    radius: object  # mpf, >= 0
    metadata: dict


# ---------------------------------------------------------------------------
# mpmath <-> gmpy2 bridges (exact)


def _to_mpfr(x):
    sign, man, exp, _ = mp.mpf(x)._mpf_
    if man == 0:
        return gmpy2.mpfr(0)
    r = gmpy2.mpfr(man)
    r = gmpy2.mul_2exp(r, exp) if exp >= 0 else gmpy2.div_2exp(r, -exp)
    return -r if sign else r


def _to_mpc(x):
    x = mp.mpc(x)
    return gmpy2.mpc(_to_mpfr(x.real), _to_mpfr(x.imag))


def _from_mpfr(x):
    m, e = x.as_mantissa_exp()
    m = int(m)
    if m == 0:
        return mp.mpf(0)
    with mp.workprec(max(m.bit_length() + 8, 53)):
        value = mp.ldexp(mp.mpf(m), int(e))
    return value


# ---------------------------------------------------------------------------
# node weights


def _exact_mpf(x):
    """Exact mpf of an int/Fraction at current precision (halves etc.)."""
    x = Fraction(x)
    return mp.mpf(x.numerator) / x.denominator


def _log_gc_sum(s, shifts, dps):
    return cgamma.log_gamma_c_product(s, shifts, dps)


def _envelope_extension(fe, s0, g, qp):
    """Determine the node count M (and per-node magnitude data) such
    that the envelope of the integrand at the endpoint is negligible.

    Works at low precision; magnitudes only.  Returns (M, mag_digits)
    where mag_digits bounds log10 of the summed absolute node weights.
    """
    dps = 15
    h = qp.step
    threshold_exp = -(qp.dps + qp.guard + 1)
    with mp.workdps(dps + 10):
        alpha = _exact_mpf(g.alpha)
        beta = _exact_mpf(g.beta)
        nu = mp.mpf(qp.nu)
        hf = _exact_mpf(h)
        s0f = _exact_mpf(s0)
        log_g0 = _log_gc_sum(s0f, fe.shifts, dps).real
        log_two_pi = mp.log(2 * mp.pi)

        def env(m):
            t = m * hf
            z = mp.mpc(nu, t)
            tau_bound = mp.exp(alpha * (nu * nu - t * t)) * mp.cosh(beta * t)
            l1 = _log_gc_sum(s0f + z, fe.shifts, dps).real
            l2 = _log_gc_sum(1 - s0f + z, fe.shifts, dps).real
            pref = hf / (2 * mp.pi) / abs(z) * tau_bound
            return pref * (mp.exp(l1 - log_g0) + mp.exp(l2 - log_g0))

        M = int(Fraction(qp.trunc) / h)
        total = env(0)
        for m in range(1, M + 1):
            total += 2 * env(m)
        threshold = mp.mpf(10) ** threshold_exp
        extensions = 0
        while qp.auto_extend and env(M) > threshold:
            chunk = max(16, M // 4)
            for m in range(M + 1, M + chunk + 1):
                total += 2 * env(m)
            M += chunk
            extensions += 1
            if M * h > 600:
                raise PrecisionError(
                    "endpoint envelope still %s at |t| = %s; test function "
                    "decays too slowly for this quadrature"
                    % (mp.nstr(env(M)), mp.nstr(mp.mpf(M) * hf))
                )
        mag_digits = max(0, int(mp.ceil(mp.log10(total + 1))))
    return M, mag_digits


_weights_cache = {}


class _NodeWeights:
    __slots__ = ("M", "w1", "w2", "wp_bits", "tol", "scale", "t_eff", "work_dps")


def _node_weights(fe, s0, g, qp):
    """Weights W1_m, W2_m (m = -M..M, ascending) such that
    c(n) = Re( n^-(s0+nu) sum W1_m e^(-i m h ln n)
             + n^-(1-s0+nu) sum W2_m e^(-i m h ln n) )."""
    key = (fe.shifts, fe.sign, Fraction(s0), g, qp)
    cached = _weights_cache.get(key)
    if cached is not None:
        return cached
    g.check_admissible(fe.degree)
    M, mag = _envelope_extension(fe, s0, g, qp)
    work_dps = qp.dps + qp.guard + mag
    wp_bits = int(work_dps * 3.3219280948873626) + 24

    with mp.workprec(wp_bits + 30):
        alpha = _exact_mpf(g.alpha)
        beta = _exact_mpf(g.beta)
        nu = mp.mpf(qp.nu)
        hf = _exact_mpf(qp.step)
        s0f = _exact_mpf(s0)
        log_g0 = _log_gc_sum(s0f, fe.shifts, work_dps).real
        pref = hf / (2 * mp.pi)
        eps = fe.sign

        upper1 = [None] * (M + 1)
        upper2 = [None] * (M + 1)
        for m in range(M + 1):
            z = mp.mpc(nu, m * hf)
            tau = mp.exp(alpha * z * z) * mp.cos(beta * z)
            base = pref * tau / z
            l1 = _log_gc_sum(s0f + z, fe.shifts, work_dps)
            l2 = _log_gc_sum(1 - s0f + z, fe.shifts, work_dps)
            upper1[m] = base * mp.exp(l1 - log_g0)
            upper2[m] = eps * base * mp.exp(l2 - log_g0)

        old_ctx = gmpy2.get_context()
        try:
            gmpy2.set_context(gmpy2.context(precision=wp_bits))
            w1 = [None] * (2 * M + 1)
            w2 = [None] * (2 * M + 1)
            for m in range(M + 1):
                v1 = _to_mpc(upper1[m])
                v2 = _to_mpc(upper2[m])
                w1[M + m] = v1
                w2[M + m] = v2
                w1[M - m] = gmpy2.mpc(v1.real, -v1.imag)
                w2[M - m] = gmpy2.mpc(v2.real, -v2.imag)
            scale = gmpy2.mpfr(0)
            for v in w1:
                scale += abs(v)
            for v in w2:
                scale += abs(v)
        finally:
            gmpy2.set_context(old_ctx)

        nw = _NodeWeights()
        nw.M = M
        nw.w1 = tuple(w1)
        nw.w2 = tuple(w2)
        nw.wp_bits = wp_bits
        nw.work_dps = work_dps
        nw.tol = mp.mpf(10) ** (-(qp.dps + Fraction(qp.guard, 2)))
        nw.scale = _from_mpfr(scale)
        nw.t_eff = M * qp.step
    _weights_cache[key] = nw
    return nw


# ---------------------------------------------------------------------------
# coefficient computation


def _compute_entries(fe, s0, g, qp, n_values):
    """c(n) for each n in n_values, one beta row.  Raises PrecisionError
    if the imaginary residue check fails (caller handles retry)."""
    nw = _node_weights(fe, s0, g, qp)
    M = nw.M
    w1, w2 = nw.w1, nw.w2
    out = []
    old_ctx = gmpy2.get_context()
    try:
        gmpy2.set_context(gmpy2.context(precision=nw.wp_bits))
        hf = gmpy2.mpfr(qp.step.numerator) / qp.step.denominator
        s0q = Fraction(s0)
        e1 = gmpy2.mpfr(s0q.numerator) / s0q.denominator + qp.nu
        e2 = gmpy2.mpfr((1 - s0q).numerator) / (1 - s0q).denominator + qp.nu
        tol = _to_mpfr(nw.tol)
        for n in n_values:
            if n < 1:
                raise DomainError("coefficient index must be >= 1")
            ln_n = gmpy2.log(gmpy2.mpfr(n))
            u = gmpy2.exp(gmpy2.mpc(0, -hf * ln_n))
            osc = gmpy2.exp(gmpy2.mpc(0, M * hf * ln_n))
            s1 = gmpy2.mpc(0)
            s2 = gmpy2.mpc(0)
            for i in range(2 * M + 1):
                s1 += w1[i] * osc
                s2 += w2[i] * osc
                osc *= u
            value = gmpy2.exp(-e1 * ln_n) * s1 + gmpy2.exp(-e2 * ln_n) * s2
            if abs(value.imag) > tol:
                raise _ImResidueError(
                    "imaginary residue %s exceeds tolerance %s at n=%d"
                    % (value.imag, tol, n)
                )
            out.append(value.real)
    finally:
        gmpy2.set_context(old_ctx)
    with mp.workprec(nw.wp_bits):
        entries = tuple(+_from_mpfr(v) for v in out)
    return entries, nw


def _row(fe, s0, g, qp, n_values):
    try:
        entries, nw = _compute_entries(fe, s0, g, qp, n_values)
    except _ImResidueError:
        qp2 = replace(qp, dps=2 * qp.dps)
        try:
            entries, nw = _compute_entries(fe, s0, g, qp2, n_values)
        except _ImResidueError as second:
            raise PrecisionError(
                "imaginary residue check failed even at doubled precision: %s"
                % second
            )
    return CoefficientRow(
        fe=fe,
        s0=Fraction(s0),
        g=g,
        qp=qp,
        entries=entries,
        t_eff=Fraction(nw.t_eff),
        weight_scale=nw.scale,
    )


def afe_coefficient(fe, g, s0, n, qp):
    """The single coefficient c(n) for the given case and test function."""
    return _row(fe, s0, g, qp, [n]).entries[0]


def coefficient_matrix(fe, betas, s0, n_max, qp, alpha=Fraction(1, 1000)):
    """Rows of c_beta(n), n = 1..n_max, for each beta (shared alpha)."""
    if not betas:
        raise DomainError("need at least one beta")
    if n_max < 0:
        raise DomainError("n_max must be >= 0")
    seen = set()
    gs = []
    for b in betas:
        g = b if isinstance(b, TestFunction) else TestFunction(alpha=alpha, beta=b)
        if g.beta in seen:
            raise DomainError("duplicate beta %s" % g.beta)
        seen.add(g.beta)
        gs.append(g)
    ns = list(range(1, n_max + 1))
    rows = tuple(_row(fe, s0, g, qp, ns) for g in gs)
    return AfeCoefficientMatrix(fe=fe, s0=Fraction(s0), qp=qp, rows=rows)


# ---------------------------------------------------------------------------
# partial values with error radii


def _tail_bound_constants(fe, s0, g, qp, nu_t):
    """C1h, C2h with |c(n)| <= C1h n^-(s0+nu_t) + C2h n^-(1-s0+nu_t):
    the contour Re z = nu shifts right to nu_t without crossing poles,
    and the shifted sum is bounded by absolute values (times 2 for
    quadrature slack)."""
    dps = 15
    key = ("tail", fe.shifts, Fraction(s0), g, qp.step, nu_t)
    cached = _weights_cache.get(key)
    if cached is not None:
        return cached
    with mp.workdps(dps + 10):
        alpha = _exact_mpf(g.alpha)
        beta = _exact_mpf(g.beta)
        nu = mp.mpf(nu_t)
        hf = _exact_mpf(qp.step)
        s0f = _exact_mpf(s0)
        log_g0 = _log_gc_sum(s0f, fe.shifts, dps).real
        c1 = mp.mpf(0)
        c2 = mp.mpf(0)
        m = 0
        while True:
            t = m * hf
            z = mp.mpc(nu, t)
            tau_bound = mp.exp(alpha * (nu * nu - t * t)) * mp.cosh(beta * t)
            pref = hf / (2 * mp.pi) / abs(z) * tau_bound
            term1 = pref * mp.exp(_log_gc_sum(s0f + z, fe.shifts, dps).real - log_g0)
            term2 = pref * mp.exp(
                _log_gc_sum(1 - s0f + z, fe.shifts, dps).real - log_g0
            )
            mult = 1 if m == 0 else 2
            c1 += mult * term1
            c2 += mult * term2
            if m > 0 and (term1 + term2) < mp.mpf(10) ** -40 * (c1 + c2):
                break
            if m * hf > 600:
                break
            m += 1
        result = (+(2 * c1), +(2 * c2))
    _weights_cache[key] = result
    return result


def _divisor_count_bound(m, d, spf):
    out = 1
    while m > 1:
        p = spf[m]
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        out *= math.comb(e + d - 1, d - 1)
    return out


def partial_value(row, series, s0=None):
    """sum over known n of c(n) b_n / n^(w/2), with an error radius
    covering (a) unknown coefficients among n <= row.n_max, bounded by
    |known part| times the divisor-count bound on the unknown part,
    (b) the tail n > row.n_max via a rigorously shifted contour, and
    (c) the quadrature noise floor exp(-2 pi nu / h) on every term.
    """
    if s0 is not None and Fraction(s0) != row.s0:
        raise DomainError("s0 mismatch between row and argument")
    fe = row.fe
    if series.degree != fe.degree or series.weight != fe.weight:
        raise DomainError(
            "series (degree %d, weight %d) does not match case (%d, %d)"
            % (series.degree, series.weight, fe.degree, fe.weight)
        )
    qp = row.qp
    n_max = min(row.n_max, series.n_max)
    w = fe.weight
    work_dps = qp.dps + qp.guard + 10
    with mp.workdps(work_dps):
        half_w = mp.mpf(w) / 2
        known_abs = []  # |b_n^an| for known n (0 for unknown), index n
        value = mp.mpf(0)
        for n in range(1, n_max + 1):
            if n in series.known:
                b_an = mp.mpf(series.values[n - 1]) / mp.mpf(n) ** half_w
                value += row.entries[n - 1] * b_an
                known_abs.append(abs(b_an))
            else:
                known_abs.append(mp.mpf(0))

        # (a) unknown-coefficient bound
        from .primes import smallest_prime_factor_table

        spf = smallest_prime_factor_table(n_max)
        unknown = mp.mpf(0)
        abs_bound_sum = mp.mpf(0)  # sum over ALL n of the |b_n| bound used
        d = fe.degree
        for n in range(1, n_max + 1):
            if n in series.known:
                abs_bound_sum += known_abs[n - 1]
                continue
            m_known = 1
            r_bound = 1
            x = n
            while x > 1:
                p = spf[x]
                e = 0
                q = 1
                while x % p == 0:
                    x //= p
                    q *= p
                    e += 1
                if q in series.known:
                    m_known *= q
                else:
                    r_bound *= math.comb(e + d - 1, d - 1)
            if m_known == 1:
                b_bound = mp.mpf(r_bound)
            elif m_known in series.known:
                b_bound = known_abs[m_known - 1] * r_bound
            else:
                # known set not multiplicatively closed; stay conservative
                b_bound = mp.mpf(r_bound) * _divisor_count_bound(m_known, d, spf)
            unknown += abs(row.entries[n - 1]) * b_bound
            abs_bound_sum += b_bound

        # (b) rigorous tail beyond n_max: |b_n^an| <= d_d(n) and
        # sum_{n>N} d_d(n) n^-sigma <= zeta(2)^d N^-(sigma-2)
        nu_t = 25
        while min(row.s0 + nu_t, 1 - row.s0 + nu_t) < 3:
            nu_t += 5
        parts = row.components or ((mp.mpf(1), row),)
        c1h = mp.mpf(0)
        c2h = mp.mpf(0)
        for wj, rj in parts:
            a1, a2 = _tail_bound_constants(fe, row.s0, rj.g, qp, nu_t)
            c1h += abs(wj) * a1
            c2h += abs(wj) * a2
        s0f = _exact_mpf(row.s0)
        zeta2d = (mp.pi**2 / 6) ** d
        nmf = mp.mpf(n_max)
        tail = zeta2d * (
            c1h * nmf ** -(s0f + nu_t - 2) + c2h * nmf ** -(1 - s0f + nu_t - 2)
        )

        # (c) noise floor: rounding + step-size error on every c(n)
        noise_per_c = row.weight_scale * (
            mp.mpf(10) ** (-(qp.dps + qp.guard // 2))
            + 10 * mp.exp(-2 * mp.pi * qp.nu / _exact_mpf(qp.step))
        )
        noise = noise_per_c * abs_bound_sum

        radius = +(unknown + tail + noise)
        value = +value
    if row.components:
        desc = {
            "betas": [str(r.g.beta) for _, r in row.components],
            "weights": [mp.nstr(w, 12) for w, _ in row.components],
        }
    else:
        desc = {"beta": str(row.g.beta), "alpha": str(row.g.alpha)}
    metadata = {
        **desc,
        "s0": str(row.s0),
        "n_max": n_max,
        "n_known": sum(1 for n in range(1, n_max + 1) if n in series.known),
        "radius_unknown": mp.nstr(unknown, 6),
        "radius_tail": mp.nstr(tail, 6),
        "radius_noise": mp.nstr(noise, 6),
        "t_eff": str(row.t_eff),
    }
    return NumericResult(value=value, radius=radius, metadata=metadata)
