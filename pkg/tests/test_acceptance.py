"""Acceptance gate: one test (one PASS/FAIL line under `pytest -v`) per
advertised behaviour of the package.

Criteria 3 and 4 evaluate genuine L-values and need real genus-2
eigenvalue files, which are published separately from the reference
tables embedded here.  Point LCRIT_SIEGEL_DIR at a directory holding
them (j6k10.txt, j4k12.txt, j4k15.txt — format in the README) to run
those two; without the files they skip, and criterion 7's
always-runnable oracle suite stands in for the numerical claims.
Criteria 3 and 4 are also marked `slow` (hours at full precision) and
`external_data`.
"""

import os
import time
from fractions import Fraction

import mpmath as mp
import pytest

from lcrit import afe, cases, cli, euler, heckedata, weights
from lcrit.congruence import verify_example
from lcrit.errors import DomainError
from lcrit.hodge import elliptic_hodge_points, functional_equation
from lcrit.primes import primes_upto, smallest_prime_factor_table
from lcrit.rational import check_prediction, factor_string, factorize, identify_rational

DATA_DIR = os.environ.get("LCRIT_SIEGEL_DIR", "")


def _have(*names):
    return bool(DATA_DIR) and all(
        os.path.exists(os.path.join(DATA_DIR, n)) for n in names
    )


def _path(name):
    return os.path.join(DATA_DIR, name)


def truncates_to(value, printed):
    """True if `value` agrees with the printed decimal string to within
    half an ulp of its last displayed digit."""
    printed = printed.strip()
    target = mp.mpf(printed)
    mant = printed.lower().split("e")[0].lstrip("+-")
    frac_digits = len(mant.split(".")[1]) if "." in mant else 0
    exp = int(printed.lower().split("e")[1]) if "e" in printed.lower() else 0
    ulp = mp.mpf(10) ** (exp - frac_digits)
    return abs(value - target) <= ulp / 2 * mp.mpf("1.0000001")


@pytest.fixture(scope="module")
def fe_case3():
    return cases.case_spec(3).fe


# -- criterion 1: digit-exact beta = 0 coefficients ---------------------------

BETA0_PRINTED = {
    1: "1.24534",
    2: "0.53456",
    3: "0.26956",
    17: "0.000668572",
    101: "2.101e-10",
    181: "8.564e-14",
}

BETA32_PRINTED = {
    1: "1.87033",
    2: "0.93715",
    3: "0.01741",
    17: "0.009710",
    101: "-2.103e-8",
    181: "-9.442e-12",
}


def test_criterion_1_beta0_row_digit_exact(fe_case3):
    t0 = time.monotonic()
    qp = afe.QuadratureParams()  # D = 40, alpha = 1/1000, h = 1/5
    g = afe.TestFunction()  # beta = 0
    c1 = afe.afe_coefficient(fe_case3, g, 1, 1, qp)
    with mp.workdps(60):
        ref = mp.mpf("1.2453392504912166301069081878583745765950")
        assert abs(c1 - ref) / ref < mp.mpf(10) ** -34  # 35 significant digits
    for n, printed in BETA0_PRINTED.items():
        got = afe.afe_coefficient(fe_case3, g, 1, n, qp)
        assert truncates_to(got, printed), (n, mp.nstr(got, 10))
    assert time.monotonic() - t0 < 600  # well under the 10-minute target


def test_criterion_2_beta_three_halves_row(fe_case3):
    qp = afe.QuadratureParams()
    g = afe.TestFunction(beta=Fraction(3, 2))
    for n, printed in BETA32_PRINTED.items():
        got = afe.afe_coefficient(fe_case3, g, 1, n, qp)
        assert truncates_to(got, printed), (n, mp.nstr(got, 10))


# -- criteria 3 and 4: genuine L-values (external eigenvalue data) -------------


@pytest.mark.slow
@pytest.mark.external_data
@pytest.mark.skipif(
    not _have("j6k10.txt"),
    reason="needs j6k10.txt under LCRIT_SIEGEL_DIR; criterion 7 stands in",
)
def test_criterion_3_case3_lvalues_and_ratio():
    betas = [Fraction(i, 10) for i in range(31)]
    jobs = int(os.environ.get("LCRIT_JOBS", "1"))
    code, _, payload = cli.run_ratio(
        3, 1, 3, betas=betas, coeff_paths=[_path("j6k10.txt")], jobs=jobs
    )
    assert code == cli.EXIT_OK
    ident = payload["identification"]
    # 3^4 . 5^2 . 61 / 2^3
    assert (ident["numerator"], ident["denominator"]) == (123525, 8)
    refs = {
        1: ("1.798902826118603032455722772619", "6e-26"),
        3: ("1.105456887951321630369359341690", "3e-27"),
    }
    with mp.workdps(60):
        for block in payload["evaluations"]:
            ref, ref_radius = refs[block["t"]]
            value = mp.mpf(block["value"])
            radius = mp.mpf(block["radius"])
            assert abs(value - mp.mpf(ref)) <= radius + mp.mpf(ref_radius)
            # radius of comparable quality to the reference interval
            assert radius <= mp.mpf("1e-24"), block["t"]
    assert {p["prime"]: p["hit"] for p in payload["predictions"]} == {61: True}


@pytest.mark.slow
@pytest.mark.external_data
@pytest.mark.skipif(
    not _have("j4k12.txt", "j4k15.txt"),
    reason="needs j4k12.txt and j4k15.txt under LCRIT_SIEGEL_DIR; criterion 7 stands in",
)
def test_criterion_4_degree8_ratio_identifications():
    runs = [
        # case, t1, t2, file, expected ratio, expected prediction hits
        (1, 3, 5, "j4k12.txt", 698887, 72, {839: True, 17: True}),
        (1, 1, 3, "j4k12.txt", 4871097, 340, {71: True, 17: True}),
        (2, 1, 3, "j4k15.txt", 428098125, 10736, {61: True}),
    ]
    for case, t1, t2, fname, num, den, hits in runs:
        code, _, payload = cli.run_ratio(case, t1, t2, coeff_paths=[_path(fname)])
        assert code == cli.EXIT_OK, (case, t1, t2)
        ident = payload["identification"]
        assert (ident["numerator"], ident["denominator"]) == (num, den), (case, t1, t2)
        assert {p["prime"]: p["hit"] for p in payload["predictions"]} == hits


# -- criterion 5: congruence tables -------------------------------------------


def test_criterion_5_congruence_tables_exact():
    t0 = time.monotonic()
    expected = {3: (71, 6), 4: (61, 6), 5: (17, 4), 6: (37, 4)}
    for example, (q, n_rows) in expected.items():
        report = verify_example(example)
        assert report.passed, report.failures
        assert report.q == q
        assert len(report.rows) == n_rows
        for row in report.rows:
            assert row.value % q == 0
            assert row.factorization == factor_string(row.value)
    assert time.monotonic() - t0 < 1.0


# -- criterion 6: least-squares error reduction --------------------------------


def _zero_series(degree, weight, n_max, known_limit=179):
    """Synthetic series: b_1 = 1, every coefficient with all prime
    factors <= known_limit known (and zero), the rest unknown — the
    known-index structure of a table derived from small-prime
    eigenvalue data, with the values stripped out so only the error
    radius machinery is exercised."""
    spf = smallest_prime_factor_table(max(n_max, 2))

    def smooth(n):
        while n > 1:
            p = spf[n]
            if p > known_limit:
                return False
            while n % p == 0:
                n //= p
        return True

    known = frozenset(n for n in range(1, n_max + 1) if smooth(n))
    values = tuple(1 if n == 1 else 0 for n in range(1, n_max + 1))
    return euler.DirichletSeries(degree=degree, weight=weight, values=values, known=known)


FOURWEIGHTS_PRINTED = ("5.595844269", "-5.074113323", "0.484231975", "-0.0059629212")


def test_criterion_6_four_beta_error_reduction(fe_case3):
    qp = afe.QuadratureParams()
    betas = [Fraction(0), Fraction(1, 2), Fraction(1), Fraction(3, 2)]
    matrix = afe.coefficient_matrix(fe_case3, betas, 1, 2000, qp)
    series = _zero_series(8, 38, 2000)
    window, bounds = cases.default_window(series, 8, 500)
    sol = weights.solve_weights(matrix, window, bounds)
    assert mp.fsum(sol.weights) == 1  # exactly, not approximately
    for got, printed in zip(sol.weights, FOURWEIGHTS_PRINTED):
        ref = mp.mpf(printed)
        rel = abs(got - ref) / abs(ref)
        assert rel < 0.01, "weight %s vs reference %s (%.2f%% off)" % (
            mp.nstr(got, 11), printed, float(rel * 100),
        )
    single = afe.partial_value(matrix.row(0), series)
    combined = weights.combined_evaluation(matrix, sol, series)
    assert single.radius / combined.radius >= 50


# -- criterion 7: always-runnable oracle suite ---------------------------------


def test_criterion_7a_klingen_identity_to_1e4(tmp_path, klingen_table_text):
    # tensor(f16, Klingen lift of f16) must factor as
    # zeta(s-15) zeta(s-25) Sym^2(f16) Sym^2(f16)(-10): series built
    # through the production path vs a plain convolution of the pieces
    n_max = 10**4
    path = tmp_path / "j4k12.txt"
    path.write_text(klingen_table_text(16, 4, 12, 9973))
    table = heckedata.load_siegel_eigenvalues(str(path))
    series = cases.tensor_series(cases.case_spec(1), [table], n_max)
    assert len(series.known) == n_max  # lambda(p^2) present at every prime

    form = heckedata.elliptic_coefficients(16, n_max)
    ps = primes_upto(n_max)
    pieces = [
        euler.dirichlet_expand(
            {p: euler.zeta_local_factor(p, 15) for p in ps}, n_max, 1, 30),
        euler.dirichlet_expand(
            {p: euler.zeta_local_factor(p, 25) for p in ps}, n_max, 1, 50),
        euler.dirichlet_expand(
            {p: euler.sym2_local_factor(form.a(p), p, 16) for p in ps},
            n_max, 3, 30),
        euler.dirichlet_expand(
            {p: euler.tate_twist(euler.sym2_local_factor(form.a(p), p, 16), 10)
             for p in ps},
            n_max, 3, 50),
    ]
    acc = [0, 1] + [0] * (n_max - 1)
    for piece in pieces:
        vals = [0] + list(piece.values)
        out = [0] * (n_max + 1)
        for i in range(1, n_max + 1):
            if acc[i]:
                for j in range(1, n_max // i + 1):
                    out[i * j] += acc[i] * vals[j]
        acc = out
    for n in range(1, n_max + 1):
        assert series.b(n) == acc[n], n


def test_criterion_7b_tensor_matches_root_product_oracle():
    form = heckedata.elliptic_coefficients(16, 50)
    for p in primes_upto(50):
        a = euler.hecke_local_factor(form.a(p), p, 16)
        b = euler.klingen_spinor_factor(form.a(p), p, 16, 12)
        t = euler.tensor_local_factor(a, b)
        with mp.workdps(260):
            ra = mp.polyroots([mp.mpf(c) for c in reversed(a.coefficients)],
                              maxsteps=200, extraprec=400)
            rb = mp.polyroots([mp.mpf(c) for c in reversed(b.coefficients)],
                              maxsteps=200, extraprec=400)
            poly = [mp.mpf(1)]
            for x in ra:
                for y in rb:
                    root = 1 / (x * y)
                    poly = [u - root * v for u, v in zip(poly + [0], [0] + poly)]
            assert len(poly) == len(t.coefficients)
            for exact, approx in zip(t.coefficients, poly):
                err = abs(approx - exact) / max(1, abs(exact))
                assert err < mp.mpf(10) ** -30, (p, exact)


def test_criterion_7c_degree2_beta_independence():
    ell = 12
    fe = functional_equation(elliptic_hodge_points(ell))
    form = heckedata.elliptic_coefficients(ell, 2000)
    factors = {
        p: euler.hecke_local_factor(form.a(p), p, ell) for p in primes_upto(2000)
    }
    series = euler.dirichlet_expand(factors, 2000, 2, ell - 1)
    qp = afe.QuadratureParams(dps=38)
    values = []
    for beta in (Fraction(0), Fraction(1, 2), Fraction(1)):
        m = afe.coefficient_matrix(fe, [beta], 1, 2000, qp)
        values.append(afe.partial_value(m.rows[0], series).value)
    for other in values[1:]:
        assert abs(values[0] - other) < mp.mpf(10) ** -30


def test_criterion_7d_step_halving_stability(fe_case3):
    qp1 = afe.QuadratureParams()
    qp2 = afe.QuadratureParams(step=Fraction(1, 10))
    tol = mp.mpf(10) ** -(qp1.dps - 5)
    for n in (1, 5, 50):
        a = afe.afe_coefficient(fe_case3, afe.TestFunction(), 1, n, qp1)
        b = afe.afe_coefficient(fe_case3, afe.TestFunction(), 1, n, qp2)
        assert abs(a - b) < tol


def test_criterion_7e_rational_roundtrip_and_factorization():
    targets = [
        (123525, 8),
        (698887, 72),
        (4871097, 340),
        (428098125, 10736),
        (-4871097, 340),
        (22, 7),
        (1, 999983),
        (999999, 999997),
        (7, 1),
        (0, 1),
    ]
    for num, den in targets:
        with mp.workdps(80):
            value = mp.mpf(num) / den
        ident = identify_rational(value, mp.mpf("1e-30"), den_bound=10**6)
        assert ident.verdict == "identified", (num, den)
        assert (ident.numerator, ident.denominator) == (num, den)
        if num:
            reassembled = 1
            for p, e in ident.numerator_factors:
                reassembled *= p**e
            assert reassembled == abs(num)
        for p, e in ident.denominator_factors:
            assert den % p**e == 0
    # a wide interval must not pretend to identify
    loose = identify_rational(mp.mpf(22) / 7, mp.mpf("0.5"), den_bound=10**6)
    assert loose.verdict != "identified"
    # factorization reassembly and rendering round-trip
    for n in (2, 96, 6816, 5856, 24480, 8880, 2**31 - 1, 600851475143):
        prod = 1
        for p, e in factorize(n):
            prod *= p**e
        assert prod == n
        assert factor_string(n)
    with mp.workdps(80):
        value = mp.mpf(4871097) / 340
    ident = identify_rational(value, mp.mpf("1e-25"), den_bound=10**6)
    checks = check_prediction(ident, numerator_primes=(71, 13), denominator_primes=(17,))
    assert [(c["prime"], c["hit"]) for c in checks] == [
        (71, True), (13, False), (17, True),
    ]


# -- criterion 8: gamma shifts, sign, criticality ------------------------------


def test_criterion_8_gamma_shifts_and_critical_sets():
    spec3 = cases.case_spec(3)
    assert spec3.fe.shifts == (19, 11, 4, 4)
    assert spec3.fe.sign == +1
    spec4 = cases.case_spec(4)
    assert spec4.fe.critical_analytic == (-1, 0, 1, 2)
    cli._require_critical(spec4, 1, 2)  # accepted
    with pytest.raises(DomainError):
        cli._require_critical(spec4, 1, 3)  # 3 is outside the critical set
    with pytest.raises(DomainError):
        cli._require_critical(spec4, 3, 1)
