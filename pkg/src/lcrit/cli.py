"""Command-line orchestration.

Two pipelines:

  lcrit ratio       coefficient data -> AFE evaluation at two critical
                    points -> normalised ratio with propagated radius ->
                    rational identification -> prediction check
  lcrit congruence  exact re-verification of one embedded congruence
                    example

Every report embeds the full parameter set needed to reproduce it
(contour nu, step h, truncation T, digits D, betas, weights), and
identical invocations produce byte-identical reports.  Structured
output follows the versioned schema "lcrit-report/1" (see README).

Exit codes: 0 success / identified; 2 ambiguous or failed
identification; 3 congruence failure; 4 input error.
"""

import dataclasses
import json
import os
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import click
import mpmath as mp

from . import afe, cases, weights
from .congruence import ratio_side, verify_example
from .errors import DomainError, LcritError, ParseError, PrecisionError
from .heckedata import load_siegel_eigenvalues
from .rational import check_prediction, factor_string, identify_rational

SCHEMA = "lcrit-report/1"

EXIT_OK = 0
EXIT_AMBIGUOUS = 2
EXIT_CONGRUENCE = 3
EXIT_INPUT = 4

ENV_DATA_DIR = "LCRIT_SIEGEL_DIR"

DEFAULT_BETAS = "0,1/2,1,3/2"
DEFAULT_PRECISION = 40
DEFAULT_PI_POWER = 8
DEFAULT_N_MAX = afe.N_DEFAULT
DEFAULT_WINDOW_MAX = 500
DEFAULT_DEN_BOUND = 10**6


# ---------------------------------------------------------------------------
# configuration files: plain-text key=value, '#' comments, flag overrides

_CONFIG_KEYS = (
    "case",
    "points",
    "pi-power",
    "precision",
    "betas",
    "coeff-file",
    "example",
    "den-bound",
    "n-max",
    "window-max",
    "jobs",
    "output",
)


def read_config(path):
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, eq, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if not eq or not key or not value:
                raise ParseError("expected 'key = value', got %r" % line, line=lineno)
            if key not in _CONFIG_KEYS:
                raise ParseError(
                    "unknown key %r (known: %s)" % (key, ", ".join(_CONFIG_KEYS)),
                    line=lineno,
                )
            values[key] = value
    return values


def _merge(flag, config, key, default):
    """Flag beats config file beats built-in default."""
    if flag is not None and flag != ():
        return flag
    if key in config:
        return config[key]
    return default


def _parse_int(text, name):
    try:
        return int(str(text))
    except ValueError:
        raise DomainError("%s must be an integer, got %r" % (name, text))


def _parse_points(text):
    parts = [p.strip() for p in str(text).split(",") if p.strip()]
    if len(parts) != 2:
        raise DomainError("--points needs exactly two comma-separated integers")
    return _parse_int(parts[0], "point"), _parse_int(parts[1], "point")


def _parse_betas(text):
    parts = [p.strip() for p in str(text).split(",") if p.strip()]
    if not parts:
        raise DomainError("--betas must list at least one value")
    out = []
    for part in parts:
        try:
            out.append(Fraction(part))
        except (ValueError, ZeroDivisionError):
            raise DomainError("bad beta %r (use fractions or decimals)" % part)
    if len(set(out)) != len(out):
        raise DomainError("duplicate beta values")
    return tuple(out)


def _parse_output(text):
    mode = str(text)
    if mode not in ("text", "structured"):
        raise DomainError("--output must be 'text' or 'structured', got %r" % mode)
    return mode


def _resolve_coeff_paths(spec, flag_paths, config):
    paths = [str(p) for p in flag_paths] if flag_paths else []
    if not paths and "coeff-file" in config:
        paths = [p.strip() for p in config["coeff-file"].split(",") if p.strip()]
    if not paths:
        data_dir = os.environ.get(ENV_DATA_DIR)
        if data_dir:
            paths = [os.path.join(data_dir, name) for name in spec.coefficient_files]
    if len(paths) != len(spec.coefficient_files):
        raise DomainError(
            "case %d needs %d eigenvalue file(s) (%s): pass --coeff-file "
            "per file or point %s at a directory containing them"
            % (
                spec.case,
                len(spec.coefficient_files),
                ", ".join(spec.coefficient_files),
                ENV_DATA_DIR,
            )
        )
    return paths


# ---------------------------------------------------------------------------
# ratio pipeline


def _require_critical(spec, t1, t2):
    critical = spec.fe.critical_analytic
    for t in (t1, t2):
        if t not in critical:
            raise DomainError(
                "%s not critical (critical points: %s)"
                % (t, ", ".join(str(c) for c in critical))
            )
    if t1 == t2:
        raise DomainError("the two points must be distinct")


def _beta_row(task):
    fe, g, s0, n_max, qp = task
    return afe.coefficient_matrix(fe, [g], s0, n_max, qp).rows[0]


def _coefficient_matrix(fe, betas, s0, n_max, qp, jobs):
    gs = [afe.TestFunction(beta=b) for b in betas]
    if jobs <= 1 or len(gs) == 1:
        return afe.coefficient_matrix(fe, gs, s0, n_max, qp)
    tasks = [(fe, g, s0, n_max, qp) for g in gs]
    with ProcessPoolExecutor(max_workers=min(jobs, len(gs))) as pool:
        rows = tuple(pool.map(_beta_row, tasks))
    return afe.AfeCoefficientMatrix(fe=fe, s0=Fraction(s0), qp=qp, rows=rows)


def _interval_ratio(numerator, denominator, pi_power, qp):
    """pi^pi_power * numerator/denominator on intervals (value, radius)."""
    with mp.workdps(qp.dps + qp.guard):
        a = numerator.value - numerator.radius
        b = numerator.value + numerator.radius
        c = denominator.value - denominator.radius
        d = denominator.value + denominator.radius
        if c <= 0 <= d:
            raise PrecisionError(
                "denominator interval [%s, %s] contains zero; cannot form the ratio"
                % (mp.nstr(c, 8), mp.nstr(d, 8))
            )
        quotients = (a / c, a / d, b / c, b / d)
        scale = mp.pi**pi_power
        lo = min(quotients) * scale
        hi = max(quotients) * scale
        # a few ulps of slack for the rounding of pi^m and the divisions
        slack = (abs(lo) + abs(hi)) * mp.mpf(10) ** (-(qp.dps + qp.guard - 5))
        value = (lo + hi) / 2
        radius = (hi - lo) / 2 + slack
    return value, radius


def run_ratio(
    case,
    t1,
    t2,
    pi_power=DEFAULT_PI_POWER,
    precision=DEFAULT_PRECISION,
    betas=None,
    coeff_paths=None,
    den_bound=DEFAULT_DEN_BOUND,
    n_max=DEFAULT_N_MAX,
    window_max=DEFAULT_WINDOW_MAX,
    jobs=1,
):
    """End-to-end ratio pipeline.  Returns (exit_code, text, payload)."""
    spec = cases.case_spec(case)
    betas = _parse_betas(DEFAULT_BETAS) if betas is None else tuple(betas)
    critical = spec.fe.critical_analytic
    _require_critical(spec, t1, t2)
    if not coeff_paths:
        raise DomainError("no coefficient files given")
    tables = [load_siegel_eigenvalues(path) for path in coeff_paths]
    series = cases.tensor_series(spec, tables, n_max)
    window, bounds = cases.default_window(series, spec.degree, window_max)
    qp = afe.QuadratureParams(dps=precision)

    evaluations = []
    results = {}
    for t in (t1, t2):
        qp_t = cases.quadrature_for_point(qp, t)
        matrix = _coefficient_matrix(spec.fe, betas, t, n_max, qp_t, jobs)
        if len(betas) > 1:
            if not window:
                raise DomainError(
                    "no unknown indices up to %d to fit weights against; "
                    "use a single beta or raise --window-max" % window_max
                )
            solution = weights.solve_weights(matrix, window, bounds)
            ws = solution.weights
        else:
            ws = (mp.mpf(1),)
        result = weights.combined_evaluation(matrix, ws, series)
        combined_t_eff = max(row.t_eff for row in matrix.rows)
        evaluations.append(
            {
                "t": t,
                "nu": qp_t.nu,
                "t_eff": str(combined_t_eff),
                "weights": [mp.nstr(w, precision) for w in ws],
                "value": mp.nstr(result.value, precision),
                "radius": mp.nstr(result.radius, 3),
            }
        )
        results[t] = result

    ratio_value, ratio_radius = _interval_ratio(
        results[t1], results[t2], pi_power, qp
    )
    ident = identify_rational(ratio_value, ratio_radius, den_bound=den_bound)

    predictions = []
    for pred in spec.predictions:
        side = ratio_side(pred, t1, t2)
        if side is None:
            continue
        if ident.verdict == "identified":
            if side == "numerator":
                hit = check_prediction(ident, numerator_primes=(pred.prime,))[0]["hit"]
            else:
                hit = check_prediction(ident, denominator_primes=(pred.prime,))[0]["hit"]
        else:
            hit = None
        predictions.append(
            {"prime": pred.prime, "side": side, "example": pred.example, "hit": hit}
        )

    payload = {
        "schema": SCHEMA,
        "mode": "ratio",
        "case": spec.case,
        "case_label": spec.label(),
        "degree": spec.degree,
        "weight": spec.fe.weight,
        "shifts": list(spec.fe.shifts),
        "sign": spec.fe.sign,
        "points": [t1, t2],
        "pi_power": pi_power,
        "parameters": {
            "precision": precision,
            "guard": qp.guard,
            "step": str(qp.step),
            "alpha": "1/1000",
            "betas": [str(b) for b in betas],
            "n_max": n_max,
            "window_max": window_max,
            "den_bound": den_bound,
        },
        "coefficients": {
            "files": [os.path.basename(p) for p in coeff_paths],
            "known": len(series.known),
            "window_size": len(window),
        },
        "evaluations": evaluations,
        "ratio": {
            "value": mp.nstr(ratio_value, precision),
            "radius": mp.nstr(ratio_radius, 3),
        },
        "identification": {
            "verdict": ident.verdict,
            "numerator": ident.numerator,
            "denominator": ident.denominator,
            "numerator_factors": (
                None
                if ident.numerator_factors is None
                else [list(pe) for pe in ident.numerator_factors]
            ),
            "denominator_factors": (
                None
                if ident.denominator_factors is None
                else [list(pe) for pe in ident.denominator_factors]
            ),
        },
        "predictions": predictions,
    }

    lines = []
    lines.append("case %d: %s" % (spec.case, spec.label()))
    lines.append(
        "degree %d, motivic weight %d, Gamma_C shifts (%s), sign %+d"
        % (
            spec.degree,
            spec.fe.weight,
            ", ".join(str(s) for s in spec.fe.shifts),
            spec.fe.sign,
        )
    )
    lines.append(
        "critical points (analytic): %s"
        % ", ".join(str(c) for c in critical)
    )
    lines.append(
        "coefficients: %s; known %d of %d, weight window %d unknown primes <= %d"
        % (
            ", ".join(os.path.basename(p) for p in coeff_paths),
            len(series.known),
            n_max,
            len(window),
            window_max,
        )
    )
    lines.append(
        "quadrature: D=%d, guard=%d, h=%s, alpha=1/1000"
        % (precision, qp.guard, qp.step)
    )
    lines.append("betas: %s" % ", ".join(str(b) for b in betas))
    for block in evaluations:
        lines.append("")
        lines.append(
            "point t=%s (nu=%s, T=%s):" % (block["t"], block["nu"], block["t_eff"])
        )
        lines.append("  weights: %s" % ", ".join(block["weights"]))
        lines.append(
            "  L(%s) = %s +- %s" % (block["t"], block["value"], block["radius"])
        )
    lines.append("")
    lines.append(
        "ratio pi^%d L(%d)/L(%d) = %s +- %s"
        % (pi_power, t1, t2, payload["ratio"]["value"], payload["ratio"]["radius"])
    )
    if ident.verdict == "identified":
        lines.append(
            "identification: identified as %d/%d" % (ident.numerator, ident.denominator)
        )
        lines.append("  numerator   %d = %s" % (ident.numerator, factor_string(ident.numerator)))
        lines.append(
            "  denominator %d = %s" % (ident.denominator, factor_string(ident.denominator))
        )
    elif ident.verdict == "ambiguous":
        lines.append(
            "identification: ambiguous (candidate %d/%d is not unique below "
            "denominator bound %d)" % (ident.numerator, ident.denominator, den_bound)
        )
    else:
        lines.append(
            "identification: none (no denominator <= %d fits the interval)" % den_bound
        )
    if predictions:
        lines.append("predictions:")
        for entry in predictions:
            if entry["hit"] is None:
                outcome = "not evaluated (identification %s)" % ident.verdict
            else:
                outcome = "hit" if entry["hit"] else "MISS"
            lines.append(
                "  %d expected in %s (congruence example %d): %s"
                % (entry["prime"], entry["side"], entry["example"], outcome)
            )
    text = "\n".join(lines)
    code = EXIT_OK if ident.verdict == "identified" else EXIT_AMBIGUOUS
    return code, text, payload


# ---------------------------------------------------------------------------
# congruence pipeline


def run_congruence(example_id):
    """Delegates to the congruence checker.  Returns (exit_code, text, payload)."""
    report = verify_example(example_id)
    payload = {
        "schema": SCHEMA,
        "mode": "congruence",
        "example": report.example,
        "q": report.q,
        "description": report.description,
        "pass": report.passed,
        "rows": report.records(),
        "failures": [dataclasses.asdict(f) for f in report.failures],
    }
    code = EXIT_OK if report.passed else EXIT_CONGRUENCE
    return code, report.table(), payload


# ---------------------------------------------------------------------------
# click wiring


@click.group()
def main():
    """Critical values of tensor-product L-functions: evaluation,
    rational identification, and congruence checks."""


@main.command("ratio")
@click.option("--config", "config_path", default=None, help="key=value config file")
@click.option("--case", "case_", default=None, help="case id (1-4)")
@click.option("--points", default=None, help="two analytic points, e.g. '1,3'")
@click.option("--pi-power", default=None, help="power of pi in the ratio (default 8)")
@click.option("--precision", default=None, help="target decimal digits D (default 40)")
@click.option("--betas", default=None, help="comma-separated test-function betas")
@click.option(
    "--coeff-file",
    "coeff_file",
    multiple=True,
    help="eigenvalue file (repeat for the degree-16 case)",
)
@click.option("--den-bound", default=None, help="denominator bound (default 10^6)")
@click.option("--n-max", default=None, help="coefficient cutoff N (default 20000)")
@click.option("--window-max", default=None, help="weight-window cutoff (default 500)")
@click.option("--jobs", default=None, help="parallel row evaluations (default 1)")
@click.option("--output", default=None, help="text | structured")
def ratio_command(
    config_path,
    case_,
    points,
    pi_power,
    precision,
    betas,
    coeff_file,
    den_bound,
    n_max,
    window_max,
    jobs,
    output,
):
    """Evaluate pi^m L(t1)/L(t2) and identify it as a rational."""
    config = read_config(config_path) if config_path else {}
    case_ = _merge(case_, config, "case", None)
    if case_ is None:
        raise DomainError("--case is required")
    points = _merge(points, config, "points", None)
    if points is None:
        raise DomainError("--points is required")
    t1, t2 = _parse_points(points)
    spec_case = _parse_int(case_, "--case")
    betas = _parse_betas(_merge(betas, config, "betas", DEFAULT_BETAS))
    mode = _parse_output(_merge(output, config, "output", "text"))
    spec = cases.case_spec(spec_case)
    _require_critical(spec, t1, t2)
    coeff_paths = _resolve_coeff_paths(spec, coeff_file, config)
    code, text, payload = run_ratio(
        spec_case,
        t1,
        t2,
        pi_power=_parse_int(_merge(pi_power, config, "pi-power", DEFAULT_PI_POWER), "--pi-power"),
        precision=_parse_int(
            _merge(precision, config, "precision", DEFAULT_PRECISION), "--precision"
        ),
        betas=betas,
        coeff_paths=coeff_paths,
        den_bound=_parse_int(
            _merge(den_bound, config, "den-bound", DEFAULT_DEN_BOUND), "--den-bound"
        ),
        n_max=_parse_int(_merge(n_max, config, "n-max", DEFAULT_N_MAX), "--n-max"),
        window_max=_parse_int(
            _merge(window_max, config, "window-max", DEFAULT_WINDOW_MAX), "--window-max"
        ),
        jobs=_parse_int(_merge(jobs, config, "jobs", 1), "--jobs"),
    )
    if mode == "structured":
        click.echo(json.dumps(payload, indent=2, sort_keys=True))
    else:
        click.echo(text)
    return code


@main.command("congruence")
@click.option("--config", "config_path", default=None, help="key=value config file")
@click.option("--example", default=None, help="congruence example id (3-6)")
@click.option("--output", default=None, help="text | structured")
def congruence_command(config_path, example, output):
    """Re-verify one embedded Hecke-eigenvalue congruence example."""
    config = read_config(config_path) if config_path else {}
    example = _merge(example, config, "example", None)
    if example is None:
        raise DomainError("--example is required")
    mode = _parse_output(_merge(output, config, "output", "text"))
    code, text, payload = run_congruence(_parse_int(example, "--example"))
    if mode == "structured":
        click.echo(json.dumps(payload, indent=2, sort_keys=True))
    else:
        click.echo(text)
    return code


def entry(argv=None):
    """Console entry point with the documented exit codes."""
    try:
        result = main(args=argv, standalone_mode=False)
        return result if isinstance(result, int) else EXIT_OK
    except click.exceptions.Exit as exc:  # --help and friends
        return exc.exit_code
    except click.UsageError as exc:
        click.echo("error: %s" % exc.format_message(), err=True)
        return EXIT_INPUT
    except click.Abort:
        return EXIT_INPUT
    except (LcritError, OSError) as exc:
        click.echo("error: %s" % exc, err=True)
        return EXIT_INPUT
