"""Certification pipeline for lower bounds on normalized gaps between zeros
of derivatives of Hardy's Z-function, conditional on the joint-moments
hypothesis.

Pipeline (all at l = 4):

1. From the exact coefficient ratios A(1..4) build the closed-form value

       X = (A*B*(C-D) + C*(B**2 + C*D - 2*B*D)) / (16*(B-C)*(C-D)),

2. derive the weight-polynomial parameters (v1, v2, v3) and lambda by
   matching coefficients in the quartic factorization

       t**8 - 4*v3*t**6 + 6*v2*t**4 - 4*v1*t**2 + lambda
           = (t**4 + s2*t**2 + s4)**2 - (s1*t**3 + s3*t)**2        (*)

   with s1 = tau1*X, s2 = tau2*X, s3 = tau3*X**2, s4 = tau4*X**2 and the
   tau's rational in A..D.  Everything up to here is exact rational
   arithmetic; lambda = s4**2 in particular is kept exact.

3. re-verify the derived parameters by two independent numerical routes:
   the log-form lambda equation

       integral_0^inf log(1 + g(u)/((2l-1)*lambda)) du/u**2 = l*pi,

   where g(u) = (2l-1) * sum_h C(l,h) v_h u**(2h) must be increasing on the
   positive axis, and the equivalent rational-integrand form whose value
   must be pi.  Sign conventions: (*) is used verbatim for extraction; the
   rational integrand carries all-plus signs in its denominator (the two
   polynomials are related by t**2 <-> -u**2), and the quadrature oracle
   below confirms that reading.

4. re-solve for X by bisection on the defining polynomial equation and
   compare with the closed form, check the bound sqrt(X) against the
   claimed threshold by exact rational comparison, and emit a certificate.

Because the closed-form map of steps 1-2 satisfies its own defining
equations identically in the input data, internal consistency alone cannot
detect a corrupted coefficient table; the certificate therefore also
cross-checks the table against the independently computed partition sums
(`data_integrity` check).

Quadrature contract: (0, inf) is mapped to (0, 1) by u = s/(1-s); panels
are integrated by an embedded Gauss-Legendre 7/15 pair, bisecting any panel
whose pair disagreement exceeds 1e-12 in absolute value; the whole run is
repeated with the initial uniform panel count doubled until two successive
estimates differ by less than the requested tolerance.  The log integrand
uses the limit log(1 + c*u**2)/u**2 -> c near u = 0.  Everything is
deterministic: repeated runs at fixed tolerances produce bit-identical
certificates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy.polynomial.legendre as _legendre

from .arith import Rational, binomial
from . import moments

DEFAULT_QUAD_TOL = 1e-8

PANEL_TOL = 1e-12
_MAX_PANEL_DEPTH = 52
_MAX_INITIAL_PANELS = 1024
_PANEL_BUDGET = 200_000  # panels per doubling round; hit only by divergent input
_ROUNDOFF = 1e-15  # panels cannot beat this relative to their own magnitude

# claimed thresholds for the certified bounds sqrt(X), by derivative order
THRESHOLDS: dict[int, Fraction] = {1: Fraction(198, 100), 2: Fraction(171, 100)}


class QuadratureError(Exception):
    """Raised when the doubling sequence fails to converge; carries the
    last achieved error estimate."""

    def __init__(self, message: str, achieved_error: float):
        super().__init__(f"{message} (achieved error estimate {achieved_error:.3e})")
        self.achieved_error = achieved_error


def _gauss_rule(order: int) -> tuple[tuple[float, ...], tuple[float, ...]]:
    nodes, weights = _legendre.leggauss(order)
    return tuple(nodes.tolist()), tuple(weights.tolist())


_NODES_LO, _WEIGHTS_LO = _gauss_rule(7)
_NODES_HI, _WEIGHTS_HI = _gauss_rule(15)


def _panel_estimates(
    f: Callable[[float], float], a: float, b: float
) -> tuple[float, float, float]:
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    hi = 0.0
    magnitude = 0.0
    for x, w in zip(_NODES_HI, _WEIGHTS_HI):
        value = f(mid + half * x)
        hi += w * value
        magnitude += w * abs(value)
    hi *= half
    magnitude *= half
    lo = half * sum(w * f(mid + half * x) for x, w in zip(_NODES_LO, _WEIGHTS_LO))
    return hi, abs(hi - lo), magnitude


def _adaptive_panel(
    f: Callable[[float], float], a: float, b: float, depth: int, state: list
) -> float:
    """state = [panels used, accumulated error estimate]."""
    state[0] += 1
    if state[0] > _PANEL_BUDGET:
        raise QuadratureError("panel budget exhausted before convergence", state[1])
    value, err, magnitude = _panel_estimates(f, a, b)
    if err <= max(PANEL_TOL, _ROUNDOFF * magnitude) or depth >= _MAX_PANEL_DEPTH:
        state[1] += err
        return value
    mid = 0.5 * (a + b)
    return (
        _adaptive_panel(f, a, mid, depth + 1, state)
        + _adaptive_panel(f, mid, b, depth + 1, state)
    )


def integrate_unit_interval(f: Callable[[float], float], tol: float = DEFAULT_QUAD_TOL) -> float:
    """Adaptive composite integration of f over (0, 1) per the module
    quadrature contract.  Endpoints are never evaluated (Gauss nodes are
    interior)."""
    previous = None
    achieved = math.inf
    panels = 4
    while panels <= _MAX_INITIAL_PANELS:
        state = [0, 0.0]
        total = 0.0
        for i in range(panels):
            total += _adaptive_panel(f, i / panels, (i + 1) / panels, 0, state)
        achieved = state[1]
        if previous is not None and abs(total - previous) < tol:
            return total
        previous = total
        panels *= 2
    raise QuadratureError("panel doubling did not converge", achieved)


_ALMOST_ONE = math.nextafter(1.0, 0.0)


def integrate_half_line(f: Callable[[float], float], tol: float = DEFAULT_QUAD_TOL) -> float:
    """Integral of f over (0, inf) via the map u = s/(1-s)."""

    def mapped(s: float) -> float:
        # Gauss nodes are interior; s can still round onto an endpoint for
        # extremely deep panels, so clamp back into the open interval.
        if s >= 1.0:
            s = _ALMOST_ONE
        w = 1.0 - s
        return f(s / w) / (w * w)

    return integrate_unit_interval(mapped, tol)


@dataclass(frozen=True)
class WirtingerParams:
    """Parameters (v_1 .. v_{l-1}, lambda) of the weight polynomial
    g(u) = (2l-1) * sum_{h=1}^{l} C(l,h) v_h u**(2h), with v_l = 1 implicit."""

    l: int
    v: tuple[float, ...]
    lam: float

    def __post_init__(self) -> None:
        if len(self.v) != self.l - 1:
            raise ValueError(f"expected {self.l - 1} v-values, got {len(self.v)}")

    def v_full(self) -> tuple[float, ...]:
        """(v_1, ..., v_l) with the implicit v_l = 1 appended."""
        return self.v + (1.0,)


def g_eval(params: WirtingerParams, u: float) -> float:
    """g(u) = (2l-1) * sum_h C(l,h) v_h u**(2h)."""
    l = params.l
    acc = 0.0
    for h, vh in enumerate(params.v_full(), start=1):
        acc += binomial(l, h) * vh * u ** (2 * h)
    return (2 * l - 1) * acc


def _g_derivative(params: WirtingerParams, u: float) -> float:
    l = params.l
    acc = 0.0
    for h, vh in enumerate(params.v_full(), start=1):
        acc += 2 * h * binomial(l, h) * vh * u ** (2 * h - 1)
    return (2 * l - 1) * acc


def g_decrease_witness(params: WirtingerParams) -> float | None:
    """A point u in [1e-6, 1e6] with g'(u) < 0, or None if the geometric
    grid finds no sign violation."""
    for i in range(481):
        u = 10.0 ** (-6.0 + 12.0 * i / 480.0)
        if _g_derivative(params, u) < 0.0:
            return u
    return None


def g_is_increasing(params: WirtingerParams) -> bool:
    """True when all v_h >= 0 (sufficient condition); otherwise a geometric
    grid scan of g' over [1e-6, 1e6] decides."""
    if all(vh >= 0.0 for vh in params.v_full()):
        return True
    return g_decrease_witness(params) is None


def _log_residual_from_coeffs(
    coeffs: Sequence[float], lam: float, l: int, quad_tol: float
) -> float:
    """integral_0^inf log(1 + P(u**2)/lam) du/u**2  -  l*pi, where
    P(y) = sum_h coeffs[h-1] * y**h (coeffs[h-1] = C(l,h) v_h for the
    standard weight polynomial)."""
    if lam <= 0.0:
        raise ValueError(f"lambda must be positive, got {lam}")
    c = tuple(float(x) for x in coeffs)

    def integrand(u: float) -> float:
        y = u * u
        # P(y)/y, stable as u -> 0: equals c[0] + c[1] y + ...
        p_over_y = 0.0
        for ck in reversed(c[1:]):
            p_over_y = (p_over_y + ck) * y
        p_over_y += c[0]
        w = p_over_y * y / lam
        if w > 1e-8:
            return math.log1p(w) / y
        # log1p(w)/w -> 1; avoids 0/0 at the origin
        return (p_over_y / lam) * (1.0 - 0.5 * w + w * w / 3.0)

    return integrate_half_line(integrand, quad_tol) - l * math.pi


def lambda_equation_residual(
    params: WirtingerParams, quad_tol: float = DEFAULT_QUAD_TOL
) -> float:
    """Residual of the log-form lambda equation at the given parameters.

    Strictly decreasing in lambda (the integrand is), which is what makes
    bisection in `solve_lambda` certified.
    """
    l = params.l
    coeffs = [binomial(l, h) * vh for h, vh in enumerate(params.v_full(), start=1)]
    return _log_residual_from_coeffs(coeffs, params.lam, l, quad_tol)


def solve_lambda(
    v: Sequence[float], l: int, tol: float = 1e-6, quad_tol: float = DEFAULT_QUAD_TOL
) -> float:
    """The unique root of the lambda equation for the weight polynomial with
    parameters v (length l-1, v_l = 1 implicit), by bracket expansion and
    bisection on the monotone residual."""
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    coeffs = [
        binomial(l, h) * float(vh)
        for h, vh in enumerate(tuple(v) + (1.0,), start=1)
    ]

    def residual(lam: float) -> float:
        return _log_residual_from_coeffs(coeffs, lam, l, quad_tol)

    lo = hi = 1.0
    r = residual(1.0)
    if r > 0.0:  # residual decreasing: root above
        while residual(hi) > 0.0:
            hi *= 8.0
            if hi > 1e6:
                raise ValueError("no sign change for lambda in (1, 1e6]")
    else:
        while residual(lo) < 0.0:
            lo /= 8.0
            if lo < 1e-6:
                raise ValueError("no sign change for lambda in [1e-6, 1)")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if residual(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def rational_form_deviation(
    params: WirtingerParams, quad_tol: float = DEFAULT_QUAD_TOL
) -> float:
    """Deviation from pi of the rational-integrand form of the lambda
    equation,

        integral_{-inf}^{inf}
            (sum_h C(l-1,h-1) v_h u**(2h-2))
          / (sum_h C(l,h)   v_h u**(2h) + lambda)  du   -   pi,

    evaluated as twice the half-line integral (the integrand is even)."""
    l = params.l
    lam = params.lam
    v_full = params.v_full()
    num_coeffs = [binomial(l - 1, h - 1) * v_full[h - 1] for h in range(1, l + 1)]
    den_coeffs = [binomial(l, h) * v_full[h - 1] for h in range(1, l + 1)]

    def integrand(u: float) -> float:
        y = u * u
        num = 0.0
        for c in reversed(num_coeffs):
            num = num * y + c
        den = 0.0
        for c in reversed(den_coeffs):
            den = (den + c) * y
        return num / (den + lam)

    return 2.0 * integrate_half_line(integrand, quad_tol) - math.pi


def closed_form_x(a: Rational, b: Rational, c: Rational, d: Rational) -> Rational:
    """Closed-form optimizer value

        X = (a*b*(c-d) + c*(b**2 + c*d - 2*b*d)) / (16*(b-c)*(c-d)),

    exact.  Degenerate denominators are rejected by exact comparison."""
    a, b, c, d = Fraction(a), Fraction(b), Fraction(c), Fraction(d)
    if b == c or c == d:
        raise ValueError("degenerate ratio data: need b != c and c != d")
    return (a * b * (c - d) + c * (b * b + c * d - 2 * b * d)) / (16 * (b - c) * (c - d))


@dataclass(frozen=True)
class DerivedParams:
    """Exact parameter set extracted from the quartic factorization (*),
    plus its float view."""

    params: WirtingerParams
    v_exact: tuple[Rational, Rational, Rational]
    lam_exact: Rational
    tau: tuple[Rational, Rational, Rational, Rational]
    sigma: tuple[Rational, Rational, Rational, Rational]


def derive_params(
    a: Rational, b: Rational, c: Rational, d: Rational, x: Rational
) -> DerivedParams:
    """Derive (v1, v2, v3, lambda) from the ratio data and X by equating
    coefficients in the factorization (*):

        v3 = (s1**2 - 2*s2)/4,  v2 = (s2**2 + 2*s4 - 2*s1*s3)/6,
        v1 = (s3**2 - 2*s2*s4)/4,  lambda = s4**2.

    These closed forms are validated, not trusted: tests expand both sides
    of (*) exactly, and the certificate re-verifies lambda and X by
    independent quadrature and root finding.
    """
    a, b, c, d, x = (Fraction(t) for t in (a, b, c, d, x))
    if b == c or c == d:
        raise ValueError("degenerate ratio data: need b != c and c != d")
    if c == 0 or d == 0:
        raise ValueError("degenerate ratio data: need c != 0 and d != 0")
    if x <= 0:
        raise ValueError(f"x must be positive, got {x}")
    tau1 = (4 * c - 4 * d) / (d * (b - c))
    tau2 = (b - d) / (d * (b - c))
    tau3 = (4 * c - 4 * d) / (c * d * (b - c))
    tau4 = (c - d) / (c * d * (b - c))
    s1, s2, s3, s4 = tau1 * x, tau2 * x, tau3 * x * x, tau4 * x * x
    v3 = (s1 * s1 - 2 * s2) / 4
    v2 = (s2 * s2 + 2 * s4 - 2 * s1 * s3) / 6
    v1 = (s3 * s3 - 2 * s2 * s4) / 4
    lam = s4 * s4
    params = WirtingerParams(l=4, v=(float(v1), float(v2), float(v3)), lam=float(lam))
    return DerivedParams(
        params=params,
        v_exact=(v1, v2, v3),
        lam_exact=lam,
        tau=(tau1, tau2, tau3, tau4),
        sigma=(s1, s2, s3, s4),
    )


def factorization_residuals(derived: DerivedParams) -> tuple[Rational, ...]:
    """Exact coefficient differences (t**8, t**6, t**4, t**2, 1) between the
    two sides of the factorization (*) at the derived values; all zero iff
    the extraction is consistent."""
    v1, v2, v3 = derived.v_exact
    lam = derived.lam_exact
    s1, s2, s3, s4 = derived.sigma
    lhs = (Fraction(1), -4 * v3, 6 * v2, -4 * v1, lam)
    rhs = (
        Fraction(1),
        2 * s2 - s1 * s1,
        s2 * s2 + 2 * s4 - 2 * s1 * s3,
        2 * s2 * s4 - s3 * s3,
        s4 * s4,
    )
    return tuple(p - q for p, q in zip(lhs, rhs))


def solve_x(
    v: Sequence[float],
    lam: float,
    ratios: Mapping[int, Rational | float],
    l: int,
    tol: float = DEFAULT_QUAD_TOL,
) -> float:
    """The unique positive root of

        sum_{h=1}^{l} (2l-1)/(2h-1) * C(l,h) * B(h) * v_h * X**h
            = (2l-1) * lambda * B(0),

    by bisection; the left side is strictly increasing from 0 when all
    v_h >= 0 and all B(h) > 0."""
    v_full = tuple(float(t) for t in v) + (1.0,)
    if any(t < 0.0 for t in v_full):
        raise ValueError("solve_x requires all v_h >= 0")
    capB = {h: float(ratios[h]) for h in range(l + 1)}
    if any(t <= 0.0 for t in capB.values()):
        raise ValueError("solve_x requires all ratios positive")
    if lam <= 0.0:
        raise ValueError(f"lambda must be positive, got {lam}")
    rhs = (2 * l - 1) * lam * capB[0]

    def lhs(xv: float) -> float:
        return sum(
            (2 * l - 1) / (2 * h - 1) * binomial(l, h) * capB[h] * v_full[h - 1] * xv**h
            for h in range(1, l + 1)
        )

    lo, hi = 0.0, 1.0
    while lhs(hi) - rhs < 0.0:
        hi *= 2.0
        if hi > 1e3:
            raise ValueError("no sign change for X in (0, 1e3]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if lhs(mid) - rhs < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    residual: float

    def to_json_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "residual": repr(self.residual)}


@dataclass(frozen=True)
class BoundCertificate:
    """Full audit trail of one certification run."""

    n: int
    a: Rational
    b: Rational
    c: Rational
    d: Rational
    x_exact: Rational
    x_value: float
    params: WirtingerParams
    v_exact: tuple[Rational, Rational, Rational]
    lam_exact: Rational
    checks: tuple[CheckResult, ...]
    bound: float
    threshold: Rational
    quad_tol: float
    notes: tuple[str, ...] = ()

    @property
    def valid(self) -> bool:
        return all(check.passed for check in self.checks)

    def to_json_dict(self) -> dict:
        def frac(q: Rational) -> str:
            return f"{q.numerator}/{q.denominator}"

        return {
            "derivative_order": self.n,
            "inputs": {k: frac(v) for k, v in zip("abcd", (self.a, self.b, self.c, self.d))},
            "x_exact": frac(self.x_exact),
            "x_value": repr(self.x_value),
            "v": [repr(t) for t in self.params.v],
            "v_exact": [frac(t) for t in self.v_exact],
            "lambda": repr(self.params.lam),
            "lambda_exact": frac(self.lam_exact),
            "checks": [check.to_json_dict() for check in self.checks],
            "bound": repr(self.bound),
            "threshold": frac(self.threshold),
            "quad_tol": repr(self.quad_tol),
            "valid": self.valid,
            "notes": list(self.notes),
        }


def _integrity_checks(
    n: int, coefficients: Mapping[int, Rational]
) -> tuple[CheckResult, tuple[str, ...]]:
    """Cross-check the coefficient data against the independently computed
    partition sums.  For n = 1 every entry is reproducible; for n = 2 only
    the h = 0 entry has an independent anchor (it equals the h = 4 value of
    the n = 1 column), and the rest of the column is trusted transcription.
    """
    notes: tuple[str, ...] = ()
    if n == 1:
        mismatches = [
            h for h in range(5)
            if Fraction(coefficients[h]) != moments.joint_moment_coefficient(h, 4)
        ]
        passed = not mismatches
        residual = float(len(mismatches))
    elif n == 2:
        passed = Fraction(coefficients[0]) == moments.joint_moment_coefficient(4, 4)
        residual = 0.0 if passed else 1.0
        notes = (
            "n=2 column verified only at its h=0 anchor; h=1..4 are reference data",
        )
    else:
        raise ValueError(f"certification supports n in {{1, 2}}, got {n}")
    return CheckResult("data_integrity", passed, residual), notes


def certify_bound(
    n: int,
    quad_tol: float = DEFAULT_QUAD_TOL,
    coefficients: Mapping[int, Rational] | None = None,
) -> BoundCertificate:
    """Run the full pipeline for derivative order n in {1, 2} and return the
    certificate.

    Check thresholds derive from quad_tol: the lambda solver must agree
    within 1e4*quad_tol, the rational-form integral must sit within
    1e2*quad_tol of pi, and the bisection root must agree with the closed
    form within 10*quad_tol.  `coefficients` overrides the reference table
    (used by corruption tests); overrides are still held to the integrity
    cross-check.
    """
    if n not in THRESHOLDS:
        raise ValueError(f"certification supports n in {{1, 2}}, got {n}")
    if coefficients is None:
        coefficients = moments.coefficient_column(n)
    integrity, notes = _integrity_checks(n, coefficients)

    ratios = moments.ratio_set_from_values(coefficients, n=n)
    a, b, c, d = (ratios.A[h] for h in range(1, 5))
    x_exact = closed_form_x(a, b, c, d)
    x_value = float(x_exact)
    derived = derive_params(a, b, c, d, x_exact)
    params = derived.params

    checks = [integrity]

    v_positive = all(t > 0 for t in derived.v_exact)
    checks.append(
        CheckResult("v_positive", v_positive, float(min(derived.v_exact)))
    )
    checks.append(
        CheckResult("g_increasing", g_is_increasing(params), 0.0)
    )

    lam_tol = 1e4 * quad_tol
    pi_tol = 1e2 * quad_tol
    x_tol = 10 * quad_tol

    if v_positive:
        lam_solved = solve_lambda(params.v, params.l, tol=quad_tol, quad_tol=quad_tol)
        lam_gap = abs(lam_solved - params.lam)
        checks.append(CheckResult("lambda_consistency", lam_gap < lam_tol, lam_gap))

        pi_gap = rational_form_deviation(params, quad_tol)
        checks.append(CheckResult("pi_integral", abs(pi_gap) < pi_tol, pi_gap))

        x_solved = solve_x(params.v, params.lam, ratios.capB, params.l, tol=quad_tol)
        x_gap = abs(x_solved - x_value)
        checks.append(CheckResult("x_consistency", x_gap < x_tol, x_gap))
    else:  # the numeric re-verification assumes a monotone weight polynomial
        checks.append(CheckResult("lambda_consistency", False, math.inf))
        checks.append(CheckResult("pi_integral", False, math.inf))
        checks.append(CheckResult("x_consistency", False, math.inf))

    threshold = THRESHOLDS[n]
    above = x_exact > threshold * threshold  # exact rational comparison
    checks.append(
        CheckResult("bound_above_threshold", above, float(x_exact - threshold * threshold))
    )

    return BoundCertificate(
        n=n,
        a=a,
        b=b,
        c=c,
        d=d,
        x_exact=x_exact,
        x_value=x_value,
        params=params,
        v_exact=derived.v_exact,
        lam_exact=derived.lam_exact,
        checks=tuple(checks),
        bound=math.sqrt(x_value),
        threshold=threshold,
        quad_tol=quad_tol,
        notes=notes,
    )


def perturbed_x_values(
    n: int, rel: float = 0.01, quad_tol: float = DEFAULT_QUAD_TOL
) -> list[float]:
    """X recomputed after perturbing each derived v_h by +-rel (lambda
    re-solved each time).  Used to confirm the certified point is a local
    non-improvement: no perturbation should beat the certified X beyond
    tolerance."""
    certificate = certify_bound(n, quad_tol)
    ratios = moments.ratio_set_from_values(moments.coefficient_column(n), n=n)
    base_v = certificate.params.v
    out = []
    for h in range(len(base_v)):
        for direction in (1.0 - rel, 1.0 + rel):
            v = tuple(
                base_v[i] * direction if i == h else base_v[i]
                for i in range(len(base_v))
            )
            lam = solve_lambda(v, certificate.params.l, tol=quad_tol, quad_tol=quad_tol)
            out.append(solve_x(v, lam, ratios.capB, certificate.params.l, tol=quad_tol))
    return out
