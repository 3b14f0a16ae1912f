import cmath
import csv
import io
import json
import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from arbotails import qseries as qs
from arbotails.acceptance import limit_8_18_real
from arbotails.asymptotics import (
    MultisumEvaluator,
    cubic_root,
    estimate_V,
    eval_hb,
    eval_series_at,
    fit_limit,
    function_log_evaluator,
    h_log_evaluator,
    hb_log_evaluator,
    li2,
    pi2_rational_test,
    reference_constants,
    root_of_unity_limit,
    schedule,
    series_log_evaluator,
    track_logs,
)
from arbotails.errors import FitError, InvalidArgument, NoConvergence
from arbotails.qseries import TruncatedSeries as S
from arbotails.tails import MultisumSpec, multisum

PI2 = math.pi ** 2


# --- dilogarithm ---------------------------------------------------------------------

def li2_series_oracle(z, terms=200000):
    """Plain sum z^n / n^2 with a geometric tail bound; only for |z| <= 1."""
    total, zn = 0j, 1 + 0j
    for n in range(1, terms + 1):
        zn *= z
        total += zn / (n * n)
    return total


def test_li2_special_values():
    assert li2(0) == 0
    assert abs(li2(1) - PI2 / 6) < 1e-15
    assert abs(li2(1) - li2_series_oracle(1)) < 1e-5
    catalan = 0.915965594177219015
    assert abs(li2(1j) - complex(-PI2 / 48, catalan)) < 1e-15
    assert abs(li2(1j) - li2_series_oracle(1j)) < 1e-9
    assert abs(li2(-1) + PI2 / 12) < 1e-15


@settings(max_examples=300)
@given(st.complex_numbers(max_magnitude=50, allow_nan=False, allow_infinity=False))
def test_li2_matches_mpmath(z):
    ref = complex(mpmath.polylog(2, z))
    assert abs(li2(z) - ref) <= 1e-13 * max(1, abs(ref))


@settings(max_examples=200)
@given(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False))
def test_li2_reflection(z):
    if abs(z) < 1e-3 or abs(1 - z) < 1e-3 or (z.imag == 0 and not 0 < z.real < 1):
        return
    lhs = li2(z) + li2(1 - z)
    rhs = PI2 / 6 - cmath.log(z) * cmath.log(1 - z)
    assert abs(lhs - rhs) < 1e-12 * max(1, abs(rhs))


def test_li2_on_the_cut_uses_the_lower_limit_convention():
    for x in (1.5, 2.0, 10.0):
        assert abs(li2(x) - complex(mpmath.polylog(2, x))) < 1e-13


def test_li2_high_precision():
    v = li2(0.3 + 0.4j, dps=50)
    with mpmath.workdps(50):
        assert abs(v - mpmath.polylog(2, mpmath.mpc(0.3, 0.4))) < mpmath.mpf(10) ** -45
    with pytest.raises(InvalidArgument):
        li2(complex("nan"))


# --- cubic roots and closed forms ----------------------------------------------------

def test_cubic_roots():
    x1, x2 = cubic_root("real"), cubic_root("complex_lower")
    assert abs(x1 - 0.5436890) < 5e-8
    assert abs(x2 - complex(-0.7718445, -1.115143)) < 1e-6
    for x in (x1, x2):
        assert abs(x ** 3 + x ** 2 + x - 1) <= 1e-14
    roots = mpmath.polyroots([1, 1, 1, -1])
    assert min(abs(complex(r) - x2) for r in roots) < 1e-14
    with pytest.raises(InvalidArgument):
        cubic_root("upper")


def test_reference_constants():
    ref = reference_constants()
    assert abs(ref["V1"] + 1.352936859) < 1e-9
    assert abs(ref["V2_85"] - complex(-14.12794, 3.177293)) < 1e-5
    assert abs(ref["V2_818"] - complex(-5.757269, 3.663862)) < 1e-6
    assert ref["pi2_over_3"] == PI2 / 3


def test_reference_constants_against_mpmath_dilog():
    with mpmath.workdps(40):
        x1 = mpmath.findroot(lambda x: x ** 3 + x ** 2 + x - 1, 0.5)
        v1 = -4 * mpmath.polylog(2, x1) + mpmath.polylog(2, x1 ** 2) - 2 * mpmath.log(x1) ** 2 + mpmath.pi ** 2 / 6
        ours = reference_constants(dps=40)["V1"]
        assert abs(ours - v1) < mpmath.mpf(10) ** -35


# --- evaluation near the unit circle ---------------------------------------------------

def test_eval_trivial_series():
    assert eval_series_at(S.one(10), 0.9 + 0.1j).value == 1


def test_eval_series_against_product():
    q = 0.6 + 0.2j
    ref = complex(mpmath.qp(q))
    assert abs(eval_series_at(qs.poch_infinite, q).value - ref) < 1e-12
    assert abs(eval_series_at(lambda n: qs.hb(3, n), q).value - ref) < 1e-12


def test_eval_cap_and_convergence():
    with pytest.raises(InvalidArgument):
        eval_series_at(qs.poch_infinite, 0.99)
    with pytest.raises(NoConvergence):
        eval_series_at(qs.poch_infinite, 0.96, max_order=64)


def test_even_h_tends_to_two_over_b():
    for b in (4, 6):
        assert abs(eval_hb(b, math.exp(-1e-4)) - 2 / b) < 1e-3


def test_odd_h_against_theta_asymptotic():
    # h_b(e^-h) ~ 2 sin(pi/b) sqrt(2 pi/(b h)) exp(-pi^2/(2 b h)); b = 3 is the Euler function
    h = 0.05
    for b in (3, 5):
        approx = 2 * math.sin(math.pi / b) * math.sqrt(2 * math.pi / (b * h)) * math.exp(-PI2 / (2 * b * h))
        val = float(mpmath.re(eval_hb(b, math.exp(-h), dps=40)))
        assert abs(val / approx - 1) < 0.02
    euler = float(mpmath.qp(mpmath.exp(-h)))
    assert abs(float(mpmath.re(eval_hb(3, math.exp(-h), dps=40))) / euler - 1) < 1e-12


def test_odd_h_asymptotic_with_quarter_turn_cosine_is_off_by_two():
    # the variant with cos(pi/12) in place of 2 sin(pi/3) misses by more than 2%
    h = 0.05
    val = float(mpmath.re(eval_hb(3, math.exp(-h), dps=40)))
    wrong = math.cos(math.pi / 12) * math.sqrt(2 * math.pi / (3 * h)) * math.exp(-PI2 / (6 * h))
    assert abs(val / wrong - 1) > 0.02


# --- fitting ------------------------------------------------------------------------

def test_schedule():
    hs = schedule(0.25 * math.pi, 0.2, 0.5, 3)
    assert [abs(h) for h in hs] == pytest.approx([0.2, 0.1, 0.05])
    assert all(abs(cmath.phase(h) - 0.25 * math.pi) < 1e-12 for h in hs)
    with pytest.raises(InvalidArgument):
        schedule(math.pi / 2, 0.2, 0.9, 3)
    with pytest.raises(InvalidArgument):
        schedule(0.0, 0.2, 1.0, 3)


def test_fit_recovers_planted_model():
    hs = schedule(0.3, 0.2, 0.9, 30)
    truth = {"V": -1.3 - 0.2j, "alpha": 0.5, "c1": 0.7 - 0.1j, "c2": -0.3, "c3": 0.05j}
    gs = [truth["V"] + truth["alpha"] * h * cmath.log(h) + truth["c1"] * h + truth["c2"] * h * h
          + truth["c3"] * h ** 3 for h in hs]
    coef, resid = fit_limit(hs, gs)
    for k, v in truth.items():
        assert abs(coef[k] - v) < 1e-8
    assert resid < 1e-12
    with pytest.raises(FitError):
        fit_limit(hs[:3], gs[:3])


def test_synthetic_evaluator():
    target = complex(-1.3, -0.2)
    est = estimate_V(h_log_evaluator(lambda h: cmath.exp(target / h) * h ** 0.5 * 2.7))
    assert abs(est.V - target) < 1e-8


def test_track_logs_follows_winding_phase():
    # f = exp(V/h) winds many times along a tilted ray; the tracked log is V/h
    # up to the fixed multiple of 2 pi i picked by the principal log at the start
    V = -2 + 3j
    hs = schedule(1.2, 0.2, 0.9, 30)
    logs = track_logs(h_log_evaluator(lambda h: cmath.exp(V / h)), hs)
    offset = logs[0] - V / hs[0]
    assert abs(offset.real) < 1e-12
    assert abs(offset.imag / (2 * math.pi) - round(offset.imag / (2 * math.pi))) < 1e-12
    assert all(abs(L - V / h - offset) < 1e-8 for L, h in zip(logs, hs))


def test_constant_function_has_zero_limit():
    est = estimate_V(function_log_evaluator(lambda q: 1.0), 0.3)
    assert abs(est.V) < 1e-12
    tau_est, _ = root_of_unity_limit(function_log_evaluator(lambda q: 1.0), 0.3)
    assert abs(tau_est.V) < 1e-12


def test_h4_has_bounded_limit():
    est = estimate_V(hb_log_evaluator(4), 0.0, M=4)
    assert abs(est.V) < 1e-6


def test_h3_limit_is_minus_pi2_over_6():
    est = estimate_V(hb_log_evaluator(3), 0.0)
    assert abs(est.V + PI2 / 6) < 1e-6


def test_series_evaluator_agrees_with_direct_sum():
    f = series_log_evaluator(lambda n: qs.hb(5, n))
    g = hb_log_evaluator(5)
    assert abs(f(0.5) - g(0.5)) < 1e-10


# --- the two knots --------------------------------------------------------------------

def test_eight_five_real_ray():
    est = estimate_V(MultisumEvaluator(MultisumSpec.pretzel(1, 1)), 0.0)
    assert abs(est.V - reference_constants()["V1"]) < 1e-4


def test_eight_eighteen_tilted_ray():
    est = estimate_V(MultisumEvaluator(MultisumSpec.eight_eighteen()), 0.45 * math.pi)
    assert abs(est.V - reference_constants()["V2_818"]) < 1e-2
    assert est.model_residual < 1e-5


def test_eight_eighteen_real_ray_is_minus_pi2_over_3():
    # the sum is exponentially small on the real ray, so the limit is negative
    est = limit_8_18_real()
    assert abs(est.V + PI2 / 3) < 1e-5
    verdict = pi2_rational_test(est.V, Dmax=100, tol=1e-5)
    assert verdict.is_likely and verdict.best == Fraction(-1, 3)


def test_eight_eighteen_values_are_small_on_the_real_ray():
    f = MultisumEvaluator(MultisumSpec.eight_eighteen())
    assert f(0.1).real < -30


def test_root_of_unity_parametrisations_agree_for_eight_eighteen():
    tau_est, h_est = root_of_unity_limit(
        MultisumEvaluator(MultisumSpec.eight_eighteen()), 0.45 * math.pi, h0=0.3, ratio=0.88, count=16
    )
    assert abs(tau_est.V - 1j * h_est.V / (2 * math.pi)) < 1e-2
    assert abs(h_est.V - reference_constants()["V2_818"]) < 1e-2


def test_root_of_unity_limit_for_eight_five():
    tau_est, h_est = root_of_unity_limit(
        MultisumEvaluator(MultisumSpec.pretzel(1, 1)), 0.45 * math.pi, h0=0.3, ratio=0.88, count=16
    )
    V2 = reference_constants()["V2_85"]
    assert abs(tau_est.V - 1j * V2 / (2 * math.pi)) < 5e-3
    assert abs(h_est.V - V2) < 2e-2


def test_multisum_evaluator_against_exact_series():
    spec = MultisumSpec.pretzel(1, 1)
    f = MultisumEvaluator(spec)
    h = 0.8 + 0.3j
    exact = eval_series_at(lambda n: multisum(spec, n), cmath.exp(-h)).value
    assert abs(f(h) - cmath.log(exact)) < 1e-10


# --- pi^2 Q heuristic -------------------------------------------------------------------

def test_pi2_examples():
    v = pi2_rational_test(PI2 / 3)
    assert v.is_likely and v.best == Fraction(1, 3)
    v = pi2_rational_test(reference_constants(dps=40)["V1"], Dmax=1000, tol=1e-8)
    assert not v.is_likely
    v = pi2_rational_test(0)
    assert v.is_likely and v.best == 0
    assert not pi2_rational_test(complex(PI2 / 3, 0.1)).is_likely


@given(st.integers(-50, 50), st.integers(1, 60))
def test_pi2_recovers_rationals(p, q):
    v = pi2_rational_test(PI2 * p / q, Dmax=100, tol=1e-10)
    assert v.is_likely and v.best == Fraction(p, q)


# --- serialisation ----------------------------------------------------------------------

def test_estimate_exports():
    est = estimate_V(hb_log_evaluator(3), 0.0, count=12)
    rows = list(csv.reader(io.StringIO(est.to_csv())))
    assert rows[0] == ["h_re", "h_im", "g_re", "g_im"]
    assert len(rows) == 13
    assert complex(float(rows[1][0]), float(rows[1][1])) == est.samples[0][0]
    verdict = pi2_rational_test(est.V, 100, 1e-5)
    data = json.loads(json.dumps(est.to_json(verdict)))
    assert data["V"] == [est.V.real, est.V.imag]
    assert data["verdict"]["best"] == "-1/6"
