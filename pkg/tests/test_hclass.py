import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hmercer.errors import ConfigError, DomainError, NonNegativityError
from hmercer.hclass import (
    EPS,
    HFamily,
    Tolerance,
    certify,
    check_h_convex,
    check_lemma_condition,
    check_lemma_condition_at,
    check_submultiplicative,
    check_supermultiplicative,
    check_weight_condition,
)
from hmercer.objective import ObjectiveSpec

SQ = ObjectiveSpec.expression("x^2")
SQRT = ObjectiveSpec.expression("sqrt(x)")


def test_identity_equals_power_one():
    t = np.linspace(EPS, 1.0, 101)
    assert np.array_equal(HFamily.identity().many(t), HFamily.power(1.0).many(t))


def test_h_domain():
    h = HFamily.reciprocal()
    assert h(0.25) == 4.0
    with pytest.raises(DomainError):
        h(0.0)
    with pytest.raises(DomainError):
        h(1.5)
    assert HFamily.custom("x^2", domain=(0.0, 2.0))(1.5) == 2.25


@pytest.mark.parametrize("bad", [lambda: HFamily.power(0), lambda: HFamily.constant(-1), lambda: HFamily("sine")])
def test_bad_families(bad):
    with pytest.raises(ConfigError):
        bad()


# supermultiplicativity ---------------------------------------------------------


def test_supermultiplicative_identity():
    v = check_supermultiplicative(HFamily.identity())
    assert v.passed and v.worst_margin == 0.0 and v.witness


def test_supermultiplicative_constant_two_fails_everywhere():
    v = check_supermultiplicative(HFamily.constant(2.0))
    assert not v.passed
    assert v.worst_margin == -2.0
    # tightest point is the first grid pair when every margin ties
    assert v.witness == (EPS, EPS)


def test_supermultiplicative_power_half():
    v = check_supermultiplicative(HFamily.power(0.5))
    assert v.passed and abs(v.worst_margin) <= 1e-12


def test_submultiplicative_reciprocal():
    v = check_submultiplicative(HFamily.reciprocal())
    assert v.passed and abs(v.worst_margin) <= 1e-12


def test_submultiplicative_constant_half_fails():
    v = check_submultiplicative(HFamily.constant(0.5))
    assert not v.passed
    assert v.worst_margin == pytest.approx(0.25 - 0.5)


@pytest.mark.parametrize(
    "h", [HFamily.identity(), HFamily.power(0.3), HFamily.power(1.0), HFamily.reciprocal(), HFamily.constant(1.0)]
)
def test_multiplicative_families_pass_both(h):
    for check in (check_supermultiplicative, check_submultiplicative):
        v = check(h)
        assert v.passed
        assert abs(v.worst_margin) <= 1e-12 * max(1.0, v.tolerance / 1e-9)


def test_supermultiplicative_checks_are_deterministic():
    h = HFamily.custom("x^2 + 0.1*x")
    check_supermultiplicative.cache_clear()
    a = check_supermultiplicative(h, 33)
    check_supermultiplicative.cache_clear()
    b = check_supermultiplicative(h, 33)
    assert a == b


def test_grid_too_small():
    with pytest.raises(ConfigError):
        check_supermultiplicative(HFamily.identity(), 1)


# lemma condition -------------------------------------------------------------


def test_lemma_identity():
    v = check_lemma_condition(HFamily.identity())
    assert v.passed and abs(v.worst_margin) <= 1e-15


def test_lemma_power_half_fails_at_midpoint():
    # odd grid so that alpha = 1/2 is a grid point
    v = check_lemma_condition(HFamily.power(0.5), 65)
    assert not v.passed
    assert v.witness == pytest.approx((0.5, 0.5), abs=1e-15)
    assert v.worst_margin == pytest.approx(1.0 - math.sqrt(2.0), abs=1e-15)


def test_lemma_reciprocal_reversed():
    v = check_lemma_condition(HFamily.reciprocal(), 65, direction=">=1")
    assert v.passed
    # 1/a + 1/(1-a) >= 4, minimum at a = 1/2
    assert v.worst_margin == pytest.approx(3.0, abs=1e-12)
    assert v.witness == pytest.approx((0.5, 0.5), abs=1e-15)


def test_lemma_realized_pairs_skip_endpoints():
    v = check_lemma_condition_at(HFamily.power(0.5), [1.0, 0.0])
    assert v.passed and v.worst_margin == math.inf
    v = check_lemma_condition_at(HFamily.power(0.5), [1.0, 0.25, 0.0])
    assert not v.passed
    assert v.worst_margin == pytest.approx(1 - 0.5 - math.sqrt(0.75))


# weight condition ------------------------------------------------------------


@given(st.lists(st.floats(min_value=1e-3, max_value=1e3), min_size=2, max_size=10))
def test_weight_condition_identity(ws):
    v = check_weight_condition(HFamily.identity(), ws)
    assert v.passed and abs(v.worst_margin) <= 1e-15


def test_weight_condition_power_half_fails():
    v = check_weight_condition(HFamily.power(0.5), [1, 1])
    assert not v.passed
    assert v.detail["sum"] == pytest.approx(math.sqrt(2.0), abs=1e-15)


def test_weight_condition_power_two_passes():
    v = check_weight_condition(HFamily.power(2.0), [1, 1])
    assert v.passed
    assert v.detail["sum"] == 0.5
    assert v.worst_margin == 0.5


def test_weight_condition_reversed():
    v = check_weight_condition(HFamily.reciprocal(), [1, 2, 3], ">=1")
    assert v.passed
    assert v.detail["sum"] == pytest.approx(6 + 3 + 2)


@given(
    st.lists(st.floats(min_value=1e-3, max_value=1.0), min_size=2, max_size=8),
    st.sampled_from([1e-3, 0.7, 1.0, 1e3]),
    st.sampled_from([HFamily.power(0.5), HFamily.power(2.0), HFamily.reciprocal(), HFamily.constant(0.3)]),
)
@settings(max_examples=200)
def test_weight_condition_scale_invariant(ws, lam, h):
    a = check_weight_condition(h, ws)
    b = check_weight_condition(h, [lam * w for w in ws])
    assert abs(a.worst_margin - b.worst_margin) <= 1e-12 * max(1.0, abs(a.worst_margin))
    assert a.passed == b.passed


def test_weight_condition_rejects_bad_weights():
    with pytest.raises(DomainError, match="positive"):
        check_weight_condition(HFamily.identity(), [1.0, -1.0])


# h-convexity -----------------------------------------------------------------


def test_square_is_convex():
    assert check_h_convex(SQ, HFamily.identity(), (0, 10)).passed


def test_sqrt_is_s_convex():
    v = check_h_convex(SQRT, HFamily.power(0.5), (0, 10))
    assert v.passed


def test_sqrt_is_not_convex():
    v = check_h_convex(SQRT, HFamily.identity(), (0.1, 10))
    assert not v.passed
    t, a, b = v.witness
    lhs = math.sqrt(t * a + (1 - t) * b)
    rhs = t * math.sqrt(a) + (1 - t) * math.sqrt(b)
    assert v.worst_margin == pytest.approx(rhs - lhs, abs=1e-12)
    assert v.worst_margin < 0


def test_square_is_not_power_two_convex():
    assert not check_h_convex(SQ, HFamily.power(2.0), (1, 3)).passed


def test_concave_sense():
    assert check_h_convex(SQRT, HFamily.identity(), (0.1, 10), sense="concave").passed
    assert not check_h_convex(SQ, HFamily.identity(), (0.1, 10), sense="concave").passed


def test_negative_f_is_rejected():
    with pytest.raises(NonNegativityError) as info:
        check_h_convex(ObjectiveSpec.expression("x - 1"), HFamily.identity(), (0, 2))
    assert info.value.witness == (0.0,)


def test_certify_reports_negative_f_as_verdict():
    vs = certify(ObjectiveSpec.expression("x - 1"), HFamily.identity(), (0, 2))
    assert vs[-1].name == "f_nonnegative" and not vs[-1].passed


def _plain_convexity_grid(f, a, b, n):
    """Loop-by-loop convexity check on the same (t, a, b) grid."""
    ts = np.linspace(EPS, 1 - EPS, n)
    xs = np.linspace(a, b, n)
    worst = math.inf
    for t in ts:
        for u in xs:
            for v in xs:
                m = t * f(u) + (1 - t) * f(v) - f(t * u + (1 - t) * v)
                worst = min(worst, m)
    return worst


@pytest.mark.parametrize("src, interval", [("x^2", (0, 10)), ("sqrt(x)", (0.1, 10)), ("abs(x - 2) + 0.5", (0, 5))])
def test_identity_h_convex_matches_plain_loop(src, interval):
    f = ObjectiveSpec.expression(src)
    n = 17
    v = check_h_convex(f, HFamily.identity(), interval, grid_n=n)
    plain = _plain_convexity_grid(f, *interval, n)
    assert v.passed == (plain >= -1e-9)
    assert abs(v.worst_margin - plain) <= 1e-12


def test_norm_along_segment():
    f = ObjectiveSpec.norm(2.0, 2)
    v = check_h_convex(f, HFamily.identity(), (0, 1), 17, segment=((1.0, 0.0), (0.0, 1.0)))
    assert v.passed
    with pytest.raises(ConfigError):
        check_h_convex(f, HFamily.identity(), (0, 1), 17)


def test_tolerance_is_mixed():
    tol = Tolerance(1e-9, 1e-9)
    assert float(tol.allowance(0.0, 0.5)) == pytest.approx(2e-9)
    assert float(tol.allowance(1e6, 3.0)) == pytest.approx(1e-9 + 1e-3)


def test_verdict_passed_iff_margin_within_tolerance():
    for v in (
        check_supermultiplicative(HFamily.constant(2.0)),
        check_lemma_condition(HFamily.power(0.5)),
        check_h_convex(SQRT, HFamily.identity(), (0.1, 10)),
        check_h_convex(SQ, HFamily.identity(), (0.1, 10)),
    ):
        assert v.passed == (v.worst_margin >= -v.tolerance)
        assert v.witness
