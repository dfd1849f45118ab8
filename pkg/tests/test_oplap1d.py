import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fracplap import (DomainError, Params, Profile, eval_decomposed_1d, eval_direct_1d,
                      eval_outside_1d, evaluate_1d, symmetry_reduce)


def p2_bump_value(n, s):
    """(-Delta)^s (1-|x|^2)^s_+ for p = 2 and unit constant: a known closed form."""
    return math.pi ** (n / 2) * math.pi / (math.sin(math.pi * s) * math.gamma(n / 2))


def test_examples_direct():
    u = Profile.bump(0.5)
    assert eval_direct_1d(u, 0.0, Params(1, 0.5, 2)).value == pytest.approx(math.pi, rel=1e-10)
    assert eval_direct_1d(u, 0.0, Params(1, 0.5, 4)).value == pytest.approx(
        6 * math.log(2) - 3, rel=1e-10)
    ref = 20 * math.sqrt(0.75) * (0.5 * math.log(1 / 3) + 2) + 2.5 * math.pi * (8 * 0.25 - 5)
    assert eval_direct_1d(u, 0.5, Params(1, 0.5, 6)).value == pytest.approx(ref, rel=1e-10)


@pytest.mark.parametrize("s", [0.2, 0.5, 0.8])
def test_p2_known_value(s):
    r = eval_direct_1d(Profile.bump(s), 0.4, Params(1, s, 2))
    assert r.value == pytest.approx(p2_bump_value(1, s), rel=1e-8)


def test_decomposed_examples():
    assert eval_decomposed_1d(0.5, 0.9, Params(1, 0.5, 2)).value == pytest.approx(math.pi, rel=1e-9)
    pr = Params(1, 0.5, 4)
    a = eval_decomposed_1d(0.5, 0.9, pr)
    b = eval_direct_1d(Profile.bump(0.5), 0.9, pr)
    assert abs(a.value - b.value) <= a.err_est + b.err_est


def test_decomposed_near_boundary_finite():
    r = eval_decomposed_1d(0.3, 0.99, Params(1, 0.3, 3))
    assert math.isfinite(r.value) and r.value > 0


@pytest.mark.parametrize("x", [0.5, 0.9, 0.99, 0.999])
@pytest.mark.parametrize("s", [0.25, 0.5, 0.75])
@pytest.mark.parametrize("p", [2.0, 3.0, 4.0])
def test_method_agreement(x, s, p):
    pr = Params(1, s, p)
    a = eval_direct_1d(Profile.bump(s), x, pr)
    b = eval_decomposed_1d(s, x, pr)
    assert abs(a.value - b.value) <= a.err_est + b.err_est


@pytest.mark.parametrize("p", [2.0, 3.0, 4.5])
def test_even_symmetry(p):
    pr = Params(1, 0.5, p)
    u = Profile.bump(0.5)
    for x in np.round(np.arange(1, 10) * 0.1, 10):
        a, b = eval_direct_1d(u, x, pr), eval_direct_1d(u, -x, pr)
        assert abs(a.value - b.value) <= 2 * max(a.err_est, b.err_est)


def test_p2_constancy():
    pr = Params(1, 0.5, 2)
    vals = [eval_direct_1d(Profile.bump(0.5), x, pr).value for x in np.arange(10) * 0.1]
    assert np.std(vals, ddof=1) <= 1e-5 * np.mean(vals)


def test_term_sums():
    pr = Params(1, 0.3, 3)
    d = eval_direct_1d(Profile.bump(0.3), 0.6, pr)
    assert set(d.terms) == {"inner", "outer", "tail"}
    assert abs(math.fsum(d.terms.values()) - d.value) <= d.err_est
    m = eval_decomposed_1d(0.3, 0.6, pr)
    assert list(m.terms) == ["I1", "I2", "I3", "I4", "I5", "I6"]
    assert abs(math.fsum(m.terms.values()) - m.value) <= m.err_est


def test_c_norm_multiplies():
    u = Profile.bump(0.5)
    a = eval_direct_1d(u, 0.3, Params(1, 0.5, 3))
    b = eval_direct_1d(u, 0.3, Params(1, 0.5, 3, c_norm=2.5))
    assert b.value == pytest.approx(2.5 * a.value, rel=1e-14)


@given(st.floats(0.1, 0.9), st.floats(2.0, 5.0), st.floats(0.25, 4.0))
def test_homogeneity(s, p, lam):
    pr = Params(1, s, p)
    u = Profile.bump(s)
    a = eval_direct_1d(u, 0.3, pr).value
    b = eval_direct_1d(u.scaled(lam), 0.3, pr).value
    assert b == pytest.approx(lam ** (p - 1) * a, rel=1e-8)


def test_outside_is_negative():
    pr = Params(1, 0.5, 3)
    r = eval_outside_1d(Profile.bump(0.5), 1.5, pr)
    assert r.value < 0
    # far away the support acts as a point mass: -G(mass) / |x|^(1+sp)
    far = eval_outside_1d(Profile.bump(0.5), 200.0, Params(1, 0.5, 2)).value
    assert far * 200.0 ** 2 == pytest.approx(-math.pi / 2, rel=1e-3)


def test_dispatch():
    pr = Params(1, 0.5, 4)
    u = Profile.bump(0.5)
    assert evaluate_1d(u, 0.995, pr).method == "decomposed"
    assert evaluate_1d(u, 0.5, pr).method == "direct"
    assert evaluate_1d(u, -1.5, pr).method == "outside"
    assert evaluate_1d(u.scaled(2.0), -0.995, pr).value == pytest.approx(
        8 * evaluate_1d(u, 0.995, pr).value, rel=1e-12)
    with pytest.raises(DomainError):
        evaluate_1d(Profile.scaled_bump(0.5, 2.0), 0.5, pr, method="decomposed")


def test_domain_errors():
    pr = Params(1, 0.5, 2)
    with pytest.raises(DomainError, match="outside open support"):
        eval_direct_1d(Profile.bump(0.5), 1.0, pr)
    with pytest.raises(DomainError):
        eval_decomposed_1d(0.5, 1.0, pr)
    with pytest.raises(DomainError):
        eval_decomposed_1d(0.4, 0.5, pr)
    with pytest.raises(DomainError):
        eval_direct_1d(Profile.bump(0.5), 0.2, Params(2, 0.5, 2))
    with pytest.raises(DomainError):
        eval_direct_1d(Profile.power_cusp(0.5), 0.2, pr)


@pytest.mark.parametrize("x,expected", [(-0.7, 0.7), (0.0, 0.0), (0.3, 0.3)])
def test_symmetry_reduce(x, expected):
    assert symmetry_reduce(x) == expected


def test_symmetry_reduce_domain():
    with pytest.raises(DomainError):
        symmetry_reduce(-1.0)


@pytest.mark.parametrize("s", [0.875, 0.95, 0.99])
@pytest.mark.parametrize("x", [0.0, 0.6, -0.6])
def test_large_s_matches_p2_value(s, x):
    r = eval_direct_1d(Profile.bump(s), x, Params(n=1, s=s, p=2))
    assert r.value == pytest.approx(p2_bump_value(1, s), rel=1e-9)


@pytest.mark.parametrize("s", [0.95, 0.99])
@pytest.mark.parametrize("p", [3.0, 4.5])
def test_large_s_converges_and_is_even(s, p):
    params = Params(n=1, s=s, p=p)
    a = eval_direct_1d(Profile.bump(s), 0.6, params)
    b = eval_direct_1d(Profile.bump(s), -0.6, params)
    assert math.isfinite(a.value) and a.value > 0
    assert a.value == b.value
