import math

import numpy as np
import pytest

from fracplap import (DomainError, Params, Profile, QuadConfig, RadialReduction,
                      eval_cartesian_2d, eval_outside_nd, eval_radial_nd, kernel_moment,
                      kernel_moment_beta, sphere_measure)

from test_oplap1d import p2_bump_value

ORACLE = QuadConfig(abs_tol=1e-8, rel_tol=1e-4)


def test_sphere_measure():
    assert sphere_measure(0) == 2.0
    assert sphere_measure(1) == pytest.approx(2 * math.pi)
    assert sphere_measure(2) == pytest.approx(4 * math.pi)
    with pytest.raises(DomainError):
        sphere_measure(-1)


def test_radial_reduction():
    g = RadialReduction(0.4, 3)
    assert g.omega == pytest.approx(2 * math.pi)
    assert g.singular_point == (0.4, 0.0)
    with pytest.raises(DomainError):
        RadialReduction(-0.1, 2)
    with pytest.raises(DomainError):
        RadialReduction(0.1, 1)


def test_constant_profile():
    u = Profile.custom(lambda r: np.full_like(r, 3.0))
    assert eval_radial_nd(u, 0.5, Params(2, 0.5, 3)).value == 0.0


@pytest.mark.parametrize("n,s", [(2, 0.5), (2, 0.3), (3, 0.5), (3, 0.7), (4, 0.4)])
def test_p2_known_value(n, s):
    r = eval_radial_nd(Profile.bump(s), 0.4, Params(n, s, 2))
    assert r.value == pytest.approx(p2_bump_value(n, s), rel=1e-7)


def test_p2_constant_in_radius():
    pr = Params(2, 0.5, 2)
    vals = [eval_radial_nd(Profile.bump(0.5), r, pr).value for r in np.arange(1, 9) * 0.1]
    assert (max(vals) - min(vals)) / np.mean(vals) <= 1e-3


@pytest.mark.parametrize("s,p", [(0.5, 2.0), (0.5, 3.0), (0.3, 4.0)])
def test_radial_vs_cartesian(s, p):
    pr = Params(2, s, p)
    u = Profile.bump(s)
    a = eval_radial_nd(u, 0.5, pr)
    b = eval_cartesian_2d(u, (0.5, 0.0), pr, ORACLE)
    assert abs(a.value - b.value) <= a.err_est + b.err_est


def test_cartesian_examples():
    pr = Params(2, 0.5, 2)
    u = Profile.bump(0.5)
    a = eval_cartesian_2d(u, (0.5, 0.0), pr, ORACLE)
    b = eval_cartesian_2d(u, (0.5 / math.sqrt(2), 0.5 / math.sqrt(2)), pr, ORACLE)
    assert abs(a.value - b.value) <= 2 * max(a.err_est, b.err_est)
    c = eval_radial_nd(u, 0.3, pr)
    d = eval_cartesian_2d(u, (0.3, 0.0), pr, ORACLE)
    assert abs(c.value - d.value) <= c.err_est + d.err_est
    assert eval_cartesian_2d(u.scaled(0.0), (0.2, 0.1), pr, ORACLE).value == 0.0


def test_cartesian_domain():
    with pytest.raises(DomainError):
        eval_cartesian_2d(Profile.bump(0.5), (0.5, 0.0), Params(3, 0.5, 2))
    with pytest.raises(DomainError, match="outside open support"):
        eval_cartesian_2d(Profile.bump(0.5), (0.8, 0.8), Params(2, 0.5, 2))


def test_radial_domain():
    pr = Params(2, 0.5, 2)
    with pytest.raises(DomainError, match="outside open support"):
        eval_radial_nd(Profile.bump(0.5), 1.0, pr)
    with pytest.raises(DomainError):
        eval_radial_nd(Profile.bump(0.5), 0.3, Params(1, 0.5, 2))
    with pytest.raises(DomainError):
        eval_radial_nd(Profile.power_cusp(0.5), 0.3, pr)


def test_scaled_bump_scaling_nd():
    pr = Params(3, 0.4, 3)
    a = eval_radial_nd(Profile.scaled_bump(0.4, 2.0), 0.6, pr).value
    b = eval_radial_nd(Profile.bump(0.4), 0.3, pr).value
    assert a * 2.0 ** pr.sp == pytest.approx(b, rel=1e-7)


def test_outside_nd():
    pr = Params(2, 0.5, 3)
    assert eval_outside_nd(Profile.bump(0.5), 1.5, pr).value < 0
    with pytest.raises(DomainError):
        eval_outside_nd(Profile.bump(0.5), 0.5, pr)


def test_boundedness_running_max():
    pr = Params(2, 0.5, 3)
    cfg = QuadConfig(abs_tol=1e-8, rel_tol=1e-7)
    vals = [abs(eval_radial_nd(Profile.bump(0.5), 1 - 2.0 ** -j, pr, cfg).value)
            for j in range(1, 13)]
    assert all(math.isfinite(v) for v in vals)
    run = np.maximum.accumulate(vals)
    # the increments of the running maximum shrink geometrically, so it
    # converges; a (1-x)^(-s) term would make them grow by 2^s per step
    inc = np.diff(run)[-4:]
    assert np.all(inc > 0)
    assert np.all(inc[1:] <= 0.9 * inc[:-1])


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("s", [0.25, 0.5, 0.75])
@pytest.mark.parametrize("p", [2.0, 3.0])
def test_kernel_moment(n, s, p):
    cfg = QuadConfig()
    ref = kernel_moment_beta(n, s, p)
    assert abs(kernel_moment(n, s, p, cfg) - ref) <= 10 * cfg.rel_tol * ref


def test_kernel_moment_examples():
    assert kernel_moment(2, 0.5, 2) == pytest.approx(1.0, rel=1e-10)
    assert kernel_moment(3, 0.5, 2) == pytest.approx(0.5, rel=1e-10)
    ref = 0.5 * math.exp(math.lgamma(0.5) + math.lgamma(1.25) - math.lgamma(1.75))
    assert kernel_moment(2, 0.5, 3) == pytest.approx(ref, rel=1e-10)
    with pytest.raises(DomainError):
        kernel_moment(1, 0.5, 2)


@pytest.mark.parametrize("s", [0.9, 0.97])
@pytest.mark.parametrize("r0", [0.0, 0.6])
def test_p2_large_s_in_plane(s, r0):
    expected = math.pi ** 2 / math.sin(math.pi * s)
    r = eval_radial_nd(Profile.bump(s), r0, Params(n=2, s=s, p=2))
    assert r.value == pytest.approx(expected, rel=1e-9)
