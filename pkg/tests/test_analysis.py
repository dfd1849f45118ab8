import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fracplap import DomainError, Params, Profile, QuadConfig
from fracplap.analysis import (ball_kernel_mass, boundary_grid, bounded_sweep, closed_form_half,
                               closed_form_limit, closed_form_range, comparison_probe,
                               constructed_pairs, fit_boundary_model, h_split,
                               holder_seminorm, homogeneity_check, hopf_ratio, hopf_report,
                               identity_residual, is_strictly_increasing,
                               kernel_mass_closed_form, lsp_tail, lsp_window, operator_at,
                               scaling_check, singular_fit, sweep_rows)
from fracplap.oplapnd import sphere_measure

LOG2 = math.log(2)


# scalar identity

@pytest.mark.parametrize("s,p,tol", [(0.5, 2.0, 1e-8), (0.3, 3.0, 1e-6), (0.75, 2.5, 1e-6)])
def test_identity_examples(s, p, tol):
    rep = identity_residual(s, p)
    assert abs(rep.residual) <= tol


def test_identity_split_trends():
    rep = identity_residual(0.4, 3.0)
    gaps = [abs(h - rep.h3_limit) for h in rep.h3]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert all(abs(b) < abs(a) for a, b in zip(rep.h1, rep.h1[1:]))
    assert all(abs(b) < abs(a) for a, b in zip(rep.h2, rep.h2[1:]))
    assert abs(rep.h1[-1]) < 1e-5 and abs(rep.h2[-1]) < 1e-5


def test_h3_closed_form():
    s, p, eps = 0.5, 3.0, 1e-2
    h1, h2, h3 = h_split(s, p, eps)
    sp = s * p
    assert h3 == pytest.approx(-1 / sp + (1 - (1 - eps) ** s) ** p / (sp * eps ** sp), rel=1e-12)


# closed forms

def test_closed_form_examples():
    for x in (-0.9, 0.0, 0.4):
        assert closed_form_half(2, x) == math.pi
    assert closed_form_half(4, 0.0) == pytest.approx(6 * LOG2 - 3, rel=1e-15)
    assert closed_form_half(6, 0.0) == pytest.approx(40 - 25 * math.pi / 2, rel=1e-13)
    assert closed_form_half(8, 0.0) == pytest.approx(469 / 6 - 112 * LOG2, rel=1e-13)
    x = 0.3
    p4 = 3 * math.sqrt(1 - x * x) * (math.log(4 - 4 * x * x) - 1) + 6 * x * math.asin(x)
    assert closed_form_half(4, x) == pytest.approx(p4, rel=1e-14)
    assert closed_form_half(4, 0.3, c_norm=2.0) == pytest.approx(2 * p4, rel=1e-14)


def test_closed_form_limits():
    lims = {2: math.pi, 4: 3 * math.pi, 6: 7.5 * math.pi, 8: 17.5 * math.pi}
    for p, lim in lims.items():
        assert closed_form_limit(p) == pytest.approx(lim)
        assert closed_form_half(p, 1 - 1e-13) == pytest.approx(lim, rel=1e-4)
        lo, hi = closed_form_range(p)
        assert lo == closed_form_half(p, 0.0) and hi == lim


@given(st.floats(-0.999, 0.999))
def test_closed_form_even(x):
    for p in (4, 6, 8):
        assert closed_form_half(p, x) == pytest.approx(closed_form_half(p, -x), rel=1e-12)


def test_closed_form_domain():
    with pytest.raises(DomainError):
        closed_form_half(3, 0.1)
    with pytest.raises(DomainError):
        closed_form_half(4, 1.0)


# singular coefficient fits

def test_fit_recovers_synthetic():
    xs = boundary_grid(4, 14)
    d = 1 - np.array(xs)
    fit = fit_boundary_model(xs, 2.0 + 0.3 * d ** -0.4, 0.4)
    assert fit.a == pytest.approx(2.0, rel=1e-10)
    assert fit.b == pytest.approx(0.3, rel=1e-10)
    assert fit.residual < 1e-10


def test_fit_corrections_absorb_extra_term():
    xs = boundary_grid(4, 14)
    d = 1 - np.array(xs)
    vals = 5.0 - 2.0 * d ** 0.6
    plain = fit_boundary_model(xs, vals, 0.4)
    corrected = fit_boundary_model(xs, vals, 0.4, corrections=[0.6])
    assert abs(corrected.b) < 1e-8 < abs(plain.b)
    assert corrected.extra[0.6] == pytest.approx(-2.0, rel=1e-8)


def test_fit_needs_three_points():
    with pytest.raises(DomainError):
        fit_boundary_model([0.9, 0.99], [1.0, 2.0], 0.5)


def test_boundary_grid():
    xs = boundary_grid()
    assert len(xs) == 11 and xs[0] == 1 - 2 ** -4 and xs[-1] == 1 - 2 ** -14
    assert is_strictly_increasing(xs)


def test_singular_fit_p2():
    fit = singular_fit(Params(1, 0.5, 2), QuadConfig())
    assert fit.a == pytest.approx(math.pi, rel=1e-8)
    assert fit.relative_b < 1e-9


def test_singular_fit_nd():
    fit = singular_fit(Params(2, 0.5, 3), QuadConfig(abs_tol=1e-8, rel_tol=1e-7), j_max=12)
    assert fit.relative_b <= 1e-2


def test_bounded_sweep_p4():
    grid = [round(0.1 * k, 10) for k in range(10)] + [0.99]
    mx, rows = bounded_sweep(Params(1, 0.5, 4), QuadConfig(), grid)
    vals = [r.value for r in rows]
    assert is_strictly_increasing(vals)
    lo, hi = closed_form_range(4)
    assert all(lo - 1e-9 <= v < hi for v in vals)
    assert mx == max(abs(v) for v in vals)


def test_bounded_sweep_p2_and_p8():
    _, rows = bounded_sweep(Params(1, 0.5, 2), QuadConfig(), [0.0, 0.5, 0.9])
    assert all(r.value == pytest.approx(math.pi, rel=1e-9) for r in rows)
    _, rows = bounded_sweep(Params(1, 0.5, 8), QuadConfig(), [0.0])
    assert rows[0].value == pytest.approx(469 / 6 - 112 * LOG2, rel=1e-9)


def test_sweep_rows_order_and_status():
    u = Profile.bump(0.5)
    pr = Params(1, 0.5, 3)
    grid = [0.7, -0.2, 1.0, 0.1]
    serial = sweep_rows(u, grid, pr)
    parallel = sweep_rows(u, grid, pr, jobs=2)
    assert repr(serial) == repr(parallel)  # NaN rows compare unequal under ==
    assert [r.x for r in serial] == grid
    assert [r.status for r in serial] == ["ok", "ok", "domain", "ok"]


def test_operator_at_dimensions():
    u = Profile.bump(0.5)
    a = operator_at(u, (0.3, 0.4), Params(2, 0.5, 2)).value
    b = operator_at(u, 0.5, Params(2, 0.5, 2)).value
    assert a == b
    with pytest.raises(DomainError):
        operator_at(u, (0.6, 0.8), Params(2, 0.5, 2))


# barrier machinery

def test_scaling_examples():
    assert scaling_check(1.0, 0.3, Params(1, 0.5, 4)) == 0.0
    assert scaling_check(2.0, 0.6, Params(1, 0.5, 4)) <= 1e-4
    assert scaling_check(0.5, (0.2, 0.0), Params(2, 0.5, 2)) <= 1e-3


def test_scaling_domain():
    with pytest.raises(DomainError):
        scaling_check(0.5, 0.6, Params(1, 0.5, 4))


@pytest.mark.parametrize("lam", [0.5, 2.0])
def test_homogeneity(lam):
    assert homogeneity_check(Profile.bump(0.3), 0.7, lam, Params(1, 0.3, 3.5)) <= 1e-6
    assert homogeneity_check(Profile.bump(0.5), 0.4, lam, Params(2, 0.5, 3)) <= 1e-6


def test_hopf_ratio_bump():
    tr = hopf_ratio(Profile.bump(0.5), 0.0, 1.0, [0.5, 2.0 ** -12])
    assert tr[0][1] == pytest.approx(math.sqrt(1.5), rel=1e-14)
    assert abs(tr[1][1] - math.sqrt(2)) <= 1e-3
    deltas = [d for d, _ in tr]
    assert all(d > 0 for d in deltas) and deltas == sorted(deltas, reverse=True)


def test_hopf_ratio_scaled_bump():
    s, rho = 0.4, 0.5
    tr = hopf_ratio(Profile.scaled_bump(s, rho), (0.0, 0.0), (0.6, 0.8), [2.0 ** -20])
    assert tr[0][1] == pytest.approx((2 * rho) ** s / rho ** (2 * s), rel=1e-5)


def test_ball_kernel_mass_1d():
    # n = 1: the segment [-R, R] seen from distance d > R
    d, R, sp = 0.8, 0.5, 1.2
    ref = ((d - R) ** -sp - (d + R) ** -sp) / sp
    assert ball_kernel_mass(d, R, 1, sp) == pytest.approx(ref, rel=1e-12)


def test_ball_kernel_mass_nd_far_field():
    # far from the ball the mass tends to |B_R| / dist^(n+sp)
    R, sp, dist = 0.5, 1.0, 200.0
    got = ball_kernel_mass(dist, R, 2, sp)
    assert got * dist ** (2 + sp) == pytest.approx(math.pi * R * R, rel=1e-3)


def test_hopf_report():
    rep = hopf_report(Params(1, 0.5, 3))
    assert rep.c0 > 0 and rep.c_rho > 0 and 0 < rep.eps_max < rep.c_d
    assert rep.trace_above_bound
    assert max(rep.scaling_errs) <= 1e-4
    eps = rep.eps_max
    lhs = eps ** 2 * rep.c0 / rep.rho ** 1.5
    rhs = 2.0 ** -1 * rep.c_d ** 2 * rep.c_rho
    assert lhs <= rhs * (1 + 1e-12)


def test_comparison_constructed_pairs():
    pr = Params(1, 0.5, 3)
    grid = list(np.linspace(-0.97, 0.97, 50))
    pairs = constructed_pairs(pr, grid)
    assert [name for name, *_ in pairs] == ["half", "equal", "shrunken"]
    for _, u, v in pairs:
        rep = comparison_probe(u, v, lambda x: 0.0, 1.0, grid, pr)
        assert rep.verdict == "consistent" and not rep.violations


def test_comparison_flags_failed_hypothesis():
    pr = Params(1, 0.5, 3)
    grid = list(np.linspace(-0.9, 0.9, 11))
    u = Profile.bump(0.5)
    rep = comparison_probe(u.scaled(0.5), u, lambda x: 0.0, 1.0, grid, pr)
    assert rep.verdict == "hypothesis not met"
    assert not rep.conclusion_holds


# tail space

def test_lsp_examples():
    assert lsp_tail(0.9, Params(2, 0.5, 3)).finite
    r = lsp_tail(1.0, Params(2, 0.5, 3))
    assert not r.finite and math.isinf(r.value)
    pr = Params(1, 0.5, 2)
    r = lsp_tail(0.5, pr)
    assert r.finite and r.value >= r.kernel_part
    with pytest.raises(DomainError):
        lsp_tail(0.0, pr)


@pytest.mark.parametrize("n,s,p", [(1, 0.5, 2), (2, 0.3, 3), (3, 0.7, 4)])
def test_lsp_kernel_part(n, s, p):
    pr = Params(n, s, p)
    r = lsp_tail(0.1, pr)
    assert r.kernel_part == pytest.approx(sphere_measure(n - 1) * kernel_mass_closed_form(pr),
                                          rel=1e-9)


def test_lsp_cusp_part_p2():
    # p = 2 and n = 1: the excess is int_0^1 r^-t / (1 + r^(1+s*2)) dr
    s, t = 0.5, 0.5
    pr = Params(1, s, 2)
    r = lsp_tail(t, pr)
    terms = [(-1) ** k / (1 - t + 2 * k) for k in range(200_000)]
    assert r.value - r.kernel_part == pytest.approx(math.fsum(terms), rel=1e-5)


def test_lsp_window():
    assert lsp_window(Params(2, 0.5, 3)) == (2 / 3, 1.0)


# Hoelder seminorm

def test_holder_constant():
    assert holder_seminorm([(x, 1.0) for x in np.linspace(0, 1, 7)], 0.5) == 0.0


def test_holder_bump_trend():
    u = Profile.bump(0.5)

    def semi(j, nu):
        xs = [1 - 2.0 ** -k for k in range(1, j + 1)]
        return holder_seminorm([(x, float(u.value(x))) for x in xs], nu)

    bounded = [semi(j, 0.5) for j in (4, 8, 12, 16)]
    assert all(v <= 2 ** 0.5 for v in bounded)
    growing = [semi(j, 0.8) for j in (4, 8, 12, 16)]
    assert all(b > 1.5 * a for a, b in zip(growing, growing[1:]))


def test_holder_domain():
    with pytest.raises(DomainError):
        holder_seminorm([(0.0, 1.0)], 0.5)
    with pytest.raises(DomainError):
        holder_seminorm([(0.0, 1.0), (1.0, 2.0)], 1.0)


def test_holder_vector_points():
    pts = [((0.0, 0.0), 0.0), ((3.0, 4.0), 5.0)]
    assert holder_seminorm(pts, 0.5) == pytest.approx(5 / math.sqrt(5))
