"""The acceptance suite: one function per criterion, each timed against its budget.

Every criterion returns a :class:`Criterion` holding its individual checks.
A criterion passes when all checks pass and the run finished within budget.
Expected values come from closed forms or from an independent route, never
from earlier runs of the same code.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .analysis import (closed_form_half, closed_form_limit, comparison_probe,
                       constructed_pairs, homogeneity_check, hopf_ratio, identity_residual,
                       is_strictly_increasing, lsp_tail, scaling_check, singular_fit)
from .model import Params, Profile, g_ratio
from .oplap1d import eval_decomposed_1d, eval_direct_1d
from .oplapnd import eval_cartesian_2d, eval_radial_nd, kernel_moment, kernel_moment_beta
from .quad import QuadConfig

__all__ = ["Check", "Criterion", "CRITERIA", "run_all", "run_criterion"]


@dataclass(frozen=True)
class Check:
    name: str
    expected: object
    got: float
    tol: float
    passed: bool


def _within(name, expected, got, tol) -> Check:
    ok = bool(math.isfinite(got) and abs(got - expected) <= tol)
    return Check(name, expected, float(got), float(tol), ok)


def _at_most(name, got, tol) -> Check:
    """A nonnegative measured error ``got`` that must not exceed ``tol``."""
    return Check(name, 0.0, float(got), float(tol), bool(got <= tol))


def _holds(name, ok, got=float("nan")) -> Check:
    return Check(name, True, float(got), 0.0, bool(ok))


@dataclass
class Criterion:
    number: int
    name: str
    budget_s: float
    checks: list = field(default_factory=list)
    seconds: float = 0.0
    error: Optional[str] = None

    @property
    def within_budget(self) -> bool:
        return self.seconds <= self.budget_s

    @property
    def passed(self) -> bool:
        return (self.error is None and bool(self.checks)
                and all(c.passed for c in self.checks) and self.within_budget)

    def worst(self) -> Optional[Check]:
        failing = [c for c in self.checks if not c.passed]
        return failing[0] if failing else (self.checks[-1] if self.checks else None)

    def summary_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        bad = sum(not c.passed for c in self.checks)
        note = f"{len(self.checks) - bad}/{len(self.checks)} checks"
        if self.error:
            note = f"error: {self.error}"
        elif not self.within_budget:
            note += f", over budget {self.budget_s:g} s"
        return f"[{status}] {self.number:2d}. {self.name} ({note}, {self.seconds:.2f} s)"


def closed_forms(c: Criterion):
    params = {p: Params(1, 0.5, p) for p in (2, 4, 6, 8)}
    u = Profile.bump(0.5)
    for p, pr in params.items():
        for x in (0.0, 0.25, 0.5, 0.75, 0.9):
            ref = closed_form_half(p, x)
            got = eval_direct_1d(u, x, pr).value
            c.checks.append(_at_most(f"p={p} x={x} relative error",
                                     abs(got - ref) / abs(ref), 1e-4))


def p2_constancy(c: Criterion):
    pr = Params(1, 0.5, 2)
    u = Profile.bump(0.5)
    vals = [eval_direct_1d(u, x, pr).value for x in np.round(np.arange(10) * 0.1, 10)]
    spread = max(abs(v - math.pi) for v in vals) / math.pi
    c.checks.append(_at_most("relative spread around pi", spread, 1e-5))


def identity(c: Criterion):
    for s in (0.25, 0.5, 0.75):
        for p in (2.0, 2.5, 3.0, 4.0):
            rep = identity_residual(s, p)
            c.checks.append(_at_most(f"s={s} p={p} |residual|", abs(rep.residual), 1e-6))
            gaps = [abs(h - rep.h3_limit) for h in rep.h3]
            mono = all(b < a for a, b in zip(gaps, gaps[1:]))
            c.checks.append(_holds(f"s={s} p={p} H3 -> -1/(sp) monotonically", mono, gaps[-1]))


def boundedness_1d(c: Criterion):
    cfg = QuadConfig()
    for s in (0.3, 0.5, 0.7):
        for p in (2.5, 3.0, 4.0):
            pr = Params(1, s, p)
            fit = singular_fit(pr, cfg, j_max=14)
            c.checks.append(_at_most(f"s={s} p={p} |b|/max|v|", fit.relative_b, 1e-3))
            u = Profile.bump(s)
            d = eval_direct_1d(u, 0.99, pr, cfg)
            m = eval_decomposed_1d(s, 0.99, pr, cfg)
            c.checks.append(Check(f"s={s} p={p} direct vs decomposed at x=0.99",
                                  d.value, m.value, d.err_est + m.err_est,
                                  abs(d.value - m.value) <= d.err_est + m.err_est))


def closed_form_ranges(c: Criterion):
    starts = {4: 6 * math.log(2) - 3, 6: 40 - 25 * math.pi / 2,
              8: 469 / 6 - 112 * math.log(2)}
    grid = [round(0.1 * k, 10) for k in range(10)] + [0.99, 0.999, 0.9999]
    u = Profile.bump(0.5)
    for p, start in starts.items():
        pr = Params(1, 0.5, p)
        vals = []
        for x in grid:
            if x > 0.99:
                vals.append(eval_decomposed_1d(0.5, x, pr).value)
            else:
                vals.append(eval_direct_1d(u, x, pr).value)
        limit = closed_form_limit(p)
        c.checks.append(_holds(f"p={p} strictly increasing", is_strictly_increasing(vals)))
        inside = all(start - 1e-4 <= v < limit for v in vals)
        c.checks.append(_holds(f"p={p} within [start, limit)", inside))
        c.checks.append(_within(f"p={p} value at x=0", start, vals[0], 1e-4))
        c.checks.append(_within(f"p={p} value at x=0.9999 vs limit", limit, vals[-1], 1e-2))


def nd_reduction(c: Criterion):
    oracle = QuadConfig(abs_tol=1e-8, rel_tol=1e-4)
    rng = np.random.default_rng(20240601)
    for s, p in ((0.5, 2.0), (0.5, 3.0), (0.3, 4.0)):
        pr = Params(2, s, p)
        u = Profile.bump(s)
        for r0 in (0.2, 0.5, 0.8):
            rad = eval_radial_nd(u, r0, pr)
            cart = eval_cartesian_2d(u, (r0, 0.0), pr, oracle)
            tol = rad.err_est + cart.err_est
            c.checks.append(Check(f"s={s} p={p} r0={r0} radial vs cartesian", rad.value,
                                  cart.value, tol, abs(rad.value - cart.value) <= tol))
        base = eval_cartesian_2d(u, (0.5, 0.0), pr, oracle)
        for th in rng.uniform(0.0, 2.0 * math.pi, 4):
            rot = eval_cartesian_2d(u, (0.5 * math.cos(th), 0.5 * math.sin(th)), pr, oracle)
            tol = 2.0 * max(base.err_est, rot.err_est)
            c.checks.append(Check(f"s={s} p={p} rotation {th:.3f}", base.value, rot.value,
                                  tol, abs(rot.value - base.value) <= tol))


def kernel_moments(c: Criterion):
    cfg = QuadConfig()
    for n in (2, 3, 4):
        for s in (0.25, 0.5, 0.75):
            for p in (2.0, 3.0):
                ref = kernel_moment_beta(n, s, p)
                got = kernel_moment(n, s, p, cfg)
                c.checks.append(_within(f"n={n} s={s} p={p}", ref, got,
                                        10 * cfg.rel_tol * abs(ref)))
    c.checks.append(_within("n=2 sp=1 analytic", 1.0, kernel_moment(2, 0.5, 2.0, cfg),
                            10 * cfg.rel_tol))
    c.checks.append(_within("n=3 sp=1 analytic", 0.5, kernel_moment(3, 0.5, 2.0, cfg),
                            10 * cfg.rel_tol * 0.5))


def barrier(c: Criterion):
    for rho in (0.5, 2.0, 5.0):
        err1 = scaling_check(rho, 0.3, Params(1, 0.5, 4.0))
        c.checks.append(_at_most(f"n=1 rho={rho} scaling error", err1, 1e-4))
        err2 = scaling_check(rho, (0.2, 0.0), Params(2, 0.5, 2.0))
        c.checks.append(_at_most(f"n=2 rho={rho} scaling error", err2, 1e-3))
    for p in (2.0, 3.0, 4.0):
        for lam in (0.5, 2.0):
            err = homogeneity_check(Profile.bump(0.5), 0.4, lam, Params(1, 0.5, p))
            c.checks.append(_at_most(f"p={p} lambda={lam} homogeneity", err, 1e-6))
    for s in (0.3, 0.5, 0.75):
        trace = hopf_ratio(Profile.bump(s), 0.0, 1.0, [2.0 ** -j for j in range(1, 13)])
        c.checks.append(_within(f"s={s} Hopf ratio at delta=2^-12", 2.0 ** s,
                                trace[-1][1], 1e-3))


def g_ratio_bound(c: Criterion):
    rng = np.random.default_rng(7)
    for p in (2.0, 3.0, 5.0):
        a = rng.uniform(-10.0, 10.0, 100_000)
        b = rng.uniform(-10.0, 10.0, 100_000)
        t, s_arg = np.minimum(a, b), np.maximum(a, b)
        keep = t < s_arg
        ratios = g_ratio(t[keep], s_arg[keep], p)
        bound = 2.0 ** (2.0 - p)
        c.checks.append(Check(f"p={p} min ratio over 1e5 pairs", bound, float(ratios.min()),
                              1e-12, bool(ratios.min() >= bound - 1e-12)))
        eq = g_ratio(-1.0, 1.0, p)
        c.checks.append(Check(f"p={p} equality at rho=-1", bound, eq, 0.0, eq == bound))


def lsp_window_check(c: Criterion):
    for n, p in ((1, 2.0), (2, 3.0), (3, 4.0)):
        pr = Params(n, 0.5, p)
        edge = n / (p - 1.0)
        below = lsp_tail(edge - 0.05, pr)
        above = lsp_tail(edge + 0.05, pr)
        c.checks.append(_holds(f"n={n} p={p} t=edge-0.05 finite", below.finite, below.value))
        c.checks.append(_holds(f"n={n} p={p} t=edge+0.05 divergent", not above.finite))
        cfg = QuadConfig()
        half = lsp_tail(edge - 0.05, pr, QuadConfig(cfg.abs_tol / 2, cfg.rel_tol / 2))
        c.checks.append(_at_most(f"n={n} p={p} change under tolerance halving",
                                 abs(half.value - below.value) / abs(below.value), 1e-6))


def comparison(c: Criterion):
    pr = Params(1, 0.5, 3.0)
    grid = list(np.linspace(-0.97, 0.97, 50))
    for name, u, v in constructed_pairs(pr, grid):
        rep = comparison_probe(u, v, lambda x: 0.0, 1.0, grid, pr)
        c.checks.append(_holds(f"{name}: verdict consistent", rep.verdict == "consistent"))
        c.checks.append(_at_most(f"{name}: violating samples", len(rep.violations), 0))


CRITERIA: list[tuple[int, str, float, Callable]] = [
    (1, "closed-form reproduction", 10.0, closed_forms),
    (2, "p=2 constancy", 2.0, p2_constancy),
    (3, "scalar identity", 5.0, identity),
    (4, "boundedness in one dimension", 60.0, boundedness_1d),
    (5, "closed-form monotonicity and ranges", 60.0, closed_form_ranges),
    (6, "radial reduction and rotation invariance", 300.0, nd_reduction),
    (7, "kernel moment", 2.0, kernel_moments),
    (8, "barrier machinery", 30.0, barrier),
    (9, "G ratio lower bound", 1.0, g_ratio_bound),
    (10, "tail space window", 5.0, lsp_window_check),
    (11, "comparison probe", 60.0, comparison),
]


def run_criterion(number: int) -> Criterion:
    for num, name, budget, fn in CRITERIA:
        if num == number:
            c = Criterion(num, name, budget)
            t0 = time.perf_counter()
            try:
                fn(c)
            except Exception as exc:  # a crash is a failed criterion, not a crashed suite
                c.error = f"{type(exc).__name__}: {exc}"
            c.seconds = time.perf_counter() - t0
            return c
    raise KeyError(number)


def run_all(numbers=None) -> list[Criterion]:
    wanted = [n for n, *_ in CRITERIA] if numbers is None else list(numbers)
    return [run_criterion(n) for n in wanted]
