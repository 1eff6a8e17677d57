"""Acceptance suite: one recorded PASS/FAIL line per criterion.

Every test appends its line to ``conftest.ACCEPTANCE_LINES`` (printed in the pytest
terminal summary) and also prints it, so ``pytest -s tests/test_acceptance.py`` or
``python tests/test_acceptance.py`` shows the lines directly.
"""
from __future__ import annotations

import math
import sys
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from ramanujan_roots.gammac import build_cfunctions
from ramanujan_roots.hyper1 import F_lambda_rank1, Rank1Params, series_lhs, series_rhs
from ramanujan_roots.jacobi import JacobiFamily
from ramanujan_roots.master import (MasterCase, classical_dwight, classical_m1, classical_m2, exponential_hardy,
                                    rank_one_case, series_convergence_fit)
from ramanujan_roots.rootsys import build_root_system
from ramanujan_roots.specfun import (BFunction, DFunction, TubeDomain, classify_singularities, numeric_pole_order,
                                     root_singularities, tube_contains, tube_intersection_over_W)

SEED = 20240611
M_GRID = (1.0, 2.0, 3.0, 2.5)
P_GRID = (0.5, 1.0, 2.0)
A_GRID = (0.0, 0.5, 2.0)

JACOBI_SYSTEMS = [("A1", [0.5]), ("A1", [1.0]), ("A1", [2.0]), ("A1", [3.7]), ("BC1", [1.5, 2.5]), ("A2", [1.0])]
BOUND_SYSTEMS = JACOBI_SYSTEMS + [("B2", [1.0, 2.0]), ("BC2", [1.0, 2.0, 1.5])]
FUNCTION_SYSTEMS = [("A1", [2.0]), ("A1", [1.0]), ("A1", [0.5]), ("A1", [3.7]), ("BC1", [1.5, 2.5]),
                    ("BC1", [2.0, 3.0]), ("A2", [1.0]), ("B2", [1.0, 2.0]), ("BC2", [1.0, 2.0, 1.5])]

# multiplicity instances (m_half, m) that realise each row of the two singularity tables
TABLE1_INSTANCES = {"1": (0.0, 2.0), "2": (1.0, 2.0), "3": (1.0, 5.0), "4": (1.0, 1.0),
                    "5a": (1.0, 2.5), "5b": (1.0, 0.5)}
TABLE2_INSTANCES = {"1": (0.0, 2.0), "2": (0.0, 2.5), "3": (1.0, 2.0), "4": (1.0, 5.0), "5": (1.0, 1.0),
                    "6": (1.0, 1.5), "7a": (1.0, 2.2), "7b": (1.0, 0.7)}


def record(k: int, ok: bool, detail: str) -> None:
    line = f"CRITERION {k}: {'PASS' if ok else 'FAIL'} {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def random_lambda(rng, rank, n, re=2.5, im=6.0):
    return rng.uniform(-re, re, (n, rank)) + 1j * rng.uniform(-im, im, (n, rank))


def rel_gap(a, b):
    return float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(a))))


# ---------------------------------------------------------------- 1 to 3


def test_criterion_01_classical_m2():
    worst, slowest = 0.0, 0.0
    for P in P_GRID:
        t0 = time.perf_counter()
        num, closed = classical_m2(P)
        slowest = max(slowest, time.perf_counter() - t0)
        worst = max(worst, abs(num - closed))
    ok = worst < 1e-8 and slowest < 5.0
    record(1, ok, f"max gap {worst:.2e} over P in {P_GRID}, slowest {slowest:.2f}s")
    assert ok


def test_criterion_02_dwight():
    num, closed = classical_dwight(1.0)
    ok = abs(num - closed) < 1e-8 and abs(num - 0.4621171573) < 1e-8
    record(2, ok, f"integral {num:.12f} vs tanh(1/2) {closed:.12f}")
    assert ok


@pytest.mark.xfail(strict=True, reason="the printed m = 1 right-hand side is twice the value of the integral")
def test_criterion_03_m1_identity():
    gaps, corrected = [], []
    for P in P_GRID:
        num, printed = classical_m1(P)
        gaps.append(abs(num - printed))
        corrected.append(abs(num - printed / 2))
    ok = max(gaps) < 1e-7
    record(3, ok, f"printed sech*tanh form gap {max(gaps):.3e}; half of it matches to {max(corrected):.2e}")
    assert ok


def test_m1_identity_with_half_factor():
    for P in P_GRID:
        num, printed = classical_m1(P)
        assert abs(num - printed / 2) < 1e-7
        # independent route: d/dP of int cos(P x)/cosh(pi x) dx = sech(P/2)
        h = 1e-4
        sech = lambda p: 1.0 / math.cosh(p / 2)  # noqa: E731
        assert num == pytest.approx(-(sech(P + h) - sech(P - h)) / (2 * h), abs=1e-7)


# ---------------------------------------------------------------- 4 to 7


def test_criterion_04_three_routes():
    t0 = time.perf_counter()
    worst, where = 0.0, None
    for m in M_GRID:
        for P in P_GRID:
            for A in A_GRID:
                case = rank_one_case(m, P, A)
                for k in range(10):
                    r = case.three_routes(0.6 * P * k / 9)
                    g = max(r["gap_series_contour"], r["gap_series_closed"], r["gap_contour_closed"])
                    if g > worst:
                        worst, where = g, (m, P, A)
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-6 and elapsed < 300.0
    record(4, ok, f"max pairwise gap {worst:.2e} at (m,P,A)={where}, 36 cases x 10 points in {elapsed:.1f}s")
    assert ok


def test_criterion_05_sigma_independence():
    worst = 0.0
    for m in M_GRID:
        for A in A_GRID:
            case = rank_one_case(m, 1.0, A)
            L = float(case.rs.derived.L[0])
            for u in (0.0, 0.3):
                v0 = case.master_contour(u, sigma=0.0).require()
                for s in (0.4 * L, -0.4 * L):
                    worst = max(worst, abs(v0 - case.master_contour(u, sigma=s).require()))
    ok = worst < 1e-8
    record(5, ok, f"max contour difference between admissible sigma {worst:.2e}")
    assert ok


def test_criterion_06_transform():
    xs = np.linspace(-0.45, 0.45, 5)
    ys = (0.5, -3.0)
    points = [complex(x, y) for x in xs for y in ys]
    worst, n = 0.0, 0
    for m in M_GRID:
        for P in P_GRID:
            for A in A_GRID:
                case = rank_one_case(m, P, A)
                for lam in points:
                    assert case.in_transform_tube(lam)
                    worst = max(worst, case.master_transform_check(lam)["gap"])
                    n += 1
    ok = worst < 1e-6
    record(6, ok, f"max gap {worst:.2e} over {n} tube points (10 per case)")
    assert ok


def test_criterion_07_plancherel():
    gaps = [rank_one_case(2.0, 1.0, A).master_plancherel_check()["gap"] for A in (0.0, 0.5)]
    ok = max(gaps) < 1e-6
    record(7, ok, f"gaps {gaps[0]:.2e} (A=0), {gaps[1]:.2e} (A=0.5)")
    assert ok


# ---------------------------------------------------------------- 8 to 10


def test_criterion_08_jacobi_dual_routes():
    worst, count = 0.0, 0
    for name, m in JACOBI_SYSTEMS:
        fam = JacobiFamily(build_root_system(name, m))
        for mu in fam.dominant_weights(5):
            a = fam.coeffs(mu)
            b = fam.coeffs(mu, "gram_schmidt")
            assert a.coeffs.keys() == b.coeffs.keys()
            worst = max(worst, max(abs(a.coeffs[k] - b.coeffs[k]) for k in a.coeffs))
            count += 1
    ok = worst < 1e-8
    record(8, ok, f"max coefficient gap {worst:.2e} over {count} weights")
    assert ok


def test_criterion_09_norms_and_cardW():
    rng = np.random.default_rng(SEED)
    worst_norm = 0.0
    for name, m in JACOBI_SYSTEMS:
        fam = JacobiFamily(build_root_system(name, m))
        for mu in fam.dominant_weights(5):
            a, b = fam.norm_P_squared(mu), fam.norm_P_squared_quadrature(mu)
            worst_norm = max(worst_norm, abs(a - b) / abs(b))
    worst_card = 0.0
    for preset, nclass in (("A1", 1), ("A2", 1), ("B2", 2)):
        for _ in range(5):
            fam = JacobiFamily(build_root_system(preset, list(rng.uniform(0.1, 6.0, nclass))))
            worst_card = max(worst_card, abs(fam.cardW_check() - fam.rs.order_W))
    ok = worst_norm < 1e-6 and worst_card < 1e-10
    record(9, ok, f"norm relative gap {worst_norm:.2e}, cardW gap {worst_card:.2e}")
    assert ok


def test_criterion_10_bounds():
    rng = np.random.default_rng(SEED)
    violations = {}
    for name, m in BOUND_SYSTEMS:
        fam = JacobiFamily(build_root_system(name, m))
        rs = fam.rs
        weights = fam.dominant_weights(3)
        bad = 0
        for _ in range(1000):
            H = rng.uniform(0.0, 1.5, rs.rank) @ rs.omega
            zeta = rs.omega @ rs.gram @ H
            mu = weights[rng.integers(len(weights))]
            e_mu = math.exp(float(np.asarray(mu.coords, float) @ zeta))
            P = fam.eval_P(mu, zeta + 0j).real
            F = fam.eval_F_discrete(mu, zeta + 0j).real
            c = fam.c_at(mu)
            tol = 1e-10 * e_mu
            bad += not (e_mu - tol <= P <= e_mu / c + tol)
            bad += not (c * e_mu - tol <= F <= e_mu + tol)
        violations[f"{name}{m}"] = bad
    for m_half, m in ((0.0, 0.5), (0.0, 1.0), (0.0, 2.0), (0.0, 3.7), (1.5, 2.5)):
        p = Rank1Params(m_half, m)
        lam = rng.uniform(-2.0, 2.0, 1000) + 1j * rng.uniform(-10.0, 10.0, 1000)
        u = rng.uniform(0.0, 3.0, 1000)
        lhs = np.abs(F_lambda_rank1(p, lam, u))
        rhs = F_lambda_rank1(p, lam.real, u).real
        violations[f"schapira({m_half},{m})"] = int(np.sum(lhs > rhs * (1 + 1e-9) + 1e-13))
    total = sum(violations.values())
    record(10, total == 0, f"{total} violations across {len(violations)} systems x 1000 samples")
    assert total == 0


# ---------------------------------------------------------------- 11 to 13


def _growth_grid(rank, n, X=0.9, Y=20.0):
    x = np.linspace(-X, X, n)
    y = np.linspace(-Y, Y, n)
    if rank == 1:
        return (x[:, None] + 1j * y[None, :]).reshape(-1, 1)
    gx, gy = np.meshgrid(x, y)
    g = (gx + 1j * gy).ravel()
    return np.stack([g, 0.7 * g[::-1] + 0.1j], axis=-1)


def test_criterion_11_d_function():
    rng = np.random.default_rng(SEED)
    worst, drift = 0.0, 0.0
    for name, m in FUNCTION_SYSTEMS:
        dfun = DFunction(build_cfunctions(build_root_system(name, m)))
        lam = random_lambda(rng, dfun.rs.rank, 500)
        a = dfun.d(lam)
        worst = max(worst, rel_gap(a, dfun.d_via_shift(lam)))
        if dfun.has_polynomial_form:
            worst = max(worst, rel_gap(a, dfun.d_polynomial(lam)))
        c1 = dfun.growth_ratio(_growth_grid(dfun.rs.rank, 20)).max()
        c2 = dfun.growth_ratio(_growth_grid(dfun.rs.rank, 40)).max()
        drift = max(drift, abs(c2 / c1 - 1.0))
    ok = worst < 1e-10 and drift < 0.05
    record(11, ok, f"max route gap {worst:.2e} over 500 lambda per system, growth drift {100 * drift:.2f}%")
    assert ok


def _table_rows_ok() -> tuple[int, int]:
    matched = 0
    for case, (m_half, m) in TABLE1_INSTANCES.items():
        rs = build_root_system("BC1", [m_half, m]) if m_half else build_root_system("A1", [m])
        bfun = BFunction(build_cfunctions(rs))
        row = classify_singularities(rs).roots[0]
        ok = row.table == 1 and row.case == case
        for fam in row.families:
            top = 3 if fam.k_max is None else fam.k_max
            for k in range(fam.k_min, top + 1):
                order = numeric_pole_order(bfun.b_over_cc, np.array([fam.offset - k + 0j]), np.array([1.0]))
                ok &= abs(order - fam.order) < 0.01
        matched += ok
    for case, (m_half, m) in TABLE2_INSTANCES.items():
        if m_half == 0.0:
            rs, root = build_root_system("BC2", [m, 1.0, 1.0]), np.array([1.0, 1.0])
        else:
            rs, root = build_root_system("BC2", [1.0, m_half, m]), np.array([2.0, 0.0])
        bfun = BFunction(build_cfunctions(rs))
        row = next(r for r in classify_singularities(rs).roots if np.allclose(r.root, root))
        ok = row.table == 2 and row.case == case
        scale = rs.lambda_alpha(root, root)
        transverse = np.array([root[1], -root[0]]) * (0.137 + 0.291j)

        def order_at(x, bfun=bfun, rs=rs, root=root, scale=scale, transverse=transverse):
            return numeric_pole_order(lambda amb: bfun.b_over_cc(rs.to_coords(amb)),
                                      x * root / scale + transverse, root / scale)

        for fam in row.families:
            top = 2 if fam.k_max is None else fam.k_max
            for k in range(fam.k_min, top + 1):
                ok &= abs(order_at(fam.offset - k) - fam.order) < 0.01
        if not row.families:
            for x in (-(m_half / 4.0 + 0.5), -0.5 * (m_half / 2.0 + m)):
                ok &= order_at(x) < 0.01
        matched += ok
    seen = {(1, root_singularities(h, m, True).case) for h, m in TABLE1_INSTANCES.values()}
    seen |= {(2, root_singularities(h, m, False).case) for h, m in TABLE2_INSTANCES.values()}
    return matched, len(seen)


def test_criterion_12_b_function():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for name, m in FUNCTION_SYSTEMS:
        bfun = BFunction(build_cfunctions(build_root_system(name, m)))
        lam = random_lambda(rng, bfun.rs.rank, 500)
        worst = max(worst, rel_gap(bfun.b(lam), bfun.b_explicit(lam)))
    matched, distinct = _table_rows_ok()
    rows = len(TABLE1_INSTANCES) + len(TABLE2_INSTANCES)
    ok = worst < 1e-10 and matched == rows and distinct == rows
    record(12, ok, f"route gap {worst:.2e}; {matched}/{rows} table rows reproduced with numeric pole orders")
    assert ok


def test_criterion_13_tube_lemma():
    rng = np.random.default_rng(SEED)
    mismatches, checked = 0, 0
    for name, m in (("A1", [2.0]), ("BC1", [1.5, 2.5]), ("A2", [1.0]), ("B2", [1.0, 2.0]),
                    ("BC2", [1.0, 2.0, 1.5])):
        rs = build_root_system(name, m)
        for delta in (0.5, 1.0):
            lam = random_lambda(rng, rs.rank, 1000, re=1.2, im=3.0)
            direct = tube_contains(rs, TubeDomain("T_delta", delta), lam)
            assert 0 < direct.sum() < len(direct)
            mismatches += int(np.sum(direct != tube_intersection_over_W(rs, "T_prime", delta, lam)))
            checked += len(lam)
    record(13, mismatches == 0, f"{mismatches} membership mismatches over {checked} points")
    assert mismatches == 0


# ---------------------------------------------------------------- 14, 15


def test_criterion_14_general_rank_rate():
    rs = build_root_system("A2", [1.0])
    case = MasterCase(rs, exponential_hardy(1.0))
    eps = case.a.P / rs.derived.Omega
    w = rs.omega[0]
    fit = series_convergence_fit(case, 0.4 * eps * w / rs.norm(w), 24)
    ok = fit.relative_error < 0.2
    record(14, ok, f"fitted rate {fit.fitted_rate:.4f} vs predicted {fit.predicted_rate:.4f} "
                   f"(relative error {100 * fit.relative_error:.1f}%)")
    assert ok


def test_criterion_15_generating_function():
    gap = abs(series_lhs(2.0, 0.3, 0.4, 60) - series_rhs(2.0, 0.3, 0.4))
    ok = gap < 1e-10
    record(15, ok, f"truncated series gap {gap:.2e} at (m, x, tau) = (2, 0.3, 0.4), N = 60")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
