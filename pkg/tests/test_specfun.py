from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import gamma as sp_gamma

from ramanujan_roots.gammac import Singular, build_cfunctions
from ramanujan_roots.rootsys import build_root_system
from ramanujan_roots.specfun import (BFunction, DFunction, TubeDomain, classify_singularities,
                                     numeric_pole_order, root_singularities, tube_contains,
                                     tube_intersection_over_W)

SYSTEMS = [("A1", [2.0]), ("A1", [1.0]), ("A1", [0.5]), ("A1", [3.7]), ("BC1", [1.5, 2.5]),
           ("BC1", [2.0, 3.0]), ("A2", [1.0]), ("B2", [1.0, 2.0]), ("BC2", [1.0, 2.0, 1.5])]


def _funcs(name, m):
    cf = build_cfunctions(build_root_system(name, m))
    return cf, DFunction(cf), BFunction(cf)


def _random_lambda(rng, rank, n, re=2.5, im=6.0):
    return rng.uniform(-re, re, (n, rank)) + 1j * rng.uniform(-im, im, (n, rank))


def _close(a, b, rel):
    return np.abs(a - b) <= rel * np.maximum(1.0, np.abs(a))


# ------------------------------------------------------------------ d


def test_d_rank_one_examples():
    _, d2, _ = _funcs("A1", [2.0])
    assert d2.C_d == pytest.approx(1.0)
    assert d2.d(3.0) == pytest.approx(16.0, rel=1e-12)
    assert d2.d(0.0) == pytest.approx(1.0, rel=1e-12)
    _, d1, _ = _funcs("A1", [1.0])
    assert d1.C_d == pytest.approx(2.0)
    assert d1.d(1.0) == pytest.approx(3.0, rel=1e-12)


@pytest.mark.parametrize("m", [0.5, 1.0, 2.0, 3.7])
def test_d_rank_one_lattice_formula(m):
    _, dfun, _ = _funcs("A1", [m])
    C_d = 2.0 / sp_gamma(m + 1.0)
    for n in range(7):
        expected = C_d * (n + m / 2.0) * sp_gamma(n + m) / sp_gamma(n + 1.0)
        assert dfun.d(float(n)) == pytest.approx(expected, rel=1e-11)


@pytest.mark.parametrize("name,m", SYSTEMS)
def test_d_two_routes(name, m, rng):
    cf, dfun, _ = _funcs(name, m)
    lam = _random_lambda(rng, cf.rs.rank, 500)
    a, b = dfun.d(lam), dfun.d_via_shift(lam)
    assert np.all(_close(a, b, 1e-10))
    if dfun.has_polynomial_form:
        assert np.all(_close(a, dfun.d_polynomial(lam), 1e-10))


def test_polynomial_form_availability():
    assert _funcs("A1", [2.0])[1].has_polynomial_form
    assert _funcs("BC1", [2.0, 3.0])[1].has_polynomial_form
    assert not _funcs("A1", [0.5])[1].has_polynomial_form
    with pytest.raises(ValueError):
        _funcs("BC1", [1.5, 2.5])[1].d_polynomial(0.3)


@given(st.complex_numbers(max_magnitude=8, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=8, allow_nan=False, allow_infinity=False))
def test_d_routes_property_b2(z1, z2):
    _, dfun, _ = _funcs("B2", [1.0, 2.0])
    lam = np.array([z1, z2])
    try:
        a = dfun.d(lam)
    except Singular:
        return
    assert abs(a - dfun.d_via_shift(lam)) <= 1e-9 * max(1.0, abs(a))


def _grid(rank, n, X=0.9, Y=20.0):
    x = np.linspace(-X, X, n)
    y = np.linspace(-Y, Y, n)
    if rank == 1:
        return (x[:, None] + 1j * y[None, :]).reshape(-1, 1)
    gx, gy = np.meshgrid(x, y)
    g = (gx + 1j * gy).ravel()
    return np.stack([g, 0.7 * g[::-1] + 0.1j], axis=-1)


@pytest.mark.parametrize("name,m", SYSTEMS)
def test_d_growth_constant_stable_under_doubling(name, m):
    _, dfun, _ = _funcs(name, m)
    c1 = dfun.growth_ratio(_grid(dfun.rs.rank, 20)).max()
    c2 = dfun.growth_ratio(_grid(dfun.rs.rank, 40)).max()
    assert np.isfinite(c1) and np.isfinite(c2)
    assert abs(c2 / c1 - 1.0) < 0.05


# ------------------------------------------------------------------ b


@pytest.mark.parametrize("m", [0.5, 1.0, 2.0, 3.7])
def test_b_rank_one_closed_form(m):
    _, _, bfun = _funcs("A1", [m])
    C_b = 0.5 * sp_gamma(m) / (sp_gamma(m / 2.0) * sp_gamma(1.0 + m / 2.0))
    assert bfun.C_b == pytest.approx(C_b, rel=1e-12)
    lam = np.array([0.3, 0.25 + 1.7j, -2.6 - 0.4j])
    assert np.allclose(bfun.b(lam[:, None]), C_b / np.sin(np.pi * lam), rtol=1e-11)


def test_b_m2_constant():
    assert _funcs("A1", [2.0])[2].C_b == pytest.approx(0.5)


@pytest.mark.parametrize("name,m", SYSTEMS)
def test_b_routes_agree(name, m, rng):
    cf, _, bfun = _funcs(name, m)
    lam = _random_lambda(rng, cf.rs.rank, 300)
    assert np.all(_close(bfun.b(lam), bfun.b_explicit(lam), 1e-10))
    assert np.all(_close(bfun.b_over_cc(lam), bfun.b_times_density(lam), 1e-10))


@pytest.mark.parametrize("name,m", [("A1", [2.0]), ("BC1", [1.5, 2.5]), ("A2", [1.0]), ("B2", [1.0, 2.0])])
def test_b_routes_agree_on_half_lattice(name, m):
    cf, _, bfun = _funcs(name, m)
    rank = cf.rs.rank
    pts = np.stack(np.meshgrid(*[np.arange(-3.0, 3.01, 0.5)] * rank), -1).reshape(-1, rank)
    for p in pts:
        try:
            v = bfun.b(p)
        except Singular:
            with pytest.raises(Singular):
                bfun.b_explicit(p)
            continue
        assert abs(v - bfun.b_explicit(p)) <= 1e-9 * max(1.0, abs(v))


def test_b_pole_is_tagged():
    _, _, bfun = _funcs("A1", [2.0])
    with pytest.raises(Singular):
        bfun.b(1.0)


def test_symmetrized_kernel_is_even(rng):
    _, _, bfun = _funcs("A1", [1.0])
    z = 1.0 + 0.5j
    for lam in _random_lambda(rng, 1, 20, re=0.45, im=3.0):
        at = -(np.exp(-z * lam[0]) * bfun.b(lam) + np.exp(z * lam[0]) * bfun.b(-lam))
        at_neg = -(np.exp(z * lam[0]) * bfun.b(-lam) + np.exp(-z * lam[0]) * bfun.b(lam))
        assert at == pytest.approx(at_neg, abs=1e-13)
        assert at == pytest.approx(2 * bfun.C_b * np.sinh(z * lam[0]) / np.sin(np.pi * lam[0]), rel=1e-10)


@pytest.mark.parametrize("name,m", [("A1", [2.0]), ("BC1", [1.5, 2.5]), ("A2", [1.0]), ("B2", [1.0, 2.0])])
def test_pi_b_bound_stable(name, m):
    cf, _, bfun = _funcs(name, m)
    rs = cf.rs
    eta = 0.1
    tube = TubeDomain("T_Pi_eta", eta)
    s = len(rs.unmult_idx)

    def worst(n):
        x = np.linspace(-0.4 * 0.999, 0.4 * 0.999, n)
        y = np.linspace(-10.0, 10.0, n)
        gx, gy = np.meshgrid(x, y)
        if rs.rank == 1:
            lam = (gx + 1j * gy).reshape(-1, 1)
        else:
            lam = np.stack([(gx + 1j * gy).ravel(), (0.5 * gx - 0.3j * gy).ravel()], -1)
        lam = lam[tube_contains(rs, tube, lam)]
        env = (1 + np.linalg.norm(lam, axis=-1)) ** s * np.exp(-np.pi * np.abs(lam.imag).sum(-1))
        return float(np.max(np.abs(bfun.pi_b(lam)) / env))

    c1, c2 = worst(20), worst(40)
    assert np.isfinite(c1) and abs(c2 / c1 - 1.0) < 0.05


@pytest.mark.parametrize("m", [1.0, 2.0, 3.7])
def test_lattice_residues_rank_one(m):
    _, dfun, bfun = _funcs("A1", [m])
    rho = dfun.rs.rho_j[0]
    theta = np.linspace(0.0, 2 * np.pi, 128, endpoint=False)
    r = 0.2
    for n in range(6):
        pts = rho + n + r * np.exp(1j * theta)
        vals = bfun.b_over_cc(pts[:, None])
        residue = np.mean(vals * r * np.exp(1j * theta))
        expected = 0.5 * (-1) ** n * dfun.d(float(n)) / math.pi
        assert residue == pytest.approx(expected, rel=1e-10)


# --------------------------------------------------------- singularities

TABLE1_INSTANCES = {"1": (0.0, 2.0), "2": (1.0, 2.0), "3": (1.0, 5.0), "4": (1.0, 1.0),
                    "5a": (1.0, 2.5), "5b": (1.0, 0.5)}
TABLE2_INSTANCES = {"1": (0.0, 2.0), "2": (0.0, 2.5), "3": (1.0, 2.0), "4": (1.0, 5.0), "5": (1.0, 1.0),
                    "6": (1.0, 1.5), "7a": (1.0, 2.2), "7b": (1.0, 0.7)}


def _table1_system(m_half, m):
    return build_root_system("BC1", [m_half, m]) if m_half else build_root_system("A1", [m])


def _table2_system(m_half, m):
    """BC2 instance whose not-in-basis root (1,1) or (2,0) carries the requested multiplicities."""
    if m_half == 0.0:
        return build_root_system("BC2", [m, 1.0, 1.0]), np.array([1.0, 1.0])
    return build_root_system("BC2", [1.0, m_half, m]), np.array([2.0, 0.0])


def test_table1_reduced_simple_root_example():
    row = root_singularities(0.0, 2.0, True)
    assert row.table == 1 and row.case == "1"
    assert [(f.name, f.order) for f in row.families] == [("H2", 1)]
    assert row.l_beta == pytest.approx(-1.0)


def test_table1_double_pole_row():
    row = root_singularities(1.0, 1.0, True)
    assert row.case == "4"
    assert len(row.families) == 1 and row.families[0].order == 2
    assert row.families[0].coincides_with is not None


def test_table2_no_singularity_row():
    row = root_singularities(0.0, 2.0, False)
    assert row.table == 2 and row.case == "1" and row.families == ()


@pytest.mark.parametrize("case", sorted(TABLE1_INSTANCES))
def test_table1_rows_match_numeric_pole_orders(case):
    rs = _table1_system(*TABLE1_INSTANCES[case])
    bfun = BFunction(build_cfunctions(rs))
    row = classify_singularities(rs).roots[0]
    assert row.table == 1 and row.case == case
    for fam in row.families:
        top = 3 if fam.k_max is None else fam.k_max
        for k in range(fam.k_min, top + 1):
            base = np.array([fam.offset - k + 0j])
            order = numeric_pole_order(bfun.b_over_cc, base, np.array([1.0]))
            assert order == pytest.approx(fam.order, abs=0.01)


@pytest.mark.parametrize("case", sorted(TABLE2_INSTANCES))
def test_table2_rows_match_numeric_pole_orders(case):
    m_half, m = TABLE2_INSTANCES[case]
    rs, root = _table2_system(m_half, m)
    bfun = BFunction(build_cfunctions(rs))
    row = next(r for r in classify_singularities(rs).roots if np.allclose(r.root, root))
    assert row.table == 2 and row.case == case
    scale = rs.lambda_alpha(root, root)
    transverse = np.array([root[1], -root[0]]) * (0.137 + 0.291j)

    def fn(amb):
        return bfun.b_over_cc(rs.to_coords(amb))

    def order_at(x):
        return numeric_pole_order(fn, x * root / scale + transverse, root / scale)

    for fam in row.families:
        top = 2 if fam.k_max is None else fam.k_max
        for k in range(fam.k_min, top + 1):
            assert order_at(fam.offset - k) == pytest.approx(fam.order, abs=0.01)
    if not row.families:
        # neither candidate hyperplane carries a pole
        for x in (-(m_half / 4.0 + 0.5), -0.5 * (m_half / 2.0 + m)):
            assert order_at(x) < 0.01


def test_all_rows_covered():
    seen = {(1, root_singularities(h, m, True).case) for h, m in TABLE1_INSTANCES.values()}
    seen |= {(2, root_singularities(h, m, False).case) for h, m in TABLE2_INSTANCES.values()}
    assert len(seen) == len(TABLE1_INSTANCES) + len(TABLE2_INSTANCES)


def test_L_beta_is_minus_l_beta():
    rs = build_root_system("BC2", [1.0, 2.0, 1.5])
    rep = classify_singularities(rs)
    for row, L in zip(rep.roots, rep.L):
        if row.in_basis:
            assert L == pytest.approx(-row.l_beta)
    assert rep.as_dict()["L_beta"] == list(rep.L)


# --------------------------------------------------------------- tubes


def test_tube_examples():
    rs = build_root_system("A1", [2.0])
    t1 = TubeDomain("T_delta", 1.0)
    assert tube_contains(rs, t1, 0.99)
    assert not tube_contains(rs, t1, 1.01)
    for d in (1e-3, 0.5, 1.0):
        assert tube_contains(rs, TubeDomain("T_delta", d), 0.0)


@pytest.mark.parametrize("kind,param", [("T_delta", 0.0), ("T_delta", 1.5), ("T_Pi_eta", 0.5), ("nope", 1.0)])
def test_tube_rejects_invalid_parameters(kind, param):
    with pytest.raises(ValueError):
        TubeDomain(kind, param)


@pytest.mark.parametrize("name,m", [("A2", [1.0]), ("B2", [1.0, 2.0]), ("BC2", [1.0, 2.0, 1.5]),
                                    ("BC1", [1.5, 2.5])])
@pytest.mark.parametrize("delta", [0.5, 1.0])
def test_tube_delta_equals_intersection_over_W(name, m, delta, rng):
    rs = build_root_system(name, m)
    lam = _random_lambda(rng, rs.rank, 1000, re=1.2, im=3.0)
    direct = tube_contains(rs, TubeDomain("T_delta", delta), lam)
    assert 0 < direct.sum() < len(direct)
    assert np.array_equal(direct, tube_intersection_over_W(rs, "T_prime", delta, lam))
    assert np.array_equal(direct, tube_intersection_over_W(rs, "T_doubleprime", delta, lam))


def test_tube_kinds_vectorize(rng):
    rs = build_root_system("B2", [1.0, 2.0])
    lam = _random_lambda(rng, 2, 50, re=1.0)
    for kind in ("T_delta", "T_prime", "T_doubleprime", "T_Pi_eta", "Hardy", "L_Sigma", "T_Sigma"):
        param = 0.2 if kind == "T_Pi_eta" else 0.8
        out = tube_contains(rs, TubeDomain(kind, param), lam)
        assert out.shape == (50,)
        assert [tube_contains(rs, TubeDomain(kind, param), x) for x in lam[:5]] == list(out[:5])


def test_t_pi_inside_t_delta_shift(rng):
    # membership implication: T_gamma with gamma small lies in T_Pi_eta and in T_(delta - eta)
    rs = build_root_system("A1", [2.0])
    lam = _random_lambda(rng, 1, 500, re=1.0)
    inner = tube_contains(rs, TubeDomain("T_delta", 0.1), lam)
    assert np.all(tube_contains(rs, TubeDomain("T_Pi_eta", 0.3), lam)[inner])
    assert np.all(tube_contains(rs, TubeDomain("T_delta", 0.5), lam)[inner])
