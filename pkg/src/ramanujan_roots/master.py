"""Ramanujan-type master theorem for root systems: series, contour extension and transforms.

For ``a`` in the Hardy class ``H(A, P, delta)`` the alternating Jacobi series::

    f(h) = sum_{mu in P+} (-1)^{|mu|} d(mu) a(mu + rho) F_{mu+rho}(h)

converges near the compact torus.  In rank one the harness also evaluates the
vertical-line integral representation of ``f`` on ``A``, the hypergeometric
Fourier transform of ``f`` and the Plancherel identity, and compares them with
closed forms for ``a(lambda) = exp(-(P + iA) lambda)``.

Normalizations used throughout (rank one, ``u = beta(H)``):

* Haar measure on ``A``: ``da = du / HAAR_A_SCALE`` with ``HAAR_A_SCALE = 4 pi``,
  ``u`` ranging over ``R``; ``dmu(a) = |2 sinh u|^m da``.
* Measure on ``sigma + i R``: Lebesgue ``dy`` for ``lambda = sigma + i y``.
* ``atilde = -sum_w a(w lambda) b(w lambda)``; with these choices ``atilde`` is
  exactly the transform of ``f`` and reproduces ``f`` through the contour integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .gammac import build_cfunctions
from .hyper1 import Rank1Params, F_lambda_rank1
from .jacobi import GroupPoint, JacobiFamily, as_zeta, choose_cutoff, series_tail_bound
from .quad import QuadratureResult, a_integral, contour_integral, line_integral
from .rootsys import RootSystem
from .specfun import BFunction, TubeDomain, tube_contains

HAAR_A_SCALE = 4.0 * math.pi
ATILDE_SIGN = -1.0


class DomainError(ValueError):
    pass


class NotAvailable(NotImplementedError):
    pass


# ---------------------------------------------------------------------------
# Hardy class
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class HardyFunction:
    """``a(lambda)`` on omega-coordinates (shape ``(..., l)``) with its claimed Hardy constants."""

    eval: Callable[[np.ndarray], np.ndarray]
    A: float
    P: float
    delta: float = 1.0
    C: float = 1.0

    def __post_init__(self):
        if not (0.0 <= self.A < math.pi):
            raise ValueError("Hardy class needs 0 <= A < pi")
        if not self.P > 0:
            raise ValueError("Hardy class needs P > 0")
        if not (0.0 < self.delta <= 1.0):
            raise ValueError("Hardy class needs 0 < delta <= 1")

    def __call__(self, lam) -> np.ndarray:
        return self.eval(np.asarray(lam, dtype=complex))

    def envelope(self, lam) -> np.ndarray:
        lam = np.asarray(lam, dtype=complex)
        return np.exp(np.sum(-self.P * lam.real + self.A * np.abs(lam.imag), axis=-1))


def exponential_hardy(P: float, A: float = 0.0, delta: float = 1.0) -> HardyFunction:
    """``a(lambda) = exp(-(P + iA) sum_j lambda_j)``."""
    z = complex(P, A)
    return HardyFunction(lambda lam: np.exp(-z * np.sum(lam, axis=-1)), A, P, delta, 1.0)


@dataclass(frozen=True)
class HardyReport:
    fitted_C: float
    fitted_C_extended: float
    violation: bool

    def as_dict(self) -> dict:
        return {"fitted_C": self.fitted_C, "fitted_C_extended": self.fitted_C_extended,
                "violation": self.violation}


def _hardy_grid(rs: RootSystem, a: HardyFunction, n: int, R: float, Y: float) -> np.ndarray:
    """Grid points of ``H(delta)`` with ``Re lambda_j <= R`` and ``|Im lambda_j| <= Y``."""
    lo = -a.delta * float(np.max(rs.derived.rho_tilde))
    re = np.linspace(lo, R, n)
    im = np.linspace(-Y, Y, 2 * n + 1)
    axis = (re[:, None] + 1j * im[None, :]).ravel()
    mesh = np.meshgrid(*([axis] * rs.rank), indexing="ij")
    pts = np.stack([x.ravel() for x in mesh], axis=-1)
    keep = tube_contains(rs, TubeDomain("Hardy", a.delta), pts)
    return pts[np.atleast_1d(keep)]


def hardy_validate(rs: RootSystem, a: HardyFunction, n_samples: int = 24, R: float = 6.0,
                   Y: float = 8.0) -> HardyReport:
    """Sample ``|a| / envelope`` on ``H(delta)``; flag growth when the grid is extended."""

    def fit(scale: float) -> float:
        lam = _hardy_grid(rs, a, n_samples, R * scale, Y * scale)
        with np.errstate(over="ignore", invalid="ignore"):
            ratio = np.abs(a(lam)) / a.envelope(lam)
        ratio = ratio[np.isfinite(ratio)]
        return float(np.max(ratio)) if ratio.size else 0.0

    c1, c2 = fit(1.0), fit(2.0)
    violation = c2 > 1.01 * c1 + 1e-300 and c2 > 0
    return HardyReport(c1, c2, bool(violation))


# ---------------------------------------------------------------------------
# master case
# ---------------------------------------------------------------------------

class MasterCase:
    """Root data bundled with a Hardy-class function and everything derived from it."""

    def __init__(self, rs: RootSystem, a: HardyFunction):
        self.rs = rs
        self.a = a
        self.cf = build_cfunctions(rs)
        self.bfun = BFunction(self.cf)
        self.jac = JacobiFamily(rs)
        self.orbits = [np.array(rs.weyl_orbit(np.eye(rs.rank, dtype=int)[j]), float)
                       for j in range(rs.rank)]

    @property
    def rank_one(self) -> bool:
        return self.rs.rank == 1

    @property
    def rank1_params(self) -> Rank1Params:
        self._need_rank_one()
        return Rank1Params(float(self.rs.unmult_m_half[0]), float(self.rs.unmult_m[0]))

    def _need_rank_one(self):
        if not self.rank_one:
            raise NotAvailable("only rank one is evaluated numerically for this part of the theorem")

    # --------------------------------------------------------------- atilde
    def weyl_sum(self, lam) -> np.ndarray:
        """``sum_{w in W} a(w lambda) b(w lambda)``; lam in omega-coordinates ``(..., l)``."""
        lam = np.asarray(lam, dtype=complex)
        total = 0.0
        for w in self.rs.weyl_omega:
            wl = lam @ w.T
            total = total + self.a(wl) * self.bfun.b(wl)
        return total

    def atilde(self, lam) -> np.ndarray:
        return ATILDE_SIGN * self.weyl_sum(lam)

    def atilde_closed(self, lam) -> np.ndarray:
        """``2 C_b sinh((P + iA) lambda) / sin(pi lambda)`` for the exponential rank-one family."""
        self._need_rank_one()
        lam = np.asarray(lam, dtype=complex)
        z = complex(self.a.P, self.a.A)
        with np.errstate(invalid="ignore", divide="ignore"):
            val = 2.0 * self.bfun.C_b * np.sinh(z * lam) / np.sin(np.pi * lam)
        return np.where(np.abs(lam) < 1e-12, 2.0 * self.bfun.C_b * z / np.pi, val)

    # --------------------------------------------------------------- series
    def _points(self, h) -> tuple[np.ndarray, bool]:
        """Reshape to ``(N, l)``; rank-one inputs may be given as a flat array of points."""
        zeta = as_zeta(self.rs, h)
        single = zeta.size == self.rs.rank and zeta.ndim <= 1
        return zeta.reshape(-1, self.rs.rank), single

    def _radius(self, zeta: np.ndarray) -> float:
        """``max_j max_w |Re (w omega_j)(H)|`` over the given points."""
        zr = np.real(np.atleast_2d(zeta))
        return float(max(np.max(np.abs(zr @ o.T)) for o in self.orbits))

    def check_domain(self, h) -> np.ndarray:
        zeta, _ = self._points(h)
        rs = self.rs
        amb = np.real(zeta) @ np.linalg.inv(rs.omega @ rs.gram).T
        norms = np.sqrt(np.einsum("ni,ij,nj->n", amb, rs.gram, amb))
        bound = self.a.P / rs.derived.Omega
        if np.any(norms >= bound):
            raise DomainError(f"point outside D_(P/Omega): ||H|| = {norms.max():.6g} >= {bound:.6g}")
        return zeta

    def series_cutoff(self, zeta: np.ndarray, tol: float) -> int:
        rs = self.rs
        r = self._radius(zeta)
        _, w_max = self.jac.norm_constants()
        C = self.a.C * math.exp(-self.a.P * float(np.sum(rs.rho_j)))
        return choose_cutoff(C, self.a.P, r, tol, M=rs.derived.M, K=self.growth_K,
                             kappa=1.0, w_max=w_max, rank=rs.rank)

    @property
    def growth_K(self) -> float:
        if not hasattr(self, "_growth_K"):
            self._growth_K = 1.05 * self.jac.growth_constant(30 if self.rs.rank > 1 else 200)
        return self._growth_K

    def series_terms(self, h, N: int):
        """Shell sums ``S_k = sum_{|mu| = k}`` of the series terms, for ``k = 0..N``."""
        zeta, _ = self._points(h)
        shells = np.zeros((N + 1, zeta.shape[0]), dtype=complex)
        rho = self.rs.rho_j
        for mu in self.jac.dominant_weights(N):
            lam = np.asarray(mu.coords, float) + rho
            coef = (-1) ** mu.size * self.jac.d(mu) * complex(self.a(lam))
            if coef == 0:
                continue
            shells[mu.size] += coef * self.jac.eval_F_discrete(mu, zeta)
        return shells

    def master_series(self, h, tol: float = 1e-12):
        zeta = self.check_domain(h)
        _, single = self._points(h)
        N = self.series_cutoff(zeta, tol)
        vals = self.series_terms(zeta, N).sum(axis=0)
        return complex(vals[0]) if single else vals

    # ---------------------------------------------------------- closed forms
    def closed_form(self, u) -> np.ndarray:
        """``2^{-m/2} sinh z / (cosh u + cosh z)^{m/2+1}``, ``z = P + iA`` (reduced rank one)."""
        p = self.rank1_params
        if p.m_half != 0.0:
            raise NotAvailable("closed form available for the reduced rank-one system")
        z = complex(self.a.P, self.a.A)
        u = np.asarray(u, dtype=complex)
        return 2.0 ** (-p.m / 2.0) * np.sinh(z) / (np.cosh(u) + np.cosh(z)) ** (p.m / 2.0 + 1.0)

    # --------------------------------------------------------------- contour
    def sigma_admissible(self, sigma: float, delta: float | None = None) -> bool:
        d = self.a.delta if delta is None else delta
        return bool(tube_contains(self.rs, TubeDomain("T_delta", d), np.array([complex(sigma)])))

    def contour_integrand(self, u: float, use_closed: bool = True):
        p = self.rank1_params
        order = self.rs.order_W

        def g(lam: np.ndarray) -> np.ndarray:
            lam1 = lam[:, 0]
            at = self.atilde_closed(lam1) if use_closed else self.atilde(lam)
            F = F_lambda_rank1(p, lam1, u)
            dens = self.cf.plancherel_density(lam)
            return at * F * dens / order

        return g

    def master_contour(self, u: float, sigma: float = 0.0, tol: float = 1e-10,
                       use_closed: bool = True) -> QuadratureResult:
        """``|W|^{-1} int_{sigma + iR} atilde(lambda) F_lambda(exp H) dy / (c(lambda) c(-lambda))``."""
        self._need_rank_one()
        if not self.sigma_admissible(sigma):
            raise DomainError(f"sigma = {sigma} is outside T_delta")
        decay = math.pi - self.a.A
        return contour_integral(self.contour_integrand(u, use_closed), [sigma], tol, decay)

    # ------------------------------------------------------------- transform
    def transform(self, lam: complex, tol: float = 1e-12) -> QuadratureResult:
        """``int_A f(a) F_{-lambda}(a) dmu(a)`` with the calibrated Haar measure."""
        p = self.rank1_params
        res = a_integral(lambda u: self.closed_form(u) * F_lambda_rank1(p, -lam, u) * _density_A(p, u),
                         0.0, tol)
        scale = 2.0 / HAAR_A_SCALE
        return QuadratureResult(res.value * scale, res.abs_error_estimate * scale, res.points, res.converged)

    def in_transform_tube(self, lam: complex) -> bool:
        pt = np.array([complex(lam)])
        return bool(tube_contains(self.rs, TubeDomain("T_Pi_eta", 0.0), pt)
                    and tube_contains(self.rs, TubeDomain("T_delta", self.a.delta), pt))

    def master_transform_check(self, lam: complex, tol: float = 1e-6) -> dict:
        self._need_rank_one()
        lam = complex(lam)
        if not self.in_transform_tube(lam):
            raise DomainError(f"lambda = {lam} is outside T_Pi intersected with T_delta")
        lhs = self.transform(lam, tol=min(1e-12, tol * 1e-3)).value
        rhs = complex(self.atilde_closed(np.array([lam]))[0])
        gap = abs(lhs - rhs)
        return {"lhs": lhs, "rhs": rhs, "gap": gap, "pass": gap < tol}

    # ------------------------------------------------------------ Plancherel
    def plancherel_sides(self, tol: float = 1e-12) -> tuple[complex, complex]:
        p = self.rank1_params
        lhs = a_integral(lambda u: np.abs(self.closed_form(u)) ** 2 * _density_A(p, u), 0.0, tol).value
        lhs *= 2.0 / HAAR_A_SCALE
        order = self.rs.order_W

        def g(y: np.ndarray) -> np.ndarray:
            lam = 1j * y
            return (np.abs(self.atilde_closed(lam)) ** 2
                    * np.real(self.cf.plancherel_density(lam[:, None])) / order)

        rhs = line_integral(g, tol, 2.0 * (math.pi - self.a.A)).value
        return lhs, rhs

    def plancherel_printed_sides(self, modulus: bool = False, tol: float = 1e-12) -> tuple[complex, complex]:
        """Both sides of the displayed example identity with ``sinh^m u`` and ``|sin(z lambda)|^2``.

        ``modulus=False`` keeps ``sinh^2 z`` and the unmodulused denominator verbatim;
        ``modulus=True`` uses ``|sinh z|^2`` and ``|cosh u + cosh z|``.  With the measure
        normalizations of this module the two sides differ by ``2 HAAR_A_SCALE`` in the
        second form.
        """
        p = self.rank1_params
        m = p.m
        z = complex(self.a.P, self.a.A)
        if modulus:
            lhs = abs(np.sinh(z)) ** 2 * a_integral(
                lambda u: np.abs(np.cosh(u) + np.cosh(z)) ** (-(m + 2.0)), m, tol).value
        else:
            lhs = np.sinh(z) ** 2 * a_integral(
                lambda u: (np.cosh(u) + np.cosh(z)) ** (-(m + 2.0)), m, tol).value
        lhs = lhs * 2.0 ** (-m)          # a_integral weights by |2 sinh u|^m
        const = (math.gamma(m) / (2.0 * math.gamma(m / 2.0) * math.gamma(m / 2.0 + 1.0))) ** 2

        def g(y: np.ndarray) -> np.ndarray:
            y = np.abs(y)
            with np.errstate(invalid="ignore", divide="ignore"):
                v = (np.abs(np.sin(z * y)) ** 2 / np.sinh(np.pi * y) ** 2
                     * np.real(self.cf.plancherel_density((1j * y)[:, None])))
            return np.where(y < 1e-12, abs(z) ** 2 * _density_limit(self, y), v)

        rhs = const * 0.5 * line_integral(g, tol, 2.0 * (math.pi - self.a.A)).value
        return complex(lhs), complex(rhs)

    def master_plancherel_check(self, tol: float = 1e-6) -> dict:
        self._need_rank_one()
        lhs, rhs = self.plancherel_sides()
        gap = abs(lhs - rhs)
        return {"lhs": lhs, "rhs": rhs, "gap": gap, "pass": gap < tol}

    # ------------------------------------------------------------- residues
    def residue_integrand(self, u: float):
        """Unsymmetrized integrand ``a(lambda) b(lambda) F_lambda / (c(lambda) c(-lambda))``."""
        p = self.rank1_params

        def g(lam: np.ndarray) -> np.ndarray:
            return self.a(lam) * self.bfun.b_over_cc(lam) * F_lambda_rank1(p, lam[:, 0], u)

        return g

    def residue_numeric(self, u: float, center: float, radius: float = 0.25, n: int = 64) -> complex:
        """``(1/2 pi i) oint g`` on a circle, with the periodic trapezoid rule."""
        g = self.residue_integrand(u)
        t = 2.0 * np.pi * np.arange(n) / n
        pts = center + radius * np.exp(1j * t)
        vals = g(pts[:, None]) * radius * np.exp(1j * t)
        return complex(np.mean(vals))

    def residue_series_equivalence(self, u: float, N_shift: int, sigma: float = 0.0,
                                   tol: float = 1e-10) -> dict:
        """Shift the line past ``rho + N + 1/2`` and compare with the partial series up to ``N``."""
        self._need_rank_one()
        rho = float(self.rs.rho_j[0])
        g = self.residue_integrand(u)
        decay = math.pi - self.a.A
        left = -contour_integral(g, [sigma], tol, decay).value
        sigma_N = rho + N_shift + 0.5
        right = -contour_integral(g, [sigma_N], tol, decay).value
        shells = self.series_terms(np.array([u + 0j]), N_shift)[:, 0]
        partial = complex(np.sum(shells))
        first_residue = 2.0 * math.pi * self.residue_numeric(u, rho)
        return {"contour_sigma": left, "contour_shifted": right, "partial_series": partial,
                "gap": abs(left - (partial + right)), "remainder": abs(right),
                "first_term": complex(shells[0]), "first_residue": first_residue}

    # --------------------------------------------------------------- routes
    def three_routes(self, u: float, sigma: float = 0.0, tol: float = 1e-10) -> dict:
        s = self.master_series(np.array([u + 0j]), tol=tol * 1e-2)
        c = self.master_contour(u, sigma, tol).value
        f = complex(self.closed_form(u))
        return {"series": s, "contour": c, "closed": f,
                "gap_series_contour": abs(s - c), "gap_series_closed": abs(s - f),
                "gap_contour_closed": abs(c - f)}


def _density_limit(case: MasterCase, y: np.ndarray) -> np.ndarray:
    """``density(i y) / (pi y)^2`` near ``y = 0`` (the density vanishes to second order for m > 0)."""
    eps = 1e-6
    d = np.real(case.cf.plancherel_density(np.array([[1j * eps]])))[0]
    return np.full_like(y, d / (math.pi * eps) ** 2)


def _density_A(p: Rank1Params, u) -> np.ndarray:
    """``|2 sinh u|^{m_beta} |2 sinh(u/2)|^{m_{beta/2}}`` for ``u = beta(H)``."""
    u = np.abs(np.asarray(u, dtype=float))
    with np.errstate(divide="ignore"):
        logw = p.m * (u + np.log(-np.expm1(-2.0 * u)))
        if p.m_half:
            logw = logw + p.m_half * (u / 2.0 + np.log(-np.expm1(-u)))
    return np.exp(logw)


def rank_one_case(m: float, P: float, A: float = 0.0, m_half: float = 0.0,
                  delta: float = 1.0) -> MasterCase:
    from .rootsys import build_root_system
    rs = build_root_system("A1", [m]) if m_half == 0.0 else build_root_system("BC1", [m_half, m])
    return MasterCase(rs, exponential_hardy(P, A, delta))


# ---------------------------------------------------------------------------
# classical integrals
# ---------------------------------------------------------------------------

def sin_over_sinh_moment(P: float, weight: Callable[[np.ndarray], np.ndarray], decay: float,
                         tol: float = 1e-12) -> QuadratureResult:
    """``int_R sin(P x) / sinh(pi x) * weight(x) dx`` (even integrand, removable at 0)."""
    return line_integral(lambda x: np.sin(P * x) / np.sinh(np.pi * x) * weight(x), tol, decay)


def classical_m2(P: float, tol: float = 1e-12) -> tuple[float, float]:
    """Numeric ``int sin(P x) x^2 / sinh(pi x) dx`` and ``(1/2) sech^2(P/2) tanh(P/2)``."""
    num = sin_over_sinh_moment(P, lambda x: x * x, math.pi - P if P < math.pi else 0.5, tol).value.real
    return num, 0.5 * math.tanh(P / 2.0) / math.cosh(P / 2.0) ** 2


def classical_dwight(P: float, tol: float = 1e-12) -> tuple[float, float]:
    """Numeric ``int sin(P x) / sinh(pi x) dx`` and ``tanh(P/2)``."""
    num = sin_over_sinh_moment(P, lambda x: np.ones_like(x), math.pi - P if P < math.pi else 0.5,
                               tol).value.real
    return num, math.tanh(P / 2.0)


def classical_m1(P: float, tol: float = 1e-12) -> tuple[float, float]:
    """Numeric ``int sin(P x) x tanh(pi x) / sinh(pi x) dx`` and ``sech(P/2) tanh(P/2)``."""
    num = line_integral(lambda x: np.sin(P * x) * x / np.cosh(np.pi * x), tol,
                        math.pi - P if P < math.pi else 0.5).value.real
    return num, math.tanh(P / 2.0) / math.cosh(P / 2.0)


def ramanujan_formula_m2(P: float, lam: complex, tol: float = 1e-12) -> tuple[complex, complex]:
    """``(1/lambda) int_0^inf sinh(lambda u) sinh u / (cosh P + cosh u)^2 du`` and
    ``pi sinh(P lambda) / (sinh P sin(pi lambda))``."""
    lam = complex(lam)
    lhs = a_integral(lambda u: np.sinh(lam * u) * np.sinh(u) / (math.cosh(P) + np.cosh(u)) ** 2,
                     0.0, tol).value / lam
    rhs = math.pi * np.sinh(P * lam) / (math.sinh(P) * np.sin(np.pi * lam))
    return complex(lhs), complex(rhs)


def ramanujan_formula_m2_printed(P: float, lam: complex, tol: float = 1e-12) -> tuple[complex, complex]:
    """The tanh-weighted variant ``(1/lambda) int sinh(lambda u) tanh u / (cosh P + cosh u)^2 du``
    against ``sinh(P lambda) / (4 sinh P sin(pi lambda))``."""
    lam = complex(lam)
    lhs = a_integral(lambda u: np.sinh(lam * u) * np.tanh(u) / (math.cosh(P) + np.cosh(u)) ** 2,
                     0.0, tol).value / lam
    rhs = np.sinh(P * lam) / (4.0 * math.sinh(P) * np.sin(np.pi * lam))
    return complex(lhs), complex(rhs)


# ---------------------------------------------------------------------------
# general rank convergence
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConvergenceFit:
    sizes: np.ndarray
    shell_norms: np.ndarray
    predicted_rate: float
    fitted_rate: float
    fitted_power: float

    @property
    def relative_error(self) -> float:
        return abs(self.fitted_rate - self.predicted_rate) / self.predicted_rate


def series_convergence_fit(case: MasterCase, H: np.ndarray, N: int, n_min: int = 4) -> ConvergenceFit:
    """Fit ``log |S_k - S_{k-1}| = c + p log(||k omega||) - s ||k omega||`` along the top shell.

    ``H`` (ambient) should point along the fundamental weight ``omega_1`` so that the
    shell sums are dominated by ``mu = k omega_1``; the predicted ``s`` is
    ``epsilon - r = P / Omega - ||H||``.
    """
    rs = case.rs
    H = np.asarray(H, dtype=float)
    h = GroupPoint(H, np.zeros(rs.rank))
    zeta = h.zeta(rs)[None, :]
    case.check_domain(zeta)
    shells = np.abs(case.series_terms(zeta, N)[:, 0])
    step = rs.norm(rs.omega[0])
    k = np.arange(n_min, N + 1)
    x = k * step
    y = np.log(shells[n_min:])
    X = np.stack([np.ones_like(x), np.log(x), -x], axis=-1)
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    norm_H = math.sqrt(float(H @ rs.gram @ H))
    predicted = case.a.P / rs.derived.Omega - norm_H
    return ConvergenceFit(k, shells[n_min:], predicted, float(coef[2]), float(coef[1]))


def tail_bound_for(case: MasterCase, H_norm_ratio: float, N: int) -> float:
    """Tail bound of the series on ``D_r`` with ``r = H_norm_ratio * P / Omega``."""
    rs = case.rs
    eps = case.a.P / rs.derived.Omega
    kappa, w_max = case.jac.norm_constants()
    return series_tail_bound(case.a.C, eps, H_norm_ratio * eps, N, M=rs.derived.M, K=case.growth_K,
                             kappa=kappa, w_max=w_max, rank=rs.rank)
