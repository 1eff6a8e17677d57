"""Jacobi polynomials attached to a root system, and Jacobi series.

``P_mu = sum_{nu <= mu} c_{mu nu} M_nu`` is the W-invariant exponential
polynomial with leading coefficient 1 that is orthogonal to every lower orbit
sum for the weight ``delta(m, t)``.  Coefficients come from two independent
routes: the eigenvalue recursion of the trigonometric Laplacian and a direct
Gram-Schmidt solve with weighted torus quadrature.

Group points ``h = exp(H1 + i H2)`` are handled through their complex
log-coordinates ``zeta_j = omega_j(H1) + i omega_j(H2)``, so that
``e^{nu}(h) = exp(nu . zeta)`` for ``nu`` in omega-coordinates.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .gammac import CFunctionSet, build_cfunctions
from .quad import alcove_rule, weighted_torus_mean
from .rootsys import RootSystem, RootSystemError, Weight
from .specfun import DFunction

TWO_PI = 2.0 * np.pi


class JacobiError(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# points
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GroupPoint:
    """``h = exp(H1 + i H2)`` with ambient vectors ``H1`` (A-part) and ``H2`` (T-part, reduced)."""

    H1: np.ndarray
    H2: np.ndarray

    @classmethod
    def make(cls, rs: RootSystem, H1=None, H2=None) -> "GroupPoint":
        l = rs.rank
        H1 = np.zeros(l) if H1 is None else np.asarray(H1, dtype=float).reshape(l)
        H2 = np.zeros(l) if H2 is None else np.asarray(H2, dtype=float).reshape(l)
        theta = np.mod(rs.omega @ rs.gram @ H2, TWO_PI)
        return cls(H1, _angles_to_ambient(rs, theta))

    @classmethod
    def from_angles(cls, rs: RootSystem, theta, a_angles=None) -> "GroupPoint":
        """Build from ``theta_j = omega_j(H2)`` and optionally ``omega_j(H1)``."""
        H1 = np.zeros(rs.rank) if a_angles is None else _angles_to_ambient(rs, a_angles)
        return cls(H1, _angles_to_ambient(rs, np.mod(np.asarray(theta, float), TWO_PI)))

    @classmethod
    def identity(cls, rs: RootSystem) -> "GroupPoint":
        return cls(np.zeros(rs.rank), np.zeros(rs.rank))

    def zeta(self, rs: RootSystem) -> np.ndarray:
        return rs.omega @ rs.gram @ self.H1 + 1j * (rs.omega @ rs.gram @ self.H2)


def _angles_to_ambient(rs: RootSystem, ang) -> np.ndarray:
    return np.linalg.solve(rs.omega @ rs.gram, np.asarray(ang, dtype=float))


def as_zeta(rs: RootSystem, h) -> np.ndarray:
    """Complex log-coordinates for a GroupPoint or an array already in zeta form."""
    if isinstance(h, GroupPoint):
        return h.zeta(rs)
    return np.asarray(h, dtype=complex)


# ---------------------------------------------------------------------------
# orbit sums
# ---------------------------------------------------------------------------

def orbit_points(rs: RootSystem, nu: Weight) -> np.ndarray:
    return np.array(rs.weyl_orbit(nu), dtype=float).reshape(-1, rs.rank)


def orbit_sum(rs: RootSystem, nu: Weight, h) -> complex | np.ndarray:
    """``M_nu(h) = sum_{eta in W nu} e^{eta(log h)}``."""
    z = as_zeta(rs, h)
    vals = np.exp(z @ orbit_points(rs, nu).T).sum(axis=-1)
    return complex(vals) if vals.ndim == 0 else vals


# ---------------------------------------------------------------------------
# expansions
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class OrbitSumExpansion:
    mu: Weight
    coeffs: dict            # dominant coordinate tuple -> c_{mu nu}
    _flat: tuple = field(default=(), repr=False)

    def flat(self, rs: RootSystem):
        """All orbit points with their coefficients, for vectorized evaluation."""
        if not self._flat:
            pts, cs = [], []
            for nu, c in self.coeffs.items():
                o = orbit_points(rs, Weight(nu))
                pts.append(o)
                cs.append(np.full(len(o), c))
            object.__setattr__(self, "_flat", (np.vstack(pts), np.concatenate(cs)))
        return self._flat

    def evaluate(self, rs: RootSystem, h):
        pts, cs = self.flat(rs)
        z = as_zeta(rs, h)
        vals = np.exp(z @ pts.T) @ cs
        return complex(vals) if np.ndim(vals) == 0 else vals


def _eigen(rs: RootSystem, x: np.ndarray, two_rho: np.ndarray) -> float:
    return float(rs.inner_coords(x + two_rho, x))


class JacobiFamily:
    """Jacobi polynomials, norms and transforms for one root system (with caching)."""

    def __init__(self, rs: RootSystem):
        if rs.rank > 3:
            raise JacobiError("Jacobi polynomials implemented for rank <= 3")
        self.rs = rs
        self.cf: CFunctionSet = build_cfunctions(rs)
        self.dfun = DFunction(self.cf)
        self._cache: dict[tuple, OrbitSumExpansion] = {}
        self._rep_cache: dict[tuple, tuple] = {}
        self._root_coords = np.asarray(rs.to_coords(rs.positive_roots), dtype=float)

    # ------------------------------------------------------------ coefficients
    def _below(self, mu: Weight) -> list[Weight]:
        if not mu.is_dominant():
            raise RootSystemError(f"{mu.coords} is not dominant")
        below = self.rs.enumerate_dominant_below(mu)
        if len(below) > 10_000:
            raise JacobiError("too many weights below mu")
        return below

    def _dominant(self, eta: tuple) -> tuple:
        rep = self._rep_cache.get(eta)
        if rep is None:
            rep = self.rs.dominant_representative(Weight(eta)).coords
            self._rep_cache[eta] = rep
        return rep

    def coeffs_recursion(self, mu: Weight) -> OrbitSumExpansion:
        """Descending recursion from the eigen-equation of the trigonometric Laplacian.

        For dominant ``nu < mu``::

            (<mu+2rho, mu> - <nu+2rho, nu>) c_{mu nu}
                = 2 sum_{alpha > 0} m_alpha sum_{k >= 1} <nu + 2k alpha, alpha> c_{mu, (nu + 2k alpha)^+}

        where ``eta^+`` is the dominant representative and coefficients vanish off ``{eta <= mu}``.
        """
        rs = self.rs
        below = self._below(mu)
        known = {w.coords for w in below}
        G = rs.gram_omega
        two_rho = 2.0 * rs.rho_j
        hvec = G @ np.ones(rs.rank)
        top_height = float(np.asarray(mu.coords, float) @ hvec)
        e_mu = _eigen(rs, np.asarray(mu.coords, float), two_rho)
        steps = []
        for a, m_a in zip(self._root_coords, rs.mult):
            step = 2.0 * a
            if np.all(np.abs(step - np.round(step)) < 1e-9):
                step_i = tuple(int(x) for x in np.round(step))
                steps.append((step_i, float(step @ hvec), m_a, G @ a))
        coeffs: dict = {mu.coords: 1.0}
        for nu in below[1:]:
            nvec = np.asarray(nu.coords, dtype=float)
            gap = e_mu - _eigen(rs, nvec, two_rho)
            if gap <= 1e-12:
                raise JacobiError(f"eigenvalue collision between {mu.coords} and {nu.coords}")
            h0 = float(nvec @ hvec)
            total = 0.0
            for step, dh, m_a, Ga in steps:
                base = float(nvec @ Ga)
                slope = float(np.asarray(step, float) @ Ga)
                k = 1
                while h0 + k * dh <= top_height + 1e-9:
                    eta = tuple(n + k * d for n, d in zip(nu.coords, step))
                    rep = self._dominant(eta)
                    if rep in known:
                        total += m_a * (base + k * slope) * coeffs[rep]
                    k += 1
            coeffs[nu.coords] = 2.0 * total / gap
        return OrbitSumExpansion(mu, coeffs)

    def coeffs_gram_schmidt(self, mu: Weight, tol: float = 1e-11) -> OrbitSumExpansion:
        rs = self.rs
        below = self._below(mu)
        deg = max(1, int(np.max(np.abs(orbit_points(rs, mu)))))
        n = 12 + 2 * deg
        prev = None
        for _ in range(5):
            rule = alcove_rule(rs, n)
            z = 1j * rule.theta
            M = np.stack([orbit_sum(rs, w, z) for w in below], axis=0)     # (K, N)
            G = (M * rule.weights[None, :]) @ M.conj().T                  # G[a,b] = <M_a, M_b>
            low = G[1:, 1:]
            rhs = -G[0, 1:]
            c = np.linalg.solve(low.T, rhs) if len(below) > 1 else np.zeros(0)
            if prev is not None and np.max(np.abs(c - prev), initial=0.0) < tol:
                break
            prev = c
            n *= 2
        else:
            raise JacobiError("Gram-Schmidt quadrature did not stabilize")
        if np.max(np.abs(np.imag(c)), initial=0.0) > 1e-8:
            raise JacobiError("Gram-Schmidt produced complex coefficients")
        coeffs = {mu.coords: 1.0}
        for w, v in zip(below[1:], np.real(c)):
            coeffs[w.coords] = float(v)
        return OrbitSumExpansion(mu, coeffs)

    def coeffs(self, mu: Weight, method: str = "recursion") -> OrbitSumExpansion:
        if method == "recursion":
            key = mu.coords
            if key not in self._cache:
                self._cache[key] = self.coeffs_recursion(mu)
            return self._cache[key]
        if method == "gram_schmidt":
            return self.coeffs_gram_schmidt(mu)
        raise ValueError(f"unknown method {method!r}")

    # -------------------------------------------------------------- values
    def c_at(self, mu: Weight) -> float:
        return float(np.real(self.cf.c(np.asarray(mu.coords, float) + self.rs.rho_j)))

    def eval_P(self, mu: Weight, h):
        return self.coeffs(mu).evaluate(self.rs, h)

    def eval_F_discrete(self, mu: Weight, h):
        """``F_{mu+rho}(h) = c(mu + rho) P_mu(h)``."""
        return self.c_at(mu) * self.coeffs(mu).evaluate(self.rs, h)

    # ---------------------------------------------------------------- norms
    def norm_P_squared(self, mu: Weight) -> float:
        x = np.asarray(mu.coords, float) + self.rs.rho_j
        val = self.rs.order_W * self.cf.c_tilde_star(-x) / self.cf.c_tilde(x)
        return float(np.real(val))

    def I_delta(self) -> float:
        return self.norm_P_squared(Weight((0,) * self.rs.rank))

    def cardW_check(self) -> float:
        rs = self.rs
        rho_a = np.real(rs.lam_pos(rs.rho_j))
        q = rho_a + rs.mult_half / 4.0
        return float(np.prod((q + rs.mult / 2.0) / q))

    def inner(self, f: Callable, g: Callable, tol: float = 1e-12) -> complex:
        """``<f, g>_m = int_T f conj(g) delta dt`` for W-invariant callables of torus angles."""
        res = weighted_torus_mean(self.rs, lambda th: f(th) * np.conj(g(th)), tol=tol)
        return res.require()

    def norm_P_squared_quadrature(self, mu: Weight, tol: float = 1e-12) -> float:
        P = self.coeffs(mu)
        return float(np.real(self.inner(lambda th: P.evaluate(self.rs, 1j * th),
                                        lambda th: P.evaluate(self.rs, 1j * th), tol)))

    def d(self, mu: Weight) -> float:
        return float(np.real(self.dfun.d(np.asarray(mu.coords, float))))

    # ----------------------------------------------------------- transforms
    def jacobi_transform(self, f: Callable, mu: Weight, tol: float = 1e-12) -> complex:
        """``I_delta^{-1} <f, P_mu>_m``; ``f`` takes torus angles of shape ``(N, l)``."""
        P = self.coeffs(mu)
        return self.inner(f, lambda th: P.evaluate(self.rs, 1j * th), tol) / self.I_delta()

    def dominant_weights(self, N: int):
        """Dominant weights with ``|mu| <= N``, by increasing size."""
        out = []
        for tup in itertools.product(range(N + 1), repeat=self.rs.rank):
            if sum(tup) <= N:
                out.append(Weight(tup))
        out.sort(key=lambda w: (w.size, w.coords))
        return out

    def jacobi_series_partial(self, fhat: Callable[[Weight], complex], h, N: int):
        """``sum_{|mu| <= N} d(mu) c(mu+rho) fhat(mu) F_{mu+rho}(h)``."""
        total = 0.0
        for mu in self.dominant_weights(N):
            coef = fhat(mu)
            if coef == 0:
                continue
            total = total + self.d(mu) * self.c_at(mu) * coef * self.eval_F_discrete(mu, h)
        return total

    # --------------------------------------------------------------- growth
    def growth_constant(self, N: int = 40) -> float:
        """``K = max d(mu) / (1 + ||mu||)^M`` over ``|mu| <= N``."""
        M = self.rs.derived.M
        best = 0.0
        for mu in self.dominant_weights(N):
            nrm = self.rs.norm(self.rs.to_ambient(np.asarray(mu.coords, float)))
            best = max(best, self.d(mu) / (1.0 + nrm) ** M)
        return best

    def norm_constants(self) -> tuple[float, float]:
        """``(kappa, w_max)`` with ``kappa |mu| <= ||mu|| <= w_max |mu|`` on dominant weights."""
        nrm = [self.rs.norm(w) for w in self.rs.omega]
        return min(nrm) / math.sqrt(self.rs.rank), max(nrm)


def jacobi_coeffs(rs: RootSystem, mu: Weight, method: str = "recursion") -> OrbitSumExpansion:
    return JacobiFamily(rs).coeffs(mu, method)


# ---------------------------------------------------------------------------
# tails
# ---------------------------------------------------------------------------

def series_tail_bound(C: float, eps: float, r: float, N: int, *, M: float, K: float = 1.0,
                      kappa: float = 1.0, w_max: float = 1.0, rank: int = 1) -> float:
    """Upper bound for ``sum_{|mu| > N} d(mu) C exp(-(eps - r) ||mu||)``.

    Uses ``d(mu) <= K (1 + ||mu||)^M``, ``kappa |mu| <= ||mu|| <= w_max |mu|`` and at most
    ``binom(k + rank - 1, rank - 1)`` dominant weights of size ``k``.
    """
    if not r < eps:
        raise ValueError("series_tail_bound needs r < eps")
    if C == 0:
        return 0.0
    s = eps - r
    total = 0.0
    k = N + 1
    while True:
        count = math.comb(k + rank - 1, rank - 1)
        term = count * K * (1.0 + w_max * k) ** M * math.exp(-s * kappa * k)
        total += term
        # ratio of successive terms is eventually below q < 1; bound the rest geometrically
        nxt = math.comb(k + rank, rank - 1) * (1.0 + w_max * (k + 1)) ** M * math.exp(-s * kappa * (k + 1)) * K
        if term > 0 and nxt < term:
            q = nxt / term
            if q < 0.999 and nxt / (1.0 - q) < 1e-18 * max(total, 1e-300):
                total += nxt / (1.0 - q)
                break
        k += 1
        if k > N + 10 ** 6:
            raise JacobiError("tail bound did not settle")
    return abs(C) * total


def choose_cutoff(C: float, eps: float, r: float, tol: float, **kw) -> int:
    """Smallest ``N`` with ``series_tail_bound(C, eps, r, N) < tol``."""
    N = 0
    while series_tail_bound(C, eps, r, N, **kw) >= tol:
        N += 1
        if N > 100_000:
            raise JacobiError("no cutoff found")
    return N
