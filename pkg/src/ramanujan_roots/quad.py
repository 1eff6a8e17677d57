"""Deterministic quadrature rules.

* ``torus_quadrature``: periodic product trapezoid on ``[0, 2 pi)^l`` with grid doubling.
* ``weighted_torus_mean``: mean of ``f * delta(m, .)`` over the compact torus for
  W-invariant ``f``, computed on one alcove with Gauss-Jacobi nodes that absorb the
  algebraic zeros of the weight.  Used whenever the weight has non-integer exponents.
* ``line_integral`` / ``contour_integral``: truncated trapezoid on (shifted) vertical lines.
* ``a_integral``: tanh-sinh rule for half-line integrals against ``|2 sinh u|^m``.

Torus points are described by the angles ``theta_j = omega_j(H)``; characters are
``exp(i sum_j mu_j theta_j)`` for weights ``mu`` in omega-coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special

from .rootsys import RootSystem


class QuadratureError(ArithmeticError):
    pass


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    abs_error_estimate: float
    points: int
    converged: bool

    def require(self) -> complex:
        if not self.converged:
            raise QuadratureError(
                f"quadrature did not converge (estimate {self.abs_error_estimate:.3e}, {self.points} points)")
        return self.value


def _fsum(values: np.ndarray) -> complex:
    values = np.asarray(values).ravel()
    if np.iscomplexobj(values):
        return complex(math.fsum(values.real), math.fsum(values.imag))
    return complex(math.fsum(values))


# ---------------------------------------------------------------------------
# torus
# ---------------------------------------------------------------------------

def torus_grid(rank: int, n: int) -> np.ndarray:
    """Angles of the ``n^rank`` product grid, shape ``(n^rank, rank)``."""
    g = 2.0 * np.pi * np.arange(n) / n
    mesh = np.meshgrid(*([g] * rank), indexing="ij")
    return np.stack([x.ravel() for x in mesh], axis=-1)


def torus_quadrature(f: Callable[[np.ndarray], np.ndarray], rank: int, tol: float = 1e-10,
                     n0: int = 8, max_refine: int = 10) -> QuadratureResult:
    """Normalized Haar mean of ``f(theta)`` with ``theta`` of shape ``(N, rank)``."""
    n = n0
    prev = _fsum(f(torus_grid(rank, n))) / n ** rank
    for _ in range(max_refine):
        n *= 2
        cur = _fsum(f(torus_grid(rank, n))) / n ** rank
        err = abs(cur - prev)
        if err < tol:
            return QuadratureResult(cur, err, n ** rank, True)
        prev = cur
    return QuadratureResult(prev, err, n ** rank, False)


def delta_weight(rs: RootSystem, theta: np.ndarray) -> np.ndarray:
    """``delta(m, t) = prod_{alpha > 0} |2 sin alpha(H)|^{m_alpha}`` at torus angles ``theta``."""
    ang = np.asarray(theta, dtype=float) @ root_omega_coords(rs).T
    with np.errstate(divide="ignore"):
        return np.exp(np.log(np.abs(2.0 * np.sin(ang))) @ rs.mult)


def root_omega_coords(rs: RootSystem) -> np.ndarray:
    """Positive roots expressed in omega-coordinates, so that ``alpha(H) = coords . theta``."""
    return np.asarray(rs.to_coords(rs.positive_roots), dtype=float)


# ---------------------------------------------------------------------------
# weighted alcove rule
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AlcoveRule:
    """Nodes (torus angles) and weights with ``sum(w * f(theta)) = mean_T f delta`` for W-invariant ``f``."""

    theta: np.ndarray
    weights: np.ndarray

    def mean(self, values: np.ndarray) -> complex:
        return _fsum(self.weights * values)


def _highest_unmultipliable(rs: RootSystem):
    coef = np.asarray(rs.to_coords(rs.unmultipliable), dtype=float)
    # omega-coordinates of a root are its pairings; beta-basis coefficients need the inverse
    kb = np.linalg.solve(np.asarray(rs.to_coords(rs.beta_basis), dtype=float).T, coef.T).T
    k = int(np.argmax(kb.sum(axis=1)))
    return rs.unmultipliable[k], np.round(kb[k]).astype(int)


def _gauss_jacobi01(n: int, a: float, b: float):
    """Nodes/weights on [0,1] for the weight ``t^a (1-t)^b``."""
    x, w = special.roots_jacobi(n, b, a)
    return (1.0 + x) / 2.0, w / 2.0 ** (a + b + 1.0)


def alcove_rule(rs: RootSystem, n: int) -> AlcoveRule:
    """Gauss-Jacobi rule on the fundamental alcove ``{beta_j(H) > 0, beta~(H) < pi}``."""
    l = rs.rank
    if l > 2:
        raise ValueError("alcove rule implemented for rank <= 2")
    top, ncoef = _highest_unmultipliable(rs)
    B = rs.beta_basis
    # v_j with beta_i(v_j) = pi delta_ij / n_j
    V = np.linalg.solve(B @ rs.gram, np.eye(l)) * (np.pi / ncoef)[None, :]
    V = V.T                                                   # rows v_j (ambient)
    roots = rs.positive_roots
    mult = rs.mult
    along = np.abs(roots @ rs.gram @ V.T) > 1e-12          # alpha(v_j) != 0
    a_exp = float(np.sum(mult)) + (l - 1)
    tip = [i for i in range(len(roots)) if np.allclose(roots[i], top)]
    b_exp = float(sum(mult[i] for i in tip))
    if l == 1:
        s, ws = _gauss_jacobi01(n, a_exp, b_exp)
        S = s[:, None]
        wts = ws
        base = s ** a_exp * (1.0 - s) ** b_exp
    else:
        c_exp = float(sum(mult[i] for i in range(len(roots)) if along[i, 0] and not along[i, 1]))
        d_exp = float(sum(mult[i] for i in range(len(roots)) if along[i, 1] and not along[i, 0]))
        t, wt = _gauss_jacobi01(n, a_exp, b_exp)
        w, ww = _gauss_jacobi01(n, c_exp, d_exp)
        T, Wg = np.meshgrid(t, w, indexing="ij")
        T, Wg = T.ravel(), Wg.ravel()
        S = np.stack([T * Wg, T * (1.0 - Wg)], axis=-1)
        wts = 2.0 * np.outer(wt, ww).ravel()
        base = T ** a_exp * (1.0 - T) ** b_exp * Wg ** c_exp * (1.0 - Wg) ** d_exp / T
    H = S @ V
    theta = H @ rs.gram @ rs.omega.T
    ang = H @ rs.gram @ roots.T
    logdelta = np.log(np.abs(2.0 * np.sin(ang))) @ mult
    weights = wts * np.exp(logdelta - np.log(base))
    return AlcoveRule(theta, weights)


def weighted_torus_mean(rs: RootSystem, f: Callable[[np.ndarray], np.ndarray], tol: float = 1e-12,
                        n0: int = 16, max_refine: int = 6) -> QuadratureResult:
    """``int_T f(t) delta(m, t) dt`` (normalized Haar) for W-invariant ``f``; doubles nodes to ``tol``."""
    n = n0
    rule = alcove_rule(rs, n)
    prev = rule.mean(f(rule.theta))
    err = math.inf
    for _ in range(max_refine):
        n *= 2
        rule = alcove_rule(rs, n)
        cur = rule.mean(f(rule.theta))
        err = abs(cur - prev)
        if err < tol * max(1.0, abs(cur)):
            return QuadratureResult(cur, err, len(rule.weights), True)
        prev = cur
    return QuadratureResult(prev, err, len(rule.weights), False)


# ---------------------------------------------------------------------------
# lines and contours
# ---------------------------------------------------------------------------

def _tail_length(tol: float, decay_rate: float, margin: float) -> float:
    if decay_rate <= 0:
        raise ValueError("decay_rate must be positive")
    return (math.log(1.0 / tol) + margin) / decay_rate


def line_integral(g: Callable[[np.ndarray], np.ndarray], tol: float = 1e-10, decay_rate: float = 1.0,
                  *, margin: float = 8.0, h0: float = 0.5, max_refine: int = 12,
                  T_max: float | None = None) -> QuadratureResult:
    """``int_R g(y) dy`` for ``g`` analytic near the real axis and decaying like ``exp(-decay_rate |y|)``.

    Midpoint nodes ``(k + 1/2) h`` on ``[-T_max, T_max]`` keep ``y = 0`` out of the
    node set (integrands with removable singularities there are common);
    ``h`` is halved until two successive sums agree.
    """
    T = _tail_length(tol, decay_rate, margin) if T_max is None else T_max
    tail = math.exp(-decay_rate * T) * 2.0 / decay_rate

    def rule(h: float):
        k = int(math.ceil(T / h))
        y = (np.arange(-k, k) + 0.5) * h
        return _fsum(np.asarray(g(y))) * h, y.size

    h = h0
    prev, npts = rule(h)
    err = math.inf
    for _ in range(max_refine):
        h /= 2.0
        cur, npts = rule(h)
        err = abs(cur - prev)
        if err < tol:
            return QuadratureResult(cur, err + tail, npts, True)
        prev = cur
    return QuadratureResult(prev, err + tail, npts, False)


def contour_integral(g: Callable[[np.ndarray], np.ndarray], sigma, tol: float = 1e-8,
                     decay_rate: float = 1.0, **kw) -> QuadratureResult:
    """``int_{R^l} g(sigma + i y) dy`` (Lebesgue ``dy``) for ``l <= 2``.

    ``g`` receives complex points of shape ``(N, l)`` in omega-coordinates.
    ``decay_rate`` is the exponential decay of ``|g|`` in ``|Im lambda|``.
    """
    sigma = np.atleast_1d(np.asarray(sigma, dtype=float))
    l = sigma.size
    if l == 1:
        return line_integral(lambda y: g(sigma[None, :] + 1j * y[:, None]), tol, decay_rate, **kw)
    if l != 2:
        raise ValueError("contour_integral supports l <= 2")
    inner_tol = tol / 10.0

    def outer(y1: np.ndarray) -> np.ndarray:
        out = []
        for v in y1:
            r = line_integral(
                lambda y2: g(np.stack([np.full_like(y2, v) * 1j + sigma[0], sigma[1] + 1j * y2], axis=-1)),
                inner_tol, decay_rate, **kw)
            out.append(r.value)
        return np.asarray(out)

    return line_integral(outer, tol, decay_rate, **kw)


# ---------------------------------------------------------------------------
# half-line integrals on A
# ---------------------------------------------------------------------------

def _log_2sinh(u: np.ndarray) -> np.ndarray:
    return u + np.log(-np.expm1(-2.0 * u))


def _find_cutoff(g: Callable[[np.ndarray], np.ndarray], tol: float) -> float:
    u = 1.0
    while u < 2000.0:
        probe = np.array([u, 1.5 * u])
        vals = np.abs(np.asarray(g(probe)))
        if np.all(np.isfinite(vals)) and vals[1] * u < tol * 1e-3 and vals[1] <= vals[0]:
            return 1.5 * u
        u *= 1.5
    raise QuadratureError("integrand on A shows no decay")


def a_integral(f: Callable[[np.ndarray], np.ndarray], weight_exponent: float = 0.0, tol: float = 1e-10,
               *, max_refine: int = 10) -> QuadratureResult:
    """``int_0^inf f(u) |2 sinh u|^m du`` with a tanh-sinh rule on a detected finite range."""
    m = float(weight_exponent)

    def g(u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            w = np.exp(m * _log_2sinh(u)) if m != 0.0 else np.ones_like(u)
            return np.asarray(f(u)) * w

    U = _find_cutoff(g, tol)

    def rule(h: float):
        kmax = int(math.ceil(3.2 / h))
        t = np.arange(-kmax, kmax + 1) * h
        s = 0.5 * np.pi * np.sinh(t)
        x = np.tanh(s)
        dx = 0.5 * np.pi * np.cosh(t) / np.cosh(s) ** 2
        u = U * (1.0 + x) / 2.0
        keep = (u > 0.0) & (u < U)
        vals = g(u[keep]) * dx[keep] * (U / 2.0)
        return _fsum(vals) * h, int(np.sum(keep))

    h = 0.25
    prev, npts = rule(h)
    err = math.inf
    for _ in range(max_refine):
        h /= 2.0
        cur, npts = rule(h)
        err = abs(cur - prev)
        if err < tol * max(1.0, abs(cur)):
            return QuadratureResult(cur, err, npts, True)
        prev = cur
    return QuadratureResult(prev, err, npts, False)
