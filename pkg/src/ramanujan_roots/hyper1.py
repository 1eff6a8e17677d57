"""Rank-one hypergeometric functions and the classical polynomials they specialize to.

For a rank-one triple with multiplicities ``m_half = m_{beta/2}`` and
``m = m_beta`` and ``u = beta(H)``::

    F_lambda(exp H) = 2F1(rho~ + lambda, rho~ - lambda; (m_half + m + 1)/2; -sinh^2(u/2))

with ``rho~ = (m_half/2 + m)/2``.  In the reduced case the function is computed
from a Mehler-type integral of ``cosh(lambda t)`` against an explicit kernel,
which stays accurate for large ``|Im lambda|`` where the hypergeometric series
cancels catastrophically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy import special

TERM_TOL = 1e-12
_MAX_TERMS = 4000
_CANCEL_LIMIT = 1e6


class HypergeometricError(ArithmeticError):
    pass


@dataclass(frozen=True)
class Rank1Params:
    m_half: float
    m: float

    def __post_init__(self):
        if self.m <= 0 or self.m_half < 0:
            raise ValueError("rank-one multiplicities need m > 0 and m_half >= 0")

    @property
    def rho(self) -> float:
        return 0.5 * (self.m_half / 2.0 + self.m)

    @property
    def c_param(self) -> float:
        return 0.5 * (self.m_half + self.m + 1.0)


# ---------------------------------------------------------------------------
# Gauss hypergeometric function
# ---------------------------------------------------------------------------

def _nonpos_int(x: complex, tol: float = TERM_TOL) -> int | None:
    r = round(x.real)
    if r <= 0 and abs(x - r) < tol:
        return int(-r)
    return None


def _series(a: complex, b: complex, c: complex, z: complex, nmax: int | None = None):
    """Direct power series; returns (value, cancellation ratio, converged)."""
    term = 1.0 + 0.0j
    total = 1.0 + 0.0j
    biggest = 1.0
    limit = _MAX_TERMS if nmax is None else nmax
    for n in range(limit):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z
        total += term
        biggest = max(biggest, abs(term))
        if nmax is None and abs(term) <= 1e-17 * max(abs(total), 1e-300) and n > 2:
            return total, biggest / max(abs(total), 1e-300), True
        if term == 0:
            return total, biggest / max(abs(total), 1e-300), True
    return total, biggest / max(abs(total), 1e-300), nmax is not None


def _mp_2f1(a, b, c, z) -> complex:
    with mpmath.workdps(30):
        return complex(mpmath.hyp2f1(a, b, c, z))


def gauss_2f1(a, b, c, z) -> complex:
    """``2F1(a, b; c; z)`` for scalar complex arguments.

    Terminating series are summed exactly.  Otherwise: the power series for
    ``|z| <= 1/2``, a Pfaff transformation when ``|z/(z-1)| <= 0.9``, and an
    extended-precision evaluation for the remaining arguments or when the
    double-precision sum loses more than six digits to cancellation.
    """
    a, b, c, z = complex(a), complex(b), complex(c), complex(z)
    nc = _nonpos_int(c)
    na, nb = _nonpos_int(a), _nonpos_int(b)
    nterm = min(x for x in (na, nb, 10 ** 9) if x is not None)
    if nc is not None and not (nterm < 10 ** 9 and nterm <= nc):
        raise HypergeometricError(f"2F1 undefined: c = {c} is a non-positive integer")
    if z == 0:
        return 1.0 + 0.0j
    if nterm < 10 ** 9:
        val, _, _ = _series(a, b, c, z, nmax=nterm)
        return val
    if abs(z) <= 0.5:
        val, ratio, ok = _series(a, b, c, z)
        if ok and ratio < _CANCEL_LIMIT:
            return val
        return _mp_2f1(a, b, c, z)
    if z != 1 and abs(z / (z - 1.0)) <= 0.9:
        w = z / (z - 1.0)
        # two Pfaff forms; keep the one with the milder series
        cands = []
        for p, q, pre in ((a, c - b, (1.0 - z) ** (-a)), (c - a, b, (1.0 - z) ** (-b))):
            val, ratio, ok = _series(p, q, c, w)
            if ok:
                cands.append((ratio, pre * val))
        if cands:
            ratio, val = min(cands, key=lambda t: t[0])
            if ratio < _CANCEL_LIMIT:
                return val
    return _mp_2f1(a, b, c, z)


# ---------------------------------------------------------------------------
# F_lambda in rank one
# ---------------------------------------------------------------------------

def _mehler(m: float, lam: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Reduced case via the Mehler-type integral over ``t`` in ``[0, u]`` (``u > 0``)."""
    n = int(40 + 1.2 * float(np.max(np.abs(lam) * u)))
    x, w = special.roots_jacobi(n, m / 2.0 - 1.0, 0.0)
    t = u[..., None] * (1.0 + x) / 2.0
    s = u[..., None] - t
    with np.errstate(invalid="ignore", divide="ignore"):
        k1 = np.where(s > 0, -np.expm1(-s) / np.where(s > 0, s, 1.0), 1.0)
    kern = k1 ** (m / 2.0 - 1.0) * (-np.expm1(-(u[..., None] + t))) ** (m / 2.0 - 1.0)
    integral = (u / 2.0) ** (m / 2.0) * np.sum(w * kern * np.cosh(lam[..., None] * t), axis=-1)
    pref = 2.0 / special.beta(0.5, m / 2.0) * 2.0 ** (m - 1.0)
    return pref * np.exp((1.0 - m) * np.log(-np.expm1(-2.0 * u)) - u * m / 2.0) * integral


def F_lambda_rank1(params: Rank1Params, lam, H):
    """``F_lambda(exp H)`` for real ``H`` measured as ``u = beta(H)``.

    Broadcasts over ``lam`` and ``H``.  The function is even in ``u``.
    """
    lam_a = np.asarray(lam, dtype=complex)
    u_a = np.abs(np.asarray(H, dtype=float))
    lam_b, u_b = np.broadcast_arrays(lam_a, u_a)
    out = np.empty(lam_b.shape, dtype=complex)
    r = params.rho
    cpar = params.c_param
    small = u_b < 1e-3
    if params.m_half == 0.0:
        big = ~small
        if np.any(big):
            out[big] = _mehler(params.m, lam_b[big], u_b[big])
    else:
        small = np.ones(lam_b.shape, dtype=bool)
    for idx in np.ndindex(lam_b.shape):
        if not small[idx]:
            continue
        lv = complex(lam_b[idx])
        z = -math.sinh(float(u_b[idx]) / 2.0) ** 2
        out[idx] = gauss_2f1(r + lv, r - lv, cpar, z)
    if lam_b.ndim == 0:
        return complex(out)
    return out


def F_lambda_rank1_complex(params: Rank1Params, lam, z_arg) -> complex:
    """``F_lambda`` at a complex group point given by ``u = beta(H1) + i beta(H2)``."""
    w = -np.sinh(complex(z_arg) / 2.0) ** 2
    r = params.rho
    return gauss_2f1(r + lam, r - lam, params.c_param, w)


# ---------------------------------------------------------------------------
# classical polynomials
# ---------------------------------------------------------------------------

POLY_KINDS = ("legendre_P", "cheb_T", "cheb_U", "sym_jacobi_X", "jacobi_Pab")


def sym_jacobi_sequence(m: float, x, N: int, tau=1.0) -> np.ndarray:
    """``X_n^{(m-1)/2}(x) * tau^n`` for ``n = 0..N`` by the normalized Gegenbauer recurrence.

    ``X_n(1) = 1``.  The factor ``tau^n`` is folded into the recurrence so that
    large ``|x|`` paired with small ``|tau|`` never overflows.
    """
    x = complex(x)
    tau = complex(tau)
    lam = m / 2.0
    out = np.empty(N + 1, dtype=complex)
    out[0] = 1.0
    if N >= 1:
        out[1] = x * tau
    for n in range(1, N):
        out[n + 1] = (2.0 * (n + lam) * x * tau * out[n] - n * tau * tau * out[n - 1]) / (2.0 * lam + n)
    return out


def classical_polys(kind: str, n: int, x, params: tuple = ()) -> complex | float:
    """Evaluate a classical orthogonal polynomial by its three-term recurrence.

    ``sym_jacobi_X`` takes ``params = (m,)`` and is normalized by ``X_n(1) = 1``;
    ``jacobi_Pab`` takes ``params = (a, b)`` in the standard normalization.
    """
    if n < 0 or int(n) != n:
        raise ValueError("degree must be a non-negative integer")
    if kind == "legendre_P":
        return _real(sym_jacobi_sequence(1.0, x, n)[n])
    if kind == "cheb_T":
        t0, t1 = 1.0, x
        if n == 0:
            return _real(t0)
        for _ in range(n - 1):
            t0, t1 = t1, 2 * x * t1 - t0
        return _real(t1)
    if kind == "cheb_U":
        u0, u1 = 1.0, 2 * x
        if n == 0:
            return _real(u0)
        for _ in range(n - 1):
            u0, u1 = u1, 2 * x * u1 - u0
        return _real(u1)
    if kind == "sym_jacobi_X":
        (m,) = params
        return _real(sym_jacobi_sequence(float(m), x, n)[n])
    if kind == "jacobi_Pab":
        a, b = params
        p0, p1 = 1.0, (a + 1) + (a + b + 2) * (x - 1) / 2.0
        if n == 0:
            return _real(p0)
        for k in range(1, n):
            c1 = 2 * (k + 1) * (k + a + b + 1) * (2 * k + a + b)
            c2 = (2 * k + a + b + 1) * (a * a - b * b)
            c3 = (2 * k + a + b) * (2 * k + a + b + 1) * (2 * k + a + b + 2)
            c4 = 2 * (k + a) * (k + b) * (2 * k + a + b + 2)
            p0, p1 = p1, ((c2 + c3 * x) * p1 - c4 * p0) / c1
        return _real(p1)
    raise ValueError(f"unknown polynomial kind {kind!r}; expected one of {POLY_KINDS}")


def _real(v):
    v = complex(v)
    return v.real if v.imag == 0 else v


# ---------------------------------------------------------------------------
# generating function
# ---------------------------------------------------------------------------

def generating_G(m: float, x, tau):
    """``(1 - tau^2) / (1 - 2 tau x + tau^2)^(1 + m/2)``."""
    tau = complex(tau)
    if abs(tau) >= 1:
        raise ValueError("the generating function needs |tau| < 1")
    x = complex(x)
    val = (1.0 - tau * tau) * np.exp(-(1.0 + m / 2.0) * np.log(1.0 - 2.0 * tau * x + tau * tau))
    return _real(val)


def series_coefficients(m: float, N: int) -> np.ndarray:
    """``(n + m/2) Gamma(n + m) / Gamma(n + 1)`` for ``n = 0..N``."""
    n = np.arange(N + 1, dtype=float)
    return (n + m / 2.0) * np.exp(special.gammaln(n + m) - special.gammaln(n + 1.0))


def series_lhs(m: float, x, tau, N: int):
    """Truncated ``sum_{n <= N} (n + m/2) Gamma(n+m)/Gamma(n+1) X_n^{(m-1)/2}(x) tau^n``."""
    tau = complex(tau)
    if abs(tau) >= 1:
        raise ValueError("the generating series needs |tau| < 1")
    terms = series_coefficients(m, N) * sym_jacobi_sequence(m, x, N, tau)
    return _real(math.fsum(terms.real) + 1j * math.fsum(terms.imag))


def series_rhs(m: float, x, tau):
    """Closed form ``Gamma(m+1)/2 * G(m, x, tau)`` of the generating series."""
    return _real(math.gamma(m + 1.0) / 2.0 * complex(generating_G(m, x, tau)))


# ---------------------------------------------------------------------------
# associated Legendre function of the second kind
# ---------------------------------------------------------------------------

def legendre_Q(mu, nu, z: float) -> complex:
    """``Q^mu_nu(z)`` for real ``z > 1`` through its hypergeometric representation in ``z^-2``."""
    if not z > 1.0:
        raise ValueError("legendre_Q needs z > 1")
    mu, nu = complex(mu), complex(nu)
    pref = (np.exp(1j * np.pi * mu) * complex(special.gamma(nu + mu + 1.0)) * math.sqrt(math.pi)
            / (2.0 ** (nu + 1.0) * complex(special.gamma(nu + 1.5))))
    pref *= (z * z - 1.0) ** (mu / 2.0) * z ** (-mu - nu - 1.0)
    return complex(pref * gauss_2f1((nu + mu + 2.0) / 2.0, (nu + mu + 1.0) / 2.0, nu + 1.5, 1.0 / (z * z)))


def sinh_power_integral_closed(m: float, P: float) -> float:
    """``int_0^inf sinh^m u / (cosh P + cosh u)^(m+2) du`` through ``Q^{m/2}_{1+m/2}(coth P)``."""
    z = 1.0 / math.tanh(P)
    q = legendre_Q(m / 2.0, 1.0 + m / 2.0, z)
    val = (q * 2.0 ** (m / 2.0) * math.gamma((m + 1.0) / 2.0)
           / (np.exp(1j * np.pi * m / 2.0) * math.sqrt(math.pi) * math.gamma(m + 2.0)
              * (z * z - 1.0) ** (m / 4.0)))
    return float(np.real(val)) / math.sinh(P) ** (m + 2.0)


def sinh_power_integral_printed(m: float, P: float) -> float:
    """The same integral through ``Gamma(m + 1/2) / Gamma(m + 2) (coth^2 P - 1) Q^{m/2}_{2+m/2}(coth P)``.

    Kept verbatim for comparison; it disagrees with the integral (ratio about 0.92 at
    ``m = 2``) and :func:`sinh_power_integral_closed` is the form to use.
    """
    z = 1.0 / math.tanh(P)
    val = (2.0 ** (m / 2.0) * np.exp(-0.5j * np.pi * m) * math.gamma(m + 0.5)
           / (math.sqrt(math.pi) * math.gamma(m + 2.0)) * (z * z - 1.0) * legendre_Q(m / 2.0, 2.0 + m / 2.0, z))
    return float(np.real(val))
