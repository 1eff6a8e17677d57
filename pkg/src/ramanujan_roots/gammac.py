"""Complex Gamma and the c-function family ``c_alpha``, ``c*_alpha``, ``S_alpha``, ``c``, ``c*``.

Every Gamma product is evaluated as the exponential of a sum of log-Gamma
values.  Poles are handled factor by factor: each factor of a product depends
on a single ``lambda_beta``, so when numerator and denominator poles coincide
the limit is taken through the residues ``Gamma(-n + s e) ~ (-1)^n / (n! s e)``.
A surviving numerator pole raises :class:`Singular` for a single point and
yields ``inf`` inside a batch; a surviving denominator pole yields an exact zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import special

from .rootsys import RootSystem, SpectralParameter

POLE_TOL = 1e-12


class Singular(ArithmeticError):
    """A point on a singular hyperplane: a Gamma pole survived in a numerator."""

    def __init__(self, message: str, family: str | None = None, index: int | None = None,
                 root: int | None = None):
        super().__init__(message)
        self.family = family
        self.index = index
        self.root = root


class GammaPole(Singular):
    """The Gamma function itself was evaluated at a non-positive integer."""


def _pole_index(z: np.ndarray):
    """Boolean mask of Gamma poles and the corresponding ``n`` with ``z = -n``."""
    z = np.asarray(z, dtype=complex)
    r = np.round(z.real)
    scale = np.maximum(1.0, np.abs(z))
    mask = (r <= 0) & (np.abs(z - r) <= POLE_TOL * scale)
    return mask, (-r).astype(np.int64)


def gamma(z):
    """Complex Gamma; raises :class:`GammaPole` at non-positive integers."""
    arr = np.asarray(z, dtype=complex)
    mask, _ = _pole_index(arr)
    if np.any(mask):
        if arr.ndim == 0:
            raise GammaPole(f"Gamma has a pole at {complex(arr)}", family="gamma")
        out = np.empty(arr.shape, dtype=complex)
        out[mask] = complex(np.inf, 0.0)
        out[~mask] = special.gamma(arr[~mask])
        return out
    val = special.gamma(arr)
    return complex(val) if arr.ndim == 0 else val


def loggamma(z):
    """Principal branch of log-Gamma (continuous along vertical lines)."""
    arr = np.asarray(z, dtype=complex)
    mask, _ = _pole_index(arr)
    if np.any(mask) and arr.ndim == 0:
        raise GammaPole(f"log-Gamma has a pole at {complex(arr)}", family="gamma")
    val = special.loggamma(arr)
    return complex(val) if arr.ndim == 0 else val


Term = tuple[float, float]   # Gamma(slope * x + offset)


def gamma_factor(x, nums: Sequence[Term], dens: Sequence[Term], *, const: float = 1.0,
                 log: bool = False):
    """``const * prod Gamma(s x + o) over nums / prod Gamma(s x + o) over dens``.

    Returns ``(lead, order)``: ``order`` is the net pole order at each point and
    ``lead`` the leading Laurent coefficient in the local variable ``e`` with
    ``x -> x + e``.  Where ``order == 0`` the lead is the value itself.
    """
    x = np.asarray(x, dtype=complex)
    logv = np.zeros(x.shape, dtype=complex)
    order = np.zeros(x.shape, dtype=np.int64)
    for sign, terms in ((1, nums), (-1, dens)):
        for s, o in terms:
            z = s * x + o
            mask, n = _pole_index(z)
            lv = np.empty(x.shape, dtype=complex)
            if np.any(~mask):
                lv[~mask] = special.loggamma(z[~mask])
            if np.any(mask):
                nn = n[mask]
                lv[mask] = (-special.gammaln(nn + 1.0) - math.log(abs(s))
                            + 1j * np.pi * (nn % 2) + (1j * np.pi if s < 0 else 0.0))
            logv += sign * lv
            order += sign * mask.astype(np.int64)
    if log:
        return logv, order
    return const * np.exp(logv), order


def resolve(lead, order):
    """Value of a product from its leading coefficient and pole order."""
    return np.where(order > 0, complex(np.inf, 0.0), np.where(order < 0, 0.0 + 0.0j, lead))


def gamma_ratio(x, nums: Sequence[Term], dens: Sequence[Term], *, const: float = 1.0):
    """Value of :func:`gamma_factor` with poles resolved to ``inf`` and zeros to ``0``."""
    lead, order = gamma_factor(x, nums, dens, const=const)
    return resolve(lead, order)


def coords_of(rs: RootSystem, lam):
    """Normalize a spectral input to ``(coords array, is_single_point)``."""
    if isinstance(lam, SpectralParameter):
        return np.asarray(lam.coords, dtype=complex), True
    arr = np.asarray(lam, dtype=complex)
    if rs.rank == 1 and (arr.ndim == 0 or arr.shape[-1] != 1):
        arr = arr[..., None]
    if arr.shape[-1] != rs.rank:
        raise ValueError(f"spectral parameter needs {rs.rank} coordinates")
    return arr, arr.ndim == 1


class Laurent:
    """Accumulates a product of factors, each depending on one ``lambda_beta``.

    Tracks the leading coefficient and, per variable, the net pole order so a
    zero in one variable never silently cancels a pole in another.
    """

    def __init__(self, shape, nvar: int, const: complex = 1.0):
        self.lead = np.full(shape, const, dtype=complex)
        self.order = np.zeros(tuple(shape) + (nvar,), dtype=np.int64)

    def mul(self, k: int, lead, order) -> "Laurent":
        self.lead = self.lead * lead
        self.order[..., k] += order
        return self

    def scale(self, value) -> "Laurent":
        self.lead = self.lead * value
        return self

    def invert(self) -> "Laurent":
        self.lead = 1.0 / self.lead
        self.order = -self.order
        return self

    def reflect(self) -> "Laurent":
        """Re-express the leading coefficient in ``-e``: a product built at ``-lambda`` has local
        variable ``-e``, and ``(-e)^(-n) = (-1)^n e^(-n)``."""
        self.lead = self.lead * np.where(self.order.sum(axis=-1) % 2 == 0, 1.0, -1.0)
        return self

    def times(self, other: "Laurent") -> "Laurent":
        self.lead = self.lead * other.lead
        self.order = self.order + other.order
        return self

    @property
    def singular(self) -> np.ndarray:
        return np.any(self.order > 0, axis=-1)

    @property
    def vanishing(self) -> np.ndarray:
        return np.any(self.order < 0, axis=-1) & ~self.singular

    def value(self) -> np.ndarray:
        return np.where(self.singular, complex(np.inf, 0.0), np.where(self.vanishing, 0.0 + 0.0j, self.lead))

    def first_singular_variable(self):
        bad = np.argwhere(self.order.reshape(-1, self.order.shape[-1]) > 0)
        return int(bad[0, 1]) if len(bad) else None


def linear_factor(x, a: float = 0.0):
    """``(x - a)`` as a (lead, order) pair with an exact zero tracked as order -1."""
    x = np.asarray(x, dtype=complex)
    z = np.abs(x - a) <= POLE_TOL * np.maximum(1.0, np.abs(x))
    return np.where(z, 1.0 + 0.0j, x - a), -z.astype(np.int64)


def sin_factor(x, a: float = 0.0, power: int = 1):
    """``sin(pi (x - a)) ** power`` as a (lead, order) pair; a zero of the sine has order ``-power``."""
    x = np.asarray(x, dtype=complex)
    t = x - a
    r = np.round(t.real)
    z = np.abs(t - r) <= POLE_TOL * np.maximum(1.0, np.abs(t))
    val = np.sin(np.pi * t)
    deriv = np.pi * np.where(r.astype(np.int64) % 2 == 0, 1.0, -1.0)
    lead = np.where(z, deriv, val)
    return lead ** power, -power * z.astype(np.int64)


def cos_factor(x, a: float = 0.0, power: int = 1):
    """``cos(pi (x - a)) ** power`` as a (lead, order) pair."""
    lead, order = sin_factor(x, a - 0.5, power=1)
    return lead ** power, power * order


def coords_of(rs: RootSystem, lam):
    """Normalize a spectral input to ``(coords array, is_single_point)``."""
    if isinstance(lam, SpectralParameter):
        return np.asarray(lam.coords, dtype=complex), True
    arr = np.asarray(lam, dtype=complex)
    if rs.rank == 1 and (arr.ndim == 0 or arr.shape[-1] != 1):
        arr = arr[..., None]
    if arr.shape[-1] != rs.rank:
        raise ValueError(f"spectral parameter needs {rs.rank} coordinates")
    return arr, arr.ndim == 1


def finish(acc: Laurent, single: bool, what: str, family: str | None = None):
    """Return a scalar (raising :class:`Singular` on a pole) or a batch array."""
    val = acc.value()
    if single:
        if bool(acc.singular):
            raise Singular(f"{what} is singular at this point", family=family,
                           root=acc.first_singular_variable())
        return complex(val)
    return val


@dataclass(frozen=True, eq=False)
class CFunctionSet:
    """The c-functions of a root system with their normalizing constants."""

    rs: RootSystem
    c_HC: float = field(init=False)
    c_star_HC: float = field(init=False)
    c_HC_prime: float = field(init=False)
    c_star_HC_prime: float = field(init=False)

    def __post_init__(self):
        rho = self.rs.rho_j
        ct = self.tilde_product(rho, star=False).value()
        cs = self.tilde_product(-rho, star=True).value()
        if not (np.isfinite(ct) and np.isfinite(cs) and ct != 0 and cs != 0):
            raise Singular("c-function normalization is degenerate for these multiplicities")
        object.__setattr__(self, "c_HC", float(np.real(1.0 / ct)))
        object.__setattr__(self, "c_star_HC", float(np.real(1.0 / cs)))
        h = self.rs.unmult_m_half
        object.__setattr__(self, "c_HC_prime",
                           self.c_HC * float(np.prod(math.sqrt(math.pi) * 2.0 ** (1.0 - h / 2.0))))
        object.__setattr__(self, "c_star_HC_prime",
                           self.c_star_HC * float(np.prod(2.0 ** (-h / 2.0) / math.sqrt(math.pi))))

    @property
    def nvar(self) -> int:
        return len(self.rs.unmult_idx)

    # ----------------------------------------------------- per-root factors
    def _root_terms(self, i: int, star: bool, slope: float = 1.0):
        """Gamma terms of ``c_alpha`` (or ``c*_alpha``) as affine functions of ``slope * x``."""
        h = self.rs.mult_half[i] / 4.0
        m = self.rs.mult[i] / 2.0
        if not star:
            return [(slope, h)], [(slope, h + m)]
        return [(-slope, 1.0 - h - m)], [(-slope, 1.0 - h)]

    def _unmult_terms(self, k: int, star: bool):
        """Terms of ``c_{beta/2} c_beta`` in the variable ``lambda_beta`` for the k-th unmultipliable root."""
        i = self.rs.unmult_idx[k]
        nums, dens = self._root_terms(i, star)
        half = _index_of(self.rs.positive_roots, self.rs.positive_roots[i] / 2.0)
        if half >= 0:
            n2, d2 = self._root_terms(half, star, slope=2.0)
            nums, dens = nums + n2, dens + d2
        return nums, dens

    def tilde_product(self, lam, star: bool) -> Laurent:
        coords, _ = coords_of(self.rs, lam)
        x = self.rs.lam_unm(coords)
        acc = Laurent(x.shape[:-1], self.nvar)
        for k in range(self.nvar):
            acc.mul(k, *gamma_factor(x[..., k], *self._unmult_terms(k, star)))
        return acc

    def c_alpha(self, lam, i: int):
        """``c_alpha`` for the ``i``-th positive root (unnormalized Gamma ratio)."""
        coords, single = coords_of(self.rs, lam)
        x = self.rs.lam_pos(coords)[..., i]
        acc = Laurent(x.shape, 1).mul(0, *gamma_factor(x, *self._root_terms(i, False)))
        return finish(acc, single, "c_alpha", family="c")

    def c_star_alpha(self, lam, i: int):
        coords, single = coords_of(self.rs, lam)
        x = self.rs.lam_pos(coords)[..., i]
        acc = Laurent(x.shape, 1).mul(0, *gamma_factor(x, *self._root_terms(i, True)))
        return finish(acc, single, "c*_alpha", family="c*")

    def S_alpha(self, lam, i: int):
        coords, single = coords_of(self.rs, lam)
        x = self.rs.lam_pos(coords)[..., i]
        h = self.rs.mult_half[i] / 4.0
        m = self.rs.mult[i] / 2.0
        val = np.sin(np.pi * (x + h)) / np.sin(np.pi * (x + h + m))
        return complex(val) if single else val

    # -------------------------------------------------------- full products
    def c_tilde(self, lam):
        coords, single = coords_of(self.rs, lam)
        return finish(self.tilde_product(coords, False), single, "c~", family="c")

    def c_tilde_star(self, lam):
        coords, single = coords_of(self.rs, lam)
        return finish(self.tilde_product(coords, True), single, "c~*", family="c*")

    def c(self, lam):
        coords, single = coords_of(self.rs, lam)
        return finish(self.tilde_product(coords, False).scale(self.c_HC), single, "c", family="c")

    def c_star(self, lam):
        coords, single = coords_of(self.rs, lam)
        return finish(self.tilde_product(coords, True).scale(self.c_star_HC), single, "c*", family="c*")

    def c_sigma_star(self, lam):
        """``c`` through the product over unmultipliable roots (duplication form)."""
        coords, single = coords_of(self.rs, lam)
        x = self.rs.lam_unm(coords)
        acc = Laurent(x.shape[:-1], self.nvar, self.c_HC_prime)
        for k, h in enumerate(self.rs.unmult_m_half):
            m = self.rs.unmult_m[k]
            acc.mul(k, *gamma_factor(x[..., k], [(2.0, 0.0)],
                                     [(1.0, h / 4.0 + 0.5), (1.0, h / 4.0 + m / 2.0)]))
            acc.scale(np.exp(-2.0 * math.log(2.0) * x[..., k]))
        return finish(acc, single, "c", family="c")

    def c_star_sigma_star(self, lam):
        """``c*`` through the product over unmultipliable roots (duplication form)."""
        coords, single = coords_of(self.rs, lam)
        x = self.rs.lam_unm(coords)
        acc = Laurent(x.shape[:-1], self.nvar, self.c_star_HC_prime)
        for k, h in enumerate(self.rs.unmult_m_half):
            m = self.rs.unmult_m[k]
            acc.mul(k, *gamma_factor(x[..., k], [(-1.0, 0.5 - h / 4.0), (-1.0, 1.0 - h / 4.0 - m / 2.0)],
                                     [(-2.0, 1.0)]))
            acc.scale(np.exp(-2.0 * math.log(2.0) * x[..., k]))
        return finish(acc, single, "c*", family="c*")

    def plancherel_product(self, lam) -> Laurent:
        coords, _ = coords_of(self.rs, lam)
        x = self.rs.lam_unm(coords)
        acc = Laurent(x.shape[:-1], self.nvar, 1.0 / self.c_HC ** 2)
        logs = []
        for k in range(self.nvar):
            nums, dens = self._unmult_terms(k, False)
            # 1/(c(x) c(-x)) as g(x) * g(-x): a product of two numbers is exactly even
            lp, op = gamma_factor(x[..., k], dens, nums, log=True)
            lm, om = gamma_factor(-x[..., k], dens, nums, log=True)
            logs.append(lp + lm)
            acc.mul(k, np.where(om % 2 == 0, 1.0, -1.0), op + om)
        acc.scale(np.exp(sum(logs)))
        return acc

    def plancherel_density(self, lam):
        """``1 / (c(lambda) c(-lambda))``; exactly even in ``lambda`` as computed."""
        coords, single = coords_of(self.rs, lam)
        return finish(self.plancherel_product(coords), single, "plancherel density", family="c")


def _index_of(rows: np.ndarray, v: np.ndarray) -> int:
    d = np.max(np.abs(rows - v[None, :]), axis=1)
    k = int(np.argmin(d))
    return k if d[k] < 1e-9 else -1


def build_cfunctions(rs: RootSystem) -> CFunctionSet:
    return CFunctionSet(rs)
