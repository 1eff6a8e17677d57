"""The d and b functions, their singular hyperplanes, and tube domains in the complex dual.

``d(lambda) = 1 / (c(lambda + rho) c*(-lambda - rho))`` interpolates the
dimension-like weights ``d(mu)`` of the Jacobi series; ``b`` carries the sine
poles whose residues produce the alternating series.  Both are available
through independent formulas so that each route can check the others.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .gammac import (CFunctionSet, Laurent, Singular, coords_of, cos_factor, finish,
                     gamma_factor, linear_factor, sin_factor)
from .rootsys import RootSystem, first_singular_value, is_integer, singularity_case


def _basis_vars(rs: RootSystem) -> list[int]:
    """Position of each ``beta_j`` inside the list of unmultipliable roots."""
    return [rs.unmult_idx.index(i) for i in rs.beta_idx]


@dataclass(frozen=True, eq=False)
class DFunction:
    """``d`` through its definition, its shifted Gamma product and (when exact) a polynomial."""

    cf: CFunctionSet
    C_d: float = field(init=False)

    def __post_init__(self):
        rs = self.cf.rs
        ct = self.cf.c_tilde(rs.rho_j)
        cs = self.cf.c_tilde_star(-rs.rho_j)
        val = float(np.real(ct * cs)) * float(np.prod(2.0 ** rs.unmult_m_half))
        object.__setattr__(self, "C_d", val)

    @property
    def rs(self) -> RootSystem:
        return self.cf.rs

    @property
    def has_polynomial_form(self) -> bool:
        h = self.rs.unmult_m_half
        m = self.rs.unmult_m
        return bool(all(is_integer(x / 2.0) and x >= 0 for x in h)
                    and all(is_integer(x) and x > 0 for x in m))

    # ---------------------------------------------------------------- routes
    def definition_product(self, lam) -> Laurent:
        coords, _ = coords_of(self.rs, lam)
        rho = self.rs.rho_j
        acc = self.cf.tilde_product(coords + rho, False)
        acc.times(self.cf.tilde_product(-coords - rho, True).reflect())
        acc.scale(self.cf.c_HC * self.cf.c_star_HC)
        return acc.invert()

    def shifted_product(self, lam) -> Laurent:
        """``d(lambda - rho)`` as the Gamma product over unmultipliable roots."""
        coords, _ = coords_of(self.rs, lam)
        x = self.rs.lam_unm(coords)
        acc = Laurent(x.shape[:-1], self.cf.nvar, self.C_d)
        rt = self.rs.derived.rho_tilde
        for k, h in enumerate(self.rs.unmult_m_half):
            xk = x[..., k]
            acc.mul(k, *linear_factor(xk))
            acc.mul(k, *gamma_factor(xk, [(1.0, h / 4.0 + 0.5), (1.0, rt[k])],
                                     [(1.0, -h / 4.0 + 0.5), (1.0, 1.0 - rt[k])]))
        return acc

    def d(self, lam):
        """``d(lambda)`` from ``1 / (c(lambda + rho) c*(-lambda - rho))``."""
        coords, single = coords_of(self.rs, lam)
        return finish(self.definition_product(coords), single, "d", family="d")

    def d_shifted(self, lam):
        """``d(lambda - rho)`` from the shifted Gamma product."""
        coords, single = coords_of(self.rs, lam)
        return finish(self.shifted_product(coords), single, "d", family="d")

    def d_via_shift(self, lam):
        """``d(lambda)`` evaluated as ``d_shifted(lambda + rho)``."""
        coords, _ = coords_of(self.rs, lam)
        return self.d_shifted(coords + self.rs.rho_j)

    def d_polynomial_shifted(self, lam):
        """``d(lambda - rho)`` as an explicit polynomial; only for even ``m_{beta/2}`` and integral ``m_beta``."""
        if not self.has_polynomial_form:
            raise ValueError("d is not a polynomial for these multiplicities")
        coords, single = coords_of(self.rs, lam)
        x = self.rs.lam_unm(coords)
        val = np.full(x.shape[:-1], self.C_d, dtype=complex)
        rt = self.rs.derived.rho_tilde
        for k, h in enumerate(self.rs.unmult_m_half):
            xk = x[..., k]
            f = xk.copy()
            for j in range(int(round(h / 2.0))):
                f = f * (xk - (h / 4.0 - 0.5) + j)
            for j in range(int(round(2.0 * rt[k])) - 1):
                f = f * (xk - (rt[k] - 1.0) + j)
            val = val * f
        return complex(val) if single else val

    def d_polynomial(self, lam):
        coords, _ = coords_of(self.rs, lam)
        return self.d_polynomial_shifted(coords + self.rs.rho_j)

    def growth_ratio(self, lam) -> np.ndarray:
        """``|d(lambda - rho)| / prod (1 + |lambda_beta|)^(m_{beta/2} + m_beta)`` on a batch."""
        coords, _ = coords_of(self.rs, lam)
        coords = np.atleast_2d(coords)
        x = self.rs.lam_unm(coords)
        env = np.prod((1.0 + np.abs(x)) ** (self.rs.unmult_m_half + self.rs.unmult_m), axis=-1)
        return np.abs(self.d_shifted(coords)) / env


@dataclass(frozen=True, eq=False)
class BFunction:
    """``b`` through its c-function quotient, its trigonometric form, and ``b/(c c)``."""

    cf: CFunctionSet
    dfun: DFunction = field(init=False)
    C_b: float = field(init=False)

    def __post_init__(self):
        rs = self.cf.rs
        object.__setattr__(self, "dfun", DFunction(self.cf))
        ct = self.cf.c_tilde(rs.rho_j)
        cs = self.cf.c_tilde_star(-rs.rho_j)
        object.__setattr__(self, "C_b", float(np.real(2.0 ** (-rs.rank) * cs / ct)))

    @property
    def rs(self) -> RootSystem:
        return self.cf.rs

    def _sine_denominator(self, acc: Laurent, coords) -> Laurent:
        for j, k in enumerate(_basis_vars(self.rs)):
            lead, order = sin_factor(coords[..., j], self.rs.rho_j[j])
            acc.mul(k, 1.0 / lead, -order)
        return acc

    def quotient_product(self, lam) -> Laurent:
        coords, _ = coords_of(self.rs, lam)
        acc = self.cf.tilde_product(-coords, False).reflect().scale(self.cf.c_HC)
        acc.times(self.cf.tilde_product(-coords, True).reflect().scale(self.cf.c_star_HC).invert())
        acc.scale(2.0 ** (-self.rs.rank))
        return self._sine_denominator(acc, coords)

    def explicit_product(self, lam) -> Laurent:
        coords, _ = coords_of(self.rs, lam)
        x = self.rs.lam_unm(coords)
        acc = Laurent(x.shape[:-1], self.cf.nvar, self.C_b)
        in_basis = self.rs.unmult_in_basis
        rt = self.rs.derived.rho_tilde
        for k, h in enumerate(self.rs.unmult_m_half):
            xk = x[..., k]
            acc.mul(k, *cos_factor(xk, h / 4.0))
            lc, oc = cos_factor(xk)
            ls, os_ = sin_factor(xk)
            acc.mul(k, 1.0 / (lc * ls), -(oc + os_))
            if not in_basis[k]:
                acc.mul(k, *sin_factor(xk, rt[k]))
        return acc

    def over_cc_product(self, lam) -> Laurent:
        coords, _ = coords_of(self.rs, lam)
        acc = self.dfun.shifted_product(coords).scale(2.0 ** (-self.rs.rank))
        return self._sine_denominator(acc, coords)

    def b(self, lam):
        """``b`` from ``2^-l c(-lambda) / c*(-lambda) prod 1/sin(pi(lambda_j - rho_j))``."""
        coords, single = coords_of(self.rs, lam)
        return finish(self.quotient_product(coords), single, "b", family="b")

    def b_explicit(self, lam):
        """``b`` from its cos/sin product with constant ``C_b``."""
        coords, single = coords_of(self.rs, lam)
        return finish(self.explicit_product(coords), single, "b", family="b")

    def b_over_cc(self, lam):
        """``b(lambda) / (c(lambda) c(-lambda))`` from the shifted d-product."""
        coords, single = coords_of(self.rs, lam)
        return finish(self.over_cc_product(coords), single, "b/(cc)", family="b/(cc)")

    def b_times_density(self, lam):
        """The same quantity as :meth:`b_over_cc`, assembled as ``b * plancherel_density``."""
        coords, single = coords_of(self.rs, lam)
        acc = self.quotient_product(coords).times(self.cf.plancherel_product(coords))
        return finish(acc, single, "b/(cc)", family="b/(cc)")

    def pi_b(self, lam):
        """``Pi(lambda) b(lambda)`` with ``Pi`` the product of all ``lambda_beta``."""
        coords, single = coords_of(self.rs, lam)
        x = self.rs.lam_unm(coords)
        acc = self.explicit_product(coords)
        for k in range(self.cf.nvar):
            acc.mul(k, *linear_factor(x[..., k]))
        return finish(acc, single, "Pi b", family="b")


# ---------------------------------------------------------------------------
# singular hyperplanes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HyperplaneFamily:
    """Hyperplanes ``lambda_beta = offset - k`` for ``k`` in ``[k_min, k_max]`` (``None``: unbounded)."""

    name: str
    offset: float
    order: int
    k_min: int = 0
    k_max: int | None = None
    coincides_with: str | None = None


@dataclass(frozen=True)
class RootSingularities:
    root: tuple[float, ...]
    in_basis: bool
    table: int
    case: str
    m_half: float
    m: float
    families: tuple[HyperplaneFamily, ...]
    l_beta: float | None


@dataclass(frozen=True)
class SingularityReport:
    roots: tuple[RootSingularities, ...]
    L: tuple[float, ...]
    lattice_families: tuple[HyperplaneFamily, ...]

    def as_dict(self) -> dict:
        return {
            "roots": [
                {"root": list(r.root), "table": r.table, "case": r.case, "in_basis": r.in_basis,
                 "m_half": r.m_half, "m": r.m, "l_beta": r.l_beta,
                 "families": [f.__dict__ for f in r.families]}
                for r in self.roots
            ],
            "L_beta": list(self.L),
            "lattice": [f.__dict__ for f in self.lattice_families],
        }


_H_HALF = "H1"   # Gamma(lambda_beta + m_{beta/2}/4 + 1/2): lambda_beta = -m_{beta/2}/4 - 1/2 - k
_H_RHO = "H2"    # Gamma(lambda_beta + rho~_beta):           lambda_beta = -rho~_beta - k

# (H1 order, H2 order, coincident) per table row; "partial" marks the finite k-range of H1
_TABLE1 = {"1": (0, 1), "2": (1, 0), "3": ("partial", 2), "4": (2, 2), "5a": (1, 1), "5b": (1, 1)}
_TABLE2 = {"1": (0, 0), "2": (0, 1), "3": (0, 0), "4": ("partial", 2), "5": (2, 2), "6": (1, 0),
           "7a": (1, 1), "7b": (1, 1)}


def root_singularities(m_half: float, m: float, in_basis: bool, root=()) -> RootSingularities:
    case = singularity_case(m_half, m, in_basis)
    h1, h2 = (_TABLE1 if in_basis else _TABLE2)[case]
    off_half = -(m_half / 4.0 + 0.5)
    off_rho = -0.5 * (m_half / 2.0 + m)
    fams: list[HyperplaneFamily] = []
    coincident = (in_basis and case == "4") or (not in_basis and case == "5")
    if coincident:
        fams.append(HyperplaneFamily(_H_HALF, off_half, 2, coincides_with=_H_RHO))
    else:
        if h1 == "partial":
            fams.append(HyperplaneFamily(_H_HALF, off_half, 1, 0, int(round((m - 3) / 2))))
        elif h1:
            fams.append(HyperplaneFamily(_H_HALF, off_half, int(h1)))
        if h2:
            fams.append(HyperplaneFamily(_H_RHO, off_rho, int(h2)))
    return RootSingularities(tuple(float(v) for v in root), in_basis, 1 if in_basis else 2, case,
                             float(m_half), float(m), tuple(fams),
                             first_singular_value(m_half, m, in_basis))


def classify_singularities(rs: RootSystem) -> SingularityReport:
    """Table-driven pole pattern of ``b/(c c)`` for every unmultipliable positive root."""
    rows = []
    for k, i in enumerate(rs.unmult_idx):
        rows.append(root_singularities(rs.unmult_m_half[k], rs.unmult_m[k], bool(rs.unmult_in_basis[k]),
                                       rs.positive_roots[i]))
    lattice = tuple(HyperplaneFamily(f"H_{j + 1}", float(rs.rho_j[j]), 1) for j in range(rs.rank))
    return SingularityReport(tuple(rows), tuple(float(v) for v in rs.derived.L), lattice)


def numeric_pole_order(fn, base: np.ndarray, direction: np.ndarray, eps: float = 1e-4) -> float:
    """Estimate the pole order of ``fn`` on a hyperplane through ``base`` from the approach rate.

    ``fn`` is evaluated at ``base + e * direction`` for ``e`` and ``e / 2``; the
    log2 of the ratio is the order (negative for zeros).
    """
    a = abs(fn(base + eps * direction))
    b = abs(fn(base + 0.5 * eps * direction))
    return math.log2(b / a) if a > 0 and b > 0 else float("nan")


# ---------------------------------------------------------------------------
# tube domains
# ---------------------------------------------------------------------------

TUBE_KINDS = ("T_delta", "T_prime", "T_doubleprime", "T_Pi_eta", "Hardy", "L_Sigma", "T_Sigma")


@dataclass(frozen=True)
class TubeDomain:
    kind: str
    param: float = 1.0

    def __post_init__(self):
        if self.kind not in TUBE_KINDS:
            raise ValueError(f"unknown tube kind {self.kind!r}; expected one of {TUBE_KINDS}")
        if self.kind in ("T_delta", "T_prime", "T_doubleprime", "Hardy") and not (0.0 < self.param <= 1.0):
            raise ValueError("delta must lie in (0, 1]")
        if self.kind == "T_Pi_eta" and not (0.0 <= self.param < 0.5):
            raise ValueError("eta must lie in [0, 1/2)")


def tube_contains(rs: RootSystem, tube: TubeDomain, lam):
    """Strict-inequality membership test; vectorized over leading axes."""
    coords, single = coords_of(rs, lam)
    re_b = np.real(rs.lam_unm(coords))
    re_j = np.real(coords)
    L = rs.derived.L
    Lj = L[_basis_vars(rs)]
    p = tube.param
    if tube.kind == "T_delta":
        ok = np.all(np.abs(re_b) < p * L, axis=-1)
    elif tube.kind == "T_prime":
        ok = np.all(np.abs(re_j) < p * Lj, axis=-1)
    elif tube.kind == "T_doubleprime":
        ok = np.all(re_j < p * Lj, axis=-1)
    elif tube.kind == "T_Pi_eta":
        ok = np.all(np.abs(re_b) < 0.5 - p, axis=-1)
    elif tube.kind == "Hardy":
        ok = np.all(re_b > -p * rs.derived.rho_tilde, axis=-1)
    elif tube.kind == "L_Sigma":
        ok = np.all(re_b > -L, axis=-1)
    else:
        ok = np.all(np.abs(re_b) < L, axis=-1)
    return bool(ok) if single else ok


def tube_intersection_over_W(rs: RootSystem, kind: str, delta: float, lam):
    """Membership in ``intersection over w of w(T)`` for ``T`` one of the single-chamber tubes."""
    coords, single = coords_of(rs, lam)
    tube = TubeDomain(kind, delta)
    ok = None
    for wm in rs.weyl_omega:
        # lambda in w(T)  iff  w^{-1} lambda in T; the group is closed under inverses
        pts = coords @ wm.T
        got = tube_contains(rs, tube, pts)
        ok = got if ok is None else (ok & got)
    return bool(ok) if single else ok
