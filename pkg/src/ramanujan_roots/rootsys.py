"""Root systems with multiplicities: roots, Weyl group, weights and derived constants.

Conventions
-----------
Vectors of a* are stored in *ambient* coordinates together with a Gram matrix
``gram`` so that ``<x, y> = x @ gram @ y``.  The restricted fundamental weights
``omega_j`` are dual to the unmultipliable simple roots ``beta_j`` in the sense
``<omega_j, beta_k> / <beta_k, beta_k> = delta_jk``; with this normalisation the
rank-one weight ``omega_1`` equals ``beta`` itself.  Spectral parameters are
mostly handled through their omega-coordinates ``lambda_j = lambda_{beta_j}``.

The order on weights is the one generated by the doubled simple roots
``2 alpha_i`` (the simple roots of ``R = 2 Sigma``).  This is the order under
which every Jacobi polynomial coefficient is strictly positive.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

INT_TOL = 1e-9
_KEY_DIGITS = 9


class RootSystemError(ValueError):
    """Raised for invalid root data or multiplicities."""


def is_integer(x: float, tol: float = INT_TOL) -> bool:
    return abs(x - round(x)) < tol


def singularity_case(m_half: float, m_beta: float, in_basis: bool) -> str:
    """Return the pole-pattern case label for an unmultipliable root.

    ``m_half`` is the multiplicity of ``beta/2`` (0 if it is not a root) and
    ``in_basis`` tells whether ``beta`` is one of the simple ``beta_j``.  The
    labels are the row names ``"1"``, ``"2"``, ..., ``"5a"`` of the first table
    (``in_basis``) or ``"1"`` ... ``"7b"`` of the second table.
    """
    half_int = is_integer(m_half / 2.0)
    odd_sum = is_integer(m_half + m_beta) and round(m_half + m_beta) % 2 == 1
    m_odd = is_integer(m_beta) and round(m_beta) % 2 == 1
    if in_basis:
        if half_int:
            return "1"
        if odd_sum:
            return "2"
        if m_odd:
            return "4" if round(m_beta) == 1 else "3"
        return "5a" if m_beta > 1 else "5b"
    if half_int:
        return "1" if is_integer(m_beta) else "2"
    if odd_sum:
        return "3"
    if m_odd:
        return "5" if round(m_beta) == 1 else "4"
    if is_integer(m_half / 2.0 + m_beta):
        return "6"
    return "7a" if m_beta > 1 else "7b"


def first_singular_value(m_half: float, m_beta: float, in_basis: bool) -> float | None:
    """The first negative singular value ``l_beta`` (None when there is none)."""
    case = singularity_case(m_half, m_beta, in_basis)
    rho_t = 0.5 * (m_half / 2.0 + m_beta)
    half = m_half / 4.0 + 0.5
    if in_basis:
        return -rho_t if case in ("1", "5b") else -half
    if case in ("1", "3"):
        return None
    if case in ("2", "7b"):
        return -rho_t
    return -half


@dataclass(frozen=True)
class Weight:
    """An element of the restricted weight lattice in omega-coordinates."""

    coords: tuple[int, ...]

    @classmethod
    def of(cls, coords: Iterable[float]) -> "Weight":
        vals = []
        for c in coords:
            if not is_integer(float(c)):
                raise RootSystemError(f"weight coordinate {c} is not an integer")
            vals.append(int(round(float(c))))
        return cls(tuple(vals))

    @property
    def size(self) -> int:
        """|mu| = mu_1 + ... + mu_l."""
        return sum(self.coords)

    def is_dominant(self) -> bool:
        return all(c >= 0 for c in self.coords)

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Weight") -> "Weight":
        return Weight(tuple(a - b for a, b in zip(self.coords, other.coords)))


@dataclass(frozen=True, eq=False)
class SpectralParameter:
    """A point of the complexified dual, kept in omega- and ambient coordinates."""

    coords: np.ndarray
    ambient: np.ndarray

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coords, dtype=dtype)


@dataclass(frozen=True, eq=False)
class MultiplicityFunction:
    """W-invariant positive multiplicities, extended by zero off the root system."""

    roots: np.ndarray          # all roots (both signs), ambient
    values: np.ndarray         # multiplicity per root in ``roots``

    def of(self, alpha: np.ndarray) -> float:
        alpha = np.asarray(alpha, dtype=float)
        d = np.max(np.abs(self.roots - alpha[None, :]), axis=1)
        k = int(np.argmin(d))
        return float(self.values[k]) if d[k] < 1e-9 else 0.0


@dataclass(frozen=True, eq=False)
class DerivedConstants:
    rho: np.ndarray                # ambient
    rho_j: np.ndarray              # omega-coordinates of rho
    rho_tilde: np.ndarray          # per unmultipliable positive root
    Omega: float
    M: float
    L: np.ndarray                  # L_beta per unmultipliable positive root
    rho_L: np.ndarray              # ambient
    m_L: np.ndarray                # (m_L)_beta per unmultipliable positive root
    m_L_half: np.ndarray           # (m_L)_{beta/2} per unmultipliable positive root


@dataclass(frozen=True, eq=False)
class RootSystem:
    """Root data ``(a, Sigma, m)`` with every derived quantity precomputed."""

    name: str
    gram: np.ndarray
    positive_roots: np.ndarray       # (n, l) ambient
    mult: np.ndarray                 # (n,) m_alpha for positive roots
    mult_half: np.ndarray            # (n,) m_{alpha/2}
    simple_idx: tuple[int, ...]
    beta_idx: tuple[int, ...]        # indices of beta_1..beta_l among positive roots
    unmult_idx: tuple[int, ...]      # indices of Sigma_*^+
    omega: np.ndarray                # (l, l) rows = omega_j ambient
    weyl: np.ndarray                 # (|W|, l, l) ambient matrices
    weyl_omega: np.ndarray           # (|W|, l, l) integer matrices on omega-coordinates
    multiplicity: MultiplicityFunction
    derived: DerivedConstants = field(repr=False)
    # pairing matrices: lambda_alpha = coords @ K.T
    K_pos: np.ndarray = field(repr=False)
    K_unm: np.ndarray = field(repr=False)
    gram_omega: np.ndarray = field(repr=False)
    double_simple_omega: np.ndarray = field(repr=False)   # rows: 2 alpha_i in omega-coords

    # ------------------------------------------------------------------ basics
    @property
    def rank(self) -> int:
        return self.gram.shape[0]

    @property
    def order_W(self) -> int:
        return self.weyl.shape[0]

    @property
    def simple_roots(self) -> np.ndarray:
        return self.positive_roots[list(self.simple_idx)]

    @property
    def beta_basis(self) -> np.ndarray:
        return self.positive_roots[list(self.beta_idx)]

    @property
    def unmultipliable(self) -> np.ndarray:
        return self.positive_roots[list(self.unmult_idx)]

    @property
    def unmult_m(self) -> np.ndarray:
        return self.mult[list(self.unmult_idx)]

    @property
    def unmult_m_half(self) -> np.ndarray:
        return self.mult_half[list(self.unmult_idx)]

    @property
    def unmult_in_basis(self) -> np.ndarray:
        return np.array([i in self.beta_idx for i in self.unmult_idx])

    @property
    def rho(self) -> np.ndarray:
        return self.derived.rho

    @property
    def rho_j(self) -> np.ndarray:
        return self.derived.rho_j

    def inner(self, x, y):
        return np.asarray(x) @ self.gram @ np.asarray(y)

    def norm(self, x) -> float:
        x = np.asarray(x)
        re, im = np.real(x), np.imag(x)
        return float(math.sqrt(float(re @ self.gram @ re + im @ self.gram @ im)))

    # ------------------------------------------------------ coordinate changes
    def to_ambient(self, coords) -> np.ndarray:
        return np.asarray(coords) @ self.omega

    def to_coords(self, ambient) -> np.ndarray:
        b = self.beta_basis
        nb = np.einsum("ij,jk,ik->i", b, self.gram, b)
        return (np.asarray(ambient) @ self.gram @ b.T) / nb

    def param(self, coords) -> SpectralParameter:
        c = np.asarray(coords, dtype=complex).reshape(self.rank)
        return SpectralParameter(c, self.to_ambient(c))

    def param_from_ambient(self, ambient) -> SpectralParameter:
        a = np.asarray(ambient, dtype=complex).reshape(self.rank)
        return SpectralParameter(self.to_coords(a), a)

    def lambda_alpha(self, lam, alpha) -> complex:
        """``<lambda, alpha> / <alpha, alpha>`` for an arbitrary non-zero alpha."""
        alpha = np.asarray(alpha, dtype=float)
        aa = float(alpha @ self.gram @ alpha)
        if aa <= 0.0:
            raise RootSystemError("lambda_alpha needs a non-zero root")
        amb = lam.ambient if isinstance(lam, SpectralParameter) else np.asarray(lam)
        return complex(amb @ self.gram @ alpha / aa)

    def lam_pos(self, coords) -> np.ndarray:
        """lambda_alpha for every positive root; coords may carry leading axes."""
        return np.asarray(coords) @ self.K_pos.T

    def lam_unm(self, coords) -> np.ndarray:
        """lambda_beta for every unmultipliable positive root."""
        return np.asarray(coords) @ self.K_unm.T

    def inner_coords(self, x, y):
        return np.asarray(x) @ self.gram_omega @ np.asarray(y)

    # ------------------------------------------------------------- Weyl group
    def weyl_orbit(self, mu) -> list[tuple]:
        """Distinct orbit points of an omega-coordinate vector (integer tuples for weights)."""
        c = np.asarray(mu.coords if isinstance(mu, Weight) else mu)
        pts = np.einsum("wij,j->wi", self.weyl_omega, c)
        out: dict[tuple, tuple] = {}
        for p in pts:
            if np.iscomplexobj(p):
                key = tuple(np.round(np.concatenate([p.real, p.imag]), _KEY_DIGITS))
                val = tuple(complex(v) for v in p)
            elif np.issubdtype(p.dtype, np.integer):
                key = val = tuple(int(v) for v in p)
            else:
                key = tuple(np.round(p, _KEY_DIGITS))
                val = tuple(float(v) for v in p)
            out.setdefault(key, val)
        return list(out.values())

    def dominant_representative(self, v):
        """Orbit point with all ``Re lambda_j >= 0`` (lexicographically largest on ties)."""
        is_weight = isinstance(v, Weight)
        c = np.asarray(v.coords if is_weight else v)
        pts = np.einsum("wij,j->wi", self.weyl_omega, c)
        cands = [p for p in pts if np.all(np.real(p) >= -1e-12)]
        best = max(cands, key=lambda p: tuple(np.concatenate([np.real(p), np.imag(p)])))
        if is_weight:
            return Weight(tuple(int(x) for x in best))
        return best

    def stabilizer_size(self, mu: Weight) -> int:
        c = np.asarray(mu.coords)
        pts = np.einsum("wij,j->wi", self.weyl_omega, c)
        return int(np.sum(np.all(pts == c[None, :], axis=1)))

    # --------------------------------------------------------- weight order
    def _order_coefficients(self, diff) -> np.ndarray:
        return np.linalg.solve(self.double_simple_omega.T, np.asarray(diff, dtype=float))

    def dominance_leq(self, nu: Weight, mu: Weight) -> bool:
        """``nu <= mu`` iff ``mu - nu`` is a non-negative integer combination of the ``2 alpha_i``."""
        if not (nu.is_dominant() and mu.is_dominant()):
            raise RootSystemError("dominance_leq expects dominant weights")
        k = self._order_coefficients(np.subtract(mu.coords, nu.coords))
        return bool(np.all(k > -INT_TOL) and np.all(np.abs(k - np.round(k)) < INT_TOL))

    def enumerate_dominant_below(self, mu: Weight) -> list[Weight]:
        """All dominant ``nu <= mu``, sorted by decreasing height."""
        if not mu.is_dominant():
            raise RootSystemError("enumerate_dominant_below expects a dominant weight")
        rho_pos = np.ones(self.rank)
        steps = self.double_simple_omega
        heights = steps @ self.gram_omega @ rho_pos
        top = np.asarray(mu.coords) @ self.gram_omega @ rho_pos
        found: set[tuple[int, ...]] = set()
        base = np.asarray(mu.coords, dtype=float)

        def rec(i: int, cur: np.ndarray, budget: float) -> None:
            if i == self.rank:
                if np.all(cur > -INT_TOL) and np.all(np.abs(cur - np.round(cur)) < INT_TOL):
                    found.add(tuple(int(round(x)) for x in cur))
                return
            k = 0
            while k * heights[i] <= budget + 1e-9:
                rec(i + 1, cur - k * steps[i], budget - k * heights[i])
                k += 1

        rec(0, base, float(top))
        ws = [Weight(c) for c in found]
        ws.sort(key=lambda w: (-self.inner_coords(np.array(w.coords, float), rho_pos), w.coords))
        return ws

    def height(self, mu) -> float:
        """Pairing with the strictly dominant vector ``sum_j omega_j``; strictly monotone in the order."""
        c = np.asarray(mu.coords if isinstance(mu, Weight) else mu, dtype=float)
        return float(c @ self.gram_omega @ np.ones(self.rank))

    # ------------------------------------------------------------ summaries
    def summary(self) -> dict:
        d = self.derived
        return {
            "system": self.name,
            "rank": self.rank,
            "order_W": self.order_W,
            "positive_roots": self.positive_roots.tolist(),
            "multiplicities": self.mult.tolist(),
            "simple_roots": self.simple_roots.tolist(),
            "beta_basis": self.beta_basis.tolist(),
            "unmultipliable_positive": self.unmultipliable.tolist(),
            "fundamental_weights": self.omega.tolist(),
            "rho": d.rho.tolist(),
            "rho_j": d.rho_j.tolist(),
            "rho_tilde": d.rho_tilde.tolist(),
            "Omega": d.Omega,
            "M": d.M,
            "L_beta": d.L.tolist(),
            "rho_L": d.rho_L.tolist(),
        }


# --------------------------------------------------------------------------
# construction
# --------------------------------------------------------------------------

_SQ = 1.0
PRESETS: dict[str, dict] = {
    # rank one, <beta, beta> = 1 so the coordinate of H is u = beta(H)
    "A1": {"gram": [[1.0]], "roots": [[1.0]], "orbits": ["beta"], "orbit_of": [0]},
    "BC1": {"gram": [[1.0]], "roots": [[0.5], [1.0]], "orbits": ["beta/2", "beta"], "orbit_of": [0, 1]},
    # simple-root coordinates, |alpha| = 1
    "A2": {"gram": [[1.0, -0.5], [-0.5, 1.0]], "roots": [[1, 0], [0, 1], [1, 1]],
           "orbits": ["alpha"], "orbit_of": [0, 0, 0]},
    # standard e-basis
    "B2": {"gram": [[1.0, 0.0], [0.0, 1.0]], "roots": [[1, -1], [1, 1], [1, 0], [0, 1]],
           "orbits": ["long", "short"], "orbit_of": [0, 0, 1, 1]},
    "BC2": {"gram": [[1.0, 0.0], [0.0, 1.0]],
            "roots": [[1, -1], [1, 1], [1, 0], [0, 1], [2, 0], [0, 2]],
            "orbits": ["middle", "short", "long"], "orbit_of": [0, 0, 1, 1, 2, 2]},
}


def _reflection(alpha: np.ndarray, gram: np.ndarray) -> np.ndarray:
    aa = alpha @ gram @ alpha
    return np.eye(len(alpha)) - 2.0 * np.outer(alpha, alpha @ gram) / aa


def _find(rows: np.ndarray, v: np.ndarray) -> int:
    d = np.max(np.abs(rows - v[None, :]), axis=1)
    k = int(np.argmin(d))
    return k if d[k] < 1e-9 else -1


def _generate_group(gens: Sequence[np.ndarray], limit: int = 10000) -> np.ndarray:
    l = gens[0].shape[0]
    elems = [np.eye(l)]
    keys = {tuple(np.round(np.eye(l), _KEY_DIGITS).ravel())}
    frontier = [np.eye(l)]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = s @ g
                key = tuple(np.round(h, _KEY_DIGITS).ravel())
                if key not in keys:
                    keys.add(key)
                    elems.append(h)
                    nxt.append(h)
                    if len(elems) > limit:
                        raise RootSystemError("Weyl group too large or not finite")
        frontier = nxt
    return np.array(elems)


def _build(name: str, gram, pos_roots, mult) -> RootSystem:
    gram = np.asarray(gram, dtype=float)
    pos = np.asarray(pos_roots, dtype=float)
    mult = np.asarray(mult, dtype=float)
    l = gram.shape[0]
    if gram.shape != (l, l) or not np.allclose(gram, gram.T) or np.min(np.linalg.eigvalsh(gram)) <= 0:
        raise RootSystemError("gram must be symmetric positive definite")
    if pos.ndim != 2 or pos.shape[1] != l:
        raise RootSystemError("roots must be vectors of length rank")
    if mult.shape != (pos.shape[0],):
        raise RootSystemError("one multiplicity per positive root is required")
    if np.any(~np.isfinite(mult)) or np.any(mult <= 0):
        raise RootSystemError("multiplicities must be positive")
    n = pos.shape[0]
    allroots = np.vstack([pos, -pos])
    allmult = np.concatenate([mult, mult])

    # closure under reflections
    for a in allroots:
        s = _reflection(a, gram)
        for b in allroots:
            if _find(allroots, s @ b) < 0:
                raise RootSystemError("root vectors are not closed under reflections")
        # crystallographic pairing
        for b in allroots:
            cij = 2.0 * (b @ gram @ a) / (a @ gram @ a)
            if not is_integer(cij):
                raise RootSystemError("root system is not crystallographic")

    # simple roots: positive roots that are not a sum of two positive roots
    simple = []
    for i in range(n):
        decomposable = False
        for j in range(n):
            k = _find(pos, pos[i] - pos[j])
            if k >= 0:
                decomposable = True
                break
        if not decomposable:
            simple.append(i)
    if len(simple) != l:
        raise RootSystemError("positive roots do not determine a basis of simple roots")
    S = pos[simple]
    coeff = np.linalg.solve(S.T, pos.T).T
    if np.any(coeff < -1e-9):
        raise RootSystemError("given roots are not a positive system")

    # multiplicity of alpha/2 and W-invariance
    mult_half = np.zeros(n)
    for i in range(n):
        k = _find(pos, pos[i] / 2.0)
        if k >= 0:
            mult_half[i] = mult[k]
    refl = [_reflection(a, gram) for a in S]
    weyl = _generate_group(refl)
    for w in weyl:
        for i, a in enumerate(allroots):
            k = _find(allroots, w @ a)
            if abs(allmult[k] - allmult[i]) > 1e-12:
                raise RootSystemError("multiplicity function is not W-invariant")

    beta_idx = []
    for i in simple:
        k = _find(pos, 2.0 * pos[i])
        beta_idx.append(k if k >= 0 else i)
    unmult_idx = tuple(i for i in range(n) if _find(pos, 2.0 * pos[i]) < 0)

    B = pos[beta_idx]
    nb = np.einsum("ij,jk,ik->i", B, gram, B)
    # omega_j: <omega_j, beta_k> = delta_jk <beta_k, beta_k>
    omega = np.linalg.solve((B @ gram), np.diag(nb)).T
    # rows of ``omega`` are the weights; check duality
    chk = (omega @ gram @ B.T) / nb[None, :]
    assert np.allclose(chk, np.eye(l), atol=1e-12)

    def pairing_matrix(roots: np.ndarray) -> np.ndarray:
        rr = np.einsum("ij,jk,ik->i", roots, gram, roots)
        return (roots @ gram @ omega.T) / rr[:, None]

    K_pos = pairing_matrix(pos)
    K_unm = K_pos[list(unmult_idx)]
    to_coords = lambda amb: (amb @ gram @ B.T) / nb  # noqa: E731
    weyl_omega_f = np.array([to_coords((w @ omega.T).T) for w in weyl])
    # weyl_omega_f[w] maps omega_j (row j) to coords; transpose to act on coordinate vectors
    weyl_omega_f = np.transpose(weyl_omega_f, (0, 2, 1))
    if np.max(np.abs(weyl_omega_f - np.round(weyl_omega_f))) > 1e-9:
        raise RootSystemError("Weyl group does not preserve the weight lattice")
    weyl_omega = np.round(weyl_omega_f).astype(int)
    gram_omega = omega @ gram @ omega.T
    double_simple = 2.0 * to_coords(S)
    if np.max(np.abs(double_simple - np.round(double_simple))) > 1e-9:
        raise RootSystemError("doubled simple roots are not weights")

    # derived constants
    rho = 0.5 * (mult @ pos)
    rho_j = 0.5 * (mult[beta_idx] + mult_half[beta_idx] / 2.0)
    assert np.allclose(to_coords(rho), rho_j, atol=1e-12)
    um = mult[list(unmult_idx)]
    uh = mult_half[list(unmult_idx)]
    rho_tilde = 0.5 * (um + uh / 2.0)
    Omega = max(math.sqrt(float(w @ gram @ w)) for w in omega)
    M = float(np.sum(uh + um))

    L = np.zeros(len(unmult_idx))
    for a, i in enumerate(unmult_idx):
        # basis representative of the W-orbit of beta
        rep = None
        for w in weyl:
            k = _find(pos, w @ pos[i])
            if k >= 0 and k in beta_idx:
                rep = k
                break
        assert rep is not None
        lval = first_singular_value(mult_half[rep], mult[rep], True)
        L[a] = -lval
    m_L = np.where(np.isclose(L, rho_tilde), um, 1.0)
    rho_L = L @ pos[list(unmult_idx)]
    derived = DerivedConstants(rho=rho, rho_j=rho_j, rho_tilde=rho_tilde, Omega=Omega, M=M,
                               L=L, rho_L=rho_L, m_L=m_L, m_L_half=uh.copy())
    return RootSystem(
        name=name, gram=gram, positive_roots=pos, mult=mult, mult_half=mult_half,
        simple_idx=tuple(simple), beta_idx=tuple(beta_idx), unmult_idx=unmult_idx,
        omega=omega, weyl=weyl, weyl_omega=weyl_omega,
        multiplicity=MultiplicityFunction(allroots, allmult), derived=derived,
        K_pos=K_pos, K_unm=K_unm, gram_omega=gram_omega, double_simple_omega=double_simple,
    )


def build_root_system(preset: str, multiplicities=None, *, gram=None, roots=None) -> RootSystem:
    """Build a preset (A1, A2, B2, BC1, BC2) or a custom system.

    ``multiplicities`` is a list with one value per W-orbit of roots (in the
    preset's orbit order), a mapping from orbit name to value, or a single
    number for systems with one orbit.  Custom systems take the positive roots,
    a Gram matrix and one multiplicity per positive root.
    """
    key = preset.upper() if preset.lower() != "custom" else "custom"
    if key == "custom":
        if roots is None or gram is None or multiplicities is None:
            raise RootSystemError("custom systems need roots, gram and multiplicities")
        return _build("custom", gram, roots, list(multiplicities))
    if key not in PRESETS:
        raise RootSystemError(f"unknown preset {preset!r}")
    data = PRESETS[key]
    orbits = data["orbits"]
    if multiplicities is None:
        raise RootSystemError("multiplicities are required")
    if isinstance(multiplicities, Mapping):
        missing = [o for o in orbits if o not in multiplicities]
        if missing or set(multiplicities) - set(orbits):
            raise RootSystemError(f"{key} multiplicities need keys {orbits}")
        vals = [float(multiplicities[o]) for o in orbits]
    else:
        vals = list(np.atleast_1d(np.asarray(multiplicities, dtype=float)))
        if len(vals) == 1 and len(orbits) > 1:
            vals = vals * len(orbits)
        if len(vals) != len(orbits):
            raise RootSystemError(f"{key} expects {len(orbits)} multiplicities {orbits}")
    per_root = [vals[o] for o in data["orbit_of"]]
    return _build(key, data["gram"], data["roots"], per_root)


def load_root_system(source) -> RootSystem:
    """Load a system from a JSON document (path, string or already-parsed dict)."""
    if isinstance(source, Mapping):
        doc = dict(source)
    else:
        text = str(source)
        p = Path(text)
        doc = json.loads(p.read_text() if not text.lstrip().startswith("{") and p.exists() else text)
    preset = doc.get("preset", "custom")
    if str(preset).lower() == "custom":
        return build_root_system("custom", doc["multiplicities"], gram=doc["gram"], roots=doc["roots"])
    return build_root_system(preset, doc["multiplicities"])
