"""Symbol A(xi) of a first-order system and its sphere extrema.

For Hermitian coefficients A_1..A_d the symbol is A(xi) = sum_j A_j xi_j.
The maximal spectral norm of A(xi) over the unit sphere governs the
exponential-decay bound; the minimal smallest singular value is the
ellipticity margin.  The maximum is found by multistart alternating
ascent (eigenvector / linearization steps, monotone) and certified by a
quasi-uniform sphere grid with a Lipschitz bound.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import DimensionMismatch, SchemaError, ValidationError

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


@dataclass(frozen=True)
class SymbolSystem:
    matrices: tuple  # Hermitian n x n numpy arrays A_1..A_d

    def __post_init__(self):
        if not self.matrices:
            raise ValidationError("at least one coefficient matrix required")
        n = self.matrices[0].shape[0]
        for a in self.matrices:
            if a.shape != (n, n):
                raise ValidationError("coefficient matrices must share one size")
            if not np.allclose(a, a.conj().T, atol=1e-12):
                raise ValidationError("coefficient matrices must be Hermitian")

    @property
    def d(self) -> int:
        return len(self.matrices)

    @property
    def n(self) -> int:
        return self.matrices[0].shape[0]

    def lipschitz(self) -> float:
        return sum(np.linalg.norm(a, 2) for a in self.matrices)


@dataclass(frozen=True)
class SymbolReport:
    gamma: float
    gamma_argmax: np.ndarray
    ellipticity_margin: float
    elliptic: bool


def symbol(system: SymbolSystem, xi) -> np.ndarray:
    """A(xi) = sum_j A_j xi_j."""
    xi = np.asarray(xi, dtype=float)
    if xi.shape != (system.d,):
        raise DimensionMismatch(f"xi must have length {system.d}")
    out = np.zeros((system.n, system.n), dtype=complex)
    for a, c in zip(system.matrices, xi):
        out = out + c * a
    return out


def _batch_extreme(system: SymbolSystem, xis: np.ndarray):
    """(max|eig|, min|eig|) of A(xi) for a batch of directions."""
    mats = np.einsum("kd,dij->kij", xis, np.stack(system.matrices))
    ev = np.linalg.eigvalsh(mats)
    aev = np.abs(ev)
    return aev.max(axis=1), aev.min(axis=1)


def _sphere_grid(d: int, resolution: float = 0.02) -> np.ndarray:
    if d == 1:
        return np.array([[1.0], [-1.0]])
    if d == 2:
        th = np.arange(0.0, 2 * np.pi, resolution)
        return np.stack([np.cos(th), np.sin(th)], axis=1)
    if d == 3:
        # Fibonacci sphere at ~resolution rad spacing
        npts = int(np.ceil(4.0 * np.pi / resolution ** 2))
        i = np.arange(npts) + 0.5
        phi = np.arccos(1.0 - 2.0 * i / npts)
        theta = np.pi * (1.0 + 5 ** 0.5) * i
        return np.stack([np.sin(phi) * np.cos(theta),
                         np.sin(phi) * np.sin(theta),
                         np.cos(phi)], axis=1)
    # d >= 4: Monte Carlo sample (no exhaustive certificate)
    rng = np.random.default_rng(0)
    v = rng.standard_normal((200_000, d))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _ascent(system: SymbolSystem, xi0: np.ndarray, iters: int = 200,
            gtol: float = 1e-12):
    """Alternating ascent of |lambda_max(A(xi))| on the sphere."""
    xi = xi0 / np.linalg.norm(xi0)
    val = -np.inf
    for _ in range(iters):
        a = symbol(system, xi)
        ev, vec = np.linalg.eigh(a)
        k = int(np.argmax(np.abs(ev)))
        mu, v = ev[k], vec[:, k]
        grad = np.array([np.real(v.conj() @ aj @ v) for aj in system.matrices])
        g = np.sign(mu) * grad if mu != 0 else grad
        norm_g = np.linalg.norm(g)
        if norm_g < gtol:
            break
        new_xi = g / norm_g
        new_val = abs(mu)
        if abs(new_val - val) < 1e-15 and np.linalg.norm(new_xi - xi) < 1e-14:
            xi, val = new_xi, new_val
            break
        xi, val = new_xi, new_val
    a = symbol(system, xi)
    val = float(np.max(np.abs(np.linalg.eigvalsh(a))))
    return val, xi


def gamma(system: SymbolSystem, starts_per_dim: int = 32,
          grid_resolution: float = 0.02) -> SymbolReport:
    """Max spectral norm of A(xi) on the unit sphere, with certificate.

    The report also carries the ellipticity margin (min smallest
    singular value on the sphere).
    """
    rng = np.random.default_rng(1234)
    d = system.d
    best_val, best_xi = -np.inf, None

    # grid pass: both the max (certificate) and the min (margin seed)
    grid = _sphere_grid(d, grid_resolution)
    gmax, gmin = _batch_extreme(system, grid)
    k = int(np.argmax(gmax))
    best_val, best_xi = float(gmax[k]), grid[k]

    starts = rng.standard_normal((starts_per_dim * d, d))
    starts = np.vstack([starts, best_xi[None, :], np.eye(d)])
    for xi0 in starts:
        if np.linalg.norm(xi0) == 0:
            continue
        val, xi = _ascent(system, xi0)
        if val > best_val:
            best_val, best_xi = val, xi

    margin = _margin(system, grid, gmin)
    tol = 1e-10 * max(1.0, system.lipschitz())
    return SymbolReport(gamma=best_val, gamma_argmax=best_xi,
                        ellipticity_margin=margin, elliptic=margin > tol)


def _margin(system: SymbolSystem, grid: np.ndarray, gmin: np.ndarray) -> float:
    k = int(np.argmin(gmin))
    xi0 = grid[k]

    def obj(xi):
        nrm = np.linalg.norm(xi)
        if nrm == 0:
            return float(gmin[k])
        a = symbol(system, xi / nrm)
        return float(np.min(np.abs(np.linalg.eigvalsh(a))))

    res = minimize(obj, xi0, method="Nelder-Mead",
                   options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000})
    return float(min(res.fun, gmin[k]))


def ellipticity_margin(system: SymbolSystem) -> float:
    """Min over the unit sphere of the smallest singular value of A(xi)."""
    grid = _sphere_grid(system.d)
    _, gmin = _batch_extreme(system, grid)
    return _margin(system, grid, gmin)


def dirac_alpha_system() -> SymbolSystem:
    """The three 4x4 Dirac alpha matrices in the Pauli block form."""
    mats = []
    z = np.zeros((2, 2), dtype=complex)
    for s in PAULI:
        mats.append(np.block([[z, s], [s, z]]))
    return SymbolSystem(matrices=tuple(mats))


def pauli_system(indices=(1, 2)) -> SymbolSystem:
    """A system built from a selection of Pauli matrices (1-based)."""
    return SymbolSystem(matrices=tuple(PAULI[i - 1] for i in indices))


def load_symbol_system(doc: dict) -> SymbolSystem:
    """Parse {"n":..,"d":..,"matrices":[ [[ [re,im], ...], ...], ...]}."""
    if not isinstance(doc, dict):
        raise SchemaError("symbol system document must be an object")
    try:
        n = int(doc["n"])
        d = int(doc["d"])
        raw = doc["matrices"]
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad symbol system document: {exc}") from exc
    if not isinstance(raw, list) or len(raw) != d:
        raise SchemaError("'matrices' must list d matrices")
    mats = []
    for rm in raw:
        m = np.empty((n, n), dtype=complex)
        try:
            for i in range(n):
                for j in range(n):
                    re, im = rm[i][j]
                    m[i, j] = complex(re, im)
        except (TypeError, ValueError, IndexError) as exc:
            raise SchemaError(f"matrix entries must be [re, im] pairs: {exc}") from exc
        mats.append(m)
    return SymbolSystem(matrices=tuple(mats))


def dump_symbol_system(system: SymbolSystem) -> dict:
    mats = []
    for a in system.matrices:
        mats.append([[[float(a[i, j].real), float(a[i, j].imag)]
                      for j in range(system.n)] for i in range(system.n)])
    return {"n": system.n, "d": system.d, "matrices": mats}
