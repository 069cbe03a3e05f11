"""Discriminant, multiplicator and Floquet solutions of the Hill equation.

F(lambda) is half the trace of the one-period monodromy matrix.  At a
regular point (|F| > 1) the monodromy has eigenvalues sigma*rho and
sigma/rho with sigma = sign(F) and rho = |F| + sqrt(F^2 - 1) >= 1; the
eigenvector seeds generate the solutions y_+ (decaying at +inf) and y_-
(decaying at -inf), of the form rho^{-+x} times a periodic (F > 1) or
antiperiodic (F < -1) factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import ode
from .errors import BandPointError

TOL_EDGE = 1e-9


def discriminant(V, lam: float, tol: float = ode.DEFAULT_TOL) -> float:
    """F(lambda) = (theta(1) + phi'(1)) / 2."""
    M = ode.monodromy(V, lam, tol)
    return 0.5 * (M[0, 0] + M[1, 1])


def discriminant_derivative(V, lam: float, tol: float = ode.DEFAULT_TOL) -> float:
    """dF/dlambda from the variational equations (not differencing)."""
    _, dM = ode.monodromy_dlam(V, lam, tol)
    return 0.5 * (dM[0, 0] + dM[1, 1])


def multiplicator(F: float) -> float:
    """rho = |F| + sqrt(F^2 - 1) for |F| >= 1, else 1 (band point)."""
    a = abs(F)
    if a <= 1.0:
        return 1.0
    return a + math.sqrt(F * F - 1.0)


@dataclass(frozen=True)
class FloquetData:
    lam: float
    F: float
    Fprime: float
    rho: float
    kind: str              # "regular-point" | "band-point"
    parity: str            # "periodic" | "antiperiodic" | "undefined-at-band"
    seed_plus: np.ndarray  # (y_+(0), y_+'(0)), unit norm
    seed_minus: np.ndarray
    monodromy: np.ndarray

    @property
    def sigma(self) -> float:
        return 1.0 if self.F > 0 else -1.0


def _eigvec_2x2(M: np.ndarray, mu: float) -> np.ndarray:
    """Eigenvector of a real 2x2 matrix for eigenvalue mu, unit norm."""
    # (M - mu) v = 0; take the better-conditioned row construction
    c1 = np.array([M[0, 1], mu - M[0, 0]])
    c2 = np.array([mu - M[1, 1], M[1, 0]])
    v = c1 if np.linalg.norm(c1) >= np.linalg.norm(c2) else c2
    n = np.linalg.norm(v)
    if n == 0.0:
        raise BandPointError("monodromy eigenvector is degenerate")
    v = v / n
    # deterministic sign: first nonzero component positive
    if v[0] < 0 or (v[0] == 0 and v[1] < 0):
        v = -v
    return v


def floquet_solutions(V, lam: float, tol: float = ode.DEFAULT_TOL,
                      tol_edge: float = TOL_EDGE) -> FloquetData:
    """Full Floquet data at a regular point lambda.

    Raises BandPointError when |F(lambda)| <= 1 + tol_edge, where the
    eigenvector extraction is ill-conditioned.
    """
    M, dM = ode.monodromy_dlam(V, lam, tol)
    F = 0.5 * (M[0, 0] + M[1, 1])
    Fp = 0.5 * (dM[0, 0] + dM[1, 1])
    if abs(F) <= 1.0 + tol_edge:
        raise BandPointError(f"|F({lam})| = {abs(F)} <= 1 + {tol_edge}")
    rho = multiplicator(F)
    sigma = 1.0 if F > 0 else -1.0
    seed_plus = _eigvec_2x2(M, sigma / rho)
    seed_minus = _eigvec_2x2(M, sigma * rho)
    parity = "periodic" if F > 1 else "antiperiodic"
    return FloquetData(lam=lam, F=F, Fprime=Fp, rho=rho, kind="regular-point",
                       parity=parity, seed_plus=seed_plus, seed_minus=seed_minus,
                       monodromy=M)


def floquet_state(V, fd: FloquetData, x: float, side: str,
                  tol: float = ode.DEFAULT_TOL) -> np.ndarray:
    """State (y, y') of y_+ (side='plus') or y_- (side='minus') at x.

    Normalized so that the seed at x = 0 has unit norm.  x is reduced
    modulo the period: y(x) = mu^n * P(0 -> r) seed with x = n + r,
    mu = sigma/rho (plus) or sigma*rho (minus).
    """
    if side == "plus":
        seed, mu = fd.seed_plus, fd.sigma / fd.rho
    elif side == "minus":
        seed, mu = fd.seed_minus, fd.sigma * fd.rho
    else:
        raise ValueError("side must be 'plus' or 'minus'")
    n = math.floor(x)
    r = x - n
    s = seed if r == 0.0 else ode.propagate_hill(V, fd.lam, 0.0, r, seed, tol)
    return (mu ** n) * s


def floquet_values(V, fd: FloquetData, xs, side: str,
                   tol: float = ode.DEFAULT_TOL) -> np.ndarray:
    """States of y_+/- at an array of points; (len(xs), 2)."""
    return np.array([floquet_state(V, fd, float(x), side, tol) for x in xs])
