"""Eigenvalues in spectral gaps of H_alpha = -d^2/dx^2 + V - alpha*Q.

Two independent routes place an eigenvalue at a prescribed gap point
lambda:

* shooting: the solution that starts as y_- left of supp Q is pushed
  through the perturbation; its Wronskian with y_+ at the right support
  edge vanishes exactly at eigenvalues (matching determinant), and the
  coupling alpha is tuned to a root;
* Birman-Schwinger: the integral operator with kernel
  G(x) g(x, x'; lambda) G(x') on supp Q is discretized by the Nystrom
  trapezoid rule; every nonzero eigenvalue mu gives a coupling
  alpha = 1/mu.

The Green kernel of the unperturbed periodic operator in a gap is
g(x, x') = y_-(x_<) y_+(x_>) / (-W) with W the (constant) Wronskian
y_- y_+' - y_-' y_+.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import decay, ode
from .errors import BandPointError, DegenerateMatch, NoSignChange, SingularWronskian
from .floquet import FloquetData, floquet_solutions, floquet_state, floquet_values
from .potentials import CompactPerturbation


@dataclass(frozen=True)
class GapEigenpair:
    lam: float
    alpha: float
    xs: np.ndarray
    psi: np.ndarray
    c_plus: float
    c_minus: float
    fitted_delta: float
    ln_rho: float
    match_residual: float


@dataclass(frozen=True)
class BSSpectrum:
    lam: float
    mu: np.ndarray      # eigenvalues, |mu| descending
    grid_size: int


def _wronskian(sa: np.ndarray, sb: np.ndarray) -> float:
    return sa[0] * sb[1] - sa[1] * sb[0]


def matching_determinant(V, Q: CompactPerturbation, alpha: float, lam: float,
                         tol: float = ode.DEFAULT_TOL,
                         fd: FloquetData | None = None) -> float:
    """Wronskian of (y_- propagated through supp Q) with y_+ at b.

    Zero iff lambda is an eigenvalue of H_alpha.  Raises BandPointError
    when lambda is not a regular point of H.
    """
    if fd is None:
        fd = floquet_solutions(V, lam, tol)
    a, b = Q.support
    s_left = floquet_state(V, fd, a, "minus", tol)
    s_right = ode.propagate_hill_perturbed(V, Q, alpha, lam, a, b, s_left, tol)
    yp = floquet_state(V, fd, b, "plus", tol)
    return _wronskian(s_right, yp)


def solve_coupling(V, Q: CompactPerturbation, lam: float,
                   alpha_bracket: tuple | None = None,
                   tol: float = ode.DEFAULT_TOL,
                   alpha_max: float = 1e4) -> float:
    """Coupling alpha* > 0 making lambda an eigenvalue of H_alpha.

    If no bracket is given, expands [0.1, 1] geometrically up to
    alpha_max before raising NoSignChange.
    """
    fd = floquet_solutions(V, lam, tol)

    def det(alpha):
        return matching_determinant(V, Q, alpha, lam, tol, fd=fd)

    if alpha_bracket is not None:
        lo, hi = alpha_bracket
        if det(lo) * det(hi) > 0:
            raise NoSignChange(f"no sign change on [{lo}, {hi}]")
    else:
        lo, hi = 0.1, 1.0
        flo, fhi = det(lo), det(hi)
        while flo * fhi > 0:
            lo, flo = hi, fhi
            hi *= 2.0
            if hi > alpha_max:
                raise NoSignChange(f"no sign change up to alpha = {alpha_max}")
            fhi = det(hi)
    return brentq(det, lo, hi, xtol=1e-12, rtol=8.9e-16)


def birman_schwinger_spectrum(V, Q: CompactPerturbation, lam: float,
                              grid_size: int = 2048,
                              tol: float = ode.DEFAULT_TOL) -> BSSpectrum:
    """Nystrom (trapezoid) spectrum of G (H - lambda)^(-1) G on supp Q."""
    fd = floquet_solutions(V, lam, tol)
    a, b = Q.support
    xs = np.linspace(a, b, grid_size)
    h = (b - a) / (grid_size - 1)
    w = np.full(grid_size, h)
    w[0] = w[-1] = 0.5 * h

    ym = floquet_values(V, fd, xs, "minus", tol)[:, 0]
    yp = floquet_values(V, fd, xs, "plus", tol)[:, 0]
    sm = floquet_state(V, fd, a, "minus", tol)
    sp = floquet_state(V, fd, a, "plus", tol)
    W0 = _wronskian(sm, sp)
    if abs(W0) < 1e-12 * (np.linalg.norm(sm) * np.linalg.norm(sp)):
        raise SingularWronskian("Floquet pair numerically dependent")

    ii, jj = np.meshgrid(np.arange(grid_size), np.arange(grid_size), indexing="ij")
    lower = np.minimum(ii, jj)
    upper = np.maximum(ii, jj)
    green = ym[lower] * yp[upper] / (-W0)

    g = np.asarray(Q.g(xs), dtype=float)
    ker = g[:, None] * green * g[None, :]
    sw = np.sqrt(w)
    sym = sw[:, None] * ker * sw[None, :]
    mu = np.linalg.eigvalsh(sym)
    order = np.argsort(-np.abs(mu), kind="stable")
    return BSSpectrum(lam=lam, mu=mu[order], grid_size=grid_size)


def eigenfunction(V, Q: CompactPerturbation, alpha: float, lam: float,
                  n_periods: int = 8, samples_per_period: int = 64,
                  tol: float = ode.DEFAULT_TOL) -> GapEigenpair:
    """Normalized eigenfunction of H_alpha at (alpha, lambda) with tails.

    Samples cover supp Q padded by n_periods on each side.  Outside the
    support the function is c_- y_- (left) and c_+ y_+ (right); tail
    coefficients come from projecting the matched state on the Floquet
    seeds.
    """
    fd = floquet_solutions(V, lam, tol)
    a, b = Q.support
    c_minus = 1.0
    s_a = floquet_state(V, fd, a, "minus", tol)

    step = 1.0 / samples_per_period
    xs_mid = np.arange(a, b + 0.5 * step, step)
    if xs_mid[-1] < b - 1e-12:
        xs_mid = np.append(xs_mid, b)
    s_b, mid_states = ode.propagate_hill_perturbed(V, Q, alpha, lam, a, b, s_a, tol,
                                                   dense_xs=xs_mid)

    yp_b = floquet_state(V, fd, b, "plus", tol)
    denom = yp_b @ yp_b
    c_plus = float(s_b @ yp_b) / denom
    resid = float(np.linalg.norm(s_b - c_plus * yp_b) / max(np.linalg.norm(s_b), 1e-300))
    if abs(c_plus) + abs(c_minus) < 1e-12:
        raise DegenerateMatch("both tail coefficients vanish")

    xs_left = np.arange(a - n_periods, a, step)
    xs_right = np.arange(b + step, b + n_periods + 0.5 * step, step)
    left_vals = c_minus * floquet_values(V, fd, xs_left, "minus", tol)[:, 0]
    right_vals = c_plus * floquet_values(V, fd, xs_right, "plus", tol)[:, 0]

    xs = np.concatenate([xs_left, xs_mid, xs_right])
    psi = np.concatenate([left_vals, mid_states[:, 0], right_vals])

    nrm = math.sqrt(np.trapezoid(psi * psi, xs))
    psi = psi / nrm
    c_plus /= nrm
    c_minus /= nrm

    fit = decay.fit_decay_rate(xs, psi, period=1.0, side="right",
                               window=(b + 0.5, xs[-1]))
    return GapEigenpair(lam=lam, alpha=alpha, xs=xs, psi=psi,
                        c_plus=c_plus, c_minus=c_minus,
                        fitted_delta=fit.delta_hat, ln_rho=math.log(fd.rho),
                        match_residual=resid)


def solve_lambda(V, Q: CompactPerturbation, alpha: float, lam_bracket: tuple,
                 tol: float = ode.DEFAULT_TOL) -> float:
    """Thin wrapper: root of the same determinant in lambda at fixed alpha."""
    lo, hi = lam_bracket

    def det(lam):
        return matching_determinant(V, Q, alpha, lam, tol)

    if det(lo) * det(hi) > 0:
        raise NoSignChange(f"no sign change on lambda bracket [{lo}, {hi}]")
    return brentq(det, lo, hi, xtol=1e-12, rtol=8.9e-16)
