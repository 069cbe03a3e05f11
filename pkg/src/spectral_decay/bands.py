"""Band edges, spectral gaps and the distance to the essential spectrum.

Band edges are the transversal roots of F(lambda) = +-1.  The scan walks
a lambda grid, brackets every sign change, and refines by Brent's
method; cells whose values dip toward +-1 without a sign change are
subdivided dyadically so narrow gaps are not missed.  Double roots
(closed gaps) only produce roundoff-level sign flutter; they are removed
by clustering nearby root candidates and keeping only edges across which
F - target changes sign transversally, well above the noise floor.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import ode
from .floquet import discriminant
from .errors import OutOfCertifiedRange
from .potentials import PeriodicPotential

DEFAULT_GRID_STEP = 0.05
EDGE_XTOL = 1e-13
DEGENERATE_TOL = 1e-6  # root pairs closer than this count as a closed gap


@dataclass(frozen=True)
class BandStructure:
    edges: tuple                 # strictly increasing band edges
    gaps: tuple                  # open intervals (lo, hi) with |F| > 1 inside
    lambda0: float               # bottom of the essential spectrum
    scan_ceiling: float
    incomplete: bool = False     # suspected unresolved edge pairs
    scan_floor: float = field(default=float("nan"))


def _collect_roots(f, a, b, fa, fb, slope_bound, depth, min_width):
    """Sign-change roots of f in [a, b] by pruned recursive bisection."""
    if fa == 0.0:
        return [a], False
    if fa * fb < 0:
        return [brentq(f, a, b, xtol=EDGE_XTOL, rtol=8.9e-16)], False
    # same sign at both ends: a root pair can hide only if |f| dips to 0
    if min(abs(fa), abs(fb)) >= slope_bound * (b - a):
        return [], False
    if b - a < min_width:
        # anything unresolved at this scale is a closed gap, not a miss
        return [], False
    if depth <= 0:
        return [], True
    m = 0.5 * (a + b)
    fm = f(m)
    r1, s1 = _collect_roots(f, a, m, fa, fm, slope_bound, depth - 1, min_width)
    r2, s2 = _collect_roots(f, m, b, fm, fb, slope_bound, depth - 1, min_width)
    return r1 + r2, (s1 or s2)


def _cluster(roots, tol):
    """Group sorted roots closer than tol; return cluster means."""
    if not roots:
        return []
    roots = sorted(roots)
    groups = [[roots[0]]]
    for r in roots[1:]:
        if r - groups[-1][-1] < tol:
            groups[-1].append(r)
        else:
            groups.append([r])
    return [float(np.mean(g)) for g in groups]


def band_edges(V, lam_max: float, grid_step: float = DEFAULT_GRID_STEP,
               tol: float = ode.DEFAULT_TOL, lam_min: float | None = None,
               refine_depth: int = 24) -> BandStructure:
    """Scan [lam_min, lam_max] for band edges of -d^2/dx^2 + V.

    lam_min defaults to -max|V| - 1, below which F > 1 strictly and no
    spectrum exists.  Gaps narrower than ~1e-6 are reported as closed.
    """
    if grid_step <= 0:
        raise ValueError("grid_step must be positive")
    if lam_min is None:
        lam_min = -V.max_abs() - 1.0 if isinstance(V, PeriodicPotential) else -1.0
    if lam_max <= lam_min:
        raise ValueError("lam_max must exceed the scan floor")

    pw = isinstance(V, PeriodicPotential) and V.is_piecewise_constant
    noise = 1e-13 if pw else 10.0 * tol

    n = int(np.ceil((lam_max - lam_min) / grid_step)) + 1
    grid = np.linspace(lam_min, lam_max, n)
    Fs = np.array([discriminant(V, l, tol) for l in grid])
    dF = np.abs(np.diff(Fs)) / np.diff(grid)

    edges = []
    incomplete = False
    for target in (1.0, -1.0):
        g = Fs - target

        def f(lam, _t=target):
            return discriminant(V, lam, tol) - _t

        candidates = []
        for i in range(len(grid) - 1):
            lo = max(i - 2, 0)
            hi = min(i + 3, len(dF))
            sb = 4.0 * max(dF[lo:hi].max(), 1e-8)
            roots, susp = _collect_roots(f, grid[i], grid[i + 1], g[i], g[i + 1],
                                         sb, refine_depth, DEGENERATE_TOL / 8)
            candidates.extend(roots)
            incomplete = incomplete or susp

        reps = _cluster(candidates, DEGENERATE_TOL)
        # transversality filter: drop degenerate (closed-gap) candidates
        for j, r in enumerate(reps):
            dist = min(
                [abs(r - reps[k]) for k in (j - 1, j + 1) if 0 <= k < len(reps)],
                default=np.inf)
            h = min(1e-4, 0.4 * dist)
            s_lo, s_hi = f(r - h), f(r + h)
            if s_lo * s_hi < 0 and min(abs(s_lo), abs(s_hi)) > 10.0 * noise:
                edges.append(r)

    edges = sorted(edges)
    gaps = []
    for a, b in zip(edges[:-1], edges[1:]):
        mid = 0.5 * (a + b)
        if abs(discriminant(V, mid, tol)) > 1.0 + 10.0 * noise:
            gaps.append((a, b))
    lambda0 = edges[0] if edges else float("nan")
    return BandStructure(edges=tuple(edges), gaps=tuple(gaps), lambda0=lambda0,
                         scan_ceiling=lam_max, incomplete=incomplete,
                         scan_floor=lam_min)


def spectral_distance(bands: BandStructure, lam: float) -> float:
    """d(lambda) = dist(lambda, essential spectrum), within the scan."""
    if lam > bands.scan_ceiling:
        raise OutOfCertifiedRange(f"lambda = {lam} above scan ceiling")
    if lam < bands.lambda0:
        return bands.lambda0 - lam
    for a, b in bands.gaps:
        if a < lam < b:
            return min(lam - a, b - lam)
    return 0.0


def csv_rows(bands: BandStructure):
    """(lambda_edge, kind) rows; kind in bottom|open_gap_left|open_gap_right."""
    gap_lo = {a for a, _ in bands.gaps}
    gap_hi = {b for _, b in bands.gaps}
    rows = []
    for e in bands.edges:
        if e == bands.lambda0:
            kind = "bottom"
        elif e in gap_lo:
            kind = "open_gap_left"
        elif e in gap_hi:
            kind = "open_gap_right"
        else:
            kind = "band_interior_edge"
        rows.append((e, kind))
    return rows
