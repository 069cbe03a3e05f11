import math

import numpy as np
import pytest

from spectral_decay.bands import band_edges, csv_rows, spectral_distance
from spectral_decay.errors import OutOfCertifiedRange
from spectral_decay.floquet import discriminant, multiplicator
from spectral_decay.potentials import PeriodicPotential

V0 = PeriodicPotential.zero()
MATHIEU = PeriodicPotential.fourier(mean=0.0, cos=[2.0])
STEP = PeriodicPotential.piecewise([0.0, 0.5], [10.0, 0.0])

# frozen plane-wave (Fourier matrix) references, tests/oracles.py
MATHIEU_LAMBDA0 = -0.050603841998408658
MATHIEU_GAP1 = (8.8570989513510163, 10.856778202313889)
MATHIEU_GAP2 = (39.469974548564267, 39.520577487705076)


def test_free_operator_no_gaps():
    bs = band_edges(V0, 50.0)
    assert bs.edges == (0.0,)
    assert bs.gaps == ()
    assert bs.lambda0 == 0.0
    assert not bs.incomplete


@pytest.fixture(scope="module")
def mathieu_bands():
    return band_edges(MATHIEU, 50.0)


def test_mathieu_edges_vs_fourier_oracle(mathieu_bands):
    bs = mathieu_bands
    assert bs.lambda0 == pytest.approx(MATHIEU_LAMBDA0, abs=1e-7)
    assert len(bs.gaps) >= 2
    assert bs.gaps[0][0] == pytest.approx(MATHIEU_GAP1[0], abs=1e-7)
    assert bs.gaps[0][1] == pytest.approx(MATHIEU_GAP1[1], abs=1e-7)
    # the second gap is very narrow and F is nearly flat there
    # (|F'| ~ 3e-3), so the ODE tolerance is amplified in the edge position
    assert bs.gaps[1][0] == pytest.approx(MATHIEU_GAP2[0], abs=1e-6)
    assert bs.gaps[1][1] == pytest.approx(MATHIEU_GAP2[1], abs=1e-6)


def test_step_potential_gap_widths_decrease():
    bs = band_edges(STEP, 500.0)
    widths = [b - a for a, b in bs.gaps]
    assert len(widths) >= 5
    # widths decrease along the spectrum (allowing the odd/even alternation
    # of this step potential, compare every second gap)
    assert all(widths[i + 2] < widths[i] for i in range(len(widths) - 2))


def test_gap_midpoints_are_regular(mathieu_bands):
    for a, b in mathieu_bands.gaps:
        mid = 0.5 * (a + b)
        assert multiplicator(discriminant(MATHIEU, mid)) > 1.0


def test_prop_h_at_midpoints_below_lambda0(mathieu_bands):
    lam0 = mathieu_bands.lambda0
    for lam in np.linspace(lam0 - 5.0, lam0 - 0.1, 7):
        rho = multiplicator(discriminant(MATHIEU, lam))
        assert math.log(rho) ** 2 >= lam0 - lam - 1e-8


def test_refinement_stability():
    a = band_edges(MATHIEU, 15.0, grid_step=0.05)
    b = band_edges(MATHIEU, 15.0, grid_step=0.025)
    assert len(a.edges) == len(b.edges)
    assert np.allclose(a.edges, b.edges, atol=1e-8)


def test_spectral_distance(mathieu_bands):
    bs = band_edges(V0, 50.0)
    assert spectral_distance(bs, -4.0) == pytest.approx(4.0)
    a, b = mathieu_bands.gaps[0]
    assert spectral_distance(mathieu_bands, 0.5 * (a + b)) == pytest.approx(
        0.5 * (b - a))
    assert spectral_distance(mathieu_bands, a + 0.25 * (b - a)) == pytest.approx(
        0.25 * (b - a))
    assert spectral_distance(mathieu_bands, 5.0) == 0.0  # inside a band
    with pytest.raises(OutOfCertifiedRange):
        spectral_distance(mathieu_bands, 100.0)


def test_csv_rows(mathieu_bands):
    rows = csv_rows(mathieu_bands)
    kinds = [k for _, k in rows]
    assert kinds[0] == "bottom"
    assert "open_gap_left" in kinds and "open_gap_right" in kinds
    lams = [l for l, _ in rows]
    assert lams == sorted(lams)
