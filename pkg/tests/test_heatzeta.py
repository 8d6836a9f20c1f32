"""Heat traces, expansion fits, zeta residues, half-space boundary trace."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from ncres.errors import (IllConditionedFitError, TailBoundError, WindowError)
from ncres.heatzeta import (HeatSamples, boundary_heat_test, default_exponents,
                            fit_expansion, halfspace_heat_samples,
                            heat_samples, heat_trace, sine_extension_sq,
                            zeta_residue)
from ncres.spectral import SpectralWeight, SpectrumModel

PI = math.pi
ONE = SpectralWeight(power=0.0)
INV = SpectralWeight(power=-1.0, shift=1.0)
AW = SpectralWeight(power=1.0, shift=1.0)


def torus(cutoff=120):
    return SpectrumModel("torus_lattice", 2, cutoff)


def theta_1d(t, K=60):
    return sum(math.exp(-t * k * k) for k in range(-K, K + 1))


def test_heat_trace_factorizes():
    for t in (0.5, 1.0, 2.0):
        v, bound = heat_trace(ONE, AW, torus(), t)
        want = math.exp(-t) * theta_1d(t) ** 2
        assert v == pytest.approx(want, rel=1e-12)
        assert bound < 1e-12


def test_heat_trace_large_t_dominated_by_bottom_mode():
    t = 40.0
    v, _ = heat_trace(INV, AW, torus(), t)
    assert v == pytest.approx(math.exp(-t), rel=1e-6)


def test_heat_trace_small_t_leading_term():
    # trace exp(-t(1-Delta)) ~ (pi/t) e^{-t}: fitted t^-1 coefficient near pi
    grid = np.geomspace(1e-3, 5e-2, 30)
    samples = heat_samples(ONE, AW, torus(300), grid)
    fit = fit_expansion(samples, [-1.0, 0.0, 1.0, 2.0], [])
    assert fit.coefficient(-1.0) == pytest.approx(PI, rel=5e-3)


def test_tail_bound_certifies_cutoff_doubling():
    grid = np.geomspace(1e-3, 5e-2, 12)
    s1 = heat_samples(INV, AW, torus(150), grid)
    s2 = heat_samples(INV, AW, torus(300), grid)
    # allowance for summation roundoff where the analytic tail underflows
    roundoff = 1e-13 * (1.0 + np.abs(s1.values))
    assert np.all(np.abs(s2.values - s1.values) <= s1.tail_bounds + roundoff)


def test_tail_bound_raises_when_unattainable():
    with pytest.raises(TailBoundError):
        heat_trace(ONE, AW, torus(20), 1e-3, tail_tol=1e-12)


def test_heat_samples_grid_decreasing_invariant():
    with pytest.raises(ValueError):
        HeatSamples(np.array([1e-3, 5e-3]), np.zeros(2), np.zeros(2))


# ---------------------------------------------------------------------------
# fits


def _synthetic(ts, fn):
    ts = np.asarray(sorted(ts, reverse=True))
    return HeatSamples(ts, fn(ts), np.zeros(ts.size))


def test_fit_exact_log_model():
    ts = np.geomspace(1e-3, 5e-2, 40)
    s = _synthetic(ts, lambda t: 3 + 2 * np.log(t) + t)
    fit = fit_expansion(s, [0.0, 1.0], [0.0])
    assert fit.coefficient(0.0) == pytest.approx(3.0, abs=1e-9)
    assert fit.coefficient(1.0) == pytest.approx(1.0, abs=1e-9)
    assert fit.coefficient(0.0, log=True) == pytest.approx(2.0, abs=1e-9)
    assert fit.cross_delta < 1e-9


def test_fit_exact_mixed_powers():
    ts = np.geomspace(1e-3, 5e-2, 60)
    s = _synthetic(ts, lambda t: 1 / t + 5 - PI * np.log(t) + 0.1 * np.sqrt(t))
    fit = fit_expansion(s, [-1.0, 0.0, 0.5], [0.0])
    assert fit.coefficient(-1.0) == pytest.approx(1.0, abs=1e-6)
    assert fit.coefficient(0.0) == pytest.approx(5.0, abs=1e-6)
    assert fit.coefficient(0.5) == pytest.approx(0.1, abs=1e-6)
    assert fit.coefficient(0.0, log=True) == pytest.approx(-PI, abs=1e-6)


def test_fit_preconditions():
    ts = np.geomspace(1e-3, 5e-2, 5)
    s = _synthetic(ts, lambda t: 1 + t)
    with pytest.raises(WindowError):
        fit_expansion(s, [0.0, 1.0, 2.0], [0.0, 1.0])
    narrow = np.geomspace(1e-3, 4e-3, 30)
    with pytest.raises(WindowError):
        fit_expansion(_synthetic(narrow, lambda t: 1 + t), [0.0, 1.0], [])


def test_fit_rejects_ill_conditioned():
    ts = np.geomspace(1e-3, 5e-2, 40)
    s = _synthetic(ts, lambda t: 1 + t)
    with pytest.raises(IllConditionedFitError):
        fit_expansion(s, [1.0, 1.0 + 1e-12], [])   # collinear columns


def test_heat_log_coefficient_matches_minus_pi():
    grid = np.geomspace(1e-3, 5e-2, 40)
    fit = fit_expansion(heat_samples(INV, AW, torus(300), grid),
                        [0.0, 0.5, 1.0, 1.5, 2.0], [0.0, 1.0])
    assert fit.coefficient(0.0, log=True) == pytest.approx(-PI, rel=0.02)


def test_default_exponent_ladder():
    exps, logs = default_exponents(INV, AW, 2, levels=4)
    assert exps == [0.0, 0.5, 1.0, 1.5, 2.0]
    assert logs == [0.0, 1.0]


# ---------------------------------------------------------------------------
# zeta residues


def test_zeta_residue_epstein_pole():
    z = zeta_residue(ONE, AW, torus(300), 1.0,
                     exponents=[-1.0, 0.0, 1.0, 2.0, 3.0], log_exponents=[])
    assert z.residue == pytest.approx(PI, rel=0.01)


def test_zeta_residue_at_zero():
    z = zeta_residue(INV, AW, torus(300), 0.0,
                     exponents=[0.0, 0.5, 1.0, 1.5, 2.0],
                     log_exponents=[0.0, 1.0])
    assert z.residue == pytest.approx(PI, rel=0.02)


def test_zeta_regular_point_residue_zero():
    z = zeta_residue(ONE, AW, torus(300), 2.0,
                     exponents=[-1.0, 0.0, 1.0, 2.0, 3.0], log_exponents=[])
    assert abs(z.residue) < 1e-3


def test_zeta_entire_part_matches_quadrature():
    z = zeta_residue(ONE, AW, torus(300), 1.0,
                     exponents=[-1.0, 0.0, 1.0, 2.0, 3.0], log_exponents=[])

    def h(t):
        return math.exp(-t) * theta_1d(t, 40) ** 2   # converged for t >= 1

    want = quad(h, 1.0, 40.0, limit=200)[0]
    assert z.entire_part == pytest.approx(want, rel=1e-3)


# ---------------------------------------------------------------------------
# half-space boundary heat trace


def test_sine_extension_against_quadrature():
    nodes, weights = np.polynomial.legendre.leggauss(120)
    xs = 0.5 * PI * (nodes + 1.0)
    ws = 0.5 * PI * weights
    for j in (1, 2, 5, 11):
        for m in (-4, -1, 0, 1, 2, 3, j, -j):
            ig = np.sum(ws * np.sin(j * xs) * np.exp(-1j * m * xs))
            assert abs(sine_extension_sq(j, m) - abs(ig) ** 2) < 1e-10


def test_halfspace_identity_weight_factorizes():
    # with P = identity the half-space trace is the Dirichlet theta product
    ts = np.geomspace(5e-2, 5e-1, 8)
    samples = halfspace_heat_samples(ts, identity_p=True, m_cutoff=800)
    jmax = int(math.ceil(9.0 / math.sqrt(ts.min())))
    for t, got in zip(samples.t, samples.values):
        theta_d = sum(math.exp(-t * j * j) for j in range(1, jmax + 1))
        want = math.exp(-t) * theta_d * theta_1d(t, jmax)
        assert got == pytest.approx(want, rel=1e-12)


def test_halfspace_monotone_decay():
    ts = np.geomspace(1e-2, 1.0, 10)
    samples = halfspace_heat_samples(ts, m_cutoff=800)
    vals = samples.values[::-1]   # ascending t
    assert np.all(np.diff(vals) < 0)
    assert vals[-1] < 1.0


@pytest.mark.slow
def test_boundary_heat_log_coefficient():
    out = boundary_heat_test()
    assert out.log_coefficient == pytest.approx(-PI / 2, rel=0.05)
    assert out.fit.condition < 1e8
    assert out.samples.tail_bounds.max() < 1e-9
