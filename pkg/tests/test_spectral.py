"""Spectra, partial sums, Cesaro means, Dixmier estimation and formula."""

import math

import numpy as np
import pytest

from ncres.errors import GradingError, ResourceCapError, WindowError
from ncres.halfline import boundary_term, compose_kt, simple_pole
from ncres.residue import BdMSymbol, Cylinder, Torus
from ncres.spectral import (SigmaCurve, SpectralWeight, SpectrumModel,
                            StepFunction, cesaro_mean, dixmier_estimate,
                            dixmier_formula, enumerate_spectrum, norm_1inf,
                            norm_1inf_curve, sigma_n)
from ncres.symbols import (classical_symbol, hom_term, laplace_shift_power,
                           radial_term)

PI = math.pi
INV = SpectralWeight(power=-1.0, shift=1.0)


def test_enumerate_torus_small():
    sp = enumerate_spectrum(SpectrumModel("torus_lattice", 2, 1, INV))
    assert list(sp.values) == [0.0, 1.0]
    assert list(sp.counts) == [1, 4]


def test_enumerate_dirichlet_cylinder_small():
    sp = enumerate_spectrum(SpectrumModel("dirichlet_cylinder", 2, 2, INV))
    assert list(sp.values) == [1.0, 2.0, 4.0]
    assert list(sp.counts) == [1, 2, 1]


def test_enumerate_boundary_lattice_small():
    sp = enumerate_spectrum(
        SpectrumModel("boundary_lattice", 1, 3, INV, copies=2))
    assert list(sp.values) == [0.0, 1.0, 4.0, 9.0]
    assert list(sp.counts) == [2, 4, 4, 4]


def test_enumerate_torus_3d_counts():
    sp = enumerate_spectrum(SpectrumModel("torus_lattice", 3, 2, INV))
    # |k|^2 = 0,1,2,3,4 with multiplicities 1,6,12,8,6
    assert list(sp.values[:5]) == [0.0, 1.0, 2.0, 3.0, 4.0]
    assert list(sp.counts[:5]) == [1, 6, 12, 8, 6]


def test_mode_cap_raises_before_allocation():
    with pytest.raises(ResourceCapError):
        enumerate_spectrum(SpectrumModel("torus_lattice", 2, 10 ** 6, INV))


def test_enumeration_deterministic():
    m = SpectrumModel("torus_lattice", 2, 50, INV)
    a = enumerate_spectrum(m)
    b = enumerate_spectrum(m)
    assert np.array_equal(a.values, b.values)
    assert np.array_equal(a.weights, b.weights)


def test_sigma_n_harmonic():
    w = 1.0 / np.arange(1.0, 101.0)
    assert sigma_n(w, 5) == pytest.approx(sum(1 / k for k in range(1, 6)))
    with pytest.raises(ValueError):
        sigma_n(w, 200)


def test_norm_1inf_harmonic_sup_near_small_n():
    w = 1.0 / np.arange(1.0, 2001.0)
    res = norm_1inf(w)
    assert res.argmax == 2
    assert res.value == pytest.approx((1 + 0.5) / math.log(2))
    assert not res.attained_at_tail


def test_trace_class_ratio_vanishes():
    w = 2.0 ** -np.arange(900.0)
    sig = np.cumsum(w)
    ratios = sig[1:] / np.log(np.arange(2.0, 901.0))
    assert ratios[-1] < 0.35 and ratios[-1] < ratios[5]


def test_norm_1inf_growth_flag():
    # lam^(-n/4) on a 2-d lattice: sigma_N ~ sqrt(N), ratio grows
    grow = SpectrumModel("dirichlet_cylinder", 2, 150,
                         SpectralWeight(power=-0.5, shift=0.0))
    curve = SigmaCurve.from_spectrum(enumerate_spectrum(grow))
    res = norm_1inf_curve(curve)
    assert res.attained_at_tail
    ok = SpectrumModel("dirichlet_cylinder", 2, 150,
                       SpectralWeight(power=-1.0, shift=0.0))
    curve2 = SigmaCurve.from_spectrum(enumerate_spectrum(ok))
    assert not norm_1inf_curve(curve2).attained_at_tail


def test_sigma_curve_matches_direct_sum():
    m = SpectrumModel("torus_lattice", 2, 20, INV)
    sp = enumerate_spectrum(m)
    expanded = np.repeat(sp.weights, sp.counts)
    curve = SigmaCurve.from_spectrum(sp)
    for N in (1, 2, 5, 17, expanded.size):
        assert curve.sigma(N) == pytest.approx(expanded[:N].sum(), rel=1e-13)


# ---------------------------------------------------------------------------
# Cesaro mean


def test_cesaro_constant():
    f = StepFunction.from_sequence(np.full(50, 4.2))
    pts, mf = cesaro_mean(f)
    assert np.allclose(mf, 4.2)


def test_cesaro_indicator_half():
    t0 = 10 ** 4
    f = StepFunction(np.array([1.0, math.sqrt(t0), t0]),
                     np.array([1.0, 0.0]))
    _, mf = cesaro_mean(f, points=[t0])
    assert mf[0] == pytest.approx(0.5)


def test_cesaro_annihilates_lnln_over_ln():
    s = np.geomspace(math.e, 1e8, 4000)
    vals = np.log(np.log(s)) / np.log(s)
    f = StepFunction(np.concatenate([s, [1.001e8]]), vals)
    _, mf = cesaro_mean(f, points=[1e4, 1e8])
    assert mf[1] < mf[0] < 0.5
    assert mf[1] < 0.25


def test_cesaro_window_too_small():
    f = StepFunction.from_sequence([1.0])
    with pytest.raises(WindowError):
        cesaro_mean(f)


# ---------------------------------------------------------------------------
# Dixmier estimation


def test_dixmier_estimate_torus_modest_cutoff():
    est = dixmier_estimate(
        SpectrumModel("torus_lattice", 2, 500, INV))
    assert est.slope == pytest.approx(PI, rel=5e-3)
    assert est.fit_residual < 0.05
    assert est.omega_consistent


def test_dixmier_estimate_requires_monotone_weight():
    bad = SpectrumModel("torus_lattice", 2, 100,
                        SpectralWeight(power=1.0, shift=1.0))
    with pytest.raises(GradingError):
        dixmier_estimate(bad)


def test_sigma_ratio_near_pi_at_top():
    # the raw sigma_N / ln N functional sits within 10% at this cutoff
    est = dixmier_estimate(SpectrumModel("torus_lattice", 2, 2000, INV))
    assert est.ratio_values[-1] == pytest.approx(PI, rel=0.10)


def test_trace_class_estimate_zero():
    w = SpectralWeight(power=-3.0, shift=1.0)   # order -6 on a 2-d lattice
    est = dixmier_estimate(SpectrumModel("torus_lattice", 2, 300, w))
    assert abs(est.slope) < 1e-3
    # the Cesaro corroboration decays only like ln ln N / ln N
    mid = est.cesaro_values[est.cesaro_values.size // 4]
    assert est.cesaro_tail < mid
    assert est.ratio_values[-1] < 0.2
    assert est.omega_consistent


# ---------------------------------------------------------------------------
# symbol-side formula


def test_dixmier_formula_values():
    A = BdMSymbol(Torus(2), p=laplace_shift_power(2, -1.0, 2))
    assert dixmier_formula(A) == pytest.approx(PI)
    Ac = BdMSymbol(Cylinder(2), p=classical_symbol([radial_term(-2.0, 2)], 2))
    assert dixmier_formula(Ac) == pytest.approx(PI / 2)
    Ab = BdMSymbol(Cylinder(2), s=classical_symbol([radial_term(-1.0, 1)], 1))
    assert dixmier_formula(Ab) == pytest.approx(4.0)


def test_dixmier_formula_linearity_positivity():
    p = classical_symbol([radial_term(-2.0, 2)], 2)
    A1 = BdMSymbol(Cylinder(2), p=p)
    A2 = BdMSymbol(Cylinder(2), p=p.scaled(3.0))
    assert dixmier_formula(A2) == pytest.approx(3 * dixmier_formula(A1))
    assert dixmier_formula(A1).real > 0


def test_dixmier_formula_ignores_g_k_t():
    p = classical_symbol([radial_term(-2.0, 2)], 2)
    base = dixmier_formula(BdMSymbol(Cylinder(2), p=p))
    g = boundary_term(hom_term(-2.0, 1, [(1.0, (0,), (0,), -2.0)]),
                      compose_kt(simple_pole(1j), simple_pole(-1j)),
                      kind="green")
    k = boundary_term(hom_term(-2.0, 1, [(1.0, (1,), (0,), -2.0)]),
                      simple_pole(1j), kind="potential")
    t = boundary_term(hom_term(-1.0, 1, [(1.0, (0,), (0,), -1.0)]),
                      simple_pole(-1j), kind="trace")
    pert = BdMSymbol(Cylinder(2), p=p, green=(g,), potential=(k,),
                     trace_terms=(t,))
    assert dixmier_formula(pert) == base   # exactly, not approximately


def test_dixmier_formula_grading_enforced():
    wrong = BdMSymbol(Torus(2), p=laplace_shift_power(2, -0.5, 2))  # order -1
    with pytest.raises(GradingError):
        dixmier_formula(wrong)
    g_type1 = boundary_term(hom_term(-2.0, 1, [(1.0, (0,), (0,), -2.0)]),
                            compose_kt(simple_pole(1j), simple_pole(-2j),
                                       type_d=1), kind="green", type_d=1)
    bad = BdMSymbol(Cylinder(2), p=classical_symbol([radial_term(-2.0, 2)], 2),
                    green=(g_type1,))
    with pytest.raises(GradingError):
        dixmier_formula(bad)


def test_estimate_matches_formula_cylinder():
    est = dixmier_estimate(SpectrumModel(
        "dirichlet_cylinder", 2, 700, SpectralWeight(power=-1.0, shift=0.0)))
    A = BdMSymbol(Cylinder(2), p=classical_symbol([radial_term(-2.0, 2)], 2))
    formula = dixmier_formula(A).real
    assert est.slope == pytest.approx(formula, rel=0.03)
