"""Heat traces from explicit spectra, expansion fits, zeta residues.

All operators here act diagonally on an enumerated model spectrum, so
``trace(P exp(-t A))`` is a weighted lattice sum with a certified analytic
tail bound.  Small-t behaviour is recovered by weighted least squares in a
*prescribed* set of powers t^e and log-powers t^e ln t (exponent discovery
is out of scope); Mellin inversion then reads zeta residues off the fitted
coefficients through the dictionary

    t^(-s0) ln^k t  near 0   <->   pole of order k+1 at s = s0.

Residues at s = sigma > 0 are fitted_coeff(t^-sigma) / Gamma(sigma); at
s = 0 the Gamma factor's own pole makes the residue equal minus the fitted
ln t coefficient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (IllConditionedFitError, TailBoundError, WindowError)
from .spectral import enumerate_spectrum
from .summation import chunked_sum

COND_LIMIT = 1e8


# ---------------------------------------------------------------------------
# lattice heat sums with certified tails


def _lattice_tail(dim, R, t):
    """Upper bound for sum_{|k| > R, k in Z^dim} exp(-t |k|^2).

    Compares each lattice point with its unit cell:  |k| >= |x| - sqrt(d)/2
    gives exp(-t|k|^2) <= exp(-t u^2) with u = |x| - sqrt(d)/2, so the tail
    is at most the radial integral from R - sqrt(d).
    """
    u0 = max(R - math.sqrt(dim), 0.0)
    st = math.sqrt(t)
    c = math.sqrt(dim) / 2.0
    if dim == 1:
        return math.sqrt(math.pi / t) * math.erfc(st * u0)
    if dim == 2:
        omega = 2.0 * math.pi
        i1 = math.exp(-t * u0 * u0) / (2.0 * t)
        i0 = 0.5 * math.sqrt(math.pi / t) * math.erfc(st * u0)
        return omega * (i1 + c * i0)
    if dim == 3:
        omega = 4.0 * math.pi
        e = math.exp(-t * u0 * u0)
        i2 = u0 * e / (2 * t) + math.sqrt(math.pi) * math.erfc(st * u0) / (4 * t ** 1.5)
        i1 = e / (2 * t)
        i0 = 0.5 * math.sqrt(math.pi / t) * math.erfc(st * u0)
        return omega * (i2 + 2 * c * i1 + c * c * i0)
    raise ValueError("tail bound implemented for dim <= 3")


def heat_tail_bound(model, p_weight, a_weight, t):
    """Certified bound on the modes dropped beyond the model cutoff."""
    R = float(model.cutoff)
    lam_min = max((R - math.sqrt(model.dim)) ** 2, 0.0)
    p_top = abs(float(p_weight(lam_min)))  # non-increasing beyond the cutoff
    shift = a_weight.shift * a_weight.scale
    dim = model.dim
    mult = model.copies if model.kind == "boundary_lattice" else 1
    scale = a_weight.scale
    bound = mult * _lattice_tail(dim, R, t * scale)
    return p_top * math.exp(-t * shift) * bound


@dataclass(frozen=True, eq=False)
class HeatSamples:
    """(t, value) samples on a decreasing grid with per-sample tail bounds."""

    t: np.ndarray
    values: np.ndarray
    tail_bounds: np.ndarray

    def __post_init__(self):
        if np.any(np.diff(self.t) >= 0):
            raise ValueError("t grid must be strictly decreasing")


def heat_trace(p_weight, a_weight, model, t, threads=1, tail_tol=None):
    """trace(P exp(-t A)) = sum_modes P(lam) exp(-t A(lam)).

    P and A are weight functions of the same model eigenvalues
    (simultaneous diagonalization is assumed throughout).  Returns
    (value, tail_bound); raises :class:`TailBoundError` when the certified
    tail exceeds ``tail_tol``.
    """
    if a_weight.power != 1.0 or a_weight.rate != 0.0:
        raise ValueError("A must be affine in the eigenvalue: (shift+lam)")
    t = float(t)
    if t <= 0:
        raise ValueError("t must be positive")
    spec = enumerate_spectrum(model)
    lam = spec.values
    pw = p_weight(lam) * spec.counts
    aw = a_weight(lam)

    def part(lo, hi):
        return float(np.sum(pw[lo:hi] * np.exp(-t * aw[lo:hi])))

    value = chunked_sum(part, lam.size, threads=threads)
    bound = heat_tail_bound(model, p_weight, a_weight, t)
    if tail_tol is not None and bound > tail_tol:
        raise TailBoundError(
            f"tail {bound:.3e} above tolerance {tail_tol:.3e} at t={t:g}; "
            f"raise the cutoff")
    return float(value), float(bound)


def heat_samples(p_weight, a_weight, model, t_grid, threads=1, tail_tol=None):
    """Vectorized :func:`heat_trace` over a (descending) t grid."""
    t_grid = np.asarray(sorted(t_grid, reverse=True), dtype=float)
    if a_weight.power != 1.0 or a_weight.rate != 0.0:
        raise ValueError("A must be affine in the eigenvalue: (shift+lam)")
    spec = enumerate_spectrum(model)
    lam = spec.values
    pw = p_weight(lam) * spec.counts
    aw = a_weight(lam)

    def part(lo, hi):
        return np.exp(-np.outer(t_grid, aw[lo:hi])) @ pw[lo:hi]

    values = chunked_sum(part, lam.size, threads=threads)
    bounds = np.array([heat_tail_bound(model, p_weight, a_weight, t)
                       for t in t_grid])
    if tail_tol is not None and bounds.max() > tail_tol:
        raise TailBoundError(
            f"tail {bounds.max():.3e} above {tail_tol:.3e}; raise the cutoff")
    return HeatSamples(t_grid, np.asarray(values, dtype=float), bounds)


# ---------------------------------------------------------------------------
# asymptotic fits


@dataclass(frozen=True, eq=False)
class AsymptoticFit:
    """Weighted least-squares fit in prescribed powers and log-powers.

    ``coefficients`` maps (exponent, has_log) -> value.  The condition
    number refers to the column-equilibrated design matrix; fits beyond
    1e8 are rejected rather than reported.
    """

    exponents: tuple
    log_exponents: tuple
    coefficients: dict
    residual: float
    condition: float
    cross_delta: float

    def coefficient(self, exponent, log=False):
        return self.coefficients[(float(exponent), bool(log))]


def fit_expansion(samples, exponents, log_exponents=(), tail_check=1e-3):
    """Fit samples to  sum c_e t^e + sum c'_e t^e ln t.

    Rows are weighted by 1/|value| so every sample counts with its relative
    error.  Needs at least twice as many samples as coefficients and a grid
    spanning >= 1.5 decades.  Reports the rms relative residual, the
    equilibrated condition number and a cross-validation delta (largest
    coefficient change when refitting on every other sample).
    """
    t = np.asarray(samples.t, dtype=float)
    y = np.asarray(samples.values, dtype=float)
    ncoef = len(exponents) + len(log_exponents)
    if t.size < 2 * ncoef:
        raise WindowError(f"{t.size} samples for {ncoef} coefficients")
    if math.log10(t.max() / t.min()) < 1.5:
        raise WindowError("grid must span at least 1.5 decades")
    names = [(float(e), False) for e in exponents] + \
            [(float(e), True) for e in log_exponents]

    def solve(tt, yy):
        cols = [tt ** e for e, lg in names if not lg] + \
               [tt ** e * np.log(tt) for e, lg in names if lg]
        A = np.vstack(cols).T
        w = 1.0 / np.maximum(np.abs(yy), 1e-300)
        Aw = A * w[:, None]
        scal = np.linalg.norm(Aw, axis=0)
        scal[scal == 0] = 1.0
        coef, _, _, sv = np.linalg.lstsq(Aw / scal, yy * w, rcond=None)
        cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else math.inf
        resid = float(np.sqrt(np.mean((A @ (coef / scal) - yy) ** 2 * w ** 2)))
        return coef / scal, cond, resid

    coef, cond, resid = solve(t, y)
    if cond > COND_LIMIT:
        raise IllConditionedFitError(
            f"design condition {cond:.2e} beyond {COND_LIMIT:.0e}")
    coef_half, _, _ = solve(t[::2], y[::2])
    cross = float(np.max(np.abs(coef - coef_half)))
    coeffs = {names[i]: float(coef[i]) for i in range(len(names))}

    if getattr(samples, "tail_bounds", None) is not None:
        # each fitted term must dominate the certified tail where it peaks
        contrib = [abs(c) * max(t.min() ** e, t.max() ** e)
                   for (e, _), c in coeffs.items() if abs(c) > 1e-9]
        if contrib and float(np.max(samples.tail_bounds)) > tail_check * min(contrib):
            raise TailBoundError(
                "certified tail is not negligible against the smallest "
                "fitted contribution; raise the cutoff")
    return AsymptoticFit(tuple(float(e) for e in exponents),
                         tuple(float(e) for e in log_exponents),
                         coeffs, resid, cond, cross)


def default_exponents(p_weight, a_weight, dim, levels=5, logs=2):
    """Prescribed exponent ladder (j - n - ord P)/ord A, j = 0..levels,
    with log slots at the nonnegative integers."""
    ord_p = 2.0 * p_weight.power
    ord_a = 2.0 * a_weight.power
    exps = sorted({(j - dim - ord_p) / ord_a for j in range(levels + 1)})
    logexps = [float(l) for l in range(logs)]
    return exps, logexps


# ---------------------------------------------------------------------------
# zeta residues by Mellin splitting


@dataclass(frozen=True)
class ZetaResidue:
    sigma: float
    residue: float
    entire_part: float   # int_1^inf t^(sigma-1) h(t) dt, regular in sigma
    fit: AsymptoticFit


def zeta_residue(p_weight, a_weight, model, sigma, t_grid=None,
                 exponents=None, log_exponents=None, threads=1):
    """Residue of trace(P A^-s) at s = sigma via the Mellin split.

    The unit-interval piece of Gamma(s) trace(P A^-s) is continued through
    the fitted small-t expansion (the candidate power t^-sigma is always
    included so a regular point fits ~0); the piece beyond t = 1 is entire
    and only reported as a diagnostic.
    """
    if sigma < 0:
        raise ValueError("only sigma >= 0 residues are implemented")
    if t_grid is None:
        t_grid = np.geomspace(1e-3, 5e-2, 40)
    d_exps, d_logs = default_exponents(p_weight, a_weight, model.dim)
    exps = list(exponents) if exponents is not None else d_exps
    logexps = list(log_exponents) if log_exponents is not None else d_logs
    exps = sorted(set(float(e) for e in exps) | {-float(sigma)})
    samples = heat_samples(p_weight, a_weight, model, t_grid, threads=threads)
    fit = fit_expansion(samples, exps, logexps)
    if sigma == 0:
        residue = -fit.coefficient(0.0, log=True)
    else:
        residue = fit.coefficient(-sigma, log=False) / math.gamma(sigma)

    wide = np.geomspace(1.0, 40.0, 200)
    ws = heat_samples(p_weight, a_weight, model, wide, threads=threads)
    tt, vv = ws.t[::-1], ws.values[::-1]
    entire = float(np.trapezoid(tt ** (sigma - 1.0) * vv, tt))
    return ZetaResidue(float(sigma), float(residue), entire, fit)


# ---------------------------------------------------------------------------
# half-space (cylinder) heat trace for the truncated interior operator


def sine_extension_sq(j, m):
    """|integral_0^pi sin(j x) exp(-i m x) dx|^2, exact.

    The zero-extension of sin(jx) from [0, pi] to the circle has Fourier
    integrals pi/2 in modulus at m = +-j, 2j/(j^2-m^2) when j+m is odd and
    0 otherwise.
    """
    if m == j or m == -j:
        return (math.pi / 2.0) ** 2
    if (j + m) % 2 == 0:
        return 0.0
    return 4.0 * j * j / float(j * j - m * m) ** 2


def _sine_weight_matrix(jmax, mmax):
    js = np.arange(1, jmax + 1)[:, None].astype(float)
    ms = np.arange(-mmax, mmax + 1)[None, :].astype(float)
    denom = (js ** 2 - ms ** 2) ** 2
    odd = ((js + ms) % 2.0) != 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        W = np.where(odd, 4.0 * js ** 2 / denom, 0.0)
    for j in range(1, jmax + 1):
        W[j - 1, mmax + j] = (math.pi / 2.0) ** 2
        W[j - 1, mmax - j] = (math.pi / 2.0) ** 2
    return W


@dataclass(frozen=True)
class BoundaryHeatResult:
    log_coefficient: float
    fit: AsymptoticFit
    samples: HeatSamples


def halfspace_heat_samples(t_grid, shift=1.0, p_shift=1.0, m_cutoff=4000,
                           threads=1, identity_p=False):
    """trace(P_+ exp(-t A)) on the cylinder [0, pi] x circle.

    A = Dirichlet Laplacian + ``shift`` with eigenbasis sin(j x) e^{i k y};
    P is the inverse shifted Laplacian of the *full* torus, truncated to
    the cylinder, so each mode contributes

        (2/pi) (1/2pi) sum_m |I_jm|^2 / (p_shift + m^2 + k^2)

    with the exact sine-extension integrals I_jm.  The j,k cutoffs are
    chosen from the smallest t; the m truncation error is added to the
    certified tail bound.  With ``identity_p`` the bracket is exactly 1
    and the trace factorizes into the Dirichlet/full theta product (the
    sanity route for the mode sums).
    """
    t_grid = np.asarray(sorted(t_grid, reverse=True), dtype=float)
    tmin = float(t_grid[-1])
    jmax = int(math.ceil(9.0 / math.sqrt(tmin)))
    kmax = jmax
    W = _sine_weight_matrix(jmax, m_cutoff) / math.pi ** 2
    ks = np.arange(0, kmax + 1)
    ms = np.arange(-m_cutoff, m_cutoff + 1).astype(float)

    def bracket(lo, hi):
        # G[j, k] = (1/pi^2) sum_m |I_jm|^2 / (p_shift + m^2 + k^2)
        out = np.zeros((jmax, hi - lo))
        for idx, k in enumerate(ks[lo:hi]):
            out[:, idx] = W @ (1.0 / (p_shift + ms ** 2 + float(k) ** 2))
        return out

    if identity_p:
        G = np.ones((jmax, kmax + 1))
    else:
        ranges = _fixed_ranges(kmax + 1, 64)
        if threads > 1:
            from concurrent.futures import ThreadPoolExecutor
            with ThreadPoolExecutor(max_workers=threads) as ex:
                blocks = list(ex.map(lambda rg: bracket(*rg), ranges))
        else:
            blocks = [bracket(lo, hi) for lo, hi in ranges]
        G = np.hstack(blocks)
    js = np.arange(1, jmax + 1).astype(float)
    kw = np.where(ks == 0, 1.0, 2.0)
    values = []
    for t in t_grid:
        ej = np.exp(-t * js ** 2)
        ek = np.exp(-t * ks.astype(float) ** 2) * kw
        values.append(math.exp(-t * shift) * float(ej @ G @ ek))
    values = np.asarray(values)

    # certified tails: dropped (j, k) modes (bracket <= 1/p_shift) plus the
    # m truncation of the bracket sum; for m > M >= 2 jmax one has
    # m^2 - j^2 >= (3/4) m^2, so the per-mode m tail is bounded by
    # (128/27) j^2 M^-3 / (p_shift + M^2 + k^2).
    if m_cutoff < 2 * jmax:
        raise TailBoundError(
            f"m cutoff {m_cutoff} below twice the mode cutoff {jmax}")
    jk_tail = np.array([
        _lattice_tail(2, jmax, t) * math.exp(-t * shift) / p_shift
        for t in t_grid])
    m_tail = (128.0 / 27.0) * jmax ** 2 / m_cutoff ** 3 \
        / (p_shift + m_cutoff ** 2) / math.pi ** 2
    sum_jk = np.array([
        float(np.exp(-t * js ** 2).sum() * (np.exp(-t * ks ** 2) * kw).sum())
        for t in t_grid])
    bounds = jk_tail + m_tail * sum_jk
    return HeatSamples(t_grid, values, bounds)


def _fixed_ranges(n, parts):
    step = max(1, (n + parts - 1) // parts)
    return [(lo, min(lo + step, n)) for lo in range(0, n, step)]


def boundary_heat_test(t_grid=None, shift=1.0, m_cutoff=4000, threads=1):
    """Fit the ln t coefficient of the cylinder half-space heat trace.

    Exponent ladder: half-integer powers with log slots at 0, 1/2 and 1.
    """
    if t_grid is None:
        t_grid = np.geomspace(1.5e-3, 5e-2, 30)
    samples = halfspace_heat_samples(t_grid, shift=shift, m_cutoff=m_cutoff,
                                     threads=threads)
    fit = fit_expansion(samples, [0.0, 0.5, 1.0, 1.5, 2.0],
                        [0.0, 0.5, 1.0])
    return BoundaryHeatResult(fit.coefficient(0.0, log=True), fit, samples)
