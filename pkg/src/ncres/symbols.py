"""Classical pseudodifferential symbols on the n-torus.

A homogeneous term of degree ``d`` is a finite sum of atoms

    coeff * exp(i<k, x>) * xi^alpha * |xi|^w          (|alpha| + w = d)

with ``k`` an integer frequency vector, ``alpha`` a multi-index and ``w``
real.  This span is closed under x- and xi-derivatives, products and the
asymptotic composition, its x-integral over the torus keeps only the zero
frequency, and its sphere integral reduces to Gaussian monomial moments.
Residue-type functionals built on it therefore carry no quadrature error.

Coefficients are complex scalars, or square complex matrices of a common
size for systems; ``trace_part`` contracts the matrix index.

A :class:`ClassicalSymbol` is the finite family of homogeneous components
``order, order-1, ...`` together with an *exactness floor*: components at or
above the floor are exactly represented (absent means exactly zero), while
anything below is unknown and may not be read.  Compositions propagate the
floor so that truncation garbage can never leak into a residue.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import lgamma

import numpy as np

from .errors import DimensionMismatchError, TruncationFloorError

_DEG_TOL = 1e-9

# ---------------------------------------------------------------------------
# coefficient helpers (complex scalar or square complex matrix)


def _as_coeff(c, matrix_dim):
    if matrix_dim == 1:
        return complex(c)
    a = np.asarray(c, dtype=complex)
    if a.shape != (matrix_dim, matrix_dim):
        raise DimensionMismatchError(
            f"coefficient shape {a.shape} != ({matrix_dim}, {matrix_dim})")
    return a


def _cmul(a, b):
    if isinstance(a, np.ndarray) and isinstance(b, np.ndarray):
        return a @ b
    return a * b


def _cabs(c):
    if isinstance(c, np.ndarray):
        return float(np.abs(c).sum())
    return abs(c)


def _ctrace(c):
    if isinstance(c, np.ndarray):
        return complex(np.trace(c))
    return c


def _czero(matrix_dim):
    return 0j if matrix_dim == 1 else np.zeros((matrix_dim, matrix_dim), complex)


def _is_zero_coeff(c):
    if isinstance(c, np.ndarray):
        return not np.any(c)
    return c == 0


# ---------------------------------------------------------------------------
# trigonometric polynomials (the x-dependence)


@dataclass(frozen=True, eq=False)
class TrigPoly:
    """Finite sum  sum_k c_k exp(i<k, x>)  on the n-torus."""

    n: int
    coeffs: tuple  # ((freq tuple, coeff), ...) sorted by frequency

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = 0j
        for k, c in self.coeffs:
            out = out + c * np.exp(1j * float(np.dot(k, x)))
        return out

    def mean(self):
        """Zero-frequency coefficient (the average over the torus)."""
        for k, c in self.coeffs:
            if not any(k):
                return c
        if self.coeffs and isinstance(self.coeffs[0][1], np.ndarray):
            return np.zeros_like(self.coeffs[0][1])
        return 0j

    def torus_integral(self):
        return (2.0 * math.pi) ** self.n * self.mean()

    def __add__(self, other):
        if self.n != other.n:
            raise DimensionMismatchError("trig polynomials on different tori")
        return trig_poly(self.n, list(self.coeffs) + list(other.coeffs))

    def scaled(self, z):
        return trig_poly(self.n, [(k, _cmul(c, z) if isinstance(c, np.ndarray)
                                   else c * z) for k, c in self.coeffs])

    def __sub__(self, other):
        return self + other.scaled(-1.0)

    def trace_part(self):
        return trig_poly(self.n, [(k, _ctrace(c)) for k, c in self.coeffs])

    def restrict_axis(self, axis, value=0.0):
        """Set x[axis] = value and drop that variable."""
        pairs = []
        for k, c in self.coeffs:
            phase = complex(np.exp(1j * k[axis] * value))
            pairs.append((k[:axis] + k[axis + 1:], c * phase))
        return trig_poly(self.n - 1, pairs)

    def max_abs_coeff(self):
        return max((_cabs(c) for _, c in self.coeffs), default=0.0)

    @property
    def is_zero(self):
        return not self.coeffs


def trig_poly(n, pairs):
    merged = {}
    for k, c in pairs:
        k = tuple(int(v) for v in k)
        if len(k) != n:
            raise DimensionMismatchError("frequency length != n")
        if k in merged:
            merged[k] = merged[k] + c
        else:
            merged[k] = c
    items = [(k, c) for k, c in sorted(merged.items()) if not _is_zero_coeff(c)]
    return TrigPoly(n, tuple(items))


# ---------------------------------------------------------------------------
# homogeneous terms


@dataclass(frozen=True, eq=False)
class HomTerm:
    """One homogeneous component: finite atom sum of a fixed degree."""

    degree: float
    n: int
    atoms: tuple  # ((coeff, freq, alpha, w), ...)
    matrix_dim: int = 1

    # -- evaluation ---------------------------------------------------------

    def __call__(self, x, xi):
        """Value at (x, xi); positively homogeneous of ``degree`` in xi != 0."""
        x = np.asarray(x, dtype=float)
        xi = np.asarray(xi, dtype=float)
        r = float(np.linalg.norm(xi))
        if r == 0.0:
            raise ValueError("hom_eval requires xi != 0")
        out = _czero(self.matrix_dim)
        for c, k, alpha, w in self.atoms:
            mono = 1.0
            for xj, aj in zip(xi, alpha):
                if aj:
                    mono *= float(xj) ** aj
            out = out + c * (np.exp(1j * float(np.dot(k, x))) * mono * r ** w)
        return out

    def evaluate_trig(self, xi):
        """Freeze xi; return the remaining trigonometric polynomial in x."""
        xi = np.asarray(xi, dtype=float)
        r = float(np.linalg.norm(xi))
        if r == 0.0:
            raise ValueError("xi must be nonzero")
        pairs = []
        for c, k, alpha, w in self.atoms:
            mono = 1.0
            for xj, aj in zip(xi, alpha):
                if aj:
                    mono *= float(xj) ** aj
            pairs.append((k, c * (mono * r ** w)))
        return trig_poly(self.n, pairs)

    # -- derivations --------------------------------------------------------

    def dx(self, i):
        atoms = [(c * (1j * k[i]), k, alpha, w)
                 for c, k, alpha, w in self.atoms if k[i]]
        return hom_term(self.degree, self.n, atoms, self.matrix_dim)

    def dxi(self, i):
        atoms = []
        for c, k, alpha, w in self.atoms:
            if alpha[i]:
                lowered = alpha[:i] + (alpha[i] - 1,) + alpha[i + 1:]
                atoms.append((c * alpha[i], k, lowered, w))
            if w:
                raised = alpha[:i] + (alpha[i] + 1,) + alpha[i + 1:]
                atoms.append((c * w, k, raised, w - 2.0))
        return hom_term(self.degree - 1.0, self.n, atoms, self.matrix_dim)

    # -- algebra -------------------------------------------------------------

    def __add__(self, other):
        if abs(self.degree - other.degree) > _DEG_TOL or self.n != other.n:
            raise DimensionMismatchError("terms of unequal degree or dimension")
        return hom_term(self.degree, self.n, self.atoms + other.atoms,
                        self.matrix_dim)

    def __sub__(self, other):
        return self + other.scaled(-1.0)

    def scaled(self, z):
        return hom_term(self.degree, self.n,
                        [(c * z, k, a, w) for c, k, a, w in self.atoms],
                        self.matrix_dim)

    def times(self, other):
        """Pointwise product; matrix coefficients multiply in this order."""
        if self.n != other.n or self.matrix_dim != other.matrix_dim:
            raise DimensionMismatchError("incompatible term product")
        atoms = []
        for c1, k1, a1, w1 in self.atoms:
            for c2, k2, a2, w2 in other.atoms:
                atoms.append((
                    _cmul(c1, c2),
                    tuple(x + y for x, y in zip(k1, k2)),
                    tuple(x + y for x, y in zip(a1, a2)),
                    w1 + w2,
                ))
        return hom_term(self.degree + other.degree, self.n, atoms,
                        self.matrix_dim)

    def trace_part(self):
        return hom_term(self.degree, self.n,
                        [(_ctrace(c), k, a, w) for c, k, a, w in self.atoms], 1)

    def norm1(self):
        return sum(_cabs(c) for c, *_ in self.atoms)

    @property
    def is_zero(self):
        return not self.atoms

    @property
    def is_xi_polynomial(self):
        return all(w == 0 for _, _, _, w in self.atoms)

    @property
    def is_x_independent(self):
        return all(not any(k) for _, k, _, _ in self.atoms)

    @property
    def max_alpha_total(self):
        return max((sum(a) for _, _, a, _ in self.atoms), default=0)


def hom_term(degree, n, atoms, matrix_dim=1):
    """Build a :class:`HomTerm`, merging duplicate atoms and validating
    ``|alpha| + w == degree`` for each."""
    merged = {}
    for c, k, alpha, w in atoms:
        k = tuple(int(v) for v in k)
        alpha = tuple(int(v) for v in alpha)
        w = float(w)
        if len(k) != n or len(alpha) != n:
            raise DimensionMismatchError("atom index length != n")
        if any(a < 0 for a in alpha):
            raise ValueError("negative monomial exponent")
        if abs(sum(alpha) + w - degree) > _DEG_TOL:
            raise ValueError(
                f"atom |alpha|+w = {sum(alpha) + w} != degree {degree}")
        c = _as_coeff(c, matrix_dim)
        key = (k, alpha, w)
        if key in merged:
            merged[key] = merged[key] + c
        else:
            merged[key] = c
    out = tuple((c, k, a, w) for (k, a, w), c in sorted(merged.items())
                if not _is_zero_coeff(c))
    return HomTerm(float(degree), n, out, matrix_dim)


def zero_term(degree, n, matrix_dim=1):
    return HomTerm(float(degree), n, (), matrix_dim)


def hom_eval(term, x, xi):
    """Evaluate a homogeneous term at (x, xi); rejects xi = 0."""
    return term(x, xi)


def radial_term(degree, n, coeff=1.0):
    """The term coeff * |xi|^degree."""
    return hom_term(degree, n, [(coeff, (0,) * n, (0,) * n, float(degree))])


# ---------------------------------------------------------------------------
# classical symbols


@dataclass(frozen=True, eq=False)
class ClassicalSymbol:
    """Finite list of homogeneous components with an exactness floor.

    ``terms[j]`` holds the component of degree ``order - j``.  When
    ``exact_floor`` is None the symbol *is* the stored finite sum (all other
    components vanish identically); otherwise only components of degree
    >= ``exact_floor`` may be read.
    """

    order: int
    n: int
    terms: tuple  # HomTerm slots, degree order - j
    matrix_dim: int = 1
    exact_floor: float | None = None

    @property
    def floor_value(self):
        return -math.inf if self.exact_floor is None else self.exact_floor

    @property
    def truncation(self):
        return len(self.terms) - 1

    @property
    def lowest_stored(self):
        return self.order - self.truncation

    @property
    def lowest_nonzero(self):
        degs = [t.degree for t in self.terms if not t.is_zero]
        return min(degs) if degs else None

    def component(self, degree):
        """Homogeneous component of the given degree.

        Degrees above the order are exactly zero; degrees below the
        exactness floor raise :class:`TruncationFloorError`.
        """
        if degree < self.floor_value - _DEG_TOL:
            raise TruncationFloorError(
                f"component {degree} below exactness floor {self.exact_floor}")
        j = self.order - degree
        jr = round(j)
        if abs(j - jr) > _DEG_TOL or jr < 0 or jr > self.truncation:
            return zero_term(degree, self.n, self.matrix_dim)
        return self.terms[jr]

    def nonzero_terms(self):
        return [t for t in self.terms if not t.is_zero]

    # -- algebra -------------------------------------------------------------

    def __add__(self, other):
        if self.n != other.n or self.matrix_dim != other.matrix_dim:
            raise DimensionMismatchError("incompatible symbols")
        floor = max(self.floor_value, other.floor_value)
        # components below the joint floor are unreadable; drop them
        terms = [t for t in self.terms + other.terms
                 if not t.is_zero and t.degree >= floor - _DEG_TOL]
        order = max(self.order, other.order)
        return classical_symbol(terms, self.n, order=order,
                                matrix_dim=self.matrix_dim,
                                exact_floor=None if floor == -math.inf else floor)

    def __sub__(self, other):
        return self + other.scaled(-1.0)

    def scaled(self, z):
        return ClassicalSymbol(self.order, self.n,
                               tuple(t.scaled(z) for t in self.terms),
                               self.matrix_dim, self.exact_floor)

    def dx(self, i):
        return ClassicalSymbol(self.order, self.n,
                               tuple(t.dx(i) for t in self.terms),
                               self.matrix_dim, self.exact_floor)

    def dxi(self, i):
        floor = None if self.exact_floor is None else self.exact_floor - 1
        return ClassicalSymbol(self.order - 1, self.n,
                               tuple(t.dxi(i) for t in self.terms),
                               self.matrix_dim, floor)

    def pointwise(self, other):
        """Exact pointwise product (no Leibniz corrections)."""
        if self.n != other.n or self.matrix_dim != other.matrix_dim:
            raise DimensionMismatchError("incompatible symbols")
        floors = []
        if self.exact_floor is not None:
            floors.append(self.exact_floor + other.order)
        if other.exact_floor is not None:
            floors.append(other.exact_floor + self.order)
        floor = max(floors) if floors else None
        terms = []
        for t1 in self.nonzero_terms():
            for t2 in other.nonzero_terms():
                if floor is None or t1.degree + t2.degree >= floor - _DEG_TOL:
                    terms.append(t1.times(t2))
        return classical_symbol(terms, self.n,
                                order=self.order + other.order,
                                matrix_dim=self.matrix_dim, exact_floor=floor)

    def eval(self, x, xi):
        """Sum of the stored components at (x, xi)."""
        out = _czero(self.matrix_dim)
        for t in self.nonzero_terms():
            out = out + t(x, xi)
        return out

    def trace_part(self):
        return ClassicalSymbol(self.order, self.n,
                               tuple(t.trace_part() for t in self.terms), 1,
                               self.exact_floor)

    def norm1(self):
        return sum(t.norm1() for t in self.terms)

    @property
    def is_xi_polynomial(self):
        return all(t.is_xi_polynomial for t in self.terms)

    @property
    def is_x_independent(self):
        return all(t.is_x_independent for t in self.terms)

    @property
    def max_alpha_total(self):
        return max((t.max_alpha_total for t in self.terms), default=0)


def classical_symbol(terms, n, order=None, matrix_dim=1, exact_floor=None):
    """Arrange homogeneous terms into a :class:`ClassicalSymbol`.

    Degrees must sit on the integer ladder ``order - j``; duplicate degrees
    are summed, absent ones stored as empty components.
    """
    terms = [t for t in terms if not t.is_zero]
    if order is None:
        if not terms:
            raise ValueError("order needed for an all-zero symbol")
        order = max(t.degree for t in terms)
    if abs(order - round(order)) > _DEG_TOL:
        raise ValueError(f"symbol order must be an integer, got {order}")
    order = int(round(order))
    lowest = order
    for t in terms:
        j = order - t.degree
        if abs(j - round(j)) > _DEG_TOL or t.degree > order + _DEG_TOL:
            raise ValueError(
                f"term degree {t.degree} not on the ladder below order {order}")
        lowest = min(lowest, int(round(t.degree)))
    if exact_floor is not None and exact_floor > lowest:
        raise ValueError("exactness floor above a stored term")
    depth = order - lowest
    if exact_floor is not None:
        depth = max(depth, int(math.ceil(order - exact_floor - _DEG_TOL)))
    slots = [zero_term(order - j, n, matrix_dim) for j in range(depth + 1)]
    for t in terms:
        if t.n != n or t.matrix_dim != matrix_dim:
            raise DimensionMismatchError("term dimension mismatch")
        j = int(round(order - t.degree))
        slots[j] = slots[j] + t
    return ClassicalSymbol(order, n, tuple(slots), matrix_dim, exact_floor)


def identity_symbol(n, matrix_dim=1):
    c = 1.0 if matrix_dim == 1 else np.eye(matrix_dim)
    return classical_symbol(
        [hom_term(0.0, n, [(c, (0,) * n, (0,) * n, 0.0)], matrix_dim)], n)


def laplace_shift_power(n, exponent, depth):
    """Symbol of (1 - Delta)^exponent on the n-torus: the binomial expansion
    of (1 + |xi|^2)^exponent into degrees 2*exponent - 2j, j <= depth.

    2*exponent must be an integer.  The result's exactness floor is the
    lowest expanded degree (the series continues below it), except for
    nonnegative integer exponents where the expansion terminates.
    """
    order = 2.0 * exponent
    if abs(order - round(order)) > _DEG_TOL:
        raise ValueError("2*exponent must be an integer")
    terminates = exponent >= 0 and abs(exponent - round(exponent)) < _DEG_TOL
    if terminates:
        depth = min(depth, int(round(exponent)))
    terms = []
    for j in range(depth + 1):
        c = _gen_binom(exponent, j)
        terms.append(radial_term(order - 2 * j, n, c))
    floor = None if terminates else order - 2 * depth
    return classical_symbol(terms, n, order=int(round(order)),
                            exact_floor=floor)


def _gen_binom(e, j):
    out = 1.0
    for i in range(j):
        out *= (e - i) / (i + 1)
    return out


# ---------------------------------------------------------------------------
# composition (Leibniz product)


def multi_indices(n, total):
    """All multi-indices of length n summing to ``total`` (lexicographic)."""
    if n == 1:
        return [(total,)]
    out = []
    for first in range(total, -1, -1):
        for rest in multi_indices(n - 1, total - first):
            out.append((first,) + rest)
    return out


def _derivative_table(sym, maxlen, kind):
    """d^alpha applied to every stored component, for |alpha| <= maxlen."""
    n = sym.n
    table = {(0,) * n: list(sym.terms)}
    for total in range(1, maxlen + 1):
        for alpha in multi_indices(n, total):
            i = next(idx for idx, a in enumerate(alpha) if a > 0)
            prev = table[alpha[:i] + (alpha[i] - 1,) + alpha[i + 1:]]
            if kind == "xi":
                table[alpha] = [t.dxi(i) for t in prev]
            else:
                table[alpha] = [t.dx(i) for t in prev]
    return table


def leibniz_compose(a, b, depth):
    """Asymptotic composition a # b, exact on degrees above
    ``a.order + b.order - depth - 1``.

    Each computed component receives its full (finite) set of
    xi-derivative/x-derivative contributions

        sum_alpha (-i)^|alpha| / alpha!  d_xi^alpha a  d_x^alpha b ,

    so the result is bilinear and exactly the composed expansion on the
    computed range; the exactness floor records what may be read.
    """
    if a.n != b.n or a.matrix_dim != b.matrix_dim:
        raise DimensionMismatchError("composition of incompatible symbols")
    if depth < 0:
        raise ValueError("depth must be >= 0")
    n = a.n
    top = a.order + b.order
    floors = []
    if a.exact_floor is not None:
        floors.append(a.exact_floor + b.order)
    if b.exact_floor is not None:
        floors.append(b.exact_floor + a.order)
    trunc = top - depth
    low_a, low_b = a.lowest_nonzero, b.lowest_nonzero
    if low_a is None or low_b is None:
        return classical_symbol([], n, order=top, matrix_dim=a.matrix_dim)
    if a.exact_floor is None and b.exact_floor is None:
        if b.is_x_independent:
            max_alpha = 0
        elif a.is_xi_polynomial:
            max_alpha = a.max_alpha_total
        else:
            max_alpha = None
        if max_alpha is None or trunc > low_a + low_b - max_alpha:
            floors.append(trunc)
    else:
        floors.append(trunc)
    floor = max(floors) if floors else None

    da = _derivative_table(a, depth, "xi")
    db = _derivative_table(b, depth, "x")
    fact = [math.factorial(i) for i in range(depth + 1)]
    out = []
    for total in range(depth + 1):
        for alpha in multi_indices(n, total):
            pref = (-1j) ** total
            for d in alpha:
                pref /= fact[d]
            for ta in da[alpha]:
                if ta.is_zero:
                    continue
                for tb in db[alpha]:
                    if tb.is_zero:
                        continue
                    deg = ta.degree + tb.degree
                    if deg < trunc - _DEG_TOL:
                        continue
                    if floor is not None and deg < floor - _DEG_TOL:
                        continue
                    out.append(ta.times(tb).scaled(pref))
    return classical_symbol(out, n, order=top, matrix_dim=a.matrix_dim,
                            exact_floor=floor)


def commutator(a, b, depth):
    """a # b - b # a at the given composition depth."""
    return leibniz_compose(a, b, depth) - leibniz_compose(b, a, depth)


# ---------------------------------------------------------------------------
# transmission condition


@dataclass(frozen=True)
class TransmissionReport:
    ok: bool
    violation: tuple | None  # (degree, alpha', k) of the first failure
    max_defect: float

    def __bool__(self):
        return self.ok


def transmission_check(p, depth=2, tol=1e-8):
    """Parity check at the boundary fiber.

    For every stored component of integer degree j and every derivative
    budget k + |alpha'| <= depth, compares

        d_{x_n}^k d_{xi'}^alpha' p_j(x', 0, 0, +1)
        against  (-1)^(j - |alpha'|) * (same at xi_n = -1)

    as trigonometric polynomials in x'.  Returns a report with the first
    violating (j, alpha', k) if any.
    """
    n = p.n
    if n < 2:
        raise DimensionMismatchError("transmission check needs n >= 2")
    plus = np.zeros(n)
    plus[-1] = 1.0
    minus = -plus
    worst = 0.0
    violation = None
    scale = 1.0 + p.norm1()
    for term in p.terms:
        if term.is_zero:
            continue
        j = int(round(term.degree))
        base = term
        for k in range(depth + 1):
            if k:
                base = base.dx(n - 1)
            for atot in range(depth - k + 1):
                for alpha_p in multi_indices(n - 1, atot):
                    q = base
                    for axis, reps in enumerate(alpha_p):
                        for _ in range(reps):
                            q = q.dxi(axis)
                    tp = q.evaluate_trig(plus).restrict_axis(n - 1)
                    tm = q.evaluate_trig(minus).restrict_axis(n - 1)
                    sign = (-1.0) ** (j - atot)
                    defect = (tp - tm.scaled(sign)).max_abs_coeff()
                    if defect > worst:
                        worst = defect
                    if defect > tol * scale and violation is None:
                        violation = (j, alpha_p, k)
    return TransmissionReport(violation is None, violation, worst)


# ---------------------------------------------------------------------------
# sphere integration


def sphere_moment(alpha, n):
    """Exact monomial moment  int_{S^{n-1}} xi^alpha dsigma(xi).

    Zero when any entry of alpha is odd; for alpha = 2*beta the value is
    2 * prod_i Gamma(beta_i + 1/2) / Gamma(|beta| + n/2).
    """
    if any(a % 2 for a in alpha):
        return 0.0
    beta = [a // 2 for a in alpha]
    val = sum(lgamma(b + 0.5) for b in beta) - lgamma(sum(beta) + 0.5 * n)
    return 2.0 * math.exp(val)


def sphere_integrate(term, n):
    """Integrate a homogeneous term over the unit sphere S^{n-1}.

    On the sphere |xi|^w = 1, so every atom reduces to a monomial moment;
    the result is the remaining trigonometric polynomial in x.  Needs
    n >= 2 (one dimension uses the two-point rule instead).
    """
    if n < 2:
        raise DimensionMismatchError("sphere_integrate needs n >= 2")
    if term.n != n:
        raise DimensionMismatchError("term dimension != n")
    pairs = [(k, c * sphere_moment(a, n)) for c, k, a, _ in term.atoms]
    return trig_poly(n, pairs)
