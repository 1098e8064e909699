"""Finite Laurent polynomials on circles and annuli.

Everything downstream reduces to exact coefficient arithmetic on expressions
of the form ``sum c_n z^n`` with integer exponents of both signs, plus a small
set of circle integrals that such expressions admit in closed form.
"""

from __future__ import annotations

import cmath
import math
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from .errors import (
    ConvergenceError,
    DegenerateContourError,
    DomainError,
    SchemaError,
    UnsupportedDataError,
)

# Coefficients below this magnitude are dropped during canonicalization.
PRUNE_EPS = 1e-300
# Relative tolerance for coefficient-level predicates (exact division,
# square roots, symmetry, vanishing constant terms).
COEFF_REL_TOL = 1e-12
# Aberth residual target, relative backward error.
ROOT_RESIDUAL_TOL = 1e-12
# winding_on_circle refuses circles closer than this (relative) to a root.
CIRCLE_ROOT_TOL = 1e-9

TWO_PI = 2.0 * math.pi


def _finite_complex(value, what: str = "value") -> complex:
    z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"{what} must be finite, got {value!r}")
    return z


def _positive_radius(r) -> float:
    r = float(r)
    if not math.isfinite(r) or r <= 0.0:
        raise DomainError(f"radius must be finite and positive, got {r!r}")
    return r


class LaurentPoly:
    """Immutable ``sum c_n z^n`` with finitely many terms, n in Z."""

    __slots__ = ("terms", "__dict__")

    def __init__(self, coeffs: Mapping[int, complex] | Iterable[tuple[int, complex]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[int, complex] = {}
        for n, c in items:
            ni = int(n)
            if ni != n:
                raise DomainError(f"exponent must be an integer, got {n!r}")
            c = _finite_complex(c, f"coefficient of z^{ni}")
            acc[ni] = acc.get(ni, 0j) + c
        self.terms: tuple[tuple[int, complex], ...] = tuple(
            (n, acc[n]) for n in sorted(acc) if abs(acc[n]) >= PRUNE_EPS
        )

    # -- construction helpers -------------------------------------------------

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def monomial(cls, n: int, c: complex = 1.0) -> "LaurentPoly":
        return cls(((n, c),))

    @classmethod
    def constant(cls, c: complex) -> "LaurentPoly":
        return cls(((0, c),))

    # -- inspection ------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def lowest(self) -> int:
        if not self.terms:
            raise DomainError("the zero expression has no lowest exponent")
        return self.terms[0][0]

    @property
    def highest(self) -> int:
        if not self.terms:
            raise DomainError("the zero expression has no highest exponent")
        return self.terms[-1][0]

    @cached_property
    def coeffs(self) -> dict[int, complex]:
        return dict(self.terms)

    def coefficient(self, n: int) -> complex:
        return self.coeffs.get(n, 0j)

    @cached_property
    def max_abs_coeff(self) -> float:
        return max((abs(c) for _, c in self.terms), default=0.0)

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentPoly) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "LaurentPoly(0)"
        bits = " + ".join(f"({c:.6g})z^{n}" for n, c in self.terms)
        return f"LaurentPoly({bits})"

    # -- ring operations ---------------------------------------------------------

    def __add__(self, other) -> "LaurentPoly":
        other = _as_poly(other)
        return LaurentPoly(list(self.terms) + list(other.terms))

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(tuple((n, -c) for n, c in self.terms))

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return _as_poly(other) + (-self)

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            out: dict[int, complex] = {}
            for n, a in self.terms:
                for m, b in other.terms:
                    k = n + m
                    out[k] = out.get(k, 0j) + a * b
            return LaurentPoly(out)
        c = _finite_complex(other, "scalar factor")
        return LaurentPoly(tuple((n, a * c) for n, a in self.terms))

    __rmul__ = __mul__

    def shifted(self, k: int) -> "LaurentPoly":
        """Multiply by z**k (exact exponent shift)."""
        k = int(k)
        return LaurentPoly(tuple((n + k, c) for n, c in self.terms))

    def derivative(self) -> "LaurentPoly":
        return LaurentPoly(tuple((n - 1, n * c) for n, c in self.terms if n != 0))

    def conj_reflect(self) -> "LaurentPoly":
        """Coefficientwise conj(c_{-n}); as a function, conj(p(1/conj(z)))."""
        return LaurentPoly(tuple((-n, c.conjugate()) for n, c in self.terms))

    # -- evaluation ---------------------------------------------------------------

    @cached_property
    def _split(self):
        # dense ascending coefficients for the z part (exponents 0..highest)
        # and the 1/z part (exponents -1..lowest), used by split Horner.
        if not self.terms:
            return np.zeros(1, complex), np.zeros(0, complex)
        hi = max(self.terms[-1][0], 0)
        lo = min(self.terms[0][0], 0)
        pos = np.zeros(hi + 1, complex)
        neg = np.zeros(-lo, complex)
        for n, c in self.terms:
            if n >= 0:
                pos[n] = c
            else:
                neg[-n - 1] = c
        return pos, neg

    def evaluate(self, z):
        """Evaluate at a nonzero point or array (split Horner in z and 1/z)."""
        arr = np.asarray(z, dtype=complex)
        if arr.size:
            if not np.all(np.isfinite(arr)):
                raise DomainError("evaluation point must be finite")
            if np.any(arr == 0):
                raise DomainError("Laurent expressions are undefined at z = 0")
        pos, neg = self._split
        out = np.full(arr.shape, pos[-1], dtype=complex)
        for c in pos[-2::-1]:
            out = out * arr + c
        if neg.size:
            w = 1.0 / arr
            acc = np.full(arr.shape, neg[-1], dtype=complex)
            for c in neg[-2::-1]:
                acc = acc * w + c
            out = out + acc * w
        if arr.ndim == 0:
            return complex(out)
        return out

    __call__ = evaluate

    # -- exact division and square root -------------------------------------------

    def divide_exact(self, den: "LaurentPoly", rel_tol: float = COEFF_REL_TOL) -> "LaurentPoly":
        """Quotient self/den when it is again a finite Laurent expression.

        Performs ordinary long division after shifting both operands to plain
        polynomials; a non-vanishing remainder raises ``UnsupportedDataError``.
        """
        if den.is_zero:
            raise DomainError("division by the zero expression")
        if self.is_zero:
            return LaurentPoly()
        num_deg = self.highest - self.lowest
        den_deg = den.highest - den.lowest
        qdeg = num_deg - den_deg
        scale = self.max_abs_coeff
        if qdeg < 0:
            raise UnsupportedDataError("quotient is not a finite Laurent expression")
        work = np.zeros(num_deg + 1, complex)
        for n, c in self.terms:
            work[n - self.lowest] = c
        dvec = np.zeros(den_deg + 1, complex)
        for n, c in den.terms:
            dvec[n - den.lowest] = c
        q = np.zeros(qdeg + 1, complex)
        for k in range(qdeg, -1, -1):
            q[k] = work[k + den_deg] / dvec[den_deg]
            work[k : k + den_deg + 1] -= q[k] * dvec
        if np.max(np.abs(work)) > rel_tol * max(scale, PRUNE_EPS):
            raise UnsupportedDataError("division leaves a remainder")
        qlow = self.lowest - den.lowest
        return LaurentPoly(tuple((qlow + k, q[k]) for k in range(qdeg + 1)))

    def sqrt_exact(self, rel_tol: float = COEFF_REL_TOL):
        """Exact Laurent square root, or None when no such expression exists.

        The leading coefficient takes its principal root and the rest follow
        by back-substitution; the candidate is verified by squaring.
        """
        if self.is_zero:
            return LaurentPoly()
        lo, hi = self.lowest, self.highest
        if lo % 2 != 0 or hi % 2 != 0:
            return None
        fdeg = hi - lo
        f = np.zeros(fdeg + 1, complex)
        for n, c in self.terms:
            f[n - lo] = c
        gdeg = fdeg // 2
        g = np.zeros(gdeg + 1, complex)
        g[0] = cmath.sqrt(f[0])
        for k in range(1, gdeg + 1):
            s = sum(g[i] * g[k - i] for i in range(1, k))
            g[k] = (f[k] - s) / (2.0 * g[0])
        cand = LaurentPoly(tuple((lo // 2 + k, g[k]) for k in range(gdeg + 1)))
        resid = cand * cand - self
        if resid.max_abs_coeff > rel_tol * max(self.max_abs_coeff, PRUNE_EPS):
            return None
        return cand


def _as_poly(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    return LaurentPoly.constant(_finite_complex(x))


class AnnulusWindow:
    """Open annulus r_inner < |z| < r_outer."""

    __slots__ = ("r_inner", "r_outer")

    def __init__(self, r_inner: float, r_outer: float):
        r_inner = float(r_inner)
        r_outer = float(r_outer)
        if not (math.isfinite(r_inner) and math.isfinite(r_outer)):
            raise DomainError("window radii must be finite")
        if not 0.0 < r_inner < r_outer:
            raise DomainError(f"need 0 < r_inner < r_outer, got ({r_inner}, {r_outer})")
        self.r_inner = r_inner
        self.r_outer = r_outer

    @property
    def geometric_mean(self) -> float:
        return math.sqrt(self.r_inner * self.r_outer)

    def contains(self, r: float) -> bool:
        return self.r_inner < float(r) < self.r_outer

    def log_span(self) -> tuple[float, float]:
        return math.log(self.r_inner), math.log(self.r_outer)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, AnnulusWindow)
            and self.r_inner == other.r_inner
            and self.r_outer == other.r_outer
        )

    def __hash__(self) -> int:
        return hash((self.r_inner, self.r_outer))

    def __repr__(self) -> str:
        return f"AnnulusWindow({self.r_inner!r}, {self.r_outer!r})"


class LogTermAntiderivative:
    """Antiderivative of a Laurent expression: polynomial part + c * log z."""

    __slots__ = ("poly_part", "log_coefficient")

    def __init__(self, poly_part: LaurentPoly, log_coefficient: complex):
        self.poly_part = poly_part
        self.log_coefficient = _finite_complex(log_coefficient, "log coefficient")

    def derivative(self) -> LaurentPoly:
        out = self.poly_part.derivative()
        if self.log_coefficient != 0:
            out = out + LaurentPoly.monomial(-1, self.log_coefficient)
        return out

    def __repr__(self) -> str:
        return f"LogTermAntiderivative({self.poly_part!r}, {self.log_coefficient!r})"


def antiderivative(p: LaurentPoly) -> LogTermAntiderivative:
    """Term-by-term antiderivative; the z**-1 term becomes the log coefficient."""
    parts = []
    logc = 0j
    for n, c in p.terms:
        if n == -1:
            logc = c
        else:
            parts.append((n + 1, c / (n + 1)))
    return LogTermAntiderivative(LaurentPoly(tuple(parts)), logc)


def circle_mean(p: LaurentPoly, r: float) -> complex:
    """Mean of p over |z| = r; exactly the constant coefficient."""
    _positive_radius(r)
    return p.coefficient(0)


def circle_l2(p: LaurentPoly, r: float) -> float:
    """Integral of |p|^2 over the circle |z| = r (orthogonality closed form)."""
    r = _positive_radius(r)
    return TWO_PI * sum(abs(c) ** 2 * r ** (2 * n) for n, c in p.terms)


def circle_samples(p: LaurentPoly, r: float, n_theta: int) -> np.ndarray:
    """Values of p on the uniform n_theta-point grid of |z| = r."""
    r = _positive_radius(r)
    n_theta = int(n_theta)
    if n_theta < 4:
        raise DomainError("need at least 4 circle nodes")
    theta = TWO_PI * np.arange(n_theta) / n_theta
    return p.evaluate(r * np.exp(1j * theta))


def trapezoid_circle(values: np.ndarray) -> complex:
    """Periodic trapezoid rule over [0, 2pi) for uniformly sampled values."""
    values = np.asarray(values)
    return values.mean() * TWO_PI


def roots(
    p: LaurentPoly,
    *,
    tol: float = ROOT_RESIDUAL_TOL,
    max_iter: int = 500,
    seed: int = 0,
) -> list[complex]:
    """All highest-lowest roots of p in the punctured plane, multiplicity

    included, via the Aberth simultaneous iteration on the shifted ordinary
    polynomial.  Deterministic for a fixed seed.
    """
    if p.is_zero:
        raise DomainError("the zero expression has no root set")
    deg = p.highest - p.lowest
    if deg == 0:
        return []
    c = np.zeros(deg + 1, complex)
    for n, coeff in p.terms:
        c[n - p.lowest] = coeff
    return _aberth(c, tol=tol, max_iter=max_iter, seed=seed)


def _aberth(c: np.ndarray, *, tol: float, max_iter: int, seed: int) -> list[complex]:
    deg = len(c) - 1
    dc = c[1:] * np.arange(1, deg + 1)
    lead = abs(c[-1])
    # Cauchy bounds for root moduli.
    upper = 1.0 + max(abs(c[:-1])) / lead
    lower = abs(c[0]) / (abs(c[0]) + max(abs(c[1:])))
    radius = math.sqrt(upper * lower)
    rng = np.random.default_rng(seed)
    angles = TWO_PI * (np.arange(deg) + 0.372) / deg
    z = radius * np.exp(1j * angles)
    for _ in range(8):
        z = _aberth_sweep(c, dc, z, max_iter)
        if _roots_accepted(c, z, tol):
            order = np.lexsort((z.imag, z.real, np.abs(z)))
            return [complex(v) for v in z[order]]
        # random perturbation restart on a dilated circle
        jitter = np.exp(1j * TWO_PI * rng.random(deg))
        z = radius * (0.5 + rng.random()) * jitter
    raise ConvergenceError("root iteration exhausted its restart budget")


def _aberth_sweep(c, dc, z, max_iter):
    deg = len(z)
    poly = np.polynomial.polynomial.polyval
    for _ in range(max_iter):
        pv = poly(z, c)
        dpv = poly(z, dc)
        # Nudge exact critical points off zero to keep the correction finite.
        bad = dpv == 0
        if np.any(bad):
            z = z + np.where(bad, 1e-12 * (1.0 + np.abs(z)), 0.0)
            continue
        w = pv / dpv
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        s = (1.0 / diff).sum(axis=1)
        corr = w / (1.0 - w * s)
        z = z - corr
        if np.max(np.abs(corr)) <= 1e-16 * np.max(1.0 + np.abs(z)):
            break
    return z


def _roots_accepted(c, z, tol) -> bool:
    if not np.all(np.isfinite(z)):
        return False
    poly = np.polynomial.polynomial.polyval
    pv = np.abs(poly(z, c))
    powers = np.abs(z[:, None]) ** np.arange(len(c))[None, :]
    scale = powers @ np.abs(c)
    return bool(np.all(pv <= tol * scale))


def winding_on_circle(p: LaurentPoly, r: float, *, root_tol: float = CIRCLE_ROOT_TOL) -> int:
    """Winding number of theta -> p(r e^{i theta}) about 0, computed

    algebraically as (roots strictly inside) + lowest exponent.
    """
    r = _positive_radius(r)
    inside = 0
    for z in roots(p):
        if abs(abs(z) - r) <= root_tol * r:
            raise DegenerateContourError(
                f"root modulus {abs(z):.12g} sits on the circle r = {r:.12g}"
            )
        if abs(z) < r:
            inside += 1
    return inside + p.lowest


def winding_argument_integral(p: LaurentPoly, r: float, n_theta: int = 4096) -> float:
    """Trapezoid estimate of the argument increment / 2pi (cross-check)."""
    r = _positive_radius(r)
    z = r * np.exp(1j * TWO_PI * np.arange(int(n_theta)) / int(n_theta))
    vals = (1j * z * p.derivative().evaluate(z) / p.evaluate(z)).imag
    return float(vals.mean())


# -- serialization ----------------------------------------------------------------


def poly_to_triples(p: LaurentPoly) -> list[list[float]]:
    """JSON form: [[n, Re c_n, Im c_n], ...] with strictly increasing n."""
    return [[n, c.real, c.imag] for n, c in p.terms]


def poly_from_triples(triples) -> LaurentPoly:
    if not isinstance(triples, (list, tuple)):
        raise SchemaError("coefficient list must be an array of [n, re, im] triples")
    items = []
    prev = None
    for entry in triples:
        if not isinstance(entry, (list, tuple)) or len(entry) != 3:
            raise SchemaError(f"bad coefficient triple {entry!r}")
        n, re, im = entry
        if int(n) != n:
            raise SchemaError(f"exponent {n!r} is not an integer")
        if prev is not None and int(n) <= prev:
            raise SchemaError("exponents must be strictly increasing")
        prev = int(n)
        items.append((int(n), complex(float(re), float(im))))
    return LaurentPoly(tuple(items))
