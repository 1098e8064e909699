"""Weierstrass data on annuli: construction, periods, flux, and the immersion.

A data set is a pair of Laurent expressions (the square roots of the two
conjugate combinations of the horizontal coordinates) together with a parity
flag.  Every derived object -- the three coordinate differentials, heights,
the immersion, the conformal factor -- comes from exact coefficient algebra
on that pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .errors import (
    DomainError,
    InadmissibleWindowError,
    MultivaluedDataError,
    ParityUndeterminedError,
    PreconditionError,
    SchemaError,
)
from .laurent import (
    COEFF_REL_TOL,
    TWO_PI,
    AnnulusWindow,
    LaurentPoly,
    antiderivative,
    poly_from_triples,
    poly_to_triples,
    roots,
    winding_on_circle,
)


class Parity(Enum):
    """Even data squares directly; odd data squares after one z shift."""

    EVEN = "even"
    ODD = "odd"


@dataclass(frozen=True)
class Slab:
    """Open horizontal slab h_minus < x3 < h_plus."""

    h_minus: float
    h_plus: float

    def __post_init__(self):
        if not (math.isfinite(self.h_minus) and math.isfinite(self.h_plus)):
            raise DomainError("slab heights must be finite")
        if not self.h_minus < self.h_plus:
            raise DomainError(f"need h_minus < h_plus, got {self.h_minus}, {self.h_plus}")

    @property
    def center(self) -> float:
        return 0.5 * (self.h_minus + self.h_plus)

    @property
    def half_width(self) -> float:
        return 0.5 * (self.h_plus - self.h_minus)

    @property
    def width(self) -> float:
        return self.h_plus - self.h_minus

    def scaled(self, factor: float) -> "Slab":
        """Same center, width multiplied by factor."""
        if not 0 < factor:
            raise DomainError("scale factor must be positive")
        h = self.half_width * factor
        return Slab(self.center - h, self.center + h)


@dataclass(frozen=True)
class FluxVector:
    f1: float
    f2: float
    f3: float


@dataclass(frozen=True)
class PeriodVerdict:
    well_defined: bool
    vertical_flux: bool
    residues: tuple[complex, complex, complex]


@dataclass(frozen=True)
class WeierstrassData:
    """Admissible data on an annulus window, with derived differentials.

    ``f_minus``/``f_plus`` are the squared combinations, ``psi3`` the product
    channel, and ``phi1..phi3`` the coordinate differentials (coefficients of
    dz).  ``height_offset`` shifts the normalized third coordinate; family
    constructors use it to place a waist at a prescribed height.
    """

    g_minus: LaurentPoly
    g_plus: LaurentPoly
    parity: Parity
    window: AnnulusWindow
    f_minus: LaurentPoly
    f_plus: LaurentPoly
    psi3: LaurentPoly
    phi1: LaurentPoly
    phi2: LaurentPoly
    phi3: LaurentPoly
    height_offset: float = 0.0


def from_g_pair(
    g_minus: LaurentPoly,
    g_plus: LaurentPoly,
    parity: Parity,
    window: AnnulusWindow,
    height_offset: float = 0.0,
) -> WeierstrassData:
    """Assemble data from the square-root pair, checking admissibility.

    Admissibility means neither factor vanishes on the closed window, so the
    conformal factor is positive and the Gauss direction is defined there.
    """
    if g_minus.is_zero or g_plus.is_zero:
        raise DomainError("square-root factors must be nonzero")
    offending = [
        abs(z)
        for z in roots(g_minus) + roots(g_plus)
        if window.r_inner <= abs(z) <= window.r_outer
    ]
    if offending:
        raise InadmissibleWindowError(offending)
    f_minus = g_minus * g_minus
    f_plus = g_plus * g_plus
    psi3 = g_minus * g_plus
    if parity is Parity.ODD:
        f_minus = f_minus.shifted(1)
        f_plus = f_plus.shifted(1)
        psi3 = psi3.shifted(1)
    phi1 = (f_minus - f_plus).shifted(-1) * 0.5
    phi2 = (f_minus + f_plus).shifted(-1) * 0.5j
    phi3 = psi3.shifted(-1)
    return WeierstrassData(
        g_minus=g_minus,
        g_plus=g_plus,
        parity=parity,
        window=window,
        f_minus=f_minus,
        f_plus=f_plus,
        psi3=psi3,
        phi1=phi1,
        phi2=phi2,
        phi3=phi3,
        height_offset=float(height_offset),
    )


def from_fg(
    f: LaurentPoly, g_num: LaurentPoly, g_den: LaurentPoly, window: AnnulusWindow
) -> WeierstrassData:
    """Build data from classical (f, g) with g = g_num/g_den rational.

    The two squared combinations are z*f and z*f*g^2; the parity (and the
    square-root pair) is recovered by attempting the exact Laurent square
    root with and without one z shift.
    """
    if f.is_zero or g_num.is_zero or g_den.is_zero:
        raise DomainError("f and g must be nonzero")
    base_minus = f.shifted(1)
    base_plus = (f.shifted(1) * g_num * g_num).divide_exact(g_den * g_den)
    pair = (base_minus.sqrt_exact(), base_plus.sqrt_exact())
    if pair[0] is not None and pair[1] is not None:
        return from_g_pair(pair[0], pair[1], Parity.EVEN, window)
    pair = (base_minus.shifted(-1).sqrt_exact(), base_plus.shifted(-1).sqrt_exact())
    if pair[0] is not None and pair[1] is not None:
        return from_g_pair(pair[0], pair[1], Parity.ODD, window)
    raise ParityUndeterminedError(
        "neither the direct nor the shifted square root of the data exists"
    )


def period_check(data: WeierstrassData) -> PeriodVerdict:
    """Vanishing circle means of the squared combinations + real log term.

    The first condition kills both horizontal periods and the horizontal
    flux; the second makes the third coordinate single-valued.
    """
    scale = max(data.f_minus.max_abs_coeff, data.f_plus.max_abs_coeff)
    tol = COEFF_REL_TOL * scale
    vertical = (
        abs(data.f_minus.coefficient(0)) <= tol and abs(data.f_plus.coefficient(0)) <= tol
    )
    residues = (
        data.phi1.coefficient(-1),
        data.phi2.coefficient(-1),
        data.phi3.coefficient(-1),
    )
    height_scale = max(data.phi3.max_abs_coeff, 1e-300)
    well = vertical and abs(residues[2].imag) <= COEFF_REL_TOL * height_scale
    return PeriodVerdict(well_defined=well, vertical_flux=vertical, residues=residues)


def flux(data: WeierstrassData) -> FluxVector:
    """Flux across a core circle: 2 pi Re of each dz residue."""
    verdict = period_check(data)
    if not verdict.well_defined:
        raise PreconditionError("flux requires period-problem-solving data")
    r1, r2, r3 = verdict.residues
    return FluxVector(TWO_PI * r1.real, TWO_PI * r2.real, TWO_PI * r3.real)


class _Immersion:
    """Cached antiderivatives and normalization shifts for one data set."""

    def __init__(self, data: WeierstrassData):
        self.data = data
        self.parts = [antiderivative(p) for p in (data.phi1, data.phi2, data.phi3)]
        self.scales = [
            max(p.max_abs_coeff, 1e-300) for p in (data.phi1, data.phi2, data.phi3)
        ]
        log_rho = math.log(data.window.geometric_mean)
        # Subtracting the circle mean over the geometric-mean circle keeps the
        # immersion centered; only the constant coefficient and the log term
        # survive averaging.
        self.shifts = [
            part.poly_part.coefficient(0).real + part.log_coefficient.real * log_rho
            for part in self.parts
        ]

    def _check_single_valued(self, idx: int, exc: str):
        part = self.parts[idx]
        if abs(part.log_coefficient.imag) > COEFF_REL_TOL * self.scales[idx]:
            raise MultivaluedDataError(exc)

    def coordinate(self, idx: int, z: np.ndarray) -> np.ndarray:
        part = self.parts[idx]
        val = part.poly_part.evaluate(z).real if not part.poly_part.is_zero else 0.0
        val = val + part.log_coefficient.real * np.log(np.abs(z))
        val = val - self.shifts[idx]
        if idx == 2:
            val = val + self.data.height_offset
        return val

    def height(self, z) -> np.ndarray:
        self._check_single_valued(2, "the vertical log coefficient is not real")
        return self.coordinate(2, np.asarray(z, dtype=complex))

    def point(self, z) -> np.ndarray:
        self._check_single_valued(2, "the vertical log coefficient is not real")
        for idx in (0, 1):
            self._check_single_valued(idx, "a horizontal log coefficient is not real")
        zarr = np.asarray(z, dtype=complex)
        coords = [self.coordinate(idx, zarr) + np.zeros(zarr.shape) for idx in range(3)]
        return np.stack(coords, axis=-1)

    def height_slope(self, z: np.ndarray) -> np.ndarray:
        """d(height)/dr along rays: Re psi3(z) / |z|."""
        return self.data.psi3.evaluate(z).real / np.abs(z)


@lru_cache(maxsize=64)
def _immersion(data: WeierstrassData) -> _Immersion:
    return _Immersion(data)


def _check_point(z):
    arr = np.asarray(z, dtype=complex)
    if arr.size:
        if not np.all(np.isfinite(arr)):
            raise DomainError("evaluation point must be finite")
        if np.any(arr == 0):
            raise DomainError("evaluation point must be nonzero")
    return arr


def height(data: WeierstrassData, z):
    """Third coordinate of the immersion (normalized, offset applied)."""
    arr = _check_point(z)
    val = _immersion(data).height(arr)
    return float(val) if arr.ndim == 0 else val


def immerse(data: WeierstrassData, z):
    """Immersion point(s) in R^3; shape (..., 3)."""
    arr = _check_point(z)
    return _immersion(data).point(arr)


@dataclass(frozen=True)
class MetricFactor:
    lam: float
    mu: float


def metric_factor(data: WeierstrassData, z) -> MetricFactor:
    """Conformal factor against |dz| and against d theta on circles."""
    zc = complex(z)
    _check_point(zc)
    vals = [p.evaluate(zc) for p in (data.phi1, data.phi2, data.phi3)]
    lam = math.sqrt(0.5 * sum(abs(v) ** 2 for v in vals))
    return MetricFactor(lam=lam, mu=abs(zc) * lam)


def metric_lambda_samples(data: WeierstrassData, z: np.ndarray) -> np.ndarray:
    """Vectorized conformal factor for tracing and quadrature."""
    total = np.zeros(np.shape(z), dtype=float)
    for p in (data.phi1, data.phi2, data.phi3):
        total += np.abs(p.evaluate(z)) ** 2
    return np.sqrt(0.5 * total)


def symmetry_check(
    data: WeierstrassData,
    *,
    coeff_tol: float = COEFF_REL_TOL,
    grid_tol: float = 1e-10,
) -> bool:
    """Does inversion through the unit circle act by a horizontal reflection?

    Even data admits an exact coefficient criterion: the plus factor must be
    the conjugate-reflected minus factor.  Otherwise the predicate is checked
    numerically on three circles.
    """
    if data.parity is Parity.EVEN:
        diff = data.g_plus - data.g_minus.conj_reflect()
        scale = max(data.g_plus.max_abs_coeff, data.g_minus.max_abs_coeff)
        return diff.max_abs_coeff <= coeff_tol * scale
    rin, rout = data.window.r_inner, data.window.r_outer
    gm = data.window.geometric_mean
    radii = [math.sqrt(rin * gm), gm, math.sqrt(rout * gm)]
    theta = TWO_PI * np.arange(64) / 64
    psi_scale = max(
        np.max(np.abs(data.psi3.evaluate(r * np.exp(1j * theta)))) for r in radii
    )
    for r in radii:
        z = r * np.exp(1j * theta)
        w = 1.0 / np.conj(z)
        ratio = (
            data.g_plus.evaluate(w)
            * np.conj(data.g_plus.evaluate(z))
            / (data.g_minus.evaluate(w) * np.conj(data.g_minus.evaluate(z)))
        )
        if np.max(np.abs(ratio - 1.0)) > grid_tol * np.max(1.0 + np.abs(ratio)):
            return False
        dev = np.abs(data.psi3.evaluate(w) - np.conj(data.psi3.evaluate(z)))
        if np.max(dev) > grid_tol * psi_scale:
            return False
    return True


def gauss_winding(data: WeierstrassData, r: float) -> int:
    """Signed winding of the Gauss direction on |z| = r.

    Swapping the two square-root factors reverses the sign while describing
    the same surface, so only the class |k| is geometric; the sign convention
    here makes a k-fold catenoid cover come out as +k.
    """
    if not data.window.contains(r):
        raise DomainError(f"radius {r!r} lies outside the data window")
    return winding_on_circle(data.g_minus, r) - winding_on_circle(data.g_plus, r)


def winding_class(data: WeierstrassData, r: float | None = None) -> int:
    """|gauss_winding|: the class under the sign identification k ~ -k."""
    if r is None:
        r = data.window.geometric_mean
    return abs(gauss_winding(data, r))


# -- serialization -------------------------------------------------------------


def data_to_json(data: WeierstrassData) -> dict:
    doc = {
        "parity": data.parity.value,
        "g_minus": poly_to_triples(data.g_minus),
        "g_plus": poly_to_triples(data.g_plus),
        "window": {"r_inner": data.window.r_inner, "r_outer": data.window.r_outer},
    }
    if data.height_offset != 0.0:
        doc["height_offset"] = data.height_offset
    return doc


def data_from_json(doc) -> WeierstrassData:
    if not isinstance(doc, dict):
        raise SchemaError("data document must be a JSON object")
    allowed = {"parity", "g_minus", "g_plus", "window", "height_offset"}
    unknown = set(doc) - allowed
    if unknown:
        raise SchemaError(f"unknown data fields: {sorted(unknown)}")
    missing = {"parity", "g_minus", "g_plus", "window"} - set(doc)
    if missing:
        raise SchemaError(f"missing data fields: {sorted(missing)}")
    try:
        parity = Parity(doc["parity"])
    except ValueError as exc:
        raise SchemaError(f"bad parity {doc['parity']!r}") from exc
    win = doc["window"]
    if not isinstance(win, dict) or set(win) != {"r_inner", "r_outer"}:
        raise SchemaError("window must be an object with r_inner and r_outer")
    window = AnnulusWindow(float(win["r_inner"]), float(win["r_outer"]))
    return from_g_pair(
        poly_from_triples(doc["g_minus"]),
        poly_from_triples(doc["g_plus"]),
        parity,
        window,
        height_offset=float(doc.get("height_offset", 0.0)),
    )
