"""Geometric measurements: circle lengths, level curves, areas, curvature.

The length of an image circle and its second log-derivative come from
coefficient closed forms; level curves, slab areas and total curvature are
obtained by combining exact radial antiderivatives with spectrally accurate
circle quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    DomainError,
    HeightRangeError,
    NonMonotoneRayError,
    NumericalError,
)
from .laurent import TWO_PI, AnnulusWindow, LaurentPoly, roots, trapezoid_circle
from .weierstrass import (
    Parity,
    Slab,
    WeierstrassData,
    _immersion,
    metric_lambda_samples,
    winding_class,
)

DEFAULT_THETA_NODES = 4096
LEVEL_SOLVE_TOL = 1e-12
LEVEL_HEIGHT_TOL = 1e-9
CROSSING_MERGE_TOL = 1e-9


# -- circle length and its convexity -------------------------------------------


def circle_length(data: WeierstrassData, r: float, n_theta: int = DEFAULT_THETA_NODES) -> float:
    """Length of the image of |z| = r: half the circle integral of

    |f_minus| + |f_plus|, by periodic trapezoid quadrature (spectrally exact
    here since both integrands are trigonometric polynomials).
    """
    if not data.window.contains(r):
        raise DomainError(f"radius {r!r} outside the data window")
    theta = TWO_PI * np.arange(int(n_theta)) / int(n_theta)
    z = r * np.exp(1j * theta)
    vals = np.abs(data.f_minus.evaluate(z)) + np.abs(data.f_plus.evaluate(z))
    return float(trapezoid_circle(vals).real) * 0.5


def _dd_rate(n: int, parity: Parity) -> float:
    # d^2/dt^2 of r^(2n) (even) or r^(2n+1) (odd) at t = ln r.
    return float((2 * n) ** 2) if parity is Parity.EVEN else float((2 * n + 1) ** 2)


def circle_length_dd(data: WeierstrassData, r: float) -> float:
    """Closed-form second derivative of circle_length in t = ln r.

    Term-by-term: each squared coefficient rides a pure power of r, so the
    log-derivative just multiplies it by the squared exponent.
    """
    if not data.window.contains(r):
        raise DomainError(f"radius {r!r} outside the data window")
    total = 0.0
    for g in (data.g_minus, data.g_plus):
        for n, c in g.terms:
            weight = r ** (2 * n) if data.parity is Parity.EVEN else r ** (2 * n + 1)
            total += _dd_rate(n, data.parity) * abs(c) ** 2 * weight
    return math.pi * total


def circle_length_dd_fd(
    data: WeierstrassData, r: float, step: float = 1e-3, n_theta: int = DEFAULT_THETA_NODES
) -> float:
    """Central finite-difference cross-check of circle_length_dd."""
    t = math.log(r)
    lm = circle_length(data, math.exp(t - step), n_theta)
    l0 = circle_length(data, r, n_theta)
    lp = circle_length(data, math.exp(t + step), n_theta)
    return (lp - 2.0 * l0 + lm) / step**2


@dataclass(frozen=True)
class CircleLengthProfile:
    """Samples (t, L, L'') along log-spaced circles, t strictly increasing."""

    samples: tuple[tuple[float, float, float], ...]

    def __post_init__(self):
        ts = [s[0] for s in self.samples]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise DomainError("profile abscissae must increase strictly")
        if any(s[1] <= 0 for s in self.samples):
            raise DomainError("circle lengths must be positive")


def profile_radii(window: AnnulusWindow, n_grid: int, inset: float = 0.0) -> np.ndarray:
    """Log-uniform grid of radii spanning the window.

    An even n_grid straddles the central circle without sampling it, which is
    the right default for strict-convexity checks whose defect may vanish at
    isolated radii.
    """
    lo, hi = window.log_span()
    span = hi - lo
    return np.exp(np.linspace(lo + inset * span, hi - inset * span, int(n_grid)))


def length_profile(
    data: WeierstrassData, radii=None, n_grid: int = 32, n_theta: int = DEFAULT_THETA_NODES
) -> CircleLengthProfile:
    if radii is None:
        radii = profile_radii(data.window, n_grid, inset=1e-3)
    samples = tuple(
        (math.log(r), circle_length(data, r, n_theta), circle_length_dd(data, r))
        for r in radii
    )
    return CircleLengthProfile(samples)


@dataclass(frozen=True)
class ConvexityReport:
    """Extremes of L'' - c L over a grid for c in {k^2, 2, 4}."""

    winding: int
    profile: CircleLengthProfile
    defect_min: dict
    defect_max: dict

    def defect_bounds(self, key: str) -> tuple[float, float]:
        return self.defect_min[key], self.defect_max[key]


def convexity_report(
    data: WeierstrassData, radii=None, n_grid: int = 32, n_theta: int = DEFAULT_THETA_NODES
) -> ConvexityReport:
    k = winding_class(data)
    profile = length_profile(data, radii=radii, n_grid=n_grid, n_theta=n_theta)
    factors = {"ksq": float(k * k), "2": 2.0, "4": 4.0}
    dmin, dmax = {}, {}
    for key, c in factors.items():
        defects = [ldd - c * l for (_, l, ldd) in profile.samples]
        dmin[key] = min(defects)
        dmax[key] = max(defects)
    return ConvexityReport(winding=k, profile=profile, defect_min=dmin, defect_max=dmax)


# -- level curves ----------------------------------------------------------------


def _monotone_direction(data: WeierstrassData, thetas: np.ndarray, n_probe: int = 32) -> float:
    """Verify d(height)/dr keeps one sign on every ray; return that sign."""
    imm = _immersion(data)
    lo, hi = data.window.log_span()
    tprobe = np.linspace(lo, hi, n_probe)
    z = np.exp(tprobe)[:, None] * np.exp(1j * thetas)[None, :]
    slopes = imm.height_slope(z)
    if np.all(slopes > 0):
        return 1.0
    if np.all(slopes < 0):
        return -1.0
    raise NonMonotoneRayError("height is not monotone along some ray of the window")


def level_radii(
    data: WeierstrassData,
    h: float,
    thetas: np.ndarray,
    *,
    rel_tol: float = LEVEL_SOLVE_TOL,
) -> np.ndarray:
    """Radii r(theta) with height(r e^{i theta}) = h, one per ray.

    Bisection in log r brackets the root; a few Newton steps polish it to
    rel_tol.  Raises if the height is not attained or a ray is not monotone.
    """
    if not math.isfinite(h):
        raise DomainError("level height must be finite")
    thetas = np.asarray(thetas, dtype=float)
    imm = _immersion(data)
    sign = _monotone_direction(data, thetas)
    lo, hi = data.window.log_span()
    e_in = np.exp(lo + 1j * thetas)
    e_out = np.exp(hi + 1j * thetas)
    f_in = sign * (imm.height(e_in) - h)
    f_out = sign * (imm.height(e_out) - h)
    if np.any(f_in > 0) or np.any(f_out < 0):
        raise HeightRangeError(f"height {h!r} is not attained on every ray")
    tlo = np.full(thetas.shape, lo)
    thi = np.full(thetas.shape, hi)
    for _ in range(48):
        mid = 0.5 * (tlo + thi)
        fm = sign * (imm.height(np.exp(mid + 1j * thetas)) - h)
        takes_hi = fm > 0
        thi = np.where(takes_hi, mid, thi)
        tlo = np.where(takes_hi, tlo, mid)
    r = np.exp(0.5 * (tlo + thi))
    for _ in range(4):
        z = r * np.exp(1j * thetas)
        resid = imm.height(z) - h
        slope = imm.height_slope(z)
        step = resid / slope
        r = np.clip(r - step, data.window.r_inner, data.window.r_outer)
    z = r * np.exp(1j * thetas)
    if np.max(np.abs(imm.height(z) - h)) > LEVEL_HEIGHT_TOL * max(1.0, abs(h)):
        raise NumericalError("level solve failed to reach its height tolerance")
    return r


def level_radius(data: WeierstrassData, h: float, theta: float) -> float:
    """Scalar radius where the ray arg z = theta meets the level x3 = h."""
    return float(level_radii(data, h, np.array([float(theta)]))[0])


def _periodic_derivative(values: np.ndarray) -> np.ndarray:
    """Spectral d/d theta of a uniformly sampled periodic signal."""
    n = len(values)
    spec = np.fft.rfft(values)
    spec *= 1j * np.arange(spec.size)
    if n % 2 == 0:
        spec[-1] = 0.0
    return np.fft.irfft(spec, n)


@dataclass(frozen=True, eq=False)
class LevelCurve:
    """A traced level: uniform theta nodes, solved radii, immersion points.

    ``multiplicity`` is the number of identical traversals the node sequence
    makes; crossings are counted on one traversal, so a k-fold cover of an
    embedded circle reports multiplicity k and zero self-intersections.
    """

    h: float
    theta: np.ndarray
    r: np.ndarray
    points: np.ndarray  # shape (n, 3)
    length: float
    self_intersections: int
    crossing_points: tuple[tuple[float, float], ...]
    multiplicity: int = 1

    @property
    def nodes(self) -> list[tuple[float, float, float, float, float]]:
        return [
            (float(t), float(rr), float(p[0]), float(p[1]), float(p[2]))
            for t, rr, p in zip(self.theta, self.r, self.points)
        ]


def trace_level(data: WeierstrassData, h: float, n_theta: int = 512) -> LevelCurve:
    """Trace the level x3 = h through the annulus.

    The curve length integrates the conformal factor against the exact
    parameter speed sqrt(r'^2 + r^2); r' comes from spectral differentiation
    of the solved radii.  Planar self-crossings are counted transversally.
    """
    n_theta = int(n_theta)
    if n_theta < 16:
        raise DomainError("tracing needs at least 16 nodes")
    thetas = TWO_PI * np.arange(n_theta) / n_theta
    radii = level_radii(data, h, thetas)
    z = radii * np.exp(1j * thetas)
    pts = _immersion(data).point(z)
    if np.max(np.abs(pts[:, 2] - h)) > LEVEL_HEIGHT_TOL * max(1.0, abs(h)):
        raise NumericalError("traced nodes drifted off the level")
    dr = _periodic_derivative(radii)
    speed = np.sqrt(dr**2 + radii**2)
    lam = metric_lambda_samples(data, z)
    length = float(trapezoid_circle(lam * speed).real)
    mult = traversal_multiplicity(pts)
    count, pts2d = planar_self_intersections(pts[: len(pts) // mult, :2])
    return LevelCurve(
        h=float(h),
        theta=thetas,
        r=radii,
        points=pts,
        length=length,
        self_intersections=count,
        crossing_points=tuple(pts2d),
        multiplicity=mult,
    )


def planar_self_intersections(
    xy: np.ndarray, merge_tol: float = CROSSING_MERGE_TOL
) -> tuple[int, list[tuple[float, float]]]:
    """Count transversal self-crossings of a closed polyline.

    Non-adjacent segment pairs are prefiltered by bounding boxes, tested with
    strict orientation signs, and the crossing points are merged within
    merge_tol so a crossing shared by neighbouring segment pairs counts once.
    """
    p = np.asarray(xy, dtype=float)
    n = len(p)
    q = np.roll(p, -1, axis=0)
    lo = np.minimum(p, q)
    hi = np.maximum(p, q)
    i_idx, j_idx = np.triu_indices(n, k=2)
    keep = ~((i_idx == 0) & (j_idx == n - 1))  # wrap-around adjacency
    i_idx, j_idx = i_idx[keep], j_idx[keep]
    overlap = np.all(
        (lo[i_idx] <= hi[j_idx] + merge_tol) & (lo[j_idx] <= hi[i_idx] + merge_tol), axis=1
    )
    i_idx, j_idx = i_idx[overlap], j_idx[overlap]
    def cross2(u, v):
        return u[0] * v[1] - u[1] * v[0]

    points: list[tuple[float, float]] = []
    for i, j in zip(i_idx, j_idx):
        a, b, c, d = p[i], q[i], p[j], q[j]
        ab = b - a
        cd = d - c
        d1 = cross2(ab, c - a)
        d2 = cross2(ab, d - a)
        d3 = cross2(cd, a - c)
        d4 = cross2(cd, b - c)
        if d1 * d2 < 0 and d3 * d4 < 0:
            s = d1 / (d1 - d2)
            points.append((c[0] + s * cd[0], c[1] + s * cd[1]))
    merged: list[tuple[float, float]] = []
    for pt in points:
        if all(math.hypot(pt[0] - m[0], pt[1] - m[1]) > merge_tol for m in merged):
            merged.append((float(pt[0]), float(pt[1])))
    return len(merged), merged


def traversal_multiplicity(points: np.ndarray, tol: float = 1e-9) -> int:
    """Largest m such that the closed node sequence repeats m times."""
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    scale = max(float(np.max(np.abs(pts))), 1.0)
    for m in range(n, 1, -1):
        if n % m:
            continue
        if np.max(np.abs(pts - np.roll(pts, n // m, axis=0))) <= tol * scale:
            return m
    return 1


# -- slab areas -------------------------------------------------------------------


@lru_cache(maxsize=64)
def _area_terms(data: WeierstrassData) -> tuple[tuple[int, int, complex], ...]:
    """Pairs for the radial antiderivative of (1/2) sum |phi_i|^2 * r.

    |phi(r e^{i a})|^2 expands into c_m conj(c_n) r^{m+n} e^{i(m-n)a}; with the
    extra factor r, each pair integrates in r to r^{m+n+2}/(m+n+2) except
    m+n = -2, which integrates to log r.  Keys are (m+n+2, m-n).
    """
    acc: dict[tuple[int, int], complex] = {}
    for phi in (data.phi1, data.phi2, data.phi3):
        for m, cm in phi.terms:
            for n, cn in phi.terms:
                key = (m + n + 2, m - n)
                acc[key] = acc.get(key, 0j) + 0.5 * cm * cn.conjugate()
    return tuple((s, d, w) for (s, d), w in sorted(acc.items()))


def _area_antiderivative(data: WeierstrassData, thetas: np.ndarray, r: np.ndarray) -> np.ndarray:
    total = np.zeros(thetas.shape, dtype=complex)
    logr = np.log(r)
    for s, d, w in _area_terms(data):
        radial = logr if s == 0 else (r**s) / s
        phase = np.exp(1j * d * thetas) if d else 1.0
        total = total + w * phase * radial
    return total.real


def slab_area(
    data: WeierstrassData, slab: Slab, n_theta: int = DEFAULT_THETA_NODES
) -> float:
    """Area of the piece of surface between the two slab levels.

    Radial integration is exact (antiderivative per ray between the solved
    level radii); only the outer theta integral is quadrature.
    """
    thetas = TWO_PI * np.arange(int(n_theta)) / int(n_theta)
    r_a = level_radii(data, slab.h_minus, thetas)
    r_b = level_radii(data, slab.h_plus, thetas)
    r_lo = np.minimum(r_a, r_b)
    r_hi = np.maximum(r_a, r_b)
    vals = _area_antiderivative(data, thetas, r_hi) - _area_antiderivative(data, thetas, r_lo)
    return float(trapezoid_circle(vals).real)


# -- total curvature ---------------------------------------------------------------


@lru_cache(maxsize=8)
def _gl_nodes(n: int):
    return np.polynomial.legendre.leggauss(n)


def total_curvature(
    data: WeierstrassData,
    window: AnnulusWindow | None = None,
    n_theta: int = DEFAULT_THETA_NODES,
    tol: float = 1e-10,
    max_depth: int = 24,
) -> float:
    """Integral of the Gauss curvature over the window (a negative number).

    The integrand is the squared spherical derivative of the Gauss direction;
    written with the numerator W = N'D - ND' and denominator |N|^2 + |D|^2 it
    stays bounded at zeros and poles.  Radial integration is adaptive
    Gauss-Legendre in log r; circles use the periodic trapezoid rule.
    """
    window = window or data.window
    num = data.g_plus
    den = data.g_minus
    wpoly = num.derivative() * den - num * den.derivative()
    thetas = TWO_PI * np.arange(int(n_theta)) / int(n_theta)
    phases = np.exp(1j * thetas)

    def density(t: float) -> float:
        z = math.exp(t) * phases
        w2 = np.abs(wpoly.evaluate(z)) ** 2
        s = np.abs(num.evaluate(z)) ** 2 + np.abs(den.evaluate(z)) ** 2
        return float((4.0 * w2 / s**2).mean()) * TWO_PI * math.exp(2.0 * t)

    lo, hi = window.log_span()
    # Seed panel boundaries at the root moduli, where the density peaks.
    cuts = {lo, hi}
    for g in (num, den):
        for z in roots(g):
            t = math.log(abs(z))
            if lo < t < hi:
                cuts.add(t)
    edges = sorted(cuts)
    nodes, weights = _gl_nodes(15)

    def panel(a: float, b: float) -> float:
        x = 0.5 * (b - a) * nodes + 0.5 * (a + b)
        return 0.5 * (b - a) * sum(w * density(t) for w, t in zip(weights, x))

    coarse = sum(panel(a, b) for a, b in zip(edges, edges[1:]))
    budget = tol * max(abs(coarse), 1.0)

    def refine(a: float, b: float, whole: float, local_tol: float, depth: int) -> float:
        m = 0.5 * (a + b)
        left = panel(a, m)
        right = panel(m, b)
        if abs(left + right - whole) <= local_tol or depth >= max_depth:
            return left + right
        return refine(a, m, left, 0.5 * local_tol, depth + 1) + refine(
            m, b, right, 0.5 * local_tol, depth + 1
        )

    total = 0.0
    for a, b in zip(edges, edges[1:]):
        share = budget * (b - a) / (hi - lo)
        total += refine(a, b, panel(a, b), max(share, 1e-16), 0)
    return -total


# -- catenoid references ------------------------------------------------------------


@dataclass(frozen=True)
class CatenoidParams:
    """A k-fold catenoid cover pinned by its vertical flux and waist height."""

    f3: float
    center: float
    cover: int = 1

    def __post_init__(self):
        if not (math.isfinite(self.f3) and self.f3 > 0):
            raise DomainError("vertical flux must be positive")
        if int(self.cover) < 1 or int(self.cover) != self.cover:
            raise DomainError("cover must be a positive integer")
        if not math.isfinite(self.center):
            raise DomainError("center must be finite")

    @property
    def rate(self) -> float:
        # growth rate of the level length in h
        return TWO_PI * self.cover / self.f3

    @property
    def neck_radius(self) -> float:
        # neck radius of the underlying single catenoid
        return self.f3 / (TWO_PI * self.cover)


def catenoid_level_length(params: CatenoidParams, h: float) -> float:
    """Level length f3 * cosh(rate * (h - center)) of the cover."""
    return params.f3 * math.cosh(params.rate * (float(h) - params.center))


def catenoid_area(params: CatenoidParams, slab: Slab) -> float:
    """Closed-form slab area of the cover (integral of length^2 / f3)."""

    def anti(h: float) -> float:
        u = params.rate * (h - params.center)
        return 0.5 * params.f3 * (h - params.center) + params.f3 * math.sinh(2.0 * u) / (
            4.0 * params.rate
        )

    return anti(slab.h_plus) - anti(slab.h_minus)


def marginal_waist_ratio(tol: float = 1e-12) -> float:
    """The root of coth(u) = u on [1, 2], by bisection."""
    lo, hi = 1.0, 2.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid - 1.0 / math.tanh(mid) > 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def marginally_stable_waist(slab: Slab) -> CatenoidParams:
    """The catenoid whose profile is tangent to the slab-width cone.

    Recentred internally: the returned waist sits at the slab center, with
    neck radius half-width / u*, where u* solves coth(u) = u.
    """
    ustar = marginal_waist_ratio()
    a = ustar / slab.half_width
    return CatenoidParams(f3=TWO_PI / a, center=slab.center, cover=1)


def waist_height(
    data: WeierstrassData,
    slab: Slab,
    n_coarse: int = 17,
    n_theta: int = 256,
    tol: float = 1e-8,
) -> tuple[float, float]:
    """Height minimizing the traced level length, by scan + golden section.

    Returns the minimizing height and the length there.
    """
    heights = np.linspace(slab.h_minus, slab.h_plus, int(n_coarse))
    lengths = [trace_level(data, h, n_theta).length for h in heights]
    i = int(np.argmin(lengths))
    lo = heights[max(i - 1, 0)]
    hi = heights[min(i + 1, len(heights) - 1)]
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - phi * (b - a)
    d = a + phi * (b - a)
    fc = trace_level(data, c, n_theta).length
    fd = trace_level(data, d, n_theta).length
    while b - a > tol * max(1.0, abs(a) + abs(b)):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = trace_level(data, c, n_theta).length
        else:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = trace_level(data, d, n_theta).length
    h_best = 0.5 * (a + b)
    return h_best, trace_level(data, h_best, n_theta).length
