"""Planar domain geometry: boundary curves, radial arc structure, and
circular symmetrization.

A bounded domain D is carried as a positively oriented polyline
approximating its boundary.  The radial structure is the slice family
D(t) = {theta | t e^{i theta} in D}, one disjoint arc union per radius.
Circular symmetrization replaces each slice by the single arc of the
same angular measure centered on the positive real axis.  The measure
is stored on the arc set and carried through symmetrization unchanged,
so slice measures (and hence the polar area integral) are preserved
exactly, not merely up to rounding.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BoundaryAmbiguityError,
    DegenerateContactWarning,
    GeometryError,
    InputError,
    InsufficientSamplingError,
    ScopeError,
)
from .series import PowerSeries

TWO_PI = 2.0 * math.pi

# measures within this of 2*pi count as a full circle
FULL_MEASURE_TOL = 1e-12
# bisection tolerance (segment parameter) for |w| = t crossings
CROSSING_TOL = 1e-12
# crossing angles closer than this collapse to one (tangential contact)
ANGLE_DEDUPE_TOL = 1e-9
# membership probe offsets, as fractions of a candidate arc
PROBE_FRACTIONS = (0.5, 0.382, 0.618, 0.25, 0.75, 0.1, 0.9)
MIN_VERTICES = 16


def chebyshev_nodes(lo: float, hi: float, m: int) -> np.ndarray:
    """m Chebyshev (first kind) nodes on (lo, hi), increasing, strictly
    interior, clustered at the endpoints."""
    k = np.arange(m)
    x = np.cos(np.pi * (2 * k + 1) / (2 * m))
    return 0.5 * (lo + hi) + 0.5 * (hi - lo) * x[::-1]


@dataclass(frozen=True)
class ArcSet:
    """Disjoint arcs on a circle, stored in [0, 2*pi] split at the seam.

    The measure travels as an explicit field so transformations that
    preserve it by definition (symmetrization) can preserve it bitwise.
    When omitted it is the sum of arc widths.
    """

    arcs: tuple[tuple[float, float], ...] = ()
    measure: float | None = None

    def __post_init__(self):
        canonical = []
        for lo, hi in self.arcs:
            lo = float(lo)
            hi = float(hi)
            width = hi - lo
            if not (0.0 < width <= TWO_PI * (1 + 1e-12)):
                raise InputError(f"arc ({lo}, {hi}) has width outside (0, 2*pi]")
            if width >= TWO_PI - FULL_MEASURE_TOL:
                canonical = [(0.0, TWO_PI)]
                break
            lo_mod = lo % TWO_PI
            hi_mod = lo_mod + width
            if hi_mod <= TWO_PI:
                canonical.append((lo_mod, hi_mod))
            else:
                canonical.append((lo_mod, TWO_PI))
                canonical.append((0.0, hi_mod - TWO_PI))
        canonical.sort()
        for (_, hi_a), (lo_b, _) in zip(canonical, canonical[1:]):
            if hi_a > lo_b + 1e-12:
                raise InputError("arcs overlap")
        total = float(sum(hi - lo for lo, hi in canonical))
        measure = total if self.measure is None else float(self.measure)
        if abs(measure - total) > 1e-6 * (1.0 + total):
            raise InputError(
                f"stored measure {measure} inconsistent with arc widths {total}"
            )
        if not (-1e-12 <= measure <= TWO_PI * (1 + 1e-12)):
            raise InputError(f"measure {measure} outside [0, 2*pi]")
        object.__setattr__(self, "arcs", tuple(canonical))
        object.__setattr__(self, "measure", measure)

    @property
    def is_empty(self) -> bool:
        return self.measure <= 0.0

    @property
    def is_full(self) -> bool:
        return self.measure >= TWO_PI - FULL_MEASURE_TOL

    def contains(self, theta: float, tol: float = 0.0) -> bool:
        th = theta % TWO_PI
        return any(lo - tol <= th <= hi + tol for lo, hi in self.arcs)


@dataclass(frozen=True)
class RadialSlice:
    """The arc set D(t) at one radius t."""

    t: float
    arcs: ArcSet

    def __post_init__(self):
        if not (math.isfinite(self.t) and self.t > 0.0):
            raise InputError(f"slice radius must be finite and positive, got {self.t}")


@dataclass(frozen=True)
class RadialProfile:
    """Slices at strictly increasing radii, plus origin membership."""

    slices: tuple[RadialSlice, ...]
    contains_origin: bool = False

    def __post_init__(self):
        object.__setattr__(self, "slices", tuple(self.slices))
        radii = [s.t for s in self.slices]
        if any(a >= b for a, b in zip(radii, radii[1:])):
            raise InputError("slice radii must be strictly increasing")
        if self.contains_origin and self.slices:
            if not self.slices[0].arcs.is_full:
                raise InputError(
                    "profile contains the origin but its innermost slice "
                    "is not a full circle"
                )

    @property
    def radii(self) -> np.ndarray:
        return np.array([s.t for s in self.slices])

    @property
    def measures(self) -> np.ndarray:
        return np.array([s.arcs.measure for s in self.slices])


@dataclass(frozen=True)
class BoundaryCurve:
    """Simple closed positively oriented polyline (first vertex not
    repeated).  Simplicity is checked on construction: no two
    non-adjacent segments may pass within `tolerance` of each other."""

    points: tuple[complex, ...]
    tolerance: float = 0.0

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=complex)
        if len(pts) < MIN_VERTICES:
            raise InputError(f"curve needs at least {MIN_VERTICES} vertices")
        if not np.all(np.isfinite(pts)):
            raise InputError("curve vertices must be finite")
        if pts[0] == pts[-1]:
            raise InputError("closure is implicit; first vertex must not repeat")
        if np.any(pts == np.roll(pts, -1)):
            raise InputError("curve has a zero-length segment")
        tol = self.tolerance
        if tol <= 0.0:
            span = np.ptp(pts.real) + np.ptp(pts.imag)
            tol = 1e-9 * (1.0 + span)
        _check_simple(pts, tol)
        object.__setattr__(self, "points", tuple(complex(p) for p in pts))
        object.__setattr__(self, "tolerance", float(tol))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.points, dtype=complex)


def _check_simple(pts: np.ndarray, tol: float) -> None:
    """All-pairs test that non-adjacent segments neither cross properly
    nor pass within tol.  Chunked so memory stays O(chunk * M)."""
    M = len(pts)
    a = pts
    b = np.roll(pts, -1)
    idx = np.arange(M)
    chunk = max(8, 500_000 // M)

    def cross(u, v):
        return u.real * v.imag - u.imag * v.real

    for start in range(0, M, chunk):
        stop = min(start + chunk, M)
        gap = (idx[None, :] - idx[start:stop, None]) % M
        mask = (gap >= 2) & (gap <= M - 2)
        ai = a[start:stop, None]
        bi = b[start:stop, None]
        aj = a[None, :]
        bj = b[None, :]
        d1 = cross(bj - aj, ai - aj)
        d2 = cross(bj - aj, bi - aj)
        d3 = cross(bi - ai, aj - ai)
        d4 = cross(bi - ai, bj - ai)
        proper = (d1 * d2 < 0) & (d3 * d4 < 0) & mask
        if proper.any():
            i, j = np.argwhere(proper)[0]
            raise GeometryError(
                f"segments {start + i} and {j} intersect: curve is not simple "
                "(non-univalent input?)"
            )
        for p, sa, sb in ((ai, aj, bj), (bi, aj, bj), (aj, ai, bi), (bj, ai, bi)):
            d = sb - sa
            L2 = d.real**2 + d.imag**2
            w = p - sa
            s = np.clip(
                (w.real * d.real + w.imag * d.imag) / np.where(L2 > 0, L2, 1.0),
                0.0,
                1.0,
            )
            dist = np.abs(w - s * d)
            near = (dist < tol) & mask
            if near.any():
                i, j = np.argwhere(near)[0]
                raise GeometryError(
                    f"segments {start + i} and {j} pass within {tol}: curve is "
                    "not simple at this tolerance (non-univalent input?)"
                )


def boundary_from_series(f: PowerSeries, M: int) -> BoundaryCurve:
    """Polyline through f(rho e^{i theta_j}) at M equispaced angles."""
    if M < MIN_VERTICES:
        raise InputError(f"need at least {MIN_VERTICES} boundary samples, got {M}")
    theta = TWO_PI * np.arange(M) / M
    return BoundaryCurve(tuple(f.eval(f.rho * np.exp(1j * theta))))


def _segment_distances(a: np.ndarray, b: np.ndarray, w: complex) -> np.ndarray:
    d = b - a
    L2 = d.real**2 + d.imag**2
    v = w - a
    s = np.clip(
        (v.real * d.real + v.imag * d.imag) / np.where(L2 > 0, L2, 1.0), 0.0, 1.0
    )
    return np.abs(v - s * d)


def winding_number(c: BoundaryCurve, w: complex) -> int:
    """Signed winding of the curve about w, via upward/downward edge
    crossings of the horizontal ray."""
    pts = c.as_array()
    a = pts
    b = np.roll(pts, -1)
    if _segment_distances(a, b, w).min() <= c.tolerance:
        raise BoundaryAmbiguityError(f"point {w} is within tolerance of the curve")
    wy = w.imag
    side = (b.real - a.real) * (wy - a.imag) - (b.imag - a.imag) * (w.real - a.real)
    up = (a.imag <= wy) & (b.imag > wy) & (side > 0)
    down = (b.imag <= wy) & (a.imag > wy) & (side < 0)
    return int(np.count_nonzero(up)) - int(np.count_nonzero(down))


def _is_inside(c: BoundaryCurve, w: complex) -> bool:
    return winding_number(c, w) == 1


def _probe_full_or_empty(c: BoundaryCurve, t: float) -> bool:
    """Membership of the circle |w| = t when it does not cross the curve."""
    golden = 2.399963229728653
    for k in range(10):
        try:
            return _is_inside(c, t * np.exp(1j * golden * k))
        except BoundaryAmbiguityError:
            continue
    raise GeometryError(f"cannot resolve membership of circle t={t} near the curve")


def _crossing_params(a: complex, b: complex, t: float) -> list[float]:
    """Segment parameters s in [0, 1) where |a + s(b-a)| = t.

    q(s) = |a + s d|^2 - t^2 is an upward parabola, so the cases reduce
    to endpoint signs plus one interior-minimum check; each bracket is
    then refined by bisection.
    """
    d = b - a
    qa = a.real * a.real + a.imag * a.imag - t * t
    qb = b.real * b.real + b.imag * b.imag - t * t

    def q(s):
        v = a + s * d
        return v.real * v.real + v.imag * v.imag - t * t

    def bisect(lo, hi):
        qlo = q(lo)
        while hi - lo > CROSSING_TOL:
            mid = 0.5 * (lo + hi)
            qm = q(mid)
            if qm == 0.0:
                return mid
            if (qm > 0) == (qlo > 0):
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    if qa == 0.0:
        # vertex exactly on the circle; the adjacent segment reports the
        # same angle and deduplication collapses them
        return [0.0]
    if qa * qb < 0:
        return [bisect(0.0, 1.0)]
    if qa > 0 and qb > 0:
        L2 = d.real * d.real + d.imag * d.imag
        if L2 == 0.0:
            return []
        s_min = -(a.real * d.real + a.imag * d.imag) / L2
        if 0.0 < s_min < 1.0 and q(s_min) < 0.0:
            return [bisect(0.0, s_min), bisect(s_min, 1.0)]
        return []
    return []


def slice_at_radius(c: BoundaryCurve, t: float) -> ArcSet:
    """The arc set D(t): crossing angles of |w| = t with the boundary
    partition the circle; each candidate arc is kept iff its midpoint
    lies inside the curve."""
    if not (math.isfinite(t) and t > 0.0):
        raise InputError(f"slice radius must be finite and positive, got {t}")
    pts = c.as_array()
    nxt = np.roll(pts, -1)

    # vectorized prefilter: only segments whose parabola q(s) can vanish
    # on [0, 1] are refined in the scalar path
    d = nxt - pts
    qa = pts.real**2 + pts.imag**2 - t * t
    qb = nxt.real**2 + nxt.imag**2 - t * t
    L2 = d.real**2 + d.imag**2
    s_min = -(pts.real * d.real + pts.imag * d.imag) / np.where(L2 > 0, L2, 1.0)
    at_min = pts + s_min * d
    q_min = at_min.real**2 + at_min.imag**2 - t * t
    hit = (qa * qb < 0) | (qa == 0.0)
    hit |= (qa > 0) & (qb > 0) & (s_min > 0) & (s_min < 1) & (q_min < 0)

    angles = []
    for i in np.nonzero(hit)[0]:
        a = complex(pts[i])
        b = complex(nxt[i])
        for s in _crossing_params(a, b, t):
            v = a + s * (b - a)
            angles.append(math.atan2(v.imag, v.real) % TWO_PI)

    if not angles:
        if _probe_full_or_empty(c, t):
            return ArcSet(((0.0, TWO_PI),))
        return ArcSet(())

    angles.sort()
    deduped = [angles[0]]
    contact = False
    for th in angles[1:]:
        if th - deduped[-1] < ANGLE_DEDUPE_TOL:
            contact = True
        else:
            deduped.append(th)
    if len(deduped) > 1 and deduped[0] + TWO_PI - deduped[-1] < ANGLE_DEDUPE_TOL:
        deduped.pop()
        contact = True
    if contact:
        warnings.warn(
            f"tangential contact at t={t}; arc boundaries resolved by membership",
            DegenerateContactWarning,
            stacklevel=2,
        )

    K = len(deduped)
    candidates = [
        (deduped[k], deduped[k + 1] if k + 1 < K else deduped[0] + TWO_PI)
        for k in range(K)
    ]

    def member(lo, hi):
        width = hi - lo
        for frac in PROBE_FRACTIONS:
            try:
                inside = _is_inside(c, t * np.exp(1j * (lo + frac * width)))
            except BoundaryAmbiguityError:
                continue
            if frac != PROBE_FRACTIONS[0]:
                warnings.warn(
                    f"ambiguous arc midpoint at t={t}; used offset probe",
                    DegenerateContactWarning,
                    stacklevel=3,
                )
            return inside
        raise GeometryError(f"cannot resolve arc membership at t={t}")

    kept = [member(lo, hi) for lo, hi in candidates]
    if all(kept):
        return ArcSet(((0.0, TWO_PI),))
    if not any(kept):
        return ArcSet(())

    # merge runs of consecutive kept candidates (tangential contacts
    # produce crossing angles interior to the slice)
    arcs = []
    for (lo, hi), keep in zip(candidates, kept):
        if not keep:
            continue
        if arcs and abs(arcs[-1][1] - lo) < 1e-15:
            arcs[-1] = (arcs[-1][0], hi)
        else:
            arcs.append((lo, hi))
    if len(arcs) > 1 and kept[0] and kept[-1]:
        last_lo, _ = arcs.pop()
        _, first_hi = arcs[0]
        arcs[0] = (last_lo - TWO_PI, first_hi)
    return ArcSet(tuple(arcs))


def radial_profile(c: BoundaryCurve, m: int) -> RadialProfile:
    """Slices on a Chebyshev radius grid spanning the curve's radial
    extent (from 0 when the origin is enclosed)."""
    if m < 16:
        raise InputError(f"need at least 16 slices, got {m}")
    moduli = np.abs(c.as_array())
    try:
        contains_origin = _is_inside(c, 0.0)
    except BoundaryAmbiguityError as exc:
        raise GeometryError("origin lies on the boundary curve") from exc
    lo = 0.0 if contains_origin else float(moduli.min())
    hi = float(moduli.max())
    slices = tuple(
        RadialSlice(float(t), slice_at_radius(c, float(t)))
        for t in chebyshev_nodes(lo, hi, m)
    )
    if contains_origin and not slices[0].arcs.is_full:
        raise InsufficientSamplingError(
            "innermost slice is not a full circle; slice grid too coarse "
            "near the origin"
        )
    return RadialProfile(slices, contains_origin)


def symmetrize(p: RadialProfile) -> RadialProfile:
    """Replace each slice by the arc of equal measure centered on the
    positive real axis.  Full and empty slices pass through unchanged;
    measures are carried bitwise."""
    out = []
    for s in p.slices:
        # below the angular resolution of the seam-split representation
        # the slice passes through unchanged (measure is still exact)
        if s.arcs.measure < 1e-14 or s.arcs.is_full:
            out.append(s)
            continue
        half = 0.5 * s.arcs.measure
        arcs = ((0.0, half), (TWO_PI - half, TWO_PI))
        out.append(RadialSlice(s.t, ArcSet(arcs, measure=s.arcs.measure)))
    return RadialProfile(tuple(out), p.contains_origin)


def _sqrt_endpoint(t_near: float, a_near: float, t_far: float, a_far: float,
                   side: int) -> float | None:
    """Radius where the measure hits zero under the model
    alpha^2 = A^2 |t - t0| (square-root vanishing at a smooth tangency).

    side = -1 extrapolates below t_near, +1 above.  Returns None when
    the two samples do not support the model (e.g. constant alpha)."""
    denom = a_far**2 - a_near**2
    if denom == 0.0:
        return None
    t0 = (a_far**2 * t_near - a_near**2 * t_far) / denom
    if not math.isfinite(t0):
        return None
    if side < 0 and 0.0 < t0 < t_near:
        return t0
    if side > 0 and t0 > t_near:
        return t0
    return None


def _cap_arc(t: float, alpha: float, increasing: bool) -> list[complex]:
    """Interior vertices of the end-cap arc at radius t spanning
    (-alpha/2, alpha/2), excluding both corner endpoints."""
    n = max(2, int(math.ceil(alpha / (TWO_PI / 256))))
    th = np.linspace(-0.5 * alpha, 0.5 * alpha, n + 2)[1:-1]
    if not increasing:
        th = th[::-1]
    return list(t * np.exp(1j * th))


def symmetrized_boundary(p: RadialProfile) -> BoundaryCurve:
    """Trace the boundary of the symmetrized domain: conjugate (lower)
    path outward, then the upper path back, giving positive orientation.
    Axis endpoints come from square-root extrapolation of the measure;
    when that degenerates (sector-like profiles) the end is capped by a
    circular arc through the corner vertices."""
    if p.contains_origin:
        raise ScopeError(
            "domain contains the origin; its symmetrization has a slit "
            "boundary, which is out of scope"
        )
    mask = [not s.arcs.is_empty for s in p.slices]
    if not any(mask):
        raise GeometryError("profile has no slices of positive measure")
    first = mask.index(True)
    last = len(mask) - 1 - mask[::-1].index(True)
    if not all(mask[first : last + 1]):
        raise ScopeError("radial support is disconnected; domain out of scope")
    support = p.slices[first : last + 1]
    if len(support) < 2:
        raise GeometryError("need at least two slices of positive measure")
    if any(s.arcs.is_full for s in support):
        raise ScopeError(
            "full-circle slice inside the support; symmetrization is not a "
            "Jordan domain (slit geometry)"
        )
    t = [s.t for s in support]
    al = [s.arcs.measure for s in support]

    lower = np.array(t) * np.exp(-0.5j * np.array(al))
    upper = np.conj(lower)[::-1]

    points: list[complex] = []
    t_in = _sqrt_endpoint(t[0], al[0], t[1], al[1], side=-1)
    if t_in is not None:
        points.append(complex(t_in, 0.0))
    else:
        points.extend(_cap_arc(t[0], al[0], increasing=False))
    points.extend(lower)
    t_out = _sqrt_endpoint(t[-1], al[-1], t[-2], al[-2], side=+1)
    if t_out is not None:
        points.append(complex(t_out, 0.0))
    else:
        points.extend(_cap_arc(t[-1], al[-1], increasing=True))
    points.extend(upper)
    return BoundaryCurve(tuple(points))


def area_by_profile(p: RadialProfile) -> float:
    """Polar area integral of t * alpha(t) over the slice grid."""
    if len(p.slices) < 2:
        return 0.0
    t = p.radii
    return float(np.trapezoid(t * p.measures, t))


def area_by_shoelace(c: BoundaryCurve) -> float:
    pts = c.as_array()
    nxt = np.roll(pts, -1)
    area = 0.5 * float(np.sum(pts.real * nxt.imag - nxt.real * pts.imag))
    if area <= 0.0:
        raise GeometryError(f"shoelace area {area} <= 0: curve is not "
                            "positively oriented")
    return area


# ---------------------------------------------------------------------------
# delimited-text serialization


def profile_to_csv(p: RadialProfile) -> str:
    """Rows t,alpha,arcs with arcs as lo:hi;lo:hi (radians, 17 digits)."""
    lines = ["t,alpha,arcs"]
    for s in p.slices:
        arcs = ";".join(f"{lo:.17g}:{hi:.17g}" for lo, hi in s.arcs.arcs)
        lines.append(f"{s.t:.17g},{s.arcs.measure:.17g},{arcs}")
    return "\n".join(lines) + "\n"


def profile_from_csv(text: str) -> RadialProfile:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines or lines[0].strip() != "t,alpha,arcs":
        raise InputError("profile CSV must start with header 't,alpha,arcs'")
    slices = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 3:
            raise InputError(f"malformed profile row: {ln!r}")
        try:
            t = float(parts[0])
            alpha = float(parts[1])
            arcs = tuple(
                (float(lo), float(hi))
                for lo, hi in (pair.split(":") for pair in parts[2].split(";") if pair)
            )
        except ValueError as exc:
            raise InputError(f"malformed profile row: {ln!r}") from exc
        slices.append(RadialSlice(t, ArcSet(arcs, measure=alpha)))
    contains_origin = bool(slices) and slices[0].arcs.is_full
    return RadialProfile(tuple(slices), contains_origin)


def curve_to_csv(c: BoundaryCurve) -> str:
    lines = ["re,im"]
    lines.extend(f"{z.real:.17g},{z.imag:.17g}" for z in c.points)
    return "\n".join(lines) + "\n"


def curve_from_csv(text: str, tolerance: float = 0.0) -> BoundaryCurve:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines or lines[0].strip() != "re,im":
        raise InputError("curve CSV must start with header 're,im'")
    points = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 2:
            raise InputError(f"malformed curve row: {ln!r}")
        try:
            points.append(complex(float(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise InputError(f"malformed curve row: {ln!r}") from exc
    return BoundaryCurve(tuple(points), tolerance)
