"""Numerical Riemann map onto a Jordan domain via the geodesic zipper.

The map is built by composing elementary slit maps.  An opening map
sends the complement of the first boundary edge to the upper half-plane
H; each subsequent vertex is lifted through the current composition and
the elementary map z -> sqrt(m(z)^2 + h^2) zips the geodesic from 0 to
its image flat onto the real axis.  After all vertices are processed a
Moebius map mu followed by +/- mu^2 straightens the two right-angle
corners left at the base points, and a Cayley transform takes H to the
unit disk.  Composition with a disk automorphism and a rotation then
pins F(0) to the target on the positive axis with F'(0) > 0.

Each square root carries an explicit branch rule: interior points take
the root with nonnegative imaginary part, points on the real axis stay
real with the sign of Re m.  Intermediate images are monitored; leaving
the closed upper half-plane beyond tolerance raises a branch error with
the offending step index.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    BranchError,
    BoundaryAmbiguityError,
    DomainViolationError,
    GeometryError,
    InputError,
    ScopeError,
)
from .geometry import BoundaryCurve, area_by_shoelace, winding_number
from .series import PowerSeries, coefficients_from_samples

# relative Im threshold separating interior points from the real axis
INTERIOR_IM_TOL = 1e-13
# |Re a| below this times |a| counts as a vertical slit
VERTICAL_TOL = 1e-14
# intermediate images may dip below the axis by at most this (relative)
BRANCH_TOL = 1e-8
# conjugation-symmetry tolerance for the input boundary, times its span
SYMMETRY_TOL = 1e-6
# finite-difference step for the normalization derivative
DERIV_STEP = 1e-6


@dataclass(frozen=True)
class ElementaryStep:
    """One zipper step: pull the slit from 0 to `anchor` flat.

    The slit geodesic is the circular arc through 0 and anchor meeting
    the real axis orthogonally at `foot` (None when the slit is the
    vertical segment, in which case h = Im anchor); h is the slit
    height after the Moebius m(z) = z / (1 - z/foot)."""

    anchor: complex
    foot: float | None
    h: float

    @classmethod
    def from_anchor(cls, a: complex) -> "ElementaryStep":
        if not (a.imag > 0.0):
            raise GeometryError(f"step anchor {a} not in the open upper half-plane")
        if abs(a.real) < VERTICAL_TOL * abs(a):
            return cls(a, None, a.imag)
        mod2 = a.real * a.real + a.imag * a.imag
        return cls(a, mod2 / a.real, mod2 / a.imag)

    def forward(self, z):
        """H minus the slit -> H."""
        z = np.asarray(z, dtype=complex)
        m = z if self.foot is None else z / (1.0 - z / self.foot)
        r = np.sqrt(m * m + self.h * self.h)
        interior = m.imag > INTERIOR_IM_TOL * (1.0 + np.abs(m))
        upper = np.where(r.imag >= 0, r, -r)
        on_axis = np.sign(m.real) * r.real
        return np.where(interior, upper, on_axis + 0j)

    def inverse(self, y):
        """H -> H minus the slit."""
        y = np.asarray(y, dtype=complex)
        r = np.sqrt(y * y - self.h * self.h)
        interior = y.imag > INTERIOR_IM_TOL * (1.0 + np.abs(y))
        upper = np.where(r.imag >= 0, r, -r)
        yr = y.real
        on_axis = np.where(
            np.abs(yr) >= self.h,
            np.sign(yr) * np.abs(r.real) + 0j,
            1j * np.sqrt(np.maximum(self.h * self.h - yr * yr, 0.0)),
        )
        w = np.where(interior, upper, on_axis)
        if self.foot is None:
            return w
        return w * self.foot / (self.foot + w)


@dataclass(frozen=True)
class ZipperMap:
    """Composed, normalized Riemann map of the unit disk onto the
    region bounded by the input curve."""

    z0: complex
    z1: complex
    steps: tuple[ElementaryStep, ...]
    zeta: float
    cayley: complex
    a_star: complex
    lam: float
    target: float

    @property
    def closing_sign(self) -> float:
        return -1.0 if self.zeta > 0 else 1.0

    def to_json_dict(self) -> dict:
        return {
            "initial": [[self.z0.real, self.z0.imag], [self.z1.real, self.z1.imag]],
            "steps": [
                [s.anchor.real, s.anchor.imag, s.h, s.foot] for s in self.steps
            ],
            "closing": {
                "zeta": self.zeta,
                "sign": self.closing_sign,
                "cayley": [self.cayley.real, self.cayley.imag],
            },
            "normalization": {
                "a_star": [self.a_star.real, self.a_star.imag],
                "lambda": self.lam,
                "target": self.target,
            },
        }

    @staticmethod
    def from_json_dict(data: dict) -> "ZipperMap":
        try:
            (x0, y0), (x1, y1) = data["initial"]
            steps = tuple(
                ElementaryStep(
                    complex(re, im), None if c is None else float(c), float(h)
                )
                for re, im, h, c in data["steps"]
            )
            closing = data["closing"]
            norm = data["normalization"]
            return ZipperMap(
                z0=complex(x0, y0),
                z1=complex(x1, y1),
                steps=steps,
                zeta=float(closing["zeta"]),
                cayley=complex(*closing["cayley"]),
                a_star=complex(*norm["a_star"]),
                lam=float(norm["lambda"]),
                target=float(norm["target"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed map JSON: {exc}") from exc


def _open_map(w, z0, z1):
    """Complement of the edge (z0, z1) -> H, sending z0 to infinity and
    z1 to 0.  The factor i turns the principal right half-plane image
    of the bare square root into the upper half-plane."""
    return 1j * np.sqrt((w - z1) / (w - z0))


def _chain_to_disk(zm: ZipperMap, w) -> np.ndarray:
    """Domain -> unnormalized disk coordinate (opening, zips, closing,
    Cayley), with per-step branch monitoring."""
    z = _open_map(np.asarray(w, dtype=complex), zm.z0, zm.z1)
    for k, step in enumerate(zm.steps):
        z = step.forward(z)
        if np.any(z.imag < -BRANCH_TOL * (1.0 + np.abs(z))):
            raise BranchError(
                f"image left the upper half-plane at step {k}", step=k
            )
    mu = z / (1.0 - z / zm.zeta)
    y = zm.closing_sign * mu * mu
    return (y - zm.cayley) / (y - np.conj(zm.cayley))


def _chain_to_domain(zm: ZipperMap, u) -> np.ndarray:
    """Unnormalized disk coordinate -> domain (chain inverse)."""
    u = np.asarray(u, dtype=complex)
    y = (zm.cayley - u * np.conj(zm.cayley)) / (1.0 - u)
    if zm.zeta > 0:
        mu = -np.sqrt(-y)
    else:
        mu = np.sqrt(y)
    z = mu * zm.zeta / (zm.zeta + mu)
    for k in range(len(zm.steps) - 1, -1, -1):
        z = zm.steps[k].inverse(z)
        if np.any(z.imag < -BRANCH_TOL * (1.0 + np.abs(z))):
            raise BranchError(
                f"image left the upper half-plane at step {k}", step=k
            )
    q = -z * z
    return (zm.z1 - zm.z0 * q) / (1.0 - q)


def _normalized_to_disk(zm: ZipperMap, z):
    u = np.exp(1j * zm.lam) * np.asarray(z, dtype=complex)
    return (u + zm.a_star) / (1.0 + np.conj(zm.a_star) * u)


def eval_map(zm: ZipperMap, z):
    """F(z) for z in the closed unit disk (scalar or array)."""
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) > 1.0 + 1e-12):
        raise DomainViolationError("evaluation point outside the closed unit disk")
    w = _chain_to_domain(zm, _normalized_to_disk(zm, z))
    return w if w.ndim else complex(w)


def eval_inverse(zm: ZipperMap, w):
    """F^{-1}(w) for w strictly inside the boundary curve."""
    w = np.asarray(w, dtype=complex)
    u = _chain_to_disk(zm, w)
    z = np.exp(-1j * zm.lam) * (u - zm.a_star) / (1.0 - np.conj(zm.a_star) * u)
    scale = 1.0 + abs(zm.target)
    if np.any(np.abs(z) > 1.0 + 1e-9):
        raise DomainViolationError("point maps outside the closed unit disk")
    back = _chain_to_domain(zm, _normalized_to_disk(zm, z))
    if np.any(np.abs(back - w) > 1e-6 * scale):
        raise DomainViolationError(
            "round trip failed; point is outside or too close to the boundary"
        )
    return z if z.ndim else complex(z)


def _check_symmetry(pts: np.ndarray) -> None:
    """Every conjugated vertex must have a vertex within tolerance."""
    span = np.ptp(pts.real) + np.ptp(pts.imag)
    tol = SYMMETRY_TOL * (1.0 + span)
    conj = np.conj(pts)
    chunk = max(8, 200_000 // len(pts))
    for start in range(0, len(pts), chunk):
        gaps = np.abs(conj[start : start + chunk, None] - pts[None, :]).min(axis=1)
        if np.any(gaps > tol):
            raise ScopeError(
                "boundary is not symmetric about the real axis within tolerance"
            )


def build_map(boundary: BoundaryCurve, target: float) -> ZipperMap:
    """Zip the boundary into a normalized disk map with F(0) = target
    and F'(0) > 0."""
    target = float(target)
    if not (math.isfinite(target) and target > 0.0):
        raise InputError(f"normalization target must be positive, got {target}")
    pts = boundary.as_array()
    area_by_shoelace(boundary)  # raises GeometryError when misoriented
    _check_symmetry(pts)
    try:
        if winding_number(boundary, complex(target, 0.0)) != 1:
            raise ScopeError(f"normalization target {target} is not inside the curve")
    except BoundaryAmbiguityError as exc:
        raise ScopeError(
            f"normalization target {target} is too close to the boundary"
        ) from exc

    z0, z1 = complex(pts[0]), complex(pts[1])
    vals = _open_map(np.concatenate([pts[2:], [complex(target, 0.0)]]), z0, z1)
    steps: list[ElementaryStep] = []
    zeta = math.inf  # image of z0, infinity until the first slanted slit
    for k in range(len(pts) - 2):
        a = complex(vals[k])
        if not (a.imag > 0.0):
            raise GeometryError(
                f"vertex {k + 2} lifted to {a}, outside the open upper "
                "half-plane (non-simple or misoriented boundary?)"
            )
        step = ElementaryStep.from_anchor(a)
        steps.append(step)
        if math.isinf(zeta):
            if step.foot is not None:
                zeta = math.copysign(math.hypot(step.foot, step.h), -step.foot)
        else:
            zeta = float(np.real(step.forward(np.array([zeta + 0j]))[0]))
        vals = step.forward(vals)
    if math.isinf(zeta) or abs(zeta) < 1e-300:
        raise GeometryError("closing transform is degenerate (zeta unusable)")

    # the tracked magnitude of zeta is usable but its sign is not: near
    # the seam the tracking passes within roundoff of the last steps'
    # singularities and can land on the wrong side.  Exactly one closing
    # branch +-mu^2 sends the interior target into the upper half-plane;
    # pick it, and give zeta the sign the eval paths infer the branch
    # from (zeta > 0 <-> -mu^2).
    v = complex(vals[-1])
    mu_t = v / (1.0 - v / zeta)
    if mu_t.real == 0.0:
        raise GeometryError("interior target lies on the closing crease")
    zeta = math.copysign(abs(zeta), -mu_t.real)
    sign = -1.0 if zeta > 0 else 1.0
    mu = vals / (1.0 - vals / zeta)
    closed = sign * mu * mu
    cayley = complex(closed[-1])
    if not (cayley.imag > 0.0):
        raise GeometryError(
            f"interior target lifted to {cayley}, not in the upper half-plane"
        )

    zm = ZipperMap(
        z0=z0, z1=z1, steps=tuple(steps), zeta=zeta, cayley=cayley,
        a_star=0j, lam=0.0, target=target,
    )
    return _normalize(zm, target)


def _normalize(zm: ZipperMap, target: float) -> ZipperMap:
    """Recompute the disk automorphism and rotation for a (new) target
    without rebuilding the step chain."""
    bare = ZipperMap(
        z0=zm.z0, z1=zm.z1, steps=zm.steps, zeta=zm.zeta, cayley=zm.cayley,
        a_star=0j, lam=0.0, target=target,
    )
    a_star = complex(_chain_to_disk(bare, np.array([target + 0j]))[0])
    if abs(a_star) >= 1.0:
        raise ScopeError(f"normalization target {target} has no disk preimage")
    d = (
        _chain_to_domain(bare, np.array([a_star + DERIV_STEP]))[0]
        - _chain_to_domain(bare, np.array([a_star - DERIV_STEP]))[0]
    ) / (2.0 * DERIV_STEP)
    lam = -cmath.phase(complex(d))
    return ZipperMap(
        z0=zm.z0, z1=zm.z1, steps=zm.steps, zeta=zm.zeta, cayley=zm.cayley,
        a_star=a_star, lam=lam, target=target,
    )


def with_target(zm: ZipperMap, target: float) -> ZipperMap:
    """Re-normalize an existing map to a new interior target on the
    positive axis."""
    target = float(target)
    if not (math.isfinite(target) and target > 0.0):
        raise InputError(f"normalization target must be positive, got {target}")
    return _normalize(zm, target)


def series_of_map(zm: ZipperMap, r: float, M: int, N: int) -> PowerSeries:
    """Taylor coefficients A_0..A_N of the normalized map, via the
    discrete Cauchy integral on |z| = r."""
    if not (0.0 < r < 1.0):
        raise DomainViolationError(f"extraction radius must lie in (0, 1), got {r}")
    theta = 2.0 * np.pi * np.arange(M) / M
    values = eval_map(zm, r * np.exp(1j * theta))
    return coefficients_from_samples(values, r, N)
