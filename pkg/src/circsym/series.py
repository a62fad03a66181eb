"""Truncated power series on the unit disk and their coefficient functionals.

A series c0 + c1 z + ... + cN z^N is trusted on |z| <= rho with
rho in (0, 1].  Everything downstream (areas, integral means, the
coefficient checks) is a function of the coefficient moduli, so the
representation is deliberately plain: a tuple of complex numbers.

Coefficient recovery uses the discrete Cauchy integral on a circle
|z| = r, which is a plain DFT of the sampled values followed by the
1/r^n rescaling.  Aliasing is bounded by the tail of the true series
at radius r, so r trades aliasing (small r) against amplification of
sample noise by 1/r^n (large r).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import (
    DomainViolationError,
    InapplicableError,
    InputError,
    InsufficientSamplingError,
)

# |f| below this at a quadrature node sets the underflow flag
UNDERFLOW_THRESHOLD = 1e-300


@dataclass(frozen=True)
class PowerSeries:
    """Truncated Taylor coefficients c0..cN with a trusted radius rho."""

    coefficients: tuple[complex, ...]
    rho: float = 1.0

    def __post_init__(self):
        coeffs = tuple(complex(c) for c in self.coefficients)
        if len(coeffs) < 2:
            raise InputError("series needs degree >= 1 (at least two coefficients)")
        if not all(math.isfinite(c.real) and math.isfinite(c.imag) for c in coeffs):
            raise InputError("series coefficients must be finite")
        if not (0.0 < self.rho <= 1.0):
            raise InputError(f"rho must lie in (0, 1], got {self.rho}")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def eval(self, z):
        """Evaluate the truncation at z (scalar or array) by Horner's rule.

        Raises DomainViolationError when |z| exceeds the trusted radius.
        """
        z = np.asarray(z, dtype=complex)
        if np.any(np.abs(z) > self.rho * (1.0 + 1e-12)):
            raise DomainViolationError(
                f"evaluation point outside trusted radius {self.rho}"
            )
        acc = np.full_like(z, self.coefficients[-1])
        for c in reversed(self.coefficients[:-1]):
            acc = acc * z + c
        return acc if acc.ndim else complex(acc)

    __call__ = eval

    def restrict(self, r: float) -> "PowerSeries":
        """Series of z -> f(r z), trusted on the correspondingly larger disk."""
        if not (0.0 < r <= self.rho):
            raise DomainViolationError(f"restriction radius {r} not in (0, rho]")
        scaled = tuple(
            c * r**n for n, c in enumerate(self.coefficients)
        )
        return PowerSeries(scaled, rho=min(1.0, self.rho / r))

    def to_json_dict(self) -> dict:
        return {
            "rho": self.rho,
            "coefficients": [[c.real, c.imag] for c in self.coefficients],
        }

    @staticmethod
    def from_json_dict(data: dict) -> "PowerSeries":
        try:
            coeffs = tuple(complex(re, im) for re, im in data["coefficients"])
            rho = float(data["rho"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed series JSON: {exc}") from exc
        return PowerSeries(coeffs, rho=rho)


def coefficients_from_samples(
    values: Sequence[complex] | np.ndarray,
    r: float,
    degree: int,
    rho: float = 1.0,
) -> PowerSeries:
    """Recover c0..c_degree from samples on the circle |z| = r.

    The samples must be taken at the M equally spaced angles 2*pi*j/M,
    j = 0..M-1, with M >= 2*degree + 2.
    """
    values = np.asarray(values, dtype=complex)
    M = len(values)
    if M <= 2 * degree + 1:
        raise InsufficientSamplingError(
            f"{M} samples cannot resolve degree {degree}; need >= {2 * degree + 2}"
        )
    if not (0.0 < r < 1.0):
        raise DomainViolationError(f"sampling radius must lie in (0, 1), got {r}")
    coeffs = np.fft.fft(values)[: degree + 1] / M
    coeffs /= r ** np.arange(degree + 1)
    return PowerSeries(tuple(coeffs), rho=rho)


def dirichlet_area(s: PowerSeries, truncation: int | None = None) -> float:
    """pi * sum_{n=1}^{N} n |c_n|^2, the area of the image counted once
    for a univalent series."""
    N = s.degree if truncation is None else truncation
    if N > s.degree:
        raise InputError(f"truncation {N} exceeds series degree {s.degree}")
    mags = np.abs(np.asarray(s.coefficients[: N + 1]))
    return math.pi * float(np.sum(np.arange(N + 1) * mags**2))


class MeanResult(NamedTuple):
    value: float
    underflow: bool


# The catalog is closed: convexity/monotonicity of arbitrary callables
# cannot be validated, so only these three families are accepted.
PHI_NAMES = ("exp", "exp2", "hinge")


def _phi_values(moduli: np.ndarray, phi) -> MeanResult:
    """Apply one catalog function to Phi(log|f|), guarding |f| = 0."""
    underflow = bool(np.any(moduli < UNDERFLOW_THRESHOLD))
    if isinstance(phi, str):
        name, param = phi, None
    else:
        name, param = phi
    if name == "exp":
        vals = moduli
    elif name == "exp2":
        vals = moduli**2
    elif name == "hinge":
        if param is None:
            raise InputError("hinge requires a threshold parameter ('hinge', c)")
        vals = np.zeros_like(moduli)
        pos = moduli > 0
        vals[pos] = np.maximum(np.log(moduli[pos]) - param, 0.0)
    else:
        raise InputError(f"unknown Phi {phi!r}; catalog is {PHI_NAMES}")
    return MeanResult(float(np.mean(vals)) * 2.0 * math.pi, underflow)


def periodic_trapezoid_mean(moduli: np.ndarray, phi) -> MeanResult:
    """Trapezoid rule on the periodic interval for already-sampled |f|.

    On a periodic integrand the trapezoid rule is just the sample mean
    times 2*pi, and converges spectrally for analytic integrands.
    """
    return _phi_values(np.asarray(moduli, dtype=float), phi)


def integral_mean(
    s: PowerSeries, phi, r: float, samples: int | None = None
) -> MeanResult:
    """Quadrature of Phi(log|f(r e^{i theta})|) over the full circle."""
    if not (0.0 < r < s.rho):
        raise DomainViolationError(f"mean radius {r} not in (0, rho)")
    M = samples if samples is not None else max(256, 8 * s.degree)
    theta = 2.0 * np.pi * np.arange(M) / M
    moduli = np.abs(s.eval(r * np.exp(1j * theta)))
    return periodic_trapezoid_mean(moduli, phi)


class LittlewoodRow(NamedTuple):
    n: int
    magnitude: float
    bound: float
    passed: bool


def littlewood_check(s: PowerSeries) -> list[LittlewoodRow]:
    """Check |c_n| <= 4 n |c_0| for n >= 2 (nonvanishing univalent bound)."""
    c0 = abs(s.coefficients[0])
    if c0 == 0.0:
        raise InapplicableError("bound requires c0 != 0")
    rows = []
    for n in range(2, s.degree + 1):
        mag = abs(s.coefficients[n])
        bound = 4.0 * n * c0
        rows.append(LittlewoodRow(n, mag, bound, mag <= bound))
    return rows
