"""Parameterized corpus families for sweeps and acceptance runs.

Every member is univalent on the closed unit disk with an image that
neither contains nor touches the origin, which keeps the whole corpus
inside the supported domain class.
"""

from __future__ import annotations

import cmath

from .errors import InputError
from .series import PowerSeries


def quadratic(beta: float) -> PowerSeries:
    """4 + z + 0.4 e^{i beta} z^2.

    Univalent on |z| <= 1: f(z1) = f(z2) forces 1 + 0.4 e^{i beta}
    (z1 + z2) = 0, impossible since 0.4 |z1 + z2| <= 0.8 < 1.  The
    image lies in |w - 4| <= 1.4, safely away from 0.
    """
    return PowerSeries((4.0, 1.0, 0.4 * cmath.exp(1j * beta)))


def rotated_disk(beta: float) -> PowerSeries:
    """2 e^{i beta} + z, a unit disk centered off the origin."""
    return PowerSeries((2.0 * cmath.exp(1j * beta), 1.0))


def mobius_disk(degree: int = 12) -> PowerSeries:
    """Truncation of 3 + (z + 1/2)/(1 + z/2), a Moebius self-map of a
    disk shifted to |w - 3| < 1; coefficients decay like 2^{-n}."""
    if degree < 1:
        raise InputError("mobius_disk needs degree >= 1")
    coeffs = [3.5] + [(-1) ** (n - 1) * 3.0 / 2 ** (n + 1) for n in range(1, degree + 1)]
    return PowerSeries(tuple(coeffs))


FAMILIES = {
    "quadratic": quadratic,
    "rotated_disk": rotated_disk,
}


def family_member(name: str, parameter: float) -> PowerSeries:
    try:
        builder = FAMILIES[name]
    except KeyError:
        raise InputError(
            f"unknown family {name!r}; available: {sorted(FAMILIES)}"
        ) from None
    return builder(parameter)
