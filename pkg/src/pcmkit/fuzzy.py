"""Gaussian membership functions with an uncertain bandwidth.

A cluster's membership curve ``exp(-d^2 / v^2)`` depends on a bandwidth
``v`` that is itself estimated from noisy data.  That estimation
uncertainty is modelled as a second Gaussian fuzzy set over ``v`` with
spread ``sigma_v``, and the two are collapsed back to an ordinary
membership curve by max-min composition over ``v``:

    mu(d) = max_v min( exp(-d^2/v^2), exp(-(v - v0)^2 / sigma_v^2) )

The maximum is attained at the larger root of the intersection equation,
which gives the closed form implemented by :func:`corrected_bandwidth`:

    v_new = (0.5*v0 + 0.5*sqrt(v0^2 + 4*sigma_v*d))^2
    mu(d) = exp(-d^2 / v_new)

Note the correction term ``4*sigma_v*d`` adds spread times distance to a
squared bandwidth; the dimensional asymmetry is intentional and the
closed form is implemented verbatim.  :func:`marginal_oracle` evaluates
the max-min composition by brute-force grid search and exists purely to
cross-check the closed form.

Memberships are computed as ``exp`` of a clamped exponent: any exponent
below -700 flushes to exactly 0.0 rather than raising underflow noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "EXP_FLUSH",
    "FuzzyBandwidth",
    "GaussianPrimary",
    "corrected_bandwidth",
    "default_oracle_grid",
    "marginal_membership",
    "marginal_oracle",
    "primary_membership",
    "secondary_membership",
]

# Exponents below this flush the membership to exact zero.
EXP_FLUSH = -700.0


def _exp(exponent: float) -> float:
    if exponent < EXP_FLUSH:
        return 0.0
    return math.exp(exponent)


@dataclass(frozen=True)
class FuzzyBandwidth:
    """An estimated bandwidth ``v0 > 0`` with Gaussian uncertainty ``sigma_v >= 0``.

    ``sigma_v = 0`` means the bandwidth is crisp; every consumer branches
    to the plain Gaussian formula in that case.
    """

    v0: float
    sigma_v: float = 0.0

    def __post_init__(self):
        if not self.v0 > 0:
            raise ValueError("v0 must be positive")
        if self.sigma_v < 0:
            raise ValueError("sigma_v must be non-negative")


@dataclass(frozen=True)
class GaussianPrimary:
    """A Gaussian membership function: center vector plus fuzzy bandwidth."""

    x0: tuple
    bandwidth: FuzzyBandwidth

    def __post_init__(self):
        object.__setattr__(self, "x0", tuple(float(v) for v in np.atleast_1d(self.x0)))

    def distance(self, x) -> float:
        return float(np.linalg.norm(np.atleast_1d(np.asarray(x, float)) - np.asarray(self.x0)))

    def primary_at(self, x) -> float:
        return primary_membership(self.distance(x), self.bandwidth.v0)

    def marginal_at(self, x) -> float:
        return marginal_membership(self.distance(x), self.bandwidth)


def primary_membership(d: float, v: float) -> float:
    """``exp(-d^2/v^2)``; equals 1 iff ``d == 0``."""
    if not v > 0:
        raise ValueError("bandwidth v must be positive")
    if d < 0:
        raise ValueError("distance must be non-negative")
    return _exp(-(d * d) / (v * v))


def secondary_membership(v: float, fb: FuzzyBandwidth) -> float:
    """``exp(-(v - v0)^2 / sigma_v^2)``; peaks at 1 when ``v == v0``.

    Rejects ``sigma_v == 0``: a crisp bandwidth has no secondary spread
    and callers must use the plain Gaussian path instead.
    """
    if fb.sigma_v <= 0:
        raise ValueError("secondary membership needs sigma_v > 0 (crisp path otherwise)")
    delta = v - fb.v0
    return _exp(-(delta * delta) / (fb.sigma_v * fb.sigma_v))


def corrected_bandwidth(v0: float, sigma_v: float, d: float) -> float:
    """Squared bandwidth after folding in the uncertainty at distance ``d``.

    Returns ``(0.5*v0 + 0.5*sqrt(v0^2 + 4*sigma_v*d))^2``, which is
    ``v0^2`` exactly when ``sigma_v == 0`` or ``d == 0`` and grows with
    both ``sigma_v`` and ``d``.
    """
    if not v0 > 0:
        raise ValueError("v0 must be positive")
    if sigma_v < 0 or d < 0:
        raise ValueError("sigma_v and d must be non-negative")
    if sigma_v == 0.0 or d == 0.0:
        return v0 * v0
    root = 0.5 * v0 + 0.5 * math.sqrt(v0 * v0 + 4.0 * sigma_v * d)
    return root * root


def marginal_membership(d: float, fb: FuzzyBandwidth) -> float:
    """Membership at distance ``d`` under bandwidth uncertainty ``fb``.

    With ``sigma_v = 0`` this reproduces :func:`primary_membership`
    bitwise; otherwise it dominates the crisp curve everywhere.
    """
    if d < 0:
        raise ValueError("distance must be non-negative")
    return _exp(-(d * d) / corrected_bandwidth(fb.v0, fb.sigma_v, d))


def default_oracle_grid(d: float, fb: FuzzyBandwidth, steps: int = 20_000):
    """Search interval wide enough to bracket the max-min optimum."""
    v_min = max(1e-9, fb.v0 - 6.0 * fb.sigma_v)
    v_max = fb.v0 + 6.0 * fb.sigma_v + math.sqrt(4.0 * fb.sigma_v * d)
    return (v_min, v_max, steps)


def marginal_oracle(d: float, fb: FuzzyBandwidth, grid=None) -> float:
    """Brute-force max over a bandwidth grid of min(primary, secondary).

    This is the independent check for :func:`marginal_membership`; with
    the default grid the two agree to about 1e-3 or better.
    """
    if d < 0:
        raise ValueError("distance must be non-negative")
    if fb.sigma_v <= 0:
        raise ValueError("oracle needs sigma_v > 0 (use primary_membership when crisp)")
    if grid is None:
        grid = default_oracle_grid(d, fb)
    v_min, v_max, steps = grid
    if steps < 2 or not v_max > v_min:
        raise ValueError("grid must be non-empty with v_max > v_min")
    vs = np.linspace(v_min, v_max, int(steps))
    primaries = np.exp(-(d * d) / (vs * vs))
    deltas = vs - fb.v0
    secondaries = np.exp(-(deltas * deltas) / (fb.sigma_v * fb.sigma_v))
    return float(np.max(np.minimum(primaries, secondaries)))


def marginal_curve(x0: float, v0: float, sigma_vs, xs):
    """Long-format rows ``(x, sigma_v, mu)`` for plotting membership curves.

    ``sigma_v = 0`` rows use the crisp formula; the others the marginal
    one, so a crisp baseline can sit in the same file.
    """
    rows = []
    for sigma_v in sigma_vs:
        fb = FuzzyBandwidth(v0=v0, sigma_v=sigma_v) if sigma_v > 0 else None
        for x in xs:
            d = abs(float(x) - float(x0))
            mu = primary_membership(d, v0) if fb is None else marginal_membership(d, fb)
            rows.append((float(x), float(sigma_v), mu))
    return rows
