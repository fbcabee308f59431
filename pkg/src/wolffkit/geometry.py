"""Closed-form volumes of n-dimensional balls, caps, and two-ball intersections."""

from __future__ import annotations

import numpy as np
from scipy.special import betainc, gammaln


def ball_volume(r: float, n: int) -> float:
    """Volume of the n-ball of radius r."""
    if r <= 0.0:
        return 0.0
    return float(np.exp(0.5 * n * np.log(np.pi) - gammaln(1.0 + 0.5 * n)) * r ** n)


def cap_volume(r: float, a: float, n: int) -> float:
    """Volume of the cap of the n-ball of radius r cut at signed distance a
    from the center (a >= 0: minor cap, a < 0: majority side)."""
    if r <= 0.0:
        return 0.0
    if a >= r:
        return 0.0
    if a <= -r:
        return ball_volume(r, n)
    v = ball_volume(r, n)
    if a >= 0.0:
        return float(0.5 * v * betainc((n + 1) / 2.0, 0.5, 1.0 - (a * a) / (r * r)))
    return v - cap_volume(r, -a, n)


def intersection_volume(d: float, r1: float, r2: float, n: int) -> float:
    """Volume of the intersection of two n-balls with center distance d."""
    if r1 <= 0.0 or r2 <= 0.0:
        return 0.0
    if d >= r1 + r2:
        return 0.0
    if d <= abs(r1 - r2):
        return ball_volume(min(r1, r2), n)
    a1 = (d * d + r1 * r1 - r2 * r2) / (2.0 * d)
    a2 = (d * d - r1 * r1 + r2 * r2) / (2.0 * d)
    return cap_volume(r1, a1, n) + cap_volume(r2, a2, n)
