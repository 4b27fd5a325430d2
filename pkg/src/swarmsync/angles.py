"""Small angle utilities shared across the package.

All internal angles are radians. Headings are kept unwrapped (real line)
during integration; wrapping happens only when an angle is reported.
"""

from __future__ import annotations

import numpy as np

TWO_PI = 2.0 * np.pi


def wrap_angle(x):
    """Wrap angle(s) to the half-open interval (-pi, pi].

    Accepts scalars or arrays. -pi maps to +pi.
    """
    y = np.mod(np.asarray(x, dtype=float), TWO_PI)
    y = np.where(y > np.pi, y - TWO_PI, y)
    return float(y) if y.ndim == 0 else y


def heading_spread(theta) -> float:
    """Largest pairwise wrapped heading difference, max_{j,k} |wrap(theta_j - theta_k)|.

    This is the circular diameter of the heading set; 0 means all agents
    share one direction mod 2*pi.
    """
    th = np.asarray(theta, dtype=float)
    d = wrap_angle(th[:, None] - th[None, :])
    return float(np.max(np.abs(d)))
