"""The Cartan group carrier R^5, its frame fields and continuous symmetries.

Coordinates are g = (x, y, z, v, w).  The horizontal frame is X1, X2 with
X3 = [X1, X2], X4 = [X1, X3], X5 = [X2, X3]; X0 generates the simultaneous
rotation of the (x, y) and (v, w) planes and Y the weighted dilation with
weights (1, 1, 2, 3, 3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class GroupPoint:
    x: float
    y: float
    z: float
    v: float
    w: float

    def __post_init__(self):
        for name in ("x", "y", "z", "v", "w"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"coordinate {name} must be finite")

    @classmethod
    def identity(cls) -> "GroupPoint":
        return cls(0.0, 0.0, 0.0, 0.0, 0.0)

    @classmethod
    def from_array(cls, a) -> "GroupPoint":
        x, y, z, v, w = (float(t) for t in a)
        return cls(x, y, z, v, w)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z, self.v, self.w])

    @property
    def r(self) -> float:
        return math.hypot(self.x, self.y)


def frame_field(i: int, g: GroupPoint) -> np.ndarray:
    """Components of X_i at g, i = 0..5."""
    x, y = g.x, g.y
    r2 = x * x + y * y
    if i == 0:
        return np.array([-y, x, 0.0, -g.w, g.v])
    if i == 1:
        return np.array([1.0, 0.0, -y / 2.0, 0.0, -r2 / 2.0])
    if i == 2:
        return np.array([0.0, 1.0, x / 2.0, r2 / 2.0, 0.0])
    if i == 3:
        return np.array([0.0, 0.0, 1.0, x, y])
    if i == 4:
        return np.array([0.0, 0.0, 0.0, 1.0, 0.0])
    if i == 5:
        return np.array([0.0, 0.0, 0.0, 0.0, 1.0])
    raise ValueError(f"frame index must be 0..5, got {i!r}")


def rotate(g: GroupPoint, s: float) -> GroupPoint:
    """Flow of X0 for time s: rotate (x, y) and (v, w) simultaneously."""
    cs, sn = math.cos(s), math.sin(s)
    return GroupPoint(
        g.x * cs - g.y * sn,
        g.x * sn + g.y * cs,
        g.z,
        g.v * cs - g.w * sn,
        g.v * sn + g.w * cs,
    )


def dilate(g: GroupPoint, r: float) -> GroupPoint:
    """Flow of Y for time r: weights (1, 1, 2, 3, 3)."""
    e1 = math.exp(r)
    e2 = e1 * e1
    e3 = e2 * e1
    return GroupPoint(e1 * g.x, e1 * g.y, e2 * g.z, e3 * g.v, e3 * g.w)


# Below this radius the r**-4 terms in Q, R lose all significance.
_R_MIN = 1e-9


def invariant_coords(g: GroupPoint):
    """(P, Q, R, r, chi): P, Q, R are invariant under rotation and dilation.

    chi is the polar angle of (x, y); with this orientation the rotation
    flow shifts chi by +s and the Jacobian of the chart (P, Q, R, r, chi)
    with respect to (x, y, z, v, w) is 1 / (2 r^9).
    """
    r = g.r
    if r < _R_MIN:
        raise ValueError(f"on the symmetry axis: r = {r:.3e} < {_R_MIN:g}")
    r2 = r * r
    r4 = r2 * r2
    P = g.z / (2.0 * r2)
    Q = (g.x * g.v + g.y * g.w) / r4
    R = (-g.y * g.v + g.x * g.w) / r4
    chi = math.atan2(g.y, g.x)
    return P, Q, R, r, chi
