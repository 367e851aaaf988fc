"""Metric structure of Galilean 3-space.

Vectors ``(x, y, z)`` with ``x != 0`` are non-isotropic and measure by their
x-component; vectors with ``x == 0`` live in the Euclidean ``(y, z)`` fibre.
The branch test is exact on purpose: classification is structural, not an
estimate.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np


class GalVec3(NamedTuple):
    x: float
    y: float
    z: float

    def __sub__(self, other):  # type: ignore[override]
        return GalVec3(self.x - other[0], self.y - other[1], self.z - other[2])

    def __add__(self, other):  # type: ignore[override]
        return GalVec3(self.x + other[0], self.y + other[1], self.z + other[2])


class VectorClass(str, enum.Enum):
    NON_ISOTROPIC = "non_isotropic"
    ISOTROPIC = "isotropic"
    ZERO = "zero"


def galilean_dot(u, v) -> float:
    """Galilean scalar product: ``x1*x2`` unless both x-components vanish."""
    x1, y1, z1 = u
    x2, y2, z2 = v
    if x1 != 0 or x2 != 0:
        return x1 * x2
    return y1 * y2 + z1 * z2


def galilean_norm(u) -> float:
    """``|x|`` for non-isotropic vectors, fibre length otherwise (never negative)."""
    x, y, z = u
    if x != 0:
        return abs(x)
    return math.hypot(y, z)


def galilean_norm_array(vecs: np.ndarray) -> np.ndarray:
    """Row-wise :func:`galilean_norm` of an ``(n, 3)`` array."""
    vecs = np.asarray(vecs, dtype=float)
    x = vecs[:, 0]
    return np.where(x != 0, np.abs(x), np.hypot(vecs[:, 1], vecs[:, 2]))


def classify(u) -> VectorClass:
    x, y, z = u
    if x == 0 and y == 0 and z == 0:
        return VectorClass.ZERO
    if x == 0:
        return VectorClass.ISOTROPIC
    return VectorClass.NON_ISOTROPIC


@dataclass(frozen=True)
class Similarity:
    """Element of the 8-parameter similarity group.

    ``x' = a11 + a12 x``;
    ``y' = a21 + a22 x + a23 (y cos phi + z sin phi)``;
    ``z' = a31 + a32 x + a23 (-y sin phi + z cos phi)``.
    The isometries are the elements with ``a12 = a23 = 1``.
    """

    a11: float = 0.0
    a21: float = 0.0
    a31: float = 0.0
    a12: float = 1.0
    a22: float = 0.0
    a23: float = 1.0
    a32: float = 0.0
    phi: float = 0.0

    def is_isometry(self) -> bool:
        return self.a12 == 1 and self.a23 == 1

    def apply(self, p) -> GalVec3:
        x, y, z = p
        c, s = math.cos(self.phi), math.sin(self.phi)
        return GalVec3(
            self.a11 + self.a12 * x,
            self.a21 + self.a22 * x + self.a23 * y * c + self.a23 * z * s,
            self.a31 + self.a32 * x - self.a23 * y * s + self.a23 * z * c,
        )

    def apply_array(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        x, y, z = pts[:, 0], pts[:, 1], pts[:, 2]
        c, s = math.cos(self.phi), math.sin(self.phi)
        return np.column_stack([
            self.a11 + self.a12 * x,
            self.a21 + self.a22 * x + self.a23 * y * c + self.a23 * z * s,
            self.a31 + self.a32 * x - self.a23 * y * s + self.a23 * z * c,
        ])

    def compose(self, inner: "Similarity") -> "Similarity":
        """The map ``p -> self.apply(inner.apply(p))``."""
        c, s = math.cos(self.phi), math.sin(self.phi)

        def rot(vy, vz):
            return vy * c + vz * s, -vy * s + vz * c

        ty, tz = rot(inner.a21, inner.a31)
        wy, wz = rot(inner.a22, inner.a32)
        return Similarity(
            a11=self.a11 + self.a12 * inner.a11,
            a21=self.a21 + self.a22 * inner.a11 + self.a23 * ty,
            a31=self.a31 + self.a32 * inner.a11 + self.a23 * tz,
            a12=self.a12 * inner.a12,
            a22=self.a22 * inner.a12 + self.a23 * wy,
            a23=self.a23 * inner.a23,
            a32=self.a32 * inner.a12 + self.a23 * wz,
            phi=math.remainder(self.phi + inner.phi, 2 * math.pi),
        )

    def inverse(self) -> "Similarity":
        if self.a12 == 0 or self.a23 == 0:
            raise ValueError("singular similarity (a12 or a23 is zero)")
        b12 = 1.0 / self.a12
        b11 = -self.a11 * b12
        c, s = math.cos(-self.phi), math.sin(-self.phi)
        k = 1.0 / self.a23

        # fibre part: (y, z) = k R(-phi) [(y', z') - (a21, a31) - x (a22, a32)]
        def back(vy, vz):
            return k * (vy * c + vz * s), k * (-vy * s + vz * c)

        ty, tz = back(-self.a21, -self.a31)
        wy, wz = back(-self.a22, -self.a32)
        # substitute x = b11 + b12 x'
        return Similarity(
            a11=b11, a12=b12,
            a21=ty + wy * b11, a31=tz + wz * b11,
            a22=wy * b12, a32=wz * b12,
            a23=k, phi=-self.phi,
        )

    def to_json(self) -> str:
        return json.dumps({k: getattr(self, k) for k in _JSON_KEYS})

    @classmethod
    def from_json(cls, text: str) -> "Similarity":
        data = json.loads(text)
        missing = set(_JSON_KEYS) - set(data)
        if missing:
            raise ValueError(f"similarity JSON is missing {sorted(missing)}")
        return cls(**{k: float(data[k]) for k in _JSON_KEYS})

    def as_dict(self) -> dict:
        return asdict(self)


_JSON_KEYS = ("a11", "a21", "a31", "a12", "a22", "a23", "a32", "phi")


def apply_similarity(m: Similarity, p) -> GalVec3:
    return m.apply(p)


def random_isometry(seed: int) -> Similarity:
    """Deterministic isometry: five coefficients in [-2, 2], phi in [0, 2 pi)."""
    rng = np.random.default_rng(seed)
    a11, a21, a31, a22, a32 = (float(v) for v in rng.uniform(-2.0, 2.0, size=5))
    phi = float(rng.uniform(0.0, 2 * math.pi))
    return Similarity(a11=a11, a21=a21, a31=a31, a22=a22, a32=a32, phi=phi)
