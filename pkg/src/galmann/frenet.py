"""Frenet apparatus of admissible curves in canonical form.

For ``alpha(s) = (s, y(s), z(s))``::

    kappa = sqrt(y''^2 + z''^2)
    tau   = (y'' z''' - z'' y''') / kappa^2
    T = (1, y', z'),  N = (0, y'', z'') / kappa,  B = (0, -z'', y'') / kappa

Curvature and torsion are also kept as Taylor series (orders K-2 and K-3
for a curve carrying order-K jets) so that their derivatives are available
exactly to the mate construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import jets
from .curve import SampledCurve
from .jets import Taylor

KAPPA_EPS = 1e-10


class DegenerateCurvature(ArithmeticError):
    def __init__(self, index: int, s: float, kappa: float):
        self.index = index
        self.s = s
        self.kappa = kappa
        super().__init__(f"curvature {kappa:.3g} <= {KAPPA_EPS:g} at sample {index} "
                         f"(s = {s:.17g}); Frenet frame undefined")


@dataclass
class FrenetData:
    s: np.ndarray
    T: np.ndarray  # (n, 3)
    N: np.ndarray
    B: np.ndarray
    kappa: np.ndarray
    tau: np.ndarray
    kappa_series: Taylor
    tau_series: Taylor

    def __len__(self) -> int:
        return len(self.s)


def _full(c, n):
    return np.broadcast_to(np.asarray(c, dtype=float), (n,))


def frenet_apparatus(curve: SampledCurve) -> FrenetData:
    """Frame, curvature and torsion at every sample of ``curve``."""
    if curve.order < 3:
        raise ValueError("Frenet apparatus needs jets of order >= 3")
    n = len(curve.s)
    y2 = curve.y.deriv().deriv()
    z2 = curve.z.deriv().deriv()
    y3 = y2.deriv()
    z3 = z2.deriv()

    kappa0 = np.sqrt(_full(y2.c[0], n) ** 2 + _full(z2.c[0], n) ** 2)
    bad = ~(kappa0 > KAPPA_EPS)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise DegenerateCurvature(i, float(curve.s[i]), float(kappa0[i]))

    kappa = jets.sqrt(y2 * y2 + z2 * z2)
    tau = (y2 * z3 - z2 * y3) / (kappa * kappa)

    dy = _full(curve.y.c[1], n)
    dz = _full(curve.z.c[1], n)
    ny = _full(y2.c[0], n) / kappa0
    nz = _full(z2.c[0], n) / kappa0
    one, zero = np.ones(n), np.zeros(n)
    return FrenetData(
        s=curve.s,
        T=np.column_stack([one, dy, dz]),
        N=np.column_stack([zero, ny, nz]),
        B=np.column_stack([zero, -nz, ny]),
        kappa=kappa0,
        tau=_full(tau.c[0], n).copy(),
        kappa_series=kappa,
        tau_series=tau,
    )


def central_diff4(values: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order central first derivative at interior samples ``2..n-3``."""
    v = np.asarray(values, dtype=float)
    return (v[:-4] - 8.0 * v[1:-3] + 8.0 * v[3:-1] - v[4:]) / (12.0 * h)


@dataclass(frozen=True)
class FrenetResiduals:
    tangent: float   # max |T' - kappa N|
    normal: float    # max |N' - tau B|
    binormal: float  # max |B' + tau N|

    def max(self) -> float:
        return max(self.tangent, self.normal, self.binormal)


def frenet_residuals(curve: SampledCurve, fd: FrenetData) -> FrenetResiduals:
    """Check ``T' = kN``, ``N' = tB``, ``B' = -tN`` by differencing the frame."""
    n = len(curve.s)
    if n < 5:
        raise ValueError("frenet_residuals needs at least 5 samples")
    h = curve.h
    inner = slice(2, n - 2)

    def fibre_norm(v):
        return np.hypot(v[:, 1], v[:, 2])

    dT = central_diff4(fd.T, h)
    dN = central_diff4(fd.N, h)
    dB = central_diff4(fd.B, h)
    k = fd.kappa[inner, None]
    t = fd.tau[inner, None]
    return FrenetResiduals(
        tangent=float(np.max(fibre_norm(dT - k * fd.N[inner]))),
        normal=float(np.max(fibre_norm(dN - t * fd.B[inner]))),
        binormal=float(np.max(fibre_norm(dB + t * fd.N[inner]))),
    )
