"""Mannheim mates of admissible curves and a numerical audit of their theory.

The mate of a curve ``alpha`` at offset ``lam`` is ``alpha + lam * N``.  Since
``N`` is isotropic the mate stays in canonical form (its x-component is still
``s``) and its distance to the base is exactly ``|lam|``.

Differentiating ``alpha*' = T + lam*tau*B`` once more gives the N-component
``kappa - lam*tau^2`` of ``alpha*''``; the mate binormal is colinear with
``N`` exactly when that component vanishes.  This is the detection criterion
``lam = kappa / tau^2`` used by :func:`detect_partner`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from . import jets
from .curve import SampledCurve
from .expr import Expression, parse_expression
from .frenet import KAPPA_EPS, DegenerateCurvature, FrenetData, central_diff4, frenet_apparatus
from .galilean import galilean_norm_array
from .jets import Taylor

TAU_EPS = 1e-10
EXACT_TOL = 1e-6
DATA_TOL = 1e-3

CLAIM_IDS = ("thm3_1", "eq3_7", "thm3_2", "eq3_9", "schell_3_10",
             "thm3_4_i", "thm3_4_ii", "thm3_4_iii", "ratio_kappa_tau")
THETA_KINDS = ("euclidean", "galilean")
# claims that read the mate's curvature, torsion or binormal
MATE_FRAME_CLAIMS = frozenset({"thm3_2", "eq3_9", "schell_3_10",
                               "thm3_4_i", "thm3_4_ii", "thm3_4_iii"})


class DegenerateMate(ArithmeticError):
    """The mate has (numerically) zero curvature somewhere: no Frenet frame."""


class TorsionVanishes(ArithmeticError):
    def __init__(self, index: int, s: float):
        self.index = index
        self.s = s
        super().__init__(f"torsion vanishes at sample {index} (s = {s:.17g})")


class NonPositiveCurvature(ValueError):
    def __init__(self, s: float):
        self.s = s
        super().__init__(f"prescribed curvature is not positive at s = {s:.17g}")


def _tol(curve: SampledCurve) -> float:
    return EXACT_TOL if curve.exact else DATA_TOL


@dataclass
class MatePair:
    base: SampledCurve
    base_frenet: FrenetData
    lam: float
    mate: SampledCurve
    mate_frenet: Optional[FrenetData]
    degeneracy: str = ""

    @property
    def degenerate(self) -> bool:
        return self.mate_frenet is None

    def distance(self) -> np.ndarray:
        """Galilean distance between corresponding points."""
        return galilean_norm_array(self.mate.pos - self.base.pos)

    def require_mate_frame(self) -> FrenetData:
        if self.mate_frenet is None:
            raise DegenerateMate(self.degeneracy or "mate frame undefined")
        return self.mate_frenet


def mannheim_mate(base: SampledCurve, fd: FrenetData, lam: float,
                  strict: bool = False) -> MatePair:
    """Offset ``base`` by ``lam`` along its principal normal.

    The mate's jets are formed from the base jets (``N = alpha''/kappa`` as a
    series), so they are exact to the same order minus two.  With
    ``strict=True`` a degenerate mate raises :class:`DegenerateMate`;
    otherwise it is returned flagged.
    """
    lam = float(lam)
    y2 = base.y.deriv().deriv()
    z2 = base.z.deriv().deriv()
    ny = y2 / fd.kappa_series
    nz = z2 / fd.kappa_series
    n = len(base.s)
    ys = _full_series(base.y + lam * ny, n)
    zs = _full_series(base.z + lam * nz, n)
    mate = SampledCurve(s=base.s, y=ys, z=zs, t=base.t,
                        source="mate" if base.exact else "data",
                        meta={"lambda": lam})
    mate_fd = None
    reason = ""
    try:
        mate_fd = frenet_apparatus(mate)
    except DegenerateCurvature as exc:
        reason = f"mate is degenerate: {exc}"
        if strict:
            raise DegenerateMate(reason) from exc
    return MatePair(base, fd, lam, mate, mate_fd, reason)


def _full_series(series: Taylor, n: int) -> Taylor:
    return Taylor(np.broadcast_to(np.asarray(c, dtype=float), (n,)).copy() for c in series.c)


@dataclass(frozen=True)
class PartnerDetection:
    mannheim: bool
    lam: float
    spread: float
    degenerate: bool

    def as_dict(self) -> dict:
        return {"lambda": self.lam, "spread": self.spread, "degenerate": self.degenerate}


def detect_partner(base: SampledCurve, fd: FrenetData,
                   tol: Optional[float] = None) -> PartnerDetection:
    """Test whether some constant offset makes ``N`` colinear with the mate binormal.

    The pointwise candidate is ``kappa / tau^2``; the curve is Mannheim when it
    is constant to ``tol`` relative (1e-6, or 1e-3 for data curves).  The
    result is flagged degenerate when the would-be mate curvature
    ``|lam * tau'|`` drops to the frame threshold anywhere.
    """
    tol = _tol(base) if tol is None else tol
    small = ~(np.abs(fd.tau) > TAU_EPS)
    if np.any(small):
        i = int(np.argmax(small))
        raise TorsionVanishes(i, float(base.s[i]))
    lam_s = fd.kappa / fd.tau ** 2
    mean = float(np.mean(lam_s))
    spread = float(np.max(lam_s) - np.min(lam_s))
    if fd.tau_series.order >= 1:
        dtau = np.broadcast_to(fd.tau_series.c[1], lam_s.shape)
    else:
        dtau = np.gradient(fd.tau, base.h)
    degenerate = bool(np.any(np.abs(mean * dtau) <= KAPPA_EPS))
    return PartnerDetection(spread <= tol * max(1.0, abs(mean)), mean, spread, degenerate)


def colinearity_residual(pair: MatePair) -> float:
    """``max(1 - |N . B*|)`` over samples (fibre dot product); 0 iff N || B*."""
    mfd = pair.require_mate_frame()
    N = pair.base_frenet.N
    dots = N[:, 1] * mfd.B[:, 1] + N[:, 2] * mfd.B[:, 2]
    return float(np.max(1.0 - np.abs(dots)))


def synthesize_from_natural(kappa_expr: Union[Expression, str], tau_expr: Union[Expression, str],
                            s0: float, s1: float, n: int = 1001) -> SampledCurve:
    """Curve with prescribed curvature and torsion, in canonical form.

    With ``N = (0, cos psi, sin psi)`` the Frenet equations reduce to
    ``psi' = tau``, ``y'' = kappa cos psi``, ``z'' = kappa sin psi``; these are
    integrated by classic RK4 from ``psi = y = z = y' = z' = 0`` at ``s0``.
    Curvature and torsion expressions are in the variable ``s``.
    """
    if isinstance(kappa_expr, str):
        kappa_expr = parse_expression(kappa_expr, "s")
    if isinstance(tau_expr, str):
        tau_expr = parse_expression(tau_expr, "s")
    if n < 16:
        raise ValueError("n must be at least 16")
    if not s0 < s1:
        raise ValueError("need s0 < s1")
    s = np.linspace(s0, s1, n)
    h = (s1 - s0) / (n - 1)
    mid = s[:-1] + 0.5 * h

    def values(expr, pts):
        with np.errstate(all="ignore"):
            return np.broadcast_to(np.asarray(expr.evaluate(pts, order=0).c[0], float),
                                   pts.shape).copy()

    k_grid, k_mid = values(kappa_expr, s), values(kappa_expr, mid)
    t_grid, t_mid = values(tau_expr, s), values(tau_expr, mid)
    for arr, pts in ((k_grid, s), (k_mid, mid)):
        bad = ~(arr > 0)
        if np.any(bad):
            raise NonPositiveCurvature(float(pts[np.argmax(bad)]))
    if not (np.all(np.isfinite(t_grid)) and np.all(np.isfinite(t_mid))):
        raise ValueError("prescribed torsion is not finite on the grid")

    state = np.zeros((n, 5))  # psi, y, z, y', z'
    cur = [0.0] * 5

    def rhs(k, tau, st):
        psi, _, _, p, q = st
        return (tau, p, q, k * math.cos(psi), k * math.sin(psi))

    for i in range(n - 1):
        k1 = rhs(k_grid[i], t_grid[i], cur)
        k2 = rhs(k_mid[i], t_mid[i], [c + 0.5 * h * d for c, d in zip(cur, k1)])
        k3 = rhs(k_mid[i], t_mid[i], [c + 0.5 * h * d for c, d in zip(cur, k2)])
        k4 = rhs(k_grid[i + 1], t_grid[i + 1], [c + h * d for c, d in zip(cur, k3)])
        cur = [c + h / 6.0 * (a + 2 * b + 2 * cc + d)
               for c, a, b, cc, d in zip(cur, k1, k2, k3, k4)]
        state[i + 1] = cur
    psi, y, z, p, q = state.T

    kser = kappa_expr.evaluate(s, order=3)
    tser = tau_expr.evaluate(s, order=3)
    psi_ser = tser.integrate(psi)
    c, sn = jets.cos(psi_ser), jets.sin(psi_ser)
    ys = (kser * c).integrate(p).integrate(y)
    zs = (kser * sn).integrate(q).integrate(z)
    return SampledCurve(s=s, y=_full_series(ys, n), z=_full_series(zs, n), t=None,
                        source="natural",
                        meta={"kappa": kappa_expr.source, "tau": tau_expr.source})


@dataclass(frozen=True)
class FrameAngles:
    euclidean: np.ndarray
    galilean: np.ndarray

    def __getitem__(self, kind: str) -> np.ndarray:
        return getattr(self, kind)


def angle_between_frames(pair: MatePair) -> FrameAngles:
    """Two readings of the angle between ``T`` and ``T*``.

    ``euclidean`` treats both tangents as ordinary 3-vectors; ``galilean`` is
    the fibre length of the isotropic difference ``T* - T``.  Under the
    Galilean scalar product both tangents have ``<T, T*> = 1``.
    """
    T = pair.base_frenet.T
    Ts = pair.mate.derivative(1)
    cross = np.cross(T, Ts)
    theta_e = np.arctan2(np.linalg.norm(cross, axis=1), np.einsum("ij,ij->i", T, Ts))
    d = Ts - T
    theta_g = np.hypot(d[:, 1], d[:, 2])
    return FrameAngles(theta_e, theta_g)


@dataclass(frozen=True)
class ClaimReport:
    id: str
    theta: str
    max_residual: Optional[float]
    mean_residual: Optional[float]
    verdict: str  # "holds", "fails" or "degenerate"


def _rel(diff, ref):
    return np.abs(diff) / np.maximum(1.0, np.abs(ref))


def _report(cid, kind, resid, valid, tol, verdict=None) -> ClaimReport:
    resid = np.asarray(resid, dtype=float)
    valid = np.broadcast_to(np.asarray(valid, dtype=bool), resid.shape)
    r = resid[valid]
    mx = float(np.max(r)) if r.size else None
    mean = float(np.mean(r)) if r.size else None
    if not valid.all():
        verdict = "degenerate"
    elif verdict is None:
        verdict = "holds" if np.all(np.isfinite(r)) and mx <= tol else "fails"
    return ClaimReport(cid, kind, mx, mean, verdict)


def _spread(v):
    mean = np.mean(v)
    return _rel(v - mean, mean)


def audit_claims(pair: MatePair, tol: Optional[float] = None) -> list[ClaimReport]:
    """Evaluate every identity of the Mannheim theory on ``pair``.

    Each claim is reported once per angle interpretation, ordered by claim id.
    Residuals are relative (``|lhs - rhs| / max(1, |rhs|)``).  Claims needing
    the mate frame are ``degenerate`` when it does not exist, as are claims
    that divide by a vanishing quantity.
    """
    base, fd = pair.base, pair.base_frenet
    n = len(base.s)
    if n < 5:
        raise ValueError("audit needs at least 5 samples")
    tol = _tol(base) if tol is None else tol
    lam = pair.lam
    mfd = pair.mate_frenet
    angles = angle_between_frames(pair)
    dist = pair.distance()
    kappa, tau = fd.kappa, fd.tau
    ds_ratio = galilean_norm_array(pair.mate.derivative(1))  # ds*/ds, the mate x' is 1
    tau_ok = np.abs(tau) > TAU_EPS
    colinear = None if mfd is None else colinearity_residual(pair) <= tol

    reports = []
    for cid in CLAIM_IDS:
        for kind in THETA_KINDS:
            th = angles[kind]
            sin_t, cos_t = np.sin(th), np.cos(th)
            with np.errstate(all="ignore"):
                tan_t = np.tan(th)
            nan = np.full(n, np.nan)
            if cid in MATE_FRAME_CLAIMS and mfd is None:
                reports.append(ClaimReport(cid, kind, None, None, "degenerate"))
                continue
            with np.errstate(all="ignore"):
                if cid == "thm3_1":
                    rep = _report(cid, kind, _rel(dist - abs(lam), lam), True, tol)
                elif cid == "eq3_7":
                    ok = np.abs(sin_t) > 1e-12
                    u = lam * cos_t / np.where(ok, sin_t, 1.0)  # lam cot(theta)
                    rep = _report(cid, kind, np.abs(u * tau - 1.0), ok, tol)
                elif cid == "thm3_2":
                    spread = np.where(tau_ok, _spread(tau), nan)
                    const = bool(np.max(spread) <= tol)
                    rep = _report(cid, kind, spread, tau_ok, tol,
                                  "holds" if const == colinear else "fails")
                elif cid == "eq3_9":
                    ok = np.full(n, lam != 0) & (np.abs(cos_t) > 1e-12)
                    rhs = tan_t / (lam if lam else 1.0)
                    rep = _report(cid, kind, _rel(mfd.tau - rhs, rhs), ok, tol)
                elif cid == "schell_3_10":
                    ok = np.full(n, lam != 0) & (np.abs(cos_t) > 1e-12)
                    prod = tau * mfd.tau
                    rhs = tan_t ** 2 / (lam * lam if lam else 1.0)
                    resid = np.maximum(_spread(prod), _rel(prod - rhs, rhs))
                    rep = _report(cid, kind, resid, ok, tol)
                elif cid == "thm3_4_i":
                    # ds* = ds, so d(theta)/ds* is the s-derivative
                    dtheta = central_diff4(th, base.h)
                    ks = mfd.kappa[2:-2]
                    rep = _report(cid, kind, _rel(ks + dtheta, dtheta), True, tol)
                elif cid == "thm3_4_ii":
                    rhs = mfd.tau * ds_ratio * sin_t
                    rep = _report(cid, kind, _rel(kappa - rhs, rhs), True, tol)
                elif cid == "thm3_4_iii":
                    rhs = -mfd.tau * ds_ratio * cos_t
                    rep = _report(cid, kind, _rel(tau - rhs, rhs), True, tol)
                else:  # ratio_kappa_tau
                    ok = tau_ok & (np.abs(cos_t) > 1e-12)
                    q = kappa / np.where(tau_ok, tau, 1.0)
                    resid = np.maximum(_rel(q + tan_t, tan_t), _spread(q))
                    rep = _report(cid, kind, resid, ok, tol)
            reports.append(rep)
    return reports
