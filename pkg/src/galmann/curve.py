"""Admissible curves and their arc-length form ``(s, y(s), z(s))``.

Galilean speed along an admissible curve is ``|x'(t)|``, so arc length is
``s = |x(t) - x(t0)|`` and reparametrization only needs to invert ``x``.
Jets of ``y`` and ``z`` with respect to ``s`` come from composing the
t-expansions with the reversed series of ``x``; no differencing is involved.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .expr import BinOp, Expression, Num, parse_expression, to_source
from .galilean import Similarity
from .jets import Jet3, Taylor, reverse

DEFAULT_SAMPLES = 1001
SERIES_ORDER = 5
NEWTON_TOL = 1e-13
NEWTON_MAXITER = 100
ADMISSIBLE_EPS = 1e-12


class AdmissibilityError(ValueError):
    def __init__(self, t: float, reason: str = "x'(t) vanishes or changes sign"):
        self.t = t
        super().__init__(f"admissibility violation at t = {t:.17g}: {reason}")


class InversionError(ArithmeticError):
    """Root finding for t(s) did not converge."""


@dataclass(frozen=True)
class CurveSpec:
    """A parametric curve ``t -> (fx(t), fy(t), fz(t))`` on ``[t0, t1]``."""

    fx: Expression
    fy: Expression
    fz: Expression
    t0: float
    t1: float

    def __post_init__(self):
        if not self.t0 < self.t1:
            raise ValueError(f"empty domain [{self.t0}, {self.t1}]")

    @classmethod
    def parse(cls, text: str, t0: float, t1: float, variable: str = "t") -> "CurveSpec":
        """Build from ``"fx;fy;fz"``."""
        parts = text.split(";")
        if len(parts) != 3:
            raise ValueError(f"curve needs three ';'-separated components, got {len(parts)}")
        fx, fy, fz = (parse_expression(p.strip(), variable) for p in parts)
        return cls(fx, fy, fz, float(t0), float(t1))

    @property
    def orientation(self) -> int:
        """Sign of x' on the domain (read at ``t0``); +1 when undecidable."""
        d = float(self.fx.evaluate(self.t0, order=1).c[1])
        return -1 if d < 0 else 1


@dataclass(frozen=True)
class Admissibility:
    ok: bool
    t: Optional[float] = None

    def __bool__(self) -> bool:
        return self.ok


def check_admissible(spec: CurveSpec, n_probe: int = DEFAULT_SAMPLES) -> Admissibility:
    """Probe x' at ``n_probe`` uniform points; report the first violating t."""
    if n_probe < 2:
        raise ValueError("n_probe must be at least 2")
    ts = np.linspace(spec.t0, spec.t1, n_probe)
    with np.errstate(all="ignore"):
        dx = np.broadcast_to(spec.fx.evaluate(ts, order=1).c[1], ts.shape)
    sign = np.sign(dx[0])
    bad = ~(np.isfinite(dx) & (np.abs(dx) > ADMISSIBLE_EPS) & (np.sign(dx) == sign))
    if np.any(bad):
        return Admissibility(False, float(ts[np.argmax(bad)]))
    return Admissibility(True)


@dataclass
class SampledCurve:
    """Arc-length samples of a curve in canonical form ``x = s``.

    ``y`` and ``z`` are Taylor series in ``s`` centred at every sample
    (coefficient arrays of length ``n``).  ``t`` holds the original parameter
    values when the curve came from a :class:`CurveSpec`.
    """

    s: np.ndarray
    y: Taylor
    z: Taylor
    t: Optional[np.ndarray] = None
    source: str = "expression"  # "expression", "natural", "mate" or "data"
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.s)

    @property
    def h(self) -> float:
        return float(self.s[1] - self.s[0])

    @property
    def order(self) -> int:
        return min(self.y.order, self.z.order)

    @property
    def exact(self) -> bool:
        """False for curves interpolated from data."""
        return self.source != "data"

    @property
    def pos(self) -> np.ndarray:
        n = len(self.s)
        return np.column_stack([self.s, np.broadcast_to(self.y.c[0], n),
                                np.broadcast_to(self.z.c[0], n)])

    def derivative(self, k: int) -> np.ndarray:
        """``alpha^(k)(s)`` at every sample as an ``(n, 3)`` array."""
        n = len(self.s)
        if k == 0:
            return self.pos
        xk = 1.0 if k == 1 else 0.0
        fk = math.factorial(k)
        return np.column_stack([np.full(n, xk),
                                np.broadcast_to(self.y.c[k] * fk, n),
                                np.broadcast_to(self.z.c[k] * fk, n)])

    @property
    def jets(self) -> tuple[Jet3, Jet3, Jet3]:
        n = len(self.s)
        one = np.ones(n)
        zero = np.zeros(n)
        return (Jet3(self.s, one, zero, zero),
                Jet3.from_taylor(self.y), Jet3.from_taylor(self.z))


def _arclength_fn(spec: CurveSpec, sigma: int, x0: float):
    def X(t, order):
        ser = spec.fx.evaluate(t, order=order)
        return Taylor(((ser.c[0] - x0) * sigma,) + tuple(c * sigma for c in ser.c[1:]))
    return X


def _invert(X, s: np.ndarray, t_probe: np.ndarray, X_probe: np.ndarray) -> np.ndarray:
    """Safeguarded Newton for ``X(t) = s`` with bisection fallback."""
    idx = np.clip(np.searchsorted(X_probe, s, side="right") - 1, 0, len(t_probe) - 2)
    lo = t_probe[idx].copy()
    hi = t_probe[idx + 1].copy()
    t = np.interp(s, X_probe, t_probe)
    done = np.zeros(s.shape, dtype=bool)
    for _ in range(NEWTON_MAXITER):
        with np.errstate(all="ignore"):
            ser = X(t, 1)
        f = np.broadcast_to(ser.c[0], s.shape) - s
        df = np.broadcast_to(ser.c[1], s.shape)
        done |= np.abs(f) <= NEWTON_TOL
        if done.all():
            return t
        below = f < 0
        lo = np.where(below & ~done, t, lo)
        hi = np.where(~below & ~done, t, hi)
        with np.errstate(all="ignore"):
            step = t - f / df
        inside = np.isfinite(step) & (step > lo) & (step < hi)
        nxt = np.where(inside, step, 0.5 * (lo + hi))
        # floating-point resolution in t reached: the residual cannot shrink further
        done |= (nxt == t) | (hi - lo <= 2 * np.spacing(np.maximum(np.abs(lo), np.abs(hi))))
        t = np.where(done, t, nxt)
    if not done.all():
        bad = float(s[np.argmax(~done)])
        raise InversionError(f"t(s) inversion did not converge at s = {bad:.17g}")
    return t


def reparametrize_to_arclength(spec: CurveSpec, n_samples: int = DEFAULT_SAMPLES,
                               order: int = SERIES_ORDER) -> SampledCurve:
    """Sample ``spec`` on a uniform arc-length grid in canonical form."""
    if n_samples < 8:
        raise ValueError("n_samples must be at least 8")
    adm = check_admissible(spec, max(n_samples, 2))
    if not adm:
        raise AdmissibilityError(adm.t)
    sigma = spec.orientation
    x0 = float(spec.fx.value(spec.t0))
    X = _arclength_fn(spec, sigma, x0)

    t_probe = np.linspace(spec.t0, spec.t1, max(n_samples, 2))
    X_probe = np.asarray(X(t_probe, 0).c[0], dtype=float)
    X_probe[0] = 0.0
    if np.any(np.diff(X_probe) <= 0):
        raise AdmissibilityError(float(t_probe[np.argmax(np.diff(X_probe) <= 0)]),
                                 "x is not strictly monotone")
    length = float(X_probe[-1])
    s = np.linspace(0.0, length, n_samples)
    t = _invert(X, s, t_probe, X_probe)
    t[0], t[-1] = spec.t0, spec.t1

    with np.errstate(all="ignore"):
        xs = X(t, order)
    # expansion of t around each sample, as a series in (s - s_i)
    dt = reverse(xs)
    t_series = Taylor((t,) + dt.c[1:])
    y = spec.fy.evaluate(t_series)
    z = spec.fz.evaluate(t_series)
    return SampledCurve(s=s, y=_broadcast(y, len(s)), z=_broadcast(z, len(s)), t=t,
                        source="expression",
                        meta={"orientation": sigma, "x0": x0, "length": length})


def _broadcast(series: Taylor, n: int) -> Taylor:
    return Taylor(np.broadcast_to(np.asarray(c, dtype=float), (n,)).copy() for c in series.c)


def sample_positions(curve: SampledCurve, m: Optional[Similarity] = None) -> np.ndarray:
    pts = curve.pos
    return pts if m is None else m.apply_array(pts)


def transform_spec(spec: CurveSpec, m: Similarity) -> CurveSpec:
    """Curve spec of ``m`` applied to ``spec`` (built on the expression trees)."""
    c, s = math.cos(m.phi), math.sin(m.phi)

    def lin(const, terms):
        node = Num(const)
        for coef, e in terms:
            node = BinOp("+", node, BinOp("*", Num(coef), e.ast))
        return Expression(node, "", spec.fx.variable)

    fx = lin(m.a11, [(m.a12, spec.fx)])
    fy = lin(m.a21, [(m.a22, spec.fx), (m.a23 * c, spec.fy), (m.a23 * s, spec.fz)])
    fz = lin(m.a31, [(m.a32, spec.fx), (-m.a23 * s, spec.fy), (m.a23 * c, spec.fz)])
    fx, fy, fz = (Expression(e.ast, to_source(e.ast), e.variable) for e in (fx, fy, fz))
    return CurveSpec(fx, fy, fz, spec.t0, spec.t1)


# -- data ingestion -----------------------------------------------------------

def read_curve_csv(path) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Read a ``t,x,y,z`` CSV file into four arrays."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["t", "x", "y", "z"]:
            raise ValueError(f"{path}: expected header 't,x,y,z', got {header!r}")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 4:
                raise ValueError(f"{path}:{lineno}: expected 4 fields, got {len(row)}")
            try:
                rows.append([float(v) for v in row])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-numeric field in {row!r}") from None
    data = np.array(rows, dtype=float).reshape(-1, 4)
    return data[:, 0], data[:, 1], data[:, 2], data[:, 3]


def sample_from_data(t, x, y, z, n_samples: int = DEFAULT_SAMPLES) -> SampledCurve:
    """Arc-length samples from point data via local quintic interpolation.

    Lower accuracy than the expression path; downstream checks relax to 1e-4
    (1e-3 for constancy tests) on these curves.
    """
    t, x, y, z = (np.asarray(a, dtype=float) for a in (t, x, y, z))
    if len(t) < 6:
        raise ValueError("need at least 6 data points for quintic interpolation")
    if n_samples < 8:
        raise ValueError("n_samples must be at least 8")
    order_idx = np.argsort(t, kind="stable")
    t, x, y, z = t[order_idx], x[order_idx], y[order_idx], z[order_idx]
    dx = np.diff(x)
    sign = np.sign(dx[0])
    bad = (np.abs(dx) <= ADMISSIBLE_EPS) | (np.sign(dx) != sign)
    if sign == 0 or np.any(bad):
        raise AdmissibilityError(float(t[np.argmax(bad) if np.any(bad) else 0]),
                                 "x is not strictly monotone in the data")
    sigma = int(sign)
    sd = sigma * (x - x[0])
    s = np.linspace(0.0, float(sd[-1]), n_samples)

    start = np.clip(np.searchsorted(sd, s) - 3, 0, len(sd) - 6)
    win = start[:, None] + np.arange(6)[None, :]
    scale = (sd[-1] / (len(sd) - 1)) * 3.0
    u = (sd[win] - s[:, None]) / scale
    V = u[:, :, None] ** np.arange(6)[None, None, :]
    cy = np.linalg.solve(V, y[win][:, :, None])[:, :, 0]
    cz = np.linalg.solve(V, z[win][:, :, None])[:, :, 0]
    powers = scale ** np.arange(6)
    ys = Taylor(cy[:, k] / powers[k] for k in range(6))
    zs = Taylor(cz[:, k] / powers[k] for k in range(6))
    t_at = np.interp(s, sd, t)
    return SampledCurve(s=s, y=ys, z=zs, t=t_at, source="data",
                        meta={"orientation": sigma, "x0": float(x[0]),
                              "length": float(sd[-1])})
