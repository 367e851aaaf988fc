"""Byte-stable CSV and JSON serialization of results."""

from __future__ import annotations

import json
import sys
from typing import Iterable, Optional

import numpy as np

from .curve import SampledCurve
from .frenet import FrenetData
from .mannheim import ClaimReport, MatePair, PartnerDetection

FRENET_HEADER = ("s", "x", "y", "z", "Tx", "Ty", "Tz", "Nx", "Ny", "Nz",
                 "Bx", "By", "Bz", "kappa", "tau")
MATE_HEADER = FRENET_HEADER + tuple(f"{h}_m" for h in FRENET_HEADER[1:])


def fmt17(v) -> str:
    # + 0.0 folds negative zero
    return format(float(v) + 0.0, ".17g")


def fmt_residual(v: Optional[float]) -> str:
    """Six significant digits in scientific notation (``null`` when absent)."""
    if v is None:
        return "null"
    v = float(v)
    if not np.isfinite(v):
        return "null"
    return format(v, ".5e")


def fmt_float(v) -> str:
    """Shortest round-tripping JSON number."""
    v = float(v)
    if not np.isfinite(v):
        return "null"
    return repr(v)


def frenet_table(curve: SampledCurve, fd: FrenetData) -> np.ndarray:
    return np.column_stack([curve.s, curve.pos, fd.T, fd.N, fd.B, fd.kappa, fd.tau])


def _csv(header: Iterable[str], rows: np.ndarray) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(fmt17(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def frenet_csv(curve: SampledCurve, fd: FrenetData) -> str:
    return _csv(FRENET_HEADER, frenet_table(curve, fd))


def mate_csv(pair: MatePair) -> str:
    mfd = pair.require_mate_frame()
    base = frenet_table(pair.base, pair.base_frenet)
    mate = frenet_table(pair.mate, mfd)[:, 1:]
    return _csv(MATE_HEADER, np.hstack([base, mate]))


def audit_json(pair: Optional[MatePair], reports: list[ClaimReport],
               lam: Optional[float] = None, n_samples: Optional[int] = None) -> str:
    if pair is not None:
        lam, n_samples = pair.lam, len(pair.base.s)
    head = f'{{"pair": {{"lambda": {fmt_float(lam)}, "n_samples": {int(n_samples)}}}, "claims": '
    if not reports:
        return head + "[]}\n"
    items = []
    for r in reports:
        items.append(
            f'    {{"id": {json.dumps(r.id)}, "theta": {json.dumps(r.theta)}, '
            f'"max_residual": {fmt_residual(r.max_residual)}, '
            f'"mean_residual": {fmt_residual(r.mean_residual)}, '
            f'"verdict": {json.dumps(r.verdict)}}}'
        )
    return head + "[\n" + ",\n".join(items) + "\n]}\n"


def detection_json(det: PartnerDetection) -> str:
    if not det.mannheim:
        return "not_mannheim\n"
    return (f'{{"lambda": {fmt_float(det.lam)}, "spread": {fmt_float(det.spread)}, '
            f'"degenerate": {json.dumps(det.degenerate)}}}\n')


def isometry_json(seed: int, dkappa: float, dtau: float) -> str:
    return (f'{{"seed": {int(seed)}, "max_dkappa": {fmt_float(dkappa)}, '
            f'"max_dtau": {fmt_float(dtau)}}}\n')


def emit(text: str, sink=None) -> int:
    """Write ``text`` to a path or stdout (``None``/``"-"``); returns bytes written."""
    data = text.encode("utf-8")
    if sink is None or sink == "-":
        out = sys.stdout.buffer if hasattr(sys.stdout, "buffer") else None
        if out is None:
            sys.stdout.write(text)
        else:
            out.write(data)
            out.flush()
        return len(data)
    with open(sink, "wb") as fh:
        fh.write(data)
    return len(data)
