"""Frenet apparatus and Mannheim partner curves of admissible curves in Galilean 3-space."""

from .curve import (CurveSpec, SampledCurve, check_admissible, reparametrize_to_arclength,
                    sample_from_data, sample_positions)
from .expr import Expression, parse_expression, eval_jet3
from .frenet import FrenetData, frenet_apparatus, frenet_residuals
from .galilean import (GalVec3, Similarity, apply_similarity, classify, galilean_dot,
                       galilean_norm, random_isometry)
from .jets import Jet3, Taylor
from .mannheim import (ClaimReport, MatePair, angle_between_frames, audit_claims,
                       colinearity_residual, detect_partner, mannheim_mate,
                       synthesize_from_natural)

__version__ = "0.1.0"
