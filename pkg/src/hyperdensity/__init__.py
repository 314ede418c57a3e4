"""Real periods of y^2 = (x^2 - 1) prod (x - a_i) and the torsion criterion u = M^{-1} v."""

from .config import Classification, Configuration, DegenerateConfig, embed_degenerate, margins, validate
from .errors import HyperError
from .periods import Basis, PeriodData, period_matrix, reduced_vector, v_vector
from .degenerate import DegenerateClosedForm, closed_form
from .torsion import (
    RationalVector,
    TorsionCertificate,
    density_scan,
    find_torsion_near,
    jacobian_u,
    nearest_rationals,
    rank,
)

__all__ = [
    "Basis",
    "Classification",
    "Configuration",
    "DegenerateClosedForm",
    "DegenerateConfig",
    "HyperError",
    "PeriodData",
    "RationalVector",
    "TorsionCertificate",
    "closed_form",
    "density_scan",
    "embed_degenerate",
    "find_torsion_near",
    "jacobian_u",
    "margins",
    "nearest_rationals",
    "period_matrix",
    "rank",
    "reduced_vector",
    "v_vector",
    "validate",
]
