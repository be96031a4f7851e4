"""Connected numbers of line arrangements in cyclic covers of P^2.

This package provides the projective geometry and polynomial layers, the
Fermat/Artal constructions, the exact Carnot predictor, and the numerical
monodromy engine with its gluing-graph connectivity count.
"""

from .connectivity import Arrangement, connected_number, connected_number_via_offsets, cross_check
from .exact import contact_divisor_oracle, predicted_connected_number, zariski_certificate
from .fermat import ArtalFamilyConfig, FermatTangentIndex, artal_arrangement, validate_k_artal
from .geometry import HomogeneousPoint, ProjectiveLine, intersect, line_through
from .monodromy import WeightedBranchDivisor, component_data, offset_at, splitting_count
from .polynomials import TrivariateForm, UnivariatePoly, roots_with_multiplicity

__all__ = [
    "Arrangement",
    "ArtalFamilyConfig",
    "FermatTangentIndex",
    "HomogeneousPoint",
    "ProjectiveLine",
    "TrivariateForm",
    "UnivariatePoly",
    "WeightedBranchDivisor",
    "artal_arrangement",
    "component_data",
    "connected_number",
    "connected_number_via_offsets",
    "contact_divisor_oracle",
    "cross_check",
    "intersect",
    "line_through",
    "offset_at",
    "predicted_connected_number",
    "roots_with_multiplicity",
    "splitting_count",
    "validate_k_artal",
    "zariski_certificate",
]
