"""Twisted exterior calculus on affine Minkowski space-time.

Submodules
----------
orientation
    Orientation models, group classes, parities and the index.
multilinear
    Even/odd multicovectors, multivectors, densities and the Weyl isomorphism.
forms
    Differential forms, exterior calculus, pullbacks and the homotopy operator.
chains
    Parametrized cells, chains, quadrature and Stokes residuals.
minkowski
    Metric, Lorentz maps, inertial frames and the vacuum constitutive relation.
electromag
    Field configurations, frame decomposition, Maxwell residuals and parities.
"""

from .chains import Chain, affine_cell, boundary, integrate
from .electromag import FieldConfiguration, builtin_fields, decompose, time_reflection_parities
from .forms import AffineMap, DifferentialForm, VectorField, exterior_differential, interior_product, pullback
from .minkowski import InertialFrame, MinkowskiMetric, constitutive
from .multilinear import MultiCovector, MultiVector, pair, wedge
from .orientation import (
    EE,
    EO,
    EVEN,
    ODD,
    OE,
    OO,
    RELATIVISTIC,
    STANDARD,
    GroupClass,
    Orientation,
    OrientationModel,
    Parity,
    index,
)

__version__ = "0.1.0"

__all__ = [
    "AffineMap",
    "Chain",
    "DifferentialForm",
    "EE",
    "EO",
    "EVEN",
    "FieldConfiguration",
    "GroupClass",
    "InertialFrame",
    "MinkowskiMetric",
    "MultiCovector",
    "MultiVector",
    "ODD",
    "OE",
    "OO",
    "Orientation",
    "OrientationModel",
    "Parity",
    "RELATIVISTIC",
    "STANDARD",
    "VectorField",
    "affine_cell",
    "boundary",
    "builtin_fields",
    "constitutive",
    "decompose",
    "exterior_differential",
    "index",
    "integrate",
    "interior_product",
    "pair",
    "pullback",
    "time_reflection_parities",
    "wedge",
]
