"""Exact characteristic-class computations: graded rings, genera, Thom modules and Steenrod powers."""

__version__ = "0.1.0"

from .algebra import GF, QQ, GradedPoly, PowerSeries, RingPresentation, bso, parse_poly, poly_reduce, poly_substitute
from .errors import CharClassError
from .genus import bernoulli, genus_product, genus_series, hirzebruch_L, multiplicative_sequence, scaling_relation_report
from .invariants import (
    ManifoldDescriptor,
    adams_m,
    euler_characteristic,
    kappa_coefficient_unit,
    kervaire_semicharacteristic,
    pi0_report,
    splitting_value,
    vanishing_primes,
    wu_vanishing_degrees,
)
from .steenrod import SteenrodTable, derive_table_splitting, splitting_obstruction, total_power
from .thom import BundleModel, ThomElement, fiber_integrate, mmm_class, signature_via_L

__all__ = [
    "GF", "QQ", "GradedPoly", "PowerSeries", "RingPresentation", "bso", "parse_poly", "poly_reduce",
    "poly_substitute", "CharClassError", "bernoulli", "genus_product", "genus_series", "hirzebruch_L",
    "multiplicative_sequence", "scaling_relation_report", "ManifoldDescriptor", "adams_m",
    "euler_characteristic", "kappa_coefficient_unit", "kervaire_semicharacteristic", "pi0_report",
    "splitting_value", "vanishing_primes", "wu_vanishing_degrees", "SteenrodTable",
    "derive_table_splitting", "splitting_obstruction", "total_power", "BundleModel", "ThomElement",
    "fiber_integrate", "mmm_class", "signature_via_L",
]
