"""Exact associators for rank-two fusion rules ``r^2 = m + n r``."""
from .blockmat import Matrix, Shape, ShapeError, TypedMatrix
from .fusion import FusionRule
from .gauge import Gauge, apply_gauge, are_equivalent
from .pentagon import (Associator, check_ass4, check_biedenharn_elliot, check_block_system,
                       sixj_table)
from .scalar import FieldError, FieldSpec, Scalar, parse_field
from .solver import (Classification, brute_force_search, classify, nonexistence_certificate,
                     random_search, shifted_solution)

__version__ = "0.1.0"

__all__ = [
    "Associator",
    "Classification",
    "FieldError",
    "FieldSpec",
    "FusionRule",
    "Gauge",
    "Matrix",
    "Scalar",
    "Shape",
    "ShapeError",
    "TypedMatrix",
    "apply_gauge",
    "are_equivalent",
    "brute_force_search",
    "check_ass4",
    "check_biedenharn_elliot",
    "check_block_system",
    "classify",
    "nonexistence_certificate",
    "parse_field",
    "random_search",
    "shifted_solution",
    "sixj_table",
]
