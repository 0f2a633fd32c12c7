"""Exact computer algebra for Lie conformal superalgebras over differential rings."""

from .builders import BUILTINS, builtin
from .conformal import ConfElement, GeneratorBasis, LambdaPoly, StructureTable, check_axioms, lambda_bracket, nth_product
from .diffring import RingElement, RingSpec, embed
from .dsl import DslError, parse_algebra, parse_element, parse_matrix, parse_ring_element, print_algebra
from .morphisms import (ConfMorphism, ExtensionRequired, SL2Pair, compose, factorize, is_conf_automorphism,
                        is_V_stable, k2_phi, kernel_witness, theta)
from .scalars import Scalar, parse_scalar

__version__ = "0.1.0"

__all__ = [
    "BUILTINS", "builtin",
    "ConfElement", "GeneratorBasis", "LambdaPoly", "StructureTable", "check_axioms", "lambda_bracket",
    "nth_product",
    "RingElement", "RingSpec", "embed",
    "DslError", "parse_algebra", "parse_element", "parse_matrix", "parse_ring_element", "print_algebra",
    "ConfMorphism", "ExtensionRequired", "SL2Pair", "compose", "factorize", "is_conf_automorphism",
    "is_V_stable", "k2_phi", "kernel_witness", "theta",
    "Scalar", "parse_scalar",
]
