"""Exact counting and exponential-sum toolkit for reciprocals of intervals modulo a prime."""

from .errors import ConfigError, DomainError, HypothesisError, RecipsumError, ResourceError
from .modmath import Interval, PrimeModulus, RationalPair, as_modulus, mod_inverse, rational_reconstruct

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DomainError",
    "HypothesisError",
    "Interval",
    "PrimeModulus",
    "RationalPair",
    "RecipsumError",
    "ResourceError",
    "as_modulus",
    "mod_inverse",
    "rational_reconstruct",
]
