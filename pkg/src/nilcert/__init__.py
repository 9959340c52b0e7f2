"""Automorphism certificates for endomorphisms of unitriangular pattern groups."""
from .arith import PrimeSet, RationalMatrix, characteristic_polynomial, determinant
from .catalog import BUILTINS, load_document
from .certifier import (
    Endomorphism,
    check_central_criterion,
    check_tfab_criterion,
    is_pi_like,
    surjectivity_oracle,
    validate_endomorphism,
)
from .lie import LieLattice
from .modules import ModuleShape
from .pattern import GroupElement, Pattern
from .report import full_report

__version__ = "0.1.0"

__all__ = [
    "BUILTINS", "Endomorphism", "GroupElement", "LieLattice", "ModuleShape", "Pattern", "PrimeSet",
    "RationalMatrix", "characteristic_polynomial", "check_central_criterion", "check_tfab_criterion",
    "determinant", "full_report", "is_pi_like", "load_document", "surjectivity_oracle",
    "validate_endomorphism",
]
