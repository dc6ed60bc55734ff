"""Polarization-formula product on complex normed spaces and numeric checks of its properties."""

__version__ = "0.1.0"

from .csb import ProofTrace, StvwQuadruple, verify_csb_proof
from .errors import ContractViolation, DependentVectorsError, DescriptorInvalid, DomainError
from .explorer import SearchReport, explore_conjecture, max_abs_product, max_phase_defect, parallelogram_defect
from .norms import (
    DualMax,
    HermitianQuadratic,
    InducedOnC2,
    MaxOf,
    Mixture,
    NormDescriptor,
    PNorm,
    WeightedPNorm,
    eval_norm,
    from_json,
    random_norm,
    validate_norm,
)
from .product import ProductValue, polarization_product

__all__ = [
    "ContractViolation",
    "DependentVectorsError",
    "DescriptorInvalid",
    "DomainError",
    "DualMax",
    "HermitianQuadratic",
    "InducedOnC2",
    "MaxOf",
    "Mixture",
    "NormDescriptor",
    "PNorm",
    "ProductValue",
    "ProofTrace",
    "SearchReport",
    "StvwQuadruple",
    "WeightedPNorm",
    "eval_norm",
    "explore_conjecture",
    "from_json",
    "max_abs_product",
    "max_phase_defect",
    "parallelogram_defect",
    "polarization_product",
    "random_norm",
    "validate_norm",
    "verify_csb_proof",
]
