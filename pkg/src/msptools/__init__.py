"""Multiplicative linear secret sharing: span programs, diamond products, lifting, and an MPC simulator."""

from .constructions import paper_example, reed_muller_lsss, shamir_msp
from .diamond import (
    DiamondIndex,
    RecombinationVector,
    diamond_matrix,
    diamond_vectors,
    is_witness,
    multiplicativity_witness,
    strong_multiplicativity_check,
    strong_witness_from_higher,
    vanishing_certificate,
)
from .errors import *  # noqa: F401,F403
from .fileformat import parse_msp, parse_witness, serialize_msp, serialize_witness
from .gf import GF, FieldElement, inverse_mod
from .linalg import Matrix, kernel_basis, rank, row_combination, rref, solve
from .mpcsim import RoundLog, privacy_audit, simulate_fanin_product
from .msp import (
    Msp,
    ShareBundle,
    SubsetFamily,
    blinding_vector,
    is_q_lambda,
    maximal_adversary_structure,
    minimal_access_structure,
    reconstruct,
    reconstruction_coefficients,
    share,
)
from .transform import lift_multiplicativity, lift_with_witness

__version__ = "0.1.0"
