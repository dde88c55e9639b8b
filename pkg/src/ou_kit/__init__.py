"""Exact arithmetic for odd-unitary Vaserstein-type matrices.

The most used entry points are re-exported here; the submodules hold the rest.
"""

from .campaign import CampaignConfig, Report, run_campaign
from .decomp import (
    ElementaryWord,
    GeneratorWord,
    closed_form_preimage,
    decompose_elementary,
    decompose_word,
    factorize_eta,
    factorize_theta,
    generator_preimage,
)
from .matrix import Mat, elementary, inverse_commutative, perp
from .rings import Ring, check_involution_axioms, ring_from_descriptor, shipped_rings
from .vaserstein import HyperbolicFormData, assemble, eta, psi_tilde, psi_tilde_prime, symplectic_pair, theta

__version__ = "0.1.0"

__all__ = [
    "CampaignConfig",
    "ElementaryWord",
    "GeneratorWord",
    "HyperbolicFormData",
    "Mat",
    "Report",
    "Ring",
    "assemble",
    "check_involution_axioms",
    "closed_form_preimage",
    "decompose_elementary",
    "decompose_word",
    "elementary",
    "eta",
    "factorize_eta",
    "factorize_theta",
    "generator_preimage",
    "inverse_commutative",
    "perp",
    "psi_tilde",
    "psi_tilde_prime",
    "ring_from_descriptor",
    "run_campaign",
    "shipped_rings",
    "symplectic_pair",
    "theta",
]
