"""Lower-bound certificates for the ball measure of noncompactness."""

from .alt import (AltCertificate, WitnessParams, alt_certificate_check, alt_certificate_from_json,
                  alt_witness_params,
                  translated_family, verify_witness_params)
from .certificates import FailedCondition, Verdict
from .general import (GENERATORS, GeneralLowerCertificate, Witness, WitnessBatch,
                      general_certificate_from_json, register_generator,
                      verify_general_lower_certificate)
from .exclusion import distance_exclusion_bound, exclusion_lower_estimate
from .linf import (LinfCertificate, ell_for_centers, linf_certificate_from_json, linf_lower_certificate,
                   replay_pigeonhole)
from .packing import Packing, PiMeasure, build_packing, unit_ball_volume, verify_packing
from .separation import k_center_radius, pairwise_distances, separation_lower_bound
from .shrinking import ShrinkEntry, indicator_sequence, maximal_noncompactness, shrinking_driver

__all__ = [
    "AltCertificate", "FailedCondition", "GENERATORS", "GeneralLowerCertificate", "LinfCertificate",
    "Packing", "PiMeasure", "ShrinkEntry", "Verdict", "Witness", "WitnessBatch", "WitnessParams",
    "alt_certificate_check", "alt_certificate_from_json", "linf_certificate_from_json", "alt_witness_params", "build_packing", "distance_exclusion_bound",
    "ell_for_centers", "exclusion_lower_estimate", "general_certificate_from_json",
    "indicator_sequence", "k_center_radius", "linf_lower_certificate", "maximal_noncompactness",
    "pairwise_distances", "register_generator", "replay_pigeonhole", "separation_lower_bound",
    "shrinking_driver", "translated_family", "unit_ball_volume", "verify_general_lower_certificate",
    "verify_packing", "verify_witness_params",
]
