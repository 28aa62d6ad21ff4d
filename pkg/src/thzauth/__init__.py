"""Physical-layer authentication for THz nanoscale networks.

Path-loss fingerprints from a THz channel model, a two-step hypothesis
test against impersonation, Viterbi refinement over a two-state HMM, and
ML / Gaussian-mixture transmitter identification, plus the Monte Carlo
harness that exercises them.
"""
from .auth import (
    AuthConfig,
    AuthDecision,
    analytic_pfa,
    analytic_pmd,
    authenticate,
    expected_pmd,
    sigma_from_snr_db,
    threshold_for_pfa,
)
from .channel import (
    AbsorptionTable,
    LineCatalog,
    Medium,
    SpectralLine,
    absorption_coefficient,
    absorption_loss_db,
    molecular_density,
    path_loss_db,
    spreading_loss_db,
    transmittance,
)
from .hmm import Hmm, emission_from_errors, predict, viterbi
from .numerics import NumericalError, RandomSource, gaussian_pdf, q_function, q_inverse
from .scenario import Deployment, GroundTruth, OccupancyModel, deploy, ground_truth, sample_slot
from .txid import GmmModel, SortedFingerprints, analytic_pmc, gmm_fit, gmm_identify, ml_identify

__version__ = "0.1.0"
