"""specbound: numerical laboratory for spectral thresholds of magnetic
Schrodinger operators.

The library computes the eigenvalue-free threshold from asymptotic field
and potential data, constructs transversal vector potentials, solves radial
channel problems with box-artifact filtering, and checks the quadratic-form
identities behind the threshold on discretized states.
"""

__version__ = "0.1.0"

from .asymptotics import (AsymptoticEstimate, KatoNormReport,
                          WeylVanishingReport, beta_estimate, kato_norm,
                          lp_locunif_norm, omega1_estimate, omega2_estimate,
                          resolvent_kato_bound, vanishing_certificate,
                          weyl_vanishing)
from .channels import (RadialChannel, aharonov_bohm_channel, h_profile,
                       miller_simon_channel, wigner_von_neumann,
                       wigner_von_neumann_channel)
from .eigensolve import (SpectralReport, TridiagonalOperator,
                         classify_spurious, coulomb_channel_levels,
                         discretize, eigen_in_window, eigenvector,
                         sturm_count_below)
from .fields import (FieldSpec, GaugePotential, PotentialSpec,
                     aharonov_bohm_field, aharonov_bohm_gauge, btilde,
                     constant_field_2d, curl_check, gauge_regularity_norm,
                     poincare_gauge, radial_field, radial_potential,
                     sampler_field)
from .threshold import (ThresholdReport, aharonov_bohm_threshold, bang_bang_g,
                        compute_lambda, dirac_window, optimize_split,
                        pauli_threshold)
from .virial import (GridState, WeightFunction, commutator_quotient,
                     dilation_apply, energy_boost_residual,
                     exp_weighted_virial, form_q, gaussian_state,
                     grid_eigenpair_1d, ims_check, kato_virial,
                     richardson_order, state_from_function, virial_expectation,
                     virial_rhs)

__all__ = [name for name in dir() if not name.startswith("_")]
