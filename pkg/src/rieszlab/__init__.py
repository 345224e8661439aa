"""riesz-lab: numerics for higher-order Riesz transforms on periodic boxes.

Modules: grid (fields and transforms), harmonics (solid harmonics and
sphere moments), operators (Riesz, truncated, maximal, directional Hilbert),
factorization (the radial operator M_k^t), averaging (SO(d) machinery),
rotations (method of rotations), experiments (dimension sweeps), cli.
"""

from .averaging import (AveragingReport, RotationMatrix, a_tilde,
                        averaging_residual, c_dk, composite_Rstar,
                        composite_Rt, conjugate_apply, haar_rotation,
                        index_set_I, rotate_field)
from .factorization import (RadialProfile, apply_Mkt, export_profile_csv,
                            factorization_residual, m1t_identity_residual,
                            max_resolved_cv, mt_profile)
from .grid import (GridSpec, ScalarField, SpectralField, forward_transform,
                   inverse_transform, load_field, lp_norm, make_grid,
                   save_field, spectral_l2_norm, test_function)
from .harmonics import (MultiIndex, SolidHarmonic, dim_Hk, evaluate,
                        harmonic_to_text, is_harmonic, monomial_harmonic,
                        parse_harmonic, sphere_moment, sphere_moment_mc,
                        yj_normalization)
from .kernels import BACKEND
from .operators import (KernelSpec, TruncationGrid, default_truncation_grid,
                        directional_hilbert_truncated, gamma_k, make_kernel,
                        maximal_hilbert_1d, maximal_riesz, multiplier_grid,
                        riesz_apply, riesz_multiplier, truncated_riesz_direct)
from .rotations import (DirectionBatch, constant_asymptotic_ratio,
                        mor_estimate, rotations_constant, sphere_surface_area,
                        uniform_directions)

__version__ = "0.1.0"
