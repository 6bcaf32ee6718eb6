"""Bilateral grand-Lebesgue norms of oscillatory integral operators.

Numerics for u = T_lam f with T_lam f(x) = integral of
exp(i*lam*phase(x,y)) * amplitude(x,y) * f(y) dy: exponent-weight
algebra and suprema (psi), oscillation-aware quadrature (quad), field
evaluation and L_q norms (operators), and the theorem-level W/Z sweeps
with the witness pair (sharpness).  The bgls-osc entry point drives the
same pipelines from JSON configs.
"""
__version__ = "0.1.0"

from .errors import ConvergenceError, DomainError
from .quad import (FunctionSpec, QuadResult, bump_profile, const_one,
                   fresnel_I, function_from_name, integrate_adaptive,
                   integrate_panelized, integrate_sqrt_singular, lp_norm,
                   witness_f0)
from .psi import (LpCurve, PsiFunction, SupResult, bgls_norm,
                  conjugate_exponent, fundamental_function, psi0_weight,
                  psi_dirac, psi_from_name, psi_one, psi_power, psi_product,
                  sup_over_interval, transform_psi_lambda, zeta0_weight)
from .operators import (PhaseAmplitudeKernel, SampledField, apply_operator,
                        bilinear_kernel, check_nondegeneracy, check_support,
                        default_x_grid, field_lq_curve, field_lq_norm,
                        fourier_kernel, kernel_from_name)
from .sharpness import (DecayProfile, SweepReport, Theorem2Result, Witness,
                        WResult, W_functional, ZResult, Z_functional,
                        conjugate_ratio, conjugate_ratio_reduced,
                        decay_scaling_profile, endpoint_gap_identity,
                        lp_curve, make_witness, theorem1_scan, theorem2_check,
                        theorem2_scan, theorem3_scan, theorem4_scan,
                        verify_witness, write_summary_json, write_sweep_csv)
