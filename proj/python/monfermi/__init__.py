"""Monitored free fermions on a 1D lattice.

Gaussian quantum-jump trajectories for fermion counting and generalized
occupation measurements, steady-state entanglement/correlation observables,
and the matching closed-form field-theory predictions. The heavy lifting
lives in the C++ extension ``monfermi._core``.
"""

from monfermi._core import (  # noqa: F401
    DegenerateJumpError,
    InvalidParameterError,
    __version__,
    apply_gain,
    apply_loss,
    apply_occupation,
    build_ell_grid,
    chord_length,
    correlation_profile,
    cross_ratio,
    evolve_unitary,
    gaussian_cl,
    gaussian_cq,
    gaussian_entropy,
    init_neel,
    init_random_classical,
    mutual_information_i2,
    oracle_check,
    power_law_fit,
    predicted_c_ell,
    run_trajectory,
    scales,
    second_cumulant,
    ssep_simulate,
    subsystem_entropy,
    tilde_c,
    tripartite_i3,
    unconditional_c0_fc,
    unconditional_c0_om,
)
