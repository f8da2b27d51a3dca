//! Phase functions, discretized Fourier integral operators and their
//! kernels, matrix-`A` variants and the kernel pullback `K ∘ T_A`.
//!
//! The `ζ` lattice is the frequency lattice dual to the space grid, so the
//! `a ≡ 1`, `φ = ⟨x−y, ζ⟩` operator is the identity exactly.

mod operators;
mod phase;
mod pullback;

pub use operators::{
    apply_fio, apply_fio2, apply_fio_a, apply_pseudo, kernel_of, zeta_grid, Amplitude, OperatorMatrix, Variant,
};
pub use phase::{nondegeneracy, phase_sample, shear_jacobian, DetRange, Nondegeneracy, PhaseFunction, PhaseSpec, Var};
pub use pullback::{pullback_ta, t_a, t_a_inv_transpose, weight_transform_a, weight_transform_a_inverse, Extension};
