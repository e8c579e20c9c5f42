//! Stationary squeezed states of a charged particle in a homogeneous magnetic
//! field.
//!
//! States |R, N⟩ are labelled by the Landau level N, the guiding-center
//! expectation R = (X, Y) and a complex squeeze angle Φ with Im Φ < 0. They are
//! evaluated in closed form in the symmetric gauge; every operator identity is
//! then checked on grids with covariant finite differences.
//!
//! Units: ħ = m = 1, eB/c = 1/l² > 0, so ω_c = 1/l² and the magnetic length
//! `l` is the only scale.

// `!(a < b)` comparisons are deliberate: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod coords;
pub mod error;
pub mod gauge;
pub mod grid;
pub mod hermite;
pub mod observables;
pub mod operators;
pub mod quad;
pub mod squeeze;
pub mod state;
pub mod stencil;
pub mod symmetry;
pub mod units;

pub use num_complex::Complex64;

pub use analysis::{
    closure_apply, frame_spectrum, gram_matrix, overlap_analytic, overlap_numeric, ClosureSpec, GramReport, LatticeSpec,
};
pub use coords::rotated_coords;
pub use error::{Error, Result};
pub use gauge::{gauge_phase, GaugeField, GaugeKind, GaugePhase};
pub use grid::{Grid2D, GridGeometry};
pub use hermite::{hermite, hermite_roots};
pub use observables::{
    coherent_limit_check, current, density, guiding_center_moments, guiding_center_moments_with, zeros, CoherentReport,
    CurrentField, MomentReport,
};
pub use operators::{
    expectation, make_hamiltonian, make_ladder, make_p, make_x_phi, DiscreteOperator, OperatorContext,
};
pub use squeeze::{squeeze_strength, validate_squeeze, SqueezeAngle};
pub use state::{
    field_on_grid, field_on_grid_checked, ground_state, normalization_constant, state_eval, StateSpec, WaveFunction,
};
pub use stencil::{Axis, Stencil};
pub use symmetry::{
    magnetic_translate, rotate_quarter, rotation_generator, sigma_t, symmetry_commutation_report, SymmetryKind,
};
pub use units::Units;
