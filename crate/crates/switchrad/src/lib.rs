//! Stabilizability radii of discrete-time switched linear systems with
//! singular matrices.
//!
//! A switched system `x(t+1) = M_{σ(t)} x(t)` picks one matrix from a finite
//! set at every step. Three growth rates describe it: the joint spectral
//! radius (worst case over switching laws), the joint spectral subradius
//! (best uniform law), and the stabilizability radius (best law that may
//! depend on the initial state). This crate computes:
//!
//! * the **exact stabilizability radius** of the two-dimensional family
//!   built from one singular matrix and one matrix with complex eigenvalues,
//!   through a real-Jordan reduction, continued fractions and Ostrowski
//!   representations ([`radius`], [`diophantine`]);
//! * **finite-depth joint-spectral estimates** and optimal switching
//!   sequences by exhaustive product enumeration ([`search`]);
//! * the subradius-based **lower bound** `ρ̌/m ≤ ρ̃` together with the
//!   spherical-cap areas behind it ([`bounds`]);
//! * **pointwise stabilizability certificates** that cover the unit circle
//!   of initial states with a finite family of products ([`search`]).
//!
//! The crate is example-first: each major capability has a runnable program
//! under `examples/`. A thin `switchrad` binary exposes the same operations
//! as subcommands (`radius`, `scan`, `estimate`, `search`, `certify`) for
//! scripted use; see [`cli`].
//!
//! ```
//! use switchrad::{radius_example7, RealInput};
//!
//! // Singular factor diag(2,0) plus a rotation by 2π/5: the radius is
//! // (2 cos 2π/5)^(1/2) ≈ 0.7862, attained by the cycle "rotate once, project".
//! let result = radius_example7(&RealInput::rational(2, 5).unwrap()).unwrap();
//! assert!((result.value - 0.786151377757).abs() < 1e-10);
//! ```

pub mod bounds;
pub mod cli;
pub mod diophantine;
mod error;
pub mod io;
pub mod matrix;
pub mod radius;
pub mod search;

pub use bounds::{cap_segment_area, gamma_fn, reg_inc_beta, sphere_area, theorem1_lower_bound};
pub use diophantine::{
    best_approx_sequence, cf_expand, digit_route_distance, inhom_distance, ostrowski_integer,
    ostrowski_real, CfBudget, ContinuedFraction, OstrowskiDigits, RealInput,
};
pub use error::{Error, Result};
pub use matrix::{
    eigen2x2, operator_norm, real_jordan_2x2, singular_values, spectral_radius, EigenPair2,
    Matrix, SvdSummary,
};
pub use radius::{
    canonical_system, canonicalize, exact_radius, per_step_factor, radius_example7,
    radius_example7_with, simulate_law, CanonicalParams, Canonicalization, RadiusCase,
    RadiusConfig, RadiusResult, SingularRotationSystem,
};
pub use search::{
    enumerate_rates, optimal_sequence_search, s_of_t, stabilizability_certificate,
    CertificateReport, MatrixSet, Objective, ProductSearchReport, SearchBudget, SearchOutcome,
};

/// Relative tolerance below which a singular value counts as zero.
///
/// Relative to the largest singular value, so the kernel dimension is
/// invariant under rescaling of the matrix set.
pub const TAU_SV: f64 = 1e-10;

/// Strict margin on the 2x2 discriminant used to accept a complex spectrum.
pub const TAU_EIG: f64 = 1e-12;

/// Largest matrix dimension handled by the dense kernels.
pub const MAX_DIM: usize = 8;
